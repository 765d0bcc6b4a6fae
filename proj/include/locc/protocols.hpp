#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locc/bell_calculus.hpp"
#include "locc/engine.hpp"

namespace locc {

// Statistics of one randomized parity-collection run (hashing or breeding).
struct ParityRunStats {
    std::size_t rounds = 0;
    std::size_t yield_pairs = 0;
    bool identified = false;          // kept pairs' joint labels uniquely resolved
    double residual_ambiguity = 0.0;  // posterior entropy (bits) over kept-pair labels
    std::vector<int> hidden_labels;      // Bell labels 1..4 per source pair
    std::vector<int> decoded_labels;
};

// Result of a named protocol: ledger plus a human-readable account of what
// the transcript identifies and which maximally entangled registers survive.
struct ProtocolOutcome {
    Ledger ledger;
    std::vector<std::string> identified;     // classical facts the transcript pins down
    std::vector<std::size_t> distilled_dims; // Schmidt ranks of surviving known registers
    std::optional<ParityRunStats> parity;
};

// --- exact index-level protocols (labels and parities, no matrices) ---

// Two copies of an unknown generalized Bell state of d (x) d: bilateral XOR /
// controlled-sum, then amplitude comparison on one output and phase
// comparison on the other. Identifies (n, m); nothing survives.
ProtocolOutcome two_copy_discrimination(std::size_t d);

// n >= 3 copies of an unknown qubit Bell state: sacrifice two copies to learn
// (n, m), keep the remaining n-2 as known maximal entanglement.
ProtocolOutcome full_info_then_keep(std::size_t n_copies);

// n >= 3 copies: the bilateral-XOR chain that returns copies to B1. Odd n
// learns only m (1 bit) and keeps n-1 ebits; even n ends with a two-copy
// discrimination on the residue (2 bits, n-2 ebits).
ProtocolOutcome bxor_chain(std::size_t n_copies);

// Two copies of an unknown qutrit Bell state: one bilateral controlled-sum,
// then each party reads the modular offset of their two local qutrits.
// Learns m plus one trit of n; one known qutrit pair survives.
ProtocolOutcome qutrit_two_copy_partial();

// One unknown gen-Bell state plus a known (0,0) ancilla pair: a single
// bilateral controlled-sum moves m onto the ancilla; both pairs are then
// compared away. Full discrimination of d^2 states with one shared ebit spent.
ProtocolOutcome ebit_assisted_discrimination(std::size_t d);

// Bilateral measurement of each code generator on n pairs carrying one
// correctable Bob-side error; the compared syndromes identify the error and
// Bob corrects, leaving m = code.m() known ebits.
ProtocolOutcome error_correct_distill(const StabilizerCode& code);

// One exact recurrence round on Bell-diagonal qubit pairs drawn iid from p
// (labels B1..B4). Keeps pair 1 when the amplitude comparison agrees; the
// failed branch is discarded. Rejects deterministic p (some p_i == 1).
ProtocolOutcome recurrence_ledger(const std::vector<double>& p);

// Random-subset parity hashing on n pairs iid from p: ceil(n H(p)) + margin
// rounds (capped at n), each sacrificing one member of a random subset to a
// bit-type comparison. If the public record still leaves the kept pairs'
// labels ambiguous, further rounds are spent (chosen to maximize the
// expected information gain) until they resolve or no pair is left; the
// outcome reports the rounds actually used. Requires H(p) < 1 and n >= 4.
ProtocolOutcome hashing(std::size_t n, const std::vector<double>& p, std::size_t margin,
                        std::uint64_t seed);

// Breeding variant: parities are cascaded onto pre-shared known ancilla pairs
// instead of sacrificing source pairs; all n source pairs survive. Extension
// rounds are capped at n extra ancillas.
ProtocolOutcome breeding(std::size_t n, const std::vector<double>& p, std::size_t margin,
                         std::uint64_t seed);

// --- full matrix-backend cross-checks of the small cases ---

Ledger two_copy_discrimination_matrix(std::size_t d);
Ledger full_info_then_keep_matrix(std::size_t n_copies);  // n_copies <= 4
Ledger bxor_chain_matrix(std::size_t n_copies);           // n_copies <= 4
Ledger qutrit_two_copy_partial_matrix();
Ledger ebit_assisted_discrimination_matrix(std::size_t d);
Ledger error_correct_distill_matrix();  // 3-qubit amplitude-flip code

// --- parity-constraint decoding, exposed for oracle tests ---

// One linear constraint over the 2n bits (phase bits 0..n-1, amplitude bits
// n..2n-1) of the hidden label string: <row, s> = value (mod 2).
struct ParityConstraint {
    std::vector<std::uint64_t> row;  // packed little-endian bit mask
    int value = 0;
};

struct DecodeResult {
    std::vector<std::uint64_t> map_string;  // packed 2n bits
    double map_loglik = 0.0;
    double ambiguity_bits = 0.0;  // entropy over the candidate set found
    // plausible strings found, best first, with their log2-likelihoods;
    // callers can marginalize these onto whatever statistic they care about
    std::vector<std::vector<std::uint64_t>> candidates;
    std::vector<double> candidate_logliks;
};

// Randomized information-set decoder returning the maximum-posterior hidden
// string under iid prior p. Deterministic per seed. Passing the result of a
// previous decode over a prefix of the same constraint list as `warm` reseeds
// the candidate pool and lets the search run a reduced budget.
DecodeResult decode_parities(std::size_t n, const std::vector<ParityConstraint>& constraints,
                             const std::vector<double>& p, std::uint64_t seed,
                             const DecodeResult* warm = nullptr);

// Exhaustive-posterior reference decoder; n <= 12.
DecodeResult decode_parities_exact(std::size_t n, const std::vector<ParityConstraint>& constraints,
                                   const std::vector<double>& p);

}  // namespace locc
