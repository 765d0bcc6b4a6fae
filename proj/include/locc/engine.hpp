#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "locc/info.hpp"
#include "locc/rng.hpp"
#include "locc/states.hpp"

namespace locc {

// Measurement (Kraus) operators on one side; sum M†M = I within 1e-8.
struct Instrument {
    std::vector<ComplexMatrix> operators;
    Side side = Side::A;

    Instrument(std::vector<ComplexMatrix> ops, Side s);
    std::size_t dim() const { return operators.front().rows(); }
    std::size_t outcomes() const { return operators.size(); }
};

struct LocalUnitary {
    ComplexMatrix ua;
    ComplexMatrix ub;
};

struct AliceMeasure {
    Instrument instrument;
};

// Bob's instrument may depend on Alice's full transcript and on his own
// earlier outcomes, never the other way around (1-way rule).
struct BobMeasure {
    std::function<Instrument(const std::vector<int>& alice_transcript,
                             const std::vector<int>& bob_transcript)>
        choose;
};

// Drop local factors verified to be in a product state with the rest.
// `dims_*` describe the factor structure of each side; `keep_*` mark factors
// retained. Ledger dimensions keep referring to the original system.
struct Discard {
    std::vector<std::size_t> dims_a;
    std::vector<bool> keep_a;
    std::vector<std::size_t> dims_b;
    std::vector<bool> keep_b;
};

using ProtocolStep = std::variant<LocalUnitary, AliceMeasure, BobMeasure, Discard>;

// Ordered steps with every AliceMeasure preceding every BobMeasure;
// classical messages flow Alice -> Bob only.
class OneWayProtocol {
  public:
    explicit OneWayProtocol(std::vector<ProtocolStep> steps);
    const std::vector<ProtocolStep>& steps() const { return steps_; }

  private:
    std::vector<ProtocolStep> steps_;
};

struct Transcript {
    std::vector<int> alice;
    std::vector<int> bob;
    bool operator==(const Transcript&) const = default;
    bool operator<(const Transcript& o) const;
};

// Post-measurement bookkeeping: joint weights p(X = x, transcript) with the
// conditional pure states of each surviving component.
struct Branch {
    Transcript transcript;
    struct Item {
        std::size_t x;
        double prob;  // joint probability
        PureState state;
    };
    std::vector<Item> items;
};

using BranchEnsemble = std::vector<Branch>;

// Accounting record of one protocol run; gap >= -1e-7 is the ledger inequality.
struct Ledger {
    double n_bits = 0.0;
    double e_i = 0.0;
    double e_f = 0.0;
    double i_a = 0.0;
    double i_b = 0.0;
    double i_total = 0.0;
    double e_distilled = 0.0;
    double gap = 0.0;
    std::optional<JointDistribution> transcript_distribution;
    std::vector<double> per_step_avg_ent;  // after each protocol step
};

// Branches dropped below this joint probability.
inline constexpr double kBranchPruneThreshold = 1e-12;

// Applies one instrument to every component; zero-probability branches dropped.
BranchEnsemble apply_instrument(const BranchEnsemble& b, const Instrument& inst);

// Executes a 1-way protocol on a pure-component ensemble and fills the ledger.
Ledger run_protocol(const Ensemble& e, const OneWayProtocol& p);

// Chained Holevo audit of the proof: Alice's realized information vs the
// Holevo quantity of her reduced ensemble, and per-outcome Bob bounds.
struct ChainAuditReport {
    double i_a_realized = 0.0;
    double chi_a = 0.0;
    struct PerOutcome {
        double p_k = 0.0;
        double i_b_realized = 0.0;
        double chi_b = 0.0;
    };
    std::vector<PerOutcome> per_k;
    double worst_violation = 0.0;  // max over realized - bound; <= tolerance when ok
    bool ok = false;
};

ChainAuditReport holevo_chain_audit(const Ensemble& e, const OneWayProtocol& p);

// Haar-random isometry partitioned into dim x dim blocks; completeness holds
// by construction. Deterministic per seed.
Instrument random_instrument(std::size_t dim, std::size_t outcomes, Side side,
                             std::uint64_t seed);

// Normalized complex-Gaussian states with simplex-uniform probabilities.
Ensemble random_pure_ensemble(BipartiteDims dims, std::size_t size, std::uint64_t seed);

// --- operator builders on multi-factor local spaces ---

// Identity (x) op (x) identity with `op` on factor `site` of the given structure.
ComplexMatrix embed_factor_op(const ComplexMatrix& op, const std::vector<std::size_t>& dims,
                              std::size_t site);

// Basis permutation |digits> -> |f(digits)> for gates that permute the
// computational basis (CNOT, modular sums).
ComplexMatrix permutation_gate(const std::vector<std::size_t>& dims,
                               const std::function<void(std::vector<std::size_t>&)>& f);

// digit[target] += digit[control] (mod d); both factors share dimension d.
ComplexMatrix csum_add_gate(const std::vector<std::size_t>& dims, std::size_t control,
                            std::size_t target);
// digit[target] -= digit[control] (mod d).
ComplexMatrix csum_sub_gate(const std::vector<std::size_t>& dims, std::size_t control,
                            std::size_t target);

// Computational-basis readout of the selected factors (joint outcome index).
Instrument z_instrument(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& sites,
                        Side side);
// Fourier-basis readout of one factor.
Instrument fourier_instrument(const std::vector<std::size_t>& dims, std::size_t site, Side side);
// Coarse readout of the modular offset digit[site2] - digit[site1] of two
// equal-dimension factors (rank-d projectors, d outcomes).
Instrument offset_instrument(const std::vector<std::size_t>& dims, std::size_t site1,
                             std::size_t site2, Side side);
// Single-outcome instrument wrapping a unitary (used for conditioned corrections).
Instrument unitary_instrument(const ComplexMatrix& u, Side side);

// (U_A (x) U_B) |psi> without forming the full product operator.
PureState apply_local(const PureState& s, const ComplexMatrix& ua, const ComplexMatrix& ub);
// (M (x) I)|psi| or (I (x) M)|psi>, unnormalized result returned with its norm^2.
std::pair<std::vector<Cx>, double> apply_one_sided(const PureState& s, const ComplexMatrix& m,
                                                   Side side);

}  // namespace locc
