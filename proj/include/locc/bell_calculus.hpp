#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace locc {

// Convention constant: in the bilateral controlled-sum both parties apply the
// same modular-difference gate (Bob does NOT apply the inverse). This choice
// reproduces the displayed d=3 image ensemble and is pinned by the matrix
// oracle tests.
inline constexpr bool kBobAppliesInverseCsum = false;

// Label (phase n, amplitude m) of a generalized Bell state on one shared pair.
struct BellIndex {
    std::size_t d = 2;
    std::size_t n = 0;  // phase
    std::size_t m = 0;  // amplitude shift

    BellIndex() = default;
    BellIndex(std::size_t d_, std::size_t n_, std::size_t m_);
    bool operator==(const BellIndex&) const = default;
};

// A string of shared pairs with uniform local dimension.
struct BellString {
    std::vector<BellIndex> pairs;

    explicit BellString(std::vector<BellIndex> p);
    std::size_t d() const { return pairs.front().d; }
    std::size_t size() const { return pairs.size(); }
};

// Bilateral XOR (both parties apply CNOT with control = source pair):
// (n1,m1),(n2,m2) -> (n1^n2, m1),(n2, m1^m2). Qubit pairs only.
std::pair<BellIndex, BellIndex> bxor(const BellIndex& source, const BellIndex& target);

// Bilateral modular controlled-sum, control = target pair on each side:
// (n1,m1),(n2,m2) -> (n1, m1-m2 mod d),(n1+n2 mod d, m2).
std::pair<BellIndex, BellIndex> csum_d(const BellIndex& source, const BellIndex& target);

// Both parties measure the computational basis and compare; the announced
// difference (Bob - Alice mod d) equals m. Consumes the pair.
std::size_t z_compare(const BellIndex& pair);

// Both parties measure the Fourier basis; the announced sum (Alice + Bob
// mod d) equals n. Consumes the pair.
std::size_t x_compare(const BellIndex& pair);

// Generalized Pauli string Z^z X^x per site, exponents mod d.
struct PauliString {
    std::size_t d = 2;
    std::vector<std::size_t> z;
    std::vector<std::size_t> x;

    PauliString(std::size_t d_, std::vector<std::size_t> z_, std::vector<std::size_t> x_);
    static PauliString identity(std::size_t d, std::size_t length);
    // Parse "XZZXI"-style qubit notation (Y = ZX).
    static PauliString parse(const std::string& text);
    std::size_t length() const { return z.size(); }
    bool operator==(const PauliString&) const = default;
};

// sum_j (z_j(p) x_j(q) - x_j(p) z_j(q)) mod d
std::size_t symplectic(const PauliString& p, const PauliString& q);

// Error acting on Bob's halves: X-component adds to m, Z-component adds to n.
BellString pauli_shift(const PauliString& e, const BellString& s);

// Stabilizer code on n qubits with m logical qubits: n-m commuting
// independent generators and a syndrome table over 2^(n-m) correctable errors.
class StabilizerCode {
  public:
    StabilizerCode(std::size_t n, std::vector<PauliString> generators,
                   std::vector<PauliString> correctable);

    std::size_t n() const { return n_; }
    std::size_t m() const { return n_ - generators_.size(); }
    const std::vector<PauliString>& generators() const { return generators_; }
    const std::vector<PauliString>& correctable() const { return correctable_; }

    std::vector<std::size_t> syndrome_of(const PauliString& error) const;
    const PauliString& lookup(const std::vector<std::size_t>& syndrome) const;

    static StabilizerCode bitflip3();
    static StabilizerCode five_qubit();
    // One generator per line, symbols I/X/Y/Z; correctable set defaults to
    // {identity} plus all single-site errors whose syndromes are distinct.
    static StabilizerCode load(const std::string& text);

  private:
    std::size_t n_;
    std::vector<PauliString> generators_;
    std::vector<PauliString> correctable_;
    std::vector<std::vector<std::size_t>> syndromes_;  // parallel to correctable_
};

// Alice and Bob both measure each generator and compare outcomes; the
// difference vector equals the syndrome of the effective error reproducing s
// from the all-(0,0) string. Pairs are not consumed.
std::vector<std::size_t> bilateral_syndrome(const StabilizerCode& code, const BellString& s);

// One exact recurrence round on qubit pairs drawn iid from p (Bell labels
// 1..4 mapped to indices (0,0),(1,0),(0,1),(1,1)): bxor pair1->pair2,
// z_compare pair2, keep pair1 on outcome 0. Enumerates all 16 combinations.
std::pair<std::vector<double>, double> recurrence_map(const std::vector<double>& p);

// Order of the paper's Bell labels in index space: B1..B4.
BellIndex bell_label_index(int label);
int bell_index_label(const BellIndex& idx);

}  // namespace locc
