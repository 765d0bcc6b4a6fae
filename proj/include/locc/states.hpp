#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "locc/matrix.hpp"

namespace locc {

struct BipartiteDims {
    std::size_t da = 1;
    std::size_t db = 1;
    std::size_t total() const { return da * db; }
    bool operator==(const BipartiteDims&) const = default;
};

// Normalized pure state on a dA x dB bipartite system, amplitudes in the
// computational basis with Alice's index major: amp[a*dB + b].
class PureState {
  public:
    PureState(std::vector<Cx> amplitudes, BipartiteDims dims);

    const std::vector<Cx>& amplitudes() const { return amps_; }
    const BipartiteDims& dims() const { return dims_; }

    ComplexMatrix projector() const;
    ComplexMatrix reduced(Side keep) const;

    // |<this|other>|
    double overlap_abs(const PureState& other) const;

  private:
    std::vector<Cx> amps_;
    BipartiteDims dims_;
};

class MixedState {
  public:
    MixedState(ComplexMatrix matrix, BipartiteDims dims);

    const ComplexMatrix& matrix() const { return mat_; }
    const BipartiteDims& dims() const { return dims_; }

  private:
    ComplexMatrix mat_;
    BipartiteDims dims_;
};

using StateVariant = std::variant<PureState, MixedState>;

ComplexMatrix state_matrix(const StateVariant& s);
const BipartiteDims& state_dims(const StateVariant& s);

// Source preparation {p_X, rho_X}: states with probabilities summing to 1.
class Ensemble {
  public:
    struct Item {
        double probability;
        StateVariant state;
    };

    explicit Ensemble(std::vector<Item> items);

    const std::vector<Item>& items() const { return items_; }
    const BipartiteDims& dims() const { return dims_; }
    std::size_t size() const { return items_.size(); }

    bool all_pure() const;
    ComplexMatrix average_matrix() const;

  private:
    std::vector<Item> items_;
    BipartiteDims dims_;
};

// The four qubit Bell states, indexed 1..4:
// B1=(|00>+|11>)/sqrt2, B2=(|00>-|11>)/sqrt2, B3=(|01>+|10>)/sqrt2, B4=(|01>-|10>)/sqrt2.
PureState bell(int x);

// Generalized maximally entangled basis of d (x) d:
// (1/sqrt d) sum_j exp(2*pi*i*j*n/d) |j> (x) |(j+m) mod d>.
PureState gen_bell(std::size_t d, std::size_t n, std::size_t m);

// k copies of s with subsystems permuted to the canonical bipartition
// A1..Ak | B1..Bk. Resulting dims are (dA^k, dB^k).
PureState tensor_power_canonical(const PureState& s, std::size_t k);

// Product of two bipartite states in canonical ordering A1 A2 | B1 B2.
PureState tensor_canonical(const PureState& s1, const PureState& s2);

// d^2 equiprobable generalized Bell states, each taken to `copies` copies.
Ensemble uniform_bell_ensemble(std::size_t d, std::size_t copies);

// sum_i p_i |B_i><B_i| on 2 (x) 2.
MixedState bell_diagonal(const std::vector<double>& p);

// Validates p_i >= 0, sum = 1 within 1e-9; throws ContractError otherwise.
void check_distribution(const std::vector<double>& p);

}  // namespace locc
