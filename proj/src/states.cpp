#include "locc/states.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "locc/errors.hpp"

namespace locc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

PureState::PureState(std::vector<Cx> amplitudes, BipartiteDims dims)
    : amps_(std::move(amplitudes)), dims_(dims) {
    if (dims_.da < 1 || dims_.db < 1) throw ContractError("PureState: dims must be >= 1");
    if (dims_.total() > kMaxDim) {
        throw CapacityError("PureState: dimension " + std::to_string(dims_.total()) +
                            " exceeds cap");
    }
    if (amps_.size() != dims_.total()) throw ShapeError("PureState: amplitude length != dA*dB");
    double norm2 = 0.0;
    for (const auto& a : amps_) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-9) throw ContractError("PureState: not normalized");
}

ComplexMatrix PureState::projector() const {
    const std::size_t n = amps_.size();
    ComplexMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.at(r, c) = amps_[r] * std::conj(amps_[c]);
    return out;
}

ComplexMatrix PureState::reduced(Side keep) const {
    // Contract the pure-state amplitudes directly; avoids forming the full projector.
    const std::size_t da = dims_.da, db = dims_.db;
    if (keep == Side::A) {
        ComplexMatrix out(da, da);
        for (std::size_t r = 0; r < da; ++r)
            for (std::size_t c = 0; c < da; ++c) {
                Cx sum = 0.0;
                for (std::size_t b = 0; b < db; ++b)
                    sum += amps_[r * db + b] * std::conj(amps_[c * db + b]);
                out.at(r, c) = sum;
            }
        return out;
    }
    ComplexMatrix out(db, db);
    for (std::size_t r = 0; r < db; ++r)
        for (std::size_t c = 0; c < db; ++c) {
            Cx sum = 0.0;
            for (std::size_t a = 0; a < da; ++a)
                sum += amps_[a * db + r] * std::conj(amps_[a * db + c]);
            out.at(r, c) = sum;
        }
    return out;
}

double PureState::overlap_abs(const PureState& other) const {
    if (!(dims_ == other.dims_)) throw ShapeError("overlap: dims mismatch");
    Cx sum = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) sum += std::conj(amps_[i]) * other.amps_[i];
    return std::abs(sum);
}

MixedState::MixedState(ComplexMatrix matrix, BipartiteDims dims)
    : mat_(std::move(matrix)), dims_(dims) {
    if (mat_.rows() != dims_.total() || mat_.cols() != dims_.total()) {
        throw ShapeError("MixedState: matrix dim != dA*dB");
    }
    if (!is_density_matrix(mat_, 1e-8)) throw ContractError("MixedState: not a density matrix");
}

ComplexMatrix state_matrix(const StateVariant& s) {
    if (const auto* p = std::get_if<PureState>(&s)) return p->projector();
    return std::get<MixedState>(s).matrix();
}

const BipartiteDims& state_dims(const StateVariant& s) {
    if (const auto* p = std::get_if<PureState>(&s)) return p->dims();
    return std::get<MixedState>(s).dims();
}

Ensemble::Ensemble(std::vector<Item> items) : items_(std::move(items)) {
    if (items_.empty()) throw ContractError("Ensemble: empty");
    dims_ = state_dims(items_.front().state);
    double total = 0.0;
    for (const auto& item : items_) {
        if (item.probability < 0.0) throw ContractError("Ensemble: negative probability");
        if (!(state_dims(item.state) == dims_)) throw ShapeError("Ensemble: mixed dims");
        total += item.probability;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ContractError("Ensemble: probabilities do not sum to 1");
}

bool Ensemble::all_pure() const {
    for (const auto& item : items_) {
        if (!std::holds_alternative<PureState>(item.state)) return false;
    }
    return true;
}

ComplexMatrix Ensemble::average_matrix() const {
    ComplexMatrix avg(dims_.total(), dims_.total());
    for (const auto& item : items_) {
        avg = avg.plus(state_matrix(item.state).scaled(item.probability));
    }
    return avg;
}

PureState bell(int x) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (x) {
        case 1: return PureState({s, 0, 0, s}, {2, 2});
        case 2: return PureState({s, 0, 0, -s}, {2, 2});
        case 3: return PureState({0, s, s, 0}, {2, 2});
        case 4: return PureState({0, s, -s, 0}, {2, 2});
        default: throw ContractError("bell: index must be in 1..4");
    }
}

PureState gen_bell(std::size_t d, std::size_t n, std::size_t m) {
    if (d < 2) throw ContractError("gen_bell: d must be >= 2");
    if (n >= d || m >= d) throw ContractError("gen_bell: indices must be < d");
    std::vector<Cx> amps(d * d, Cx{0.0, 0.0});
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) {
        const double phase = kTwoPi * static_cast<double>(j * n) / static_cast<double>(d);
        amps[j * d + (j + m) % d] = norm * Cx{std::cos(phase), std::sin(phase)};
    }
    return PureState(std::move(amps), {d, d});
}

PureState tensor_power_canonical(const PureState& s, std::size_t k) {
    if (k < 1) throw ContractError("tensor_power_canonical: k must be >= 1");
    const std::size_t da = s.dims().da, db = s.dims().db;
    std::size_t da_k = 1, db_k = 1;
    for (std::size_t i = 0; i < k; ++i) {
        da_k *= da;
        db_k *= db;
        if (da_k * db_k > kMaxDim) {
            throw CapacityError("tensor_power_canonical: result exceeds dimension cap");
        }
    }
    // amplitude of |a1..ak>|b1..bk> is the product over copies of amp(ai, bi)
    std::vector<Cx> amps(da_k * db_k);
    for (std::size_t ia = 0; ia < da_k; ++ia) {
        for (std::size_t ib = 0; ib < db_k; ++ib) {
            Cx prod = 1.0;
            std::size_t ra = ia, rb = ib;
            // factor i digits, most significant first
            for (std::size_t i = 0; i < k; ++i) {
                std::size_t pa = 1, pb = 1;
                for (std::size_t j = i + 1; j < k; ++j) {
                    pa *= da;
                    pb *= db;
                }
                const std::size_t a_i = ra / pa;
                const std::size_t b_i = rb / pb;
                ra %= pa;
                rb %= pb;
                prod *= s.amplitudes()[a_i * db + b_i];
            }
            amps[ia * db_k + ib] = prod;
        }
    }
    return PureState(std::move(amps), {da_k, db_k});
}

PureState tensor_canonical(const PureState& s1, const PureState& s2) {
    const std::size_t da1 = s1.dims().da, db1 = s1.dims().db;
    const std::size_t da2 = s2.dims().da, db2 = s2.dims().db;
    const std::size_t da = da1 * da2, db = db1 * db2;
    if (da * db > kMaxDim) throw CapacityError("tensor_canonical: result exceeds dimension cap");
    std::vector<Cx> amps(da * db);
    for (std::size_t a1 = 0; a1 < da1; ++a1)
        for (std::size_t a2 = 0; a2 < da2; ++a2)
            for (std::size_t b1 = 0; b1 < db1; ++b1)
                for (std::size_t b2 = 0; b2 < db2; ++b2) {
                    amps[(a1 * da2 + a2) * db + (b1 * db2 + b2)] =
                        s1.amplitudes()[a1 * db1 + b1] * s2.amplitudes()[a2 * db2 + b2];
                }
    return PureState(std::move(amps), {da, db});
}

Ensemble uniform_bell_ensemble(std::size_t d, std::size_t copies) {
    std::vector<Ensemble::Item> items;
    const double p = 1.0 / static_cast<double>(d * d);
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            items.push_back({p, tensor_power_canonical(gen_bell(d, n, m), copies)});
        }
    }
    return Ensemble(std::move(items));
}

MixedState bell_diagonal(const std::vector<double>& p) {
    if (p.size() != 4) throw ContractError("bell_diagonal: need a 4-vector");
    check_distribution(p);
    ComplexMatrix rho(4, 4);
    for (int i = 0; i < 4; ++i) {
        if (p[static_cast<std::size_t>(i)] == 0.0) continue;
        rho = rho.plus(bell(i + 1).projector().scaled(p[static_cast<std::size_t>(i)]));
    }
    return MixedState(std::move(rho), {2, 2});
}

void check_distribution(const std::vector<double>& p) {
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw ContractError("distribution: negative or NaN entry");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ContractError("distribution: does not sum to 1");
}

}  // namespace locc
