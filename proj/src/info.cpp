#include "locc/info.hpp"

#include <algorithm>
#include <cmath>

#include "locc/errors.hpp"

namespace locc {

namespace {

double plogp(double p) { return (p > 0.0) ? -p * std::log2(p) : 0.0; }

// Eigenvalues in [-1e-10, 0) are numeric PSD noise; clip to 0.
double entropy_of_eigenvalues(const std::vector<double>& lambdas) {
    double h = 0.0;
    for (double lambda : lambdas) {
        if (lambda < -1e-10) throw NumericError("entropy: eigenvalue below -1e-10");
        h += plogp(std::max(lambda, 0.0));
    }
    return h;
}

}  // namespace

double shannon(const std::vector<double>& p) {
    check_distribution(p);
    double h = 0.0;
    for (double v : p) h += plogp(v);
    return h;
}

double vn_entropy(const ComplexMatrix& rho) {
    if (!is_density_matrix(rho, 1e-8)) throw ContractError("vn_entropy: not a density matrix");
    return entropy_of_eigenvalues(eigh(rho).eigenvalues);
}

double vn_entropy(const MixedState& rho) { return vn_entropy(rho.matrix()); }

double holevo(const Ensemble& e) {
    double avg_term = 0.0;
    for (const auto& item : e.items()) {
        if (item.probability <= 0.0) continue;
        avg_term += item.probability * vn_entropy(state_matrix(item.state));
    }
    return vn_entropy(e.average_matrix()) - avg_term;
}

double ent_entropy(const PureState& s) {
    // vn_entropy of the reduced-A state; skip the density-matrix predicate
    // (the reduction of a normalized pure state is one by construction).
    return entropy_of_eigenvalues(eigh(s.reduced(Side::A)).eigenvalues);
}

double avg_entanglement(const Ensemble& e) {
    double total = 0.0;
    for (const auto& item : e.items()) {
        const auto* pure = std::get_if<PureState>(&item.state);
        if (pure == nullptr) {
            throw ContractError("avg_entanglement: mixed component unsupported");
        }
        if (item.probability <= 0.0) continue;
        total += item.probability * ent_entropy(*pure);
    }
    return total;
}

JointDistribution::JointDistribution(std::vector<Axis> axes, std::vector<double> probabilities)
    : axes_(std::move(axes)), table_(std::move(probabilities)) {
    std::size_t total = 1;
    for (const auto& axis : axes_) {
        if (axis.size == 0) throw ContractError("JointDistribution: empty axis");
        total *= axis.size;
    }
    if (table_.size() != total) throw ShapeError("JointDistribution: table size mismatch");
    check_distribution(table_);
}

std::vector<std::size_t> JointDistribution::axis_indices(
    const std::vector<std::string>& group) const {
    std::vector<std::size_t> out;
    for (const auto& name : group) {
        bool found = false;
        for (std::size_t i = 0; i < axes_.size(); ++i) {
            if (axes_[i].name == name) {
                out.push_back(i);
                found = true;
                break;
            }
        }
        if (!found) throw ContractError("JointDistribution: unknown axis " + name);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() != group.size()) throw ContractError("JointDistribution: duplicate axis in group");
    return out;
}

std::vector<double> JointDistribution::marginal(const std::vector<std::size_t>& axes_sel) const {
    std::size_t out_size = 1;
    for (auto i : axes_sel) out_size *= axes_[i].size;
    std::vector<double> out(out_size, 0.0);
    const std::size_t n_axes = axes_.size();
    std::vector<std::size_t> digits(n_axes, 0);
    for (std::size_t flat = 0; flat < table_.size(); ++flat) {
        std::size_t rem = flat;
        for (std::size_t i = n_axes; i-- > 0;) {
            digits[i] = rem % axes_[i].size;
            rem /= axes_[i].size;
        }
        std::size_t idx = 0;
        for (auto i : axes_sel) idx = idx * axes_[i].size + digits[i];
        out[idx] += table_[flat];
    }
    return out;
}

double JointDistribution::entropy(const std::vector<std::string>& group) const {
    const auto sel = axis_indices(group);
    double h = 0.0;
    for (double p : marginal(sel)) h += plogp(p);
    return h;
}

double JointDistribution::mutual_info(const std::vector<std::string>& left,
                                      const std::vector<std::string>& right) const {
    auto left_sel = axis_indices(left);
    auto right_sel = axis_indices(right);
    for (auto l : left_sel) {
        for (auto r : right_sel) {
            if (l == r) throw ContractError("mutual_info: axis groups overlap");
        }
    }
    std::vector<std::string> both = left;
    both.insert(both.end(), right.begin(), right.end());
    return entropy(left) + entropy(right) - entropy(both);
}

double JointDistribution::conditional_mutual_info(const std::vector<std::string>& left,
                                                  const std::vector<std::string>& right,
                                                  const std::vector<std::string>& given) const {
    // I(L;R|G) = I(L; R,G) - I(L; G)
    std::vector<std::string> rg = right;
    rg.insert(rg.end(), given.begin(), given.end());
    return mutual_info(left, rg) - mutual_info(left, given);
}

double mutual_info(const JointDistribution& j, const std::vector<std::string>& left,
                   const std::vector<std::string>& right) {
    return j.mutual_info(left, right);
}

}  // namespace locc
