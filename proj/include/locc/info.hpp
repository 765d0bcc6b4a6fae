#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "locc/states.hpp"

namespace locc {

// Shannon entropy in bits; 0*log0 := 0.
double shannon(const std::vector<double>& p);

// von Neumann entropy in bits over clipped eigenvalues.
double vn_entropy(const ComplexMatrix& rho);
double vn_entropy(const MixedState& rho);

// Holevo quantity chi = S(avg) - sum p_X S(rho_X).
double holevo(const Ensemble& e);

// Entropy of entanglement of a pure bipartite state (ebits).
double ent_entropy(const PureState& s);

// Probability-weighted ent_entropy; requires a pure-component ensemble.
double avg_entanglement(const Ensemble& e);

// Finite joint distribution over named axes, probabilities in a flat table
// with the first axis as the most significant index.
class JointDistribution {
  public:
    struct Axis {
        std::string name;
        std::size_t size;
    };

    JointDistribution(std::vector<Axis> axes, std::vector<double> probabilities);

    const std::vector<Axis>& axes() const { return axes_; }
    const std::vector<double>& probabilities() const { return table_; }

    // Marginal entropy of an axis group.
    double entropy(const std::vector<std::string>& group) const;

    // Shannon mutual information between two disjoint axis groups.
    double mutual_info(const std::vector<std::string>& left,
                       const std::vector<std::string>& right) const;

    // I(left; right | given)
    double conditional_mutual_info(const std::vector<std::string>& left,
                                   const std::vector<std::string>& right,
                                   const std::vector<std::string>& given) const;

  private:
    std::vector<std::size_t> axis_indices(const std::vector<std::string>& group) const;
    // Marginal table over the selected axes (in their original order).
    std::vector<double> marginal(const std::vector<std::size_t>& axes_sel) const;

    std::vector<Axis> axes_;
    std::vector<double> table_;
};

double mutual_info(const JointDistribution& j, const std::vector<std::string>& left,
                   const std::vector<std::string>& right);

}  // namespace locc
