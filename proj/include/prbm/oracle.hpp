#pragma once

#include <stdexcept>
#include <vector>

#include "prbm/model.hpp"

namespace prbm {

struct CapacityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Caps brute-force enumeration: (p+1)(n+m) bits for full-joint sums,
// (p+1)*m for hidden-only sums.
struct EnumerationBudget {
    int max_total_bits = 24;
};

// Bit <-> block-vector mapping used by all enumeration loops:
// unit u of lag l is bit (l * units_per_lag + u).
BlockVisible visible_from_index(const ModelShape& shape, std::uint64_t index);
BlockHidden hidden_from_index(const ModelShape& shape, std::uint64_t index);
std::uint64_t index_of_visible(const ModelShape& shape, const BlockVisible& v);

// log Z via log-sum-exp over all visible configurations with the hidden
// side summed out analytically.
double log_partition_function(const Model& model, const EnumerationBudget& budget = {});

// e^{-E(v, h)} / Z
double exact_joint(const Model& model, const BlockVisible& v, const BlockHidden& h,
                   const EnumerationBudget& budget = {});

// log p(v) = -free_energy(v) - log Z
double exact_loglik(const Model& model, const BlockVisible& v,
                    const EnumerationBudget& budget = {});

// Same block structure as the weights; exact data-phase minus model-phase
// expectations, each block scaled by its forgetting factor.
BlockWeights exact_gradient(const Model& model, const BlockVisible& v,
                            const EnumerationBudget& budget = {});

// Per-unit conditionals computed by brute-force enumeration of the other
// layer (no factorization shortcut); ground truth for the activation rules.
std::vector<Eigen::VectorXd> exact_hidden_conditionals(
    const Model& model, const BlockVisible& v, const EnumerationBudget& budget = {});
std::vector<Eigen::VectorXd> exact_visible_conditionals(
    const Model& model, const BlockHidden& h, const EnumerationBudget& budget = {});

// max over hidden configurations of |p(h|v) - prod_j p(h_{t-j}|v)|,
// with the block marginals enumerated independently.
double factorization_max_error(const Model& model, const BlockVisible& v,
                               const EnumerationBudget& budget = {});

// Distribution over all 2^{(p+1)n} visible configurations, indexed per
// visible_from_index.
Eigen::VectorXd exact_visible_marginal(const Model& model,
                                       const EnumerationBudget& budget = {});

}  // namespace prbm
