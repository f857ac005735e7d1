#pragma once
#include "prophetlab/instance.hpp"

#include <vector>

namespace prophetlab {

/// An inspection order plus one acceptance threshold per variable.  The
/// policy visits order[0], order[1], ... and accepts the first value with
/// X >= threshold that is strictly positive (zero-value items are never
/// accepted; accepting one would end the game with zero reward).
struct StatelessPolicy {
    std::vector<int> order;          // visit sequence of original indices
    std::vector<double> thresholds;  // per original variable index
    std::vector<double> lambdas;     // cached per position
    std::vector<double> ps;          // cached per position
    double value = 0.0;              // closed-form expected reward
};

// Exact closed-form value of (order, thresholds) on the instance.
double eval_policy(const Instance& inst, const std::vector<int>& order,
                   const std::vector<double>& thresholds);
double eval_policy(const Instance& inst, const StatelessPolicy& pol);

StatelessPolicy make_policy(const Instance& inst, std::vector<int> order,
                            std::vector<double> thresholds);

// Optimal thresholds for a fixed order: tau(k) is the expected reward of the
// remaining suffix, so tau at the last position is 0.
StatelessPolicy backward_induction(const Instance& inst, const std::vector<int>& order);

// E[max_i X_i], exact over the merged support grid.
double expected_max(const Instance& inst);

// E[k-th largest], exact via the Poisson-binomial count recurrence at every
// grid value.  1 <= k <= n.
double expected_kth_max(const Instance& inst, int k);

// All of E[X^(1)] .. E[X^(kmax)] in one pass.
std::vector<double> expected_order_stats(const Instance& inst, int kmax);

// Exact optimal value under uniform random arrival order (subset DP,
// n <= 20).
double opt_random_order(const Instance& inst);

struct FreeOrderResult {
    double value;
    std::vector<int> order; // one optimal inspection order
};

// Exact optimal free-order value and an optimal order (argmax ties broken by
// lowest index).
FreeOrderResult opt_free_order(const Instance& inst);

// Desk-scale limits.
constexpr int kSubsetDpMaxN = 20;
constexpr size_t kMergedGridCap = 100000;

// Merged sorted distinct support of all variables (throws capacity_error
// beyond kMergedGridCap).
std::vector<double> merged_support(const Instance& inst);

} // namespace prophetlab
