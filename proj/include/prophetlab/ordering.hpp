#pragma once
#include "prophetlab/benchmarks.hpp"
#include "prophetlab/instance.hpp"

#include <cstdint>
#include <vector>

namespace prophetlab {

struct ThresholdGrid {
    double eps = 0.0;
    int c = 0;                  // ceil(1/eps)
    std::vector<double> levels; // t_u = (1 - u eps)^+ MAX for u = 0..c
    double max_value = 0.0;     // MAX of the instance
};

ThresholdGrid build_grid(const Instance& inst, double eps);

/// Exact (lambda, p) tables over variables x grid levels plus the ranking
/// bijection ordering all pairs by lambda descending (ties by (i, j)
/// ascending).  Pair id = i * cols + j.
struct AssignmentTables {
    int n = 0, cols = 0;
    std::vector<double> lambda, p; // row-major n x cols
    std::vector<int> ranking;      // pair ids, lambda-descending
    std::vector<int> rank_of;      // inverse permutation

    double lam(int i, int j) const { return lambda[static_cast<size_t>(i) * cols + j]; }
    double pr(int i, int j) const { return p[static_cast<size_t>(i) * cols + j]; }
};

AssignmentTables build_tables(const Instance& inst, const ThresholdGrid& grid);

struct Assignment {
    std::vector<double> z;  // row-major n x cols, rows on the simplex
    std::vector<int> fixed; // per-row fixed column, -1 when free
    double objective = 0.0;
    bool converged = true;
    int iterations = 0;
};

struct CpOptions {
    double improvement_tol = 1e-9; // relative improvement window threshold
    int window = 50;
    int max_iterations = 100000;
};

// Fractional maximizer of the concave relaxation by projected gradient
// ascent over the product of row simplices.  Entries of p are floored at
// 1e-12 inside the exponential-sum objective only.
Assignment solve_cp(const AssignmentTables& tables, const std::vector<int>& fixed = {},
                    const CpOptions& opts = {});

// Floored concave objective of a fractional point (the solver's objective).
double cp_objective(const AssignmentTables& tables, const std::vector<double>& z);

// Exact objective of an integral assignment (cols[i] = chosen column);
// term-dropping evaluation, never touched by the p-floor.  Equals the value
// of the induced lambda-sorted policy.
double integral_objective(const AssignmentTables& tables, const std::vector<int>& cols);
double integral_objective(const AssignmentTables& tables, const Assignment& z);

struct RoundResult {
    std::vector<int> cols;
    double objective = 0.0; // exact integral objective of cols
    int best_rep = 0;
};

// Best of `reps` independent per-row categorical roundings, keeping the best
// by exact evaluation; fixed rows are never re-randomized.
RoundResult round_assignment(const AssignmentTables& tables, const Assignment& z,
                             uint64_t seed, int reps);

// Lambda-sorted stateless policy induced by an integral assignment.
StatelessPolicy policy_from_assignment(const Instance& inst, const ThresholdGrid& grid,
                                       const AssignmentTables& tables,
                                       const std::vector<int>& cols);

struct OrderOptions {
    double eps = 0.1;
    uint64_t seed = 0;
    int reps = -1;                 // default ceil(10/eps)
    double mult = 1.0;             // constant inside the removal budget
    long fixing_cap = 200000;      // hard cap on enumerated fixings
    long cp_fixing_budget = 20000; // cap when each fixing needs a CP solve
    bool allow_reduction = true;   // shrink the enumerated row set to fit
    int solve_grid = 4096;         // unused hook kept for CLI symmetry
};

struct OrderOutcome {
    StatelessPolicy policy;
    double cp_objective = 0.0;
    bool cp_converged = true;
    double t_star = 0.0;
    std::vector<int> removed;    // variables deleted by the random sample
    std::vector<int> big;        // decomposition's big set
    long fixings = 0;            // fixings actually enumerated
    int enumerated_rows = 0;
    bool capped = false;         // enumerated row set was reduced to fit
    int reps = 0;
};

// EPTAS for eps-small instances: grid -> tables -> concave program ->
// randomized rounding -> lambda sort.
OrderOutcome order_small(const Instance& inst, double eps, uint64_t seed = 0,
                         int reps = -1);

// General EPTAS: decompose, delete a random sample of the big set, solve the
// residual instance by enumerating threshold fixings of the remaining big
// rows, then run the residual policy shifted by t* with the deleted
// variables appended as the t*-stragglers.
OrderOutcome order_general(const Instance& inst, const OrderOptions& opts);

} // namespace prophetlab
