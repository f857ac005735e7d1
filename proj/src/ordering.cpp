#include "prophetlab/ordering.hpp"
#include "prophetlab/errors.hpp"
#include "prophetlab/policies.hpp"
#include "prophetlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace prophetlab {

namespace {
constexpr double kLogFloor = 1e-12;
} // namespace

ThresholdGrid build_grid(const Instance& inst, double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw domain_error("build_grid needs eps in (0, 0.5]");
    ThresholdGrid grid;
    grid.eps = eps;
    grid.c = static_cast<int>(std::ceil(1.0 / eps));
    grid.max_value = expected_max(inst);
    grid.levels.resize(static_cast<size_t>(grid.c) + 1);
    for (int u = 0; u <= grid.c; ++u) {
        double f = 1.0 - u * eps;
        grid.levels[static_cast<size_t>(u)] = f > 0.0 ? f * grid.max_value : 0.0;
    }
    return grid;
}

AssignmentTables build_tables(const Instance& inst, const ThresholdGrid& grid) {
    AssignmentTables tbl;
    tbl.n = inst.n();
    tbl.cols = grid.c + 1;
    size_t total = static_cast<size_t>(tbl.n) * tbl.cols;
    tbl.lambda.resize(total);
    tbl.p.resize(total);
    for (int i = 0; i < tbl.n; ++i) {
        for (int j = 0; j < tbl.cols; ++j) {
            TailStats st = accept_stats(inst.var(i), grid.levels[static_cast<size_t>(j)]);
            tbl.lambda[static_cast<size_t>(i) * tbl.cols + j] = st.lambda;
            tbl.p[static_cast<size_t>(i) * tbl.cols + j] = st.p;
        }
    }
    tbl.ranking.resize(total);
    std::iota(tbl.ranking.begin(), tbl.ranking.end(), 0);
    std::sort(tbl.ranking.begin(), tbl.ranking.end(), [&tbl](int a, int b) {
        double la = tbl.lambda[static_cast<size_t>(a)], lb = tbl.lambda[static_cast<size_t>(b)];
        if (la != lb) return la > lb;
        return a < b;
    });
    tbl.rank_of.resize(total);
    for (size_t r = 0; r < total; ++r)
        tbl.rank_of[static_cast<size_t>(tbl.ranking[r])] = static_cast<int>(r);
    return tbl;
}

double cp_objective(const AssignmentTables& tbl, const std::vector<double>& z) {
    size_t total = tbl.ranking.size();
    double obj = 0.0, s = 0.0;
    for (size_t r = 0; r < total; ++r) {
        int pair = tbl.ranking[r];
        double lam = tbl.lambda[static_cast<size_t>(pair)];
        double next = r + 1 < total ? tbl.lambda[static_cast<size_t>(tbl.ranking[r + 1])] : 0.0;
        s += z[static_cast<size_t>(pair)] *
             std::log(std::max(tbl.p[static_cast<size_t>(pair)], kLogFloor));
        obj += (lam - next) * (1.0 - std::exp(s));
    }
    return obj;
}

namespace {

// objective and gradient of the floored exponential-sum form
double cp_objective_grad(const AssignmentTables& tbl, const std::vector<double>& z,
                         std::vector<double>& grad) {
    size_t total = tbl.ranking.size();
    static thread_local std::vector<double> expo;
    expo.resize(total);
    double obj = 0.0, s = 0.0;
    for (size_t r = 0; r < total; ++r) {
        int pair = tbl.ranking[r];
        double lam = tbl.lambda[static_cast<size_t>(pair)];
        double next = r + 1 < total ? tbl.lambda[static_cast<size_t>(tbl.ranking[r + 1])] : 0.0;
        s += z[static_cast<size_t>(pair)] *
             std::log(std::max(tbl.p[static_cast<size_t>(pair)], kLogFloor));
        double e = std::exp(s);
        expo[r] = (lam - next) * e;
        obj += (lam - next) * (1.0 - e);
    }
    double suffix = 0.0;
    for (size_t r = total; r-- > 0;) {
        suffix += expo[r];
        int pair = tbl.ranking[r];
        grad[static_cast<size_t>(pair)] =
            -std::log(std::max(tbl.p[static_cast<size_t>(pair)], kLogFloor)) * suffix;
    }
    return obj;
}

void project_row_simplex(double* row, int m) {
    static thread_local std::vector<double> u;
    u.assign(row, row + m);
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    int rho = 0;
    for (int j = 0; j < m; ++j) {
        css += u[static_cast<size_t>(j)];
        double t = (css - 1.0) / (j + 1);
        if (u[static_cast<size_t>(j)] - t > 0.0) {
            rho = j + 1;
            theta = t;
        }
    }
    (void)rho;
    for (int j = 0; j < m; ++j)
        row[j] = std::max(row[j] - theta, 0.0);
}

} // namespace

Assignment solve_cp(const AssignmentTables& tbl, const std::vector<int>& fixed,
                    const CpOptions& opts) {
    int n = tbl.n, cols = tbl.cols;
    size_t total = static_cast<size_t>(n) * cols;
    Assignment out;
    out.fixed.assign(static_cast<size_t>(n), -1);
    for (size_t i = 0; i < fixed.size(); ++i) {
        if (fixed[i] < -1 || fixed[i] >= cols)
            throw domain_error("solve_cp: fixed column out of range");
        out.fixed[i] = fixed[i];
    }

    out.z.assign(total, 0.0);
    bool any_free = false;
    for (int i = 0; i < n; ++i) {
        if (out.fixed[static_cast<size_t>(i)] >= 0) {
            out.z[static_cast<size_t>(i) * cols + out.fixed[static_cast<size_t>(i)]] = 1.0;
        } else {
            any_free = true;
            for (int j = 0; j < cols; ++j)
                out.z[static_cast<size_t>(i) * cols + j] = 1.0 / cols;
        }
    }
    if (!any_free) {
        out.objective = cp_objective(tbl, out.z);
        return out;
    }

    std::vector<double> grad(total), cand(total);
    std::vector<double> history;
    history.reserve(256);
    double step = 1.0;
    double obj = cp_objective_grad(tbl, out.z, grad);
    history.push_back(obj);

    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        bool improved = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            cand = out.z;
            for (int i = 0; i < n; ++i) {
                if (out.fixed[static_cast<size_t>(i)] >= 0) continue;
                double* row = cand.data() + static_cast<size_t>(i) * cols;
                const double* g = grad.data() + static_cast<size_t>(i) * cols;
                for (int j = 0; j < cols; ++j) row[j] += step * g[j];
                project_row_simplex(row, cols);
            }
            double cobj = cp_objective(tbl, cand);
            if (cobj > obj) {
                out.z.swap(cand);
                obj = cobj;
                step *= 1.25;
                improved = true;
                break;
            }
            step *= 0.5;
            if (step < 1e-18) break;
        }
        if (!improved) {
            // stationary within line-search resolution
            out.converged = true;
            break;
        }
        obj = cp_objective_grad(tbl, out.z, grad);
        history.push_back(obj);
        size_t h = history.size();
        if (h > static_cast<size_t>(opts.window)) {
            double before = history[h - 1 - static_cast<size_t>(opts.window)];
            double rel = (history[h - 1] - before) / std::max(std::fabs(history[h - 1]), 1e-300);
            if (rel < opts.improvement_tol) break;
        }
    }
    out.iterations = it;
    out.converged = it < opts.max_iterations;
    out.objective = obj;
    return out;
}

double integral_objective(const AssignmentTables& tbl, const std::vector<int>& cols) {
    if (cols.size() != static_cast<size_t>(tbl.n))
        throw domain_error("integral_objective: one column per row required");
    double value = 0.0, prod = 1.0;
    for (int pair : tbl.ranking) {
        int i = pair / tbl.cols, j = pair % tbl.cols;
        if (cols[static_cast<size_t>(i)] != j) continue;
        double lam = tbl.lambda[static_cast<size_t>(pair)];
        double p = tbl.p[static_cast<size_t>(pair)];
        value += lam * (1.0 - p) * prod;
        prod *= p;
    }
    return value;
}

double integral_objective(const AssignmentTables& tbl, const Assignment& z) {
    std::vector<int> cols(static_cast<size_t>(tbl.n), -1);
    for (int i = 0; i < tbl.n; ++i) {
        for (int j = 0; j < tbl.cols; ++j) {
            double v = z.z[static_cast<size_t>(i) * tbl.cols + j];
            if (v == 1.0) cols[static_cast<size_t>(i)] = j;
            else if (v != 0.0) throw domain_error("integral_objective: assignment not one-hot");
        }
        if (cols[static_cast<size_t>(i)] < 0)
            throw domain_error("integral_objective: row without a chosen column");
    }
    return integral_objective(tbl, cols);
}

RoundResult round_assignment(const AssignmentTables& tbl, const Assignment& z,
                             uint64_t seed, int reps) {
    if (reps < 1) throw domain_error("round_assignment needs reps >= 1");
    RoundResult best;
    best.objective = -1.0;
    std::vector<int> cols(static_cast<size_t>(tbl.n));
    for (int rep = 0; rep < reps; ++rep) {
        Rng rng(seed, streams::kRounding, static_cast<uint64_t>(rep));
        for (int i = 0; i < tbl.n; ++i) {
            if (z.fixed[static_cast<size_t>(i)] >= 0) {
                cols[static_cast<size_t>(i)] = z.fixed[static_cast<size_t>(i)];
                continue;
            }
            const double* row = z.z.data() + static_cast<size_t>(i) * tbl.cols;
            double u = rng.unit();
            double acc = 0.0;
            int chosen = tbl.cols - 1;
            for (int j = 0; j < tbl.cols; ++j) {
                acc += row[j];
                if (u < acc) {
                    chosen = j;
                    break;
                }
            }
            cols[static_cast<size_t>(i)] = chosen;
        }
        double obj = integral_objective(tbl, cols);
        if (obj > best.objective) {
            best.objective = obj;
            best.cols = cols;
            best.best_rep = rep;
        }
    }
    return best;
}

StatelessPolicy policy_from_assignment(const Instance& inst, const ThresholdGrid& grid,
                                       const AssignmentTables& tbl,
                                       const std::vector<int>& cols) {
    std::vector<int> order;
    std::vector<double> thresholds(static_cast<size_t>(inst.n()), 0.0);
    order.reserve(static_cast<size_t>(inst.n()));
    for (int pair : tbl.ranking) {
        int i = pair / tbl.cols, j = pair % tbl.cols;
        if (cols[static_cast<size_t>(i)] != j) continue;
        order.push_back(i);
        thresholds[static_cast<size_t>(i)] = grid.levels[static_cast<size_t>(j)];
    }
    return make_policy(inst, std::move(order), std::move(thresholds));
}

namespace {

StatelessPolicy normalize_last_threshold(const Instance& inst, StatelessPolicy pol) {
    if (pol.order.empty()) return pol;
    // accepting the final item unconditionally never lowers the value
    pol.thresholds[static_cast<size_t>(pol.order.back())] = 0.0;
    return make_policy(inst, std::move(pol.order), std::move(pol.thresholds));
}

long ipow_capped(long base, int exp, long cap) {
    long v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

struct EnumerationPlan {
    std::vector<int> rows; // rows enumerated (others stay free in the CP)
    long fixings = 1;
    bool capped = false;
};

EnumerationPlan plan_enumeration(const std::vector<int>& big_rows,
                                 const std::vector<double>& weight, int n, int cols,
                                 const OrderOptions& opts) {
    EnumerationPlan plan;
    plan.rows = big_rows;
    // keep the most important rows (largest critical shift) when truncating
    std::sort(plan.rows.begin(), plan.rows.end(), [&weight](int a, int b) {
        double wa = weight[static_cast<size_t>(a)], wb = weight[static_cast<size_t>(b)];
        if (wa != wb) return wa > wb;
        return a < b;
    });
    auto budget_for = [&](size_t rows) {
        bool pure_eval = static_cast<int>(rows) == n;
        return pure_eval ? opts.fixing_cap : std::min(opts.fixing_cap, opts.cp_fixing_budget);
    };
    while (!plan.rows.empty() &&
           ipow_capped(cols, static_cast<int>(plan.rows.size()),
                       budget_for(plan.rows.size())) > budget_for(plan.rows.size())) {
        if (!opts.allow_reduction)
            throw capacity_error("fixing enumeration over k = " +
                                 std::to_string(plan.rows.size()) + " rows with c = " +
                                 std::to_string(cols - 1) +
                                 " exceeds the cap; raise eps or the cap");
        plan.rows.pop_back();
        plan.capped = true;
    }
    plan.fixings = ipow_capped(cols, static_cast<int>(plan.rows.size()),
                               budget_for(plan.rows.size()));
    std::sort(plan.rows.begin(), plan.rows.end());
    return plan;
}

struct BestFixing {
    double objective = -1.0;
    bool any_free = false;
    Assignment assignment; // best CP solution (or the one-hot fixing)
    bool converged = true;
};

BestFixing enumerate_fixings(const AssignmentTables& tbl, const EnumerationPlan& plan,
                             const CpOptions& cp_opts) {
    int n = tbl.n, cols = tbl.cols;
    BestFixing best;
    best.any_free = static_cast<int>(plan.rows.size()) < n;

    std::vector<int> fixed(static_cast<size_t>(n), -1);
    std::vector<int> digits(plan.rows.size(), 0);

    if (!best.any_free) {
        // pure enumeration: every fixing is a closed-form evaluation
        std::vector<int> cols_choice(static_cast<size_t>(n), 0);
        for (long f = 0; f < plan.fixings; ++f) {
            double obj = integral_objective(tbl, cols_choice);
            if (obj > best.objective) {
                best.objective = obj;
                best.assignment.fixed = cols_choice;
                best.assignment.z.assign(static_cast<size_t>(n) * cols, 0.0);
                for (int i = 0; i < n; ++i)
                    best.assignment.z[static_cast<size_t>(i) * cols +
                                      cols_choice[static_cast<size_t>(i)]] = 1.0;
                best.assignment.objective = obj;
            }
            // odometer
            for (size_t d = 0; d < cols_choice.size(); ++d) {
                if (++cols_choice[d] < cols) break;
                cols_choice[d] = 0;
            }
        }
        return best;
    }

    for (long f = 0; f < plan.fixings; ++f) {
        for (size_t d = 0; d < plan.rows.size(); ++d)
            fixed[static_cast<size_t>(plan.rows[d])] = digits[d];
        Assignment sol = solve_cp(tbl, fixed, cp_opts);
        if (!sol.converged) best.converged = false;
        if (sol.objective > best.objective) {
            best.objective = sol.objective;
            best.assignment = std::move(sol);
        }
        for (size_t d = 0; d < digits.size(); ++d) {
            if (++digits[d] < cols) break;
            digits[d] = 0;
        }
    }
    return best;
}

} // namespace

OrderOutcome order_small(const Instance& inst, double eps, uint64_t seed, int reps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw domain_error("order_small needs eps in (0, 0.5]");
    std::string offenders;
    for (int i = 0; i < inst.n(); ++i)
        if (!is_small(inst.var(i), eps, 0.0))
            offenders += (offenders.empty() ? "" : ", ") + std::to_string(i);
    if (!offenders.empty())
        throw precondition_error("order_small: variables not eps-small: indices " +
                                 offenders);

    OrderOutcome out;
    out.reps = reps > 0 ? reps : static_cast<int>(std::ceil(10.0 / eps));
    ThresholdGrid grid = build_grid(inst, eps);
    if (grid.max_value <= 0.0) {
        std::vector<int> order(static_cast<size_t>(inst.n()));
        std::iota(order.begin(), order.end(), 0);
        out.policy = make_policy(inst, order,
                                 std::vector<double>(static_cast<size_t>(inst.n()), 0.0));
        return out;
    }
    AssignmentTables tbl = build_tables(inst, grid);
    Assignment frac = solve_cp(tbl);
    out.cp_objective = frac.objective;
    out.cp_converged = frac.converged;
    RoundResult rounded = round_assignment(tbl, frac, seed, out.reps);
    out.policy = normalize_last_threshold(
        inst, policy_from_assignment(inst, grid, tbl, rounded.cols));
    return out;
}

OrderOutcome order_general(const Instance& inst, const OrderOptions& opts) {
    double eps = opts.eps;
    if (!(eps > 0.0 && eps <= 0.25))
        throw domain_error("order_general needs eps in (0, 0.25]");

    OrderOutcome out;
    out.reps = opts.reps > 0 ? opts.reps : static_cast<int>(std::ceil(10.0 / eps));

    int k = static_cast<int>(std::ceil(opts.mult * std::log(1.0 / eps) / (eps * eps)));
    DecompositionResult dec = decompose(inst, eps, k, SmallMode::EpsSmall);
    out.t_star = dec.t_star;
    out.big = dec.big;

    // random sample of the big set is deleted only when the shift is real
    std::vector<char> removed_mask(static_cast<size_t>(inst.n()), 0);
    if (dec.t_star > 0.0) {
        int r = std::min(static_cast<int>(std::ceil(eps * k)),
                         static_cast<int>(dec.big.size()));
        std::vector<int> pool = dec.big;
        Rng rng(opts.seed, streams::kSubsetSample, 0);
        for (int j = 0; j < r; ++j) {
            int pick = j + static_cast<int>(rng.below(pool.size() - static_cast<size_t>(j)));
            std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(pick)]);
        }
        pool.resize(static_cast<size_t>(r));
        std::sort(pool.begin(), pool.end());
        out.removed = pool;
        for (int i : pool) removed_mask[static_cast<size_t>(i)] = 1;
    }

    std::vector<int> kept;
    for (int i = 0; i < inst.n(); ++i)
        if (!removed_mask[static_cast<size_t>(i)]) kept.push_back(i);

    // residual instance of the survivors
    std::vector<Distribution> zvars;
    std::vector<double> zweight;
    std::vector<int> zbig_rows;
    std::vector<char> is_big(static_cast<size_t>(inst.n()), 0);
    for (int i : dec.big) is_big[static_cast<size_t>(i)] = 1;
    for (size_t row = 0; row < kept.size(); ++row) {
        int i = kept[row];
        zvars.push_back(dec.residual->var(i));
        zweight.push_back(dec.critical[static_cast<size_t>(i)]);
        if (is_big[static_cast<size_t>(i)]) zbig_rows.push_back(static_cast<int>(row));
    }
    Instance zinst(std::move(zvars));

    ThresholdGrid grid = build_grid(zinst, eps);

    // assemble the two-phase stateless policy on the full instance
    std::vector<int> order;
    std::vector<double> thresholds(static_cast<size_t>(inst.n()), 0.0);
    if (grid.max_value <= 0.0) {
        // all residuals vanish; any order works, accept at t*
        out.fixings = 1;
        for (size_t row = 0; row < kept.size(); ++row) {
            order.push_back(kept[row]);
            thresholds[static_cast<size_t>(kept[row])] = dec.t_star;
        }
    } else {
        AssignmentTables tbl = build_tables(zinst, grid);
        EnumerationPlan plan =
            plan_enumeration(zbig_rows, zweight, zinst.n(), tbl.cols, opts);
        out.enumerated_rows = static_cast<int>(plan.rows.size());
        out.capped = plan.capped;
        out.fixings = plan.fixings;

        CpOptions cp_opts;
        BestFixing best = enumerate_fixings(tbl, plan, cp_opts);
        out.cp_objective = best.objective;
        out.cp_converged = best.converged;

        std::vector<int> zcols;
        if (best.any_free) {
            RoundResult rounded = round_assignment(tbl, best.assignment, opts.seed, out.reps);
            zcols = rounded.cols;
        } else {
            zcols = best.assignment.fixed;
        }

        for (int pair : tbl.ranking) {
            int row = pair / tbl.cols, j = pair % tbl.cols;
            if (zcols[static_cast<size_t>(row)] != j) continue;
            int i = kept[static_cast<size_t>(row)];
            order.push_back(i);
            thresholds[static_cast<size_t>(i)] =
                dec.t_star + grid.levels[static_cast<size_t>(j)];
        }
    }
    for (int i : out.removed) {
        order.push_back(i);
        thresholds[static_cast<size_t>(i)] = dec.t_star;
    }
    out.policy = normalize_last_threshold(inst, make_policy(inst, order, thresholds));
    return out;
}

} // namespace prophetlab
