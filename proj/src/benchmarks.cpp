#include "prophetlab/benchmarks.hpp"
#include "prophetlab/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace prophetlab {

namespace {

void require_discrete(const Instance& inst, const char* who) {
    if (!inst.all_discrete())
        throw domain_error(std::string(who) + " needs discrete variables; discretize first");
}

void require_permutation(const Instance& inst, const std::vector<int>& order) {
    if (static_cast<int>(order.size()) != inst.n())
        throw domain_error("order must be a permutation of the variable indices");
    std::vector<char> seen(static_cast<size_t>(inst.n()), 0);
    for (int i : order) {
        if (i < 0 || i >= inst.n() || seen[static_cast<size_t>(i)])
            throw domain_error("order must be a permutation of the variable indices");
        seen[static_cast<size_t>(i)] = 1;
    }
}

// E[max(X, v)] from the suffix sums: values <= v contribute v.
double expected_max_with(const Distribution& d, double v) {
    double tail = d.tail_gt(v);
    if (tail <= 0.0) return v;
    return v * (1.0 - tail) + d.partial_mean_gt(v);
}

} // namespace

double eval_policy(const Instance& inst, const std::vector<int>& order,
                   const std::vector<double>& thresholds) {
    require_discrete(inst, "eval_policy");
    require_permutation(inst, order);
    if (thresholds.size() != static_cast<size_t>(inst.n()))
        throw domain_error("thresholds must cover every variable");
    double value = 0.0, prod = 1.0;
    for (int idx : order) {
        TailStats st = accept_stats(inst.var(idx), thresholds[static_cast<size_t>(idx)]);
        value += st.lambda * (1.0 - st.p) * prod;
        prod *= st.p;
    }
    return value;
}

double eval_policy(const Instance& inst, const StatelessPolicy& pol) {
    return eval_policy(inst, pol.order, pol.thresholds);
}

StatelessPolicy make_policy(const Instance& inst, std::vector<int> order,
                            std::vector<double> thresholds) {
    require_discrete(inst, "make_policy");
    require_permutation(inst, order);
    StatelessPolicy pol;
    pol.order = std::move(order);
    pol.thresholds = std::move(thresholds);
    pol.lambdas.reserve(pol.order.size());
    pol.ps.reserve(pol.order.size());
    double value = 0.0, prod = 1.0;
    for (int idx : pol.order) {
        TailStats st = accept_stats(inst.var(idx), pol.thresholds[static_cast<size_t>(idx)]);
        pol.lambdas.push_back(st.lambda);
        pol.ps.push_back(st.p);
        value += st.lambda * (1.0 - st.p) * prod;
        prod *= st.p;
    }
    pol.value = value;
    return pol;
}

StatelessPolicy backward_induction(const Instance& inst, const std::vector<int>& order) {
    require_discrete(inst, "backward_induction");
    require_permutation(inst, order);
    int n = inst.n();
    std::vector<double> thresholds(static_cast<size_t>(n), 0.0);
    double cont = 0.0;
    for (int pos = n - 1; pos >= 0; --pos) {
        int idx = order[static_cast<size_t>(pos)];
        thresholds[static_cast<size_t>(idx)] = cont;
        TailStats st = accept_stats(inst.var(idx), cont);
        cont = st.lambda * (1.0 - st.p) + st.p * cont;
    }
    return make_policy(inst, order, std::move(thresholds));
}

std::vector<double> merged_support(const Instance& inst) {
    require_discrete(inst, "merged_support");
    size_t total = 0;
    for (const auto& d : inst.variables()) total += d.atom_count();
    std::vector<double> grid;
    grid.reserve(total);
    for (const auto& d : inst.variables())
        grid.insert(grid.end(), d.values().begin(), d.values().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() > kMergedGridCap)
        throw capacity_error("merged support exceeds the " +
                             std::to_string(kMergedGridCap) + "-point grid cap");
    return grid;
}

double expected_max(const Instance& inst) {
    std::vector<double> grid = merged_support(inst);
    double e = 0.0, prev = 0.0;
    for (double v : grid) {
        double surv = 1.0;
        for (const auto& d : inst.variables())
            surv *= 1.0 - d.tail_geq(v);
        e += (v - prev) * (1.0 - surv);
        prev = v;
    }
    return e;
}

std::vector<double> expected_order_stats(const Instance& inst, int kmax) {
    int n = inst.n();
    if (kmax < 1 || kmax > n) throw domain_error("order statistic rank out of range");
    std::vector<double> grid = merged_support(inst);
    std::vector<double> e(static_cast<size_t>(kmax), 0.0);
    std::vector<double> f(static_cast<size_t>(kmax) + 1, 0.0);
    double prev = 0.0;
    for (double v : grid) {
        // count distribution of #{X_i >= v}, capped at kmax (absorbing)
        std::fill(f.begin(), f.end(), 0.0);
        f[0] = 1.0;
        for (const auto& d : inst.variables()) {
            double qv = d.tail_geq(v);
            f[static_cast<size_t>(kmax)] += f[static_cast<size_t>(kmax) - 1] * qv;
            for (int c = kmax - 1; c >= 1; --c)
                f[static_cast<size_t>(c)] =
                    f[static_cast<size_t>(c)] * (1.0 - qv) + f[static_cast<size_t>(c) - 1] * qv;
            f[0] *= 1.0 - qv;
        }
        // tail sums from the top keep Pr[N >= k] nonincreasing in k exactly
        double width = v - prev;
        double tail = 0.0;
        for (int k = kmax; k >= 1; --k) {
            tail += f[static_cast<size_t>(k)];
            e[static_cast<size_t>(k) - 1] += width * tail;
        }
        prev = v;
    }
    return e;
}

double expected_kth_max(const Instance& inst, int k) {
    if (k < 1 || k > inst.n()) throw domain_error("expected_kth_max: k out of [1, n]");
    return expected_order_stats(inst, k)[static_cast<size_t>(k) - 1];
}

namespace {

struct SubsetDp {
    const Instance& inst;
    std::vector<double> value;
    std::vector<int8_t> choice; // free order only

    explicit SubsetDp(const Instance& i, bool track_choice) : inst(i) {
        require_discrete(inst, "subset DP");
        int n = inst.n();
        if (n > kSubsetDpMaxN)
            throw capacity_error("subset DP limited to n <= " +
                                 std::to_string(kSubsetDpMaxN) + " (got n = " +
                                 std::to_string(n) + ")");
        value.assign(size_t{1} << n, 0.0);
        if (track_choice) choice.assign(size_t{1} << n, -1);
    }

    void run(bool free_order) {
        int n = inst.n();
        for (uint32_t s = 1; s < (uint32_t{1} << n); ++s) {
            double best = -1.0, sum = 0.0;
            int best_i = -1;
            for (uint32_t bits = s; bits;) {
                int i = std::countr_zero(bits);
                bits &= bits - 1;
                uint32_t rest = s & ~(uint32_t{1} << i);
                double cand = expected_max_with(inst.var(i), value[rest]);
                if (free_order) {
                    if (cand > best) {
                        best = cand;
                        best_i = i;
                    }
                } else {
                    sum += cand;
                }
            }
            if (free_order) {
                value[s] = best;
                if (!choice.empty()) choice[s] = static_cast<int8_t>(best_i);
            } else {
                value[s] = sum / std::popcount(s);
            }
        }
    }
};

} // namespace

double opt_random_order(const Instance& inst) {
    SubsetDp dp(inst, false);
    dp.run(false);
    return dp.value.back();
}

FreeOrderResult opt_free_order(const Instance& inst) {
    SubsetDp dp(inst, true);
    dp.run(true);
    FreeOrderResult res;
    res.value = dp.value.back();
    uint32_t s = (uint32_t{1} << inst.n()) - 1;
    while (s) {
        int i = dp.choice[s];
        res.order.push_back(i);
        s &= ~(uint32_t{1} << i);
    }
    return res;
}

} // namespace prophetlab
