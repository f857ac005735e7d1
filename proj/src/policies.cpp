#include "prophetlab/policies.hpp"
#include "prophetlab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace prophetlab {

std::vector<double> sample_timestamps(int n, uint64_t seed) {
    if (n < 1) throw domain_error("sample_timestamps needs n >= 1");
    Rng rng(seed, streams::kTimestamps, 0);
    std::vector<double> ts(static_cast<size_t>(n));
    for (double& t : ts) t = rng.unit();
    std::sort(ts.begin(), ts.end());
    return ts;
}

// ---- TimePolicy ------------------------------------------------------------

TimePolicy TimePolicy::constant(double level, double accept_prob) {
    TimePolicy pol;
    pol.constant_ = true;
    pol.level_ = level;
    pol.accept_prob = accept_prob;
    return pol;
}

TimePolicy TimePolicy::kertz_curve(const Instance& inst, double eps,
                                   const KertzSolution& sol) {
    TimePolicy pol;
    pol.accept_prob = (1.0 - eps) * (1.0 - eps);
    pol.eps = eps;
    pol.sol_ = std::make_shared<const KertzSolution>(sol);
    pol.grid_ = merged_support(inst);
    size_t g = pol.grid_.size();
    pol.prod_cdf_.resize(g);
    pol.groups_.resize(g);
    for (size_t j = 0; j < g; ++j) {
        double v = pol.grid_[j];
        AtomGroup& grp = pol.groups_[j];
        grp.const_part = 1.0;
        double prod = 1.0;
        for (const auto& d : inst.variables()) {
            double c = d.cdf(v);
            prod *= c;
            double m = d.mass_at(v);
            if (m > 0.0)
                grp.vars.emplace_back(c - m, m);
            else
                grp.const_part *= c;
        }
        pol.prod_cdf_[j] = j + 1 == g ? 1.0 : prod;
        grp.count = static_cast<int>(grp.vars.size());
        grp.identical = true;
        grp.fb = grp.vars.empty() ? 0.0 : grp.vars.front().first;
        grp.m = grp.vars.empty() ? 0.0 : grp.vars.front().second;
        for (const auto& [fb, m] : grp.vars)
            if (fb != grp.fb || m != grp.m) grp.identical = false;
        if (grp.identical) grp.vars.clear(); // (fb, m, count) suffice
    }
    return pol;
}

TimePolicy::Bar TimePolicy::bar_at(double t) const {
    if (constant_) return {level_, 1.0};
    double y = sol_->y_of_t(t);
    if (y <= 0.0) return {grid_.front(), 1.0};
    if (y > 1.0) y = 1.0;
    size_t j = std::lower_bound(prod_cdf_.begin(), prod_cdf_.end(), y) - prod_cdf_.begin();
    if (j >= grid_.size()) j = grid_.size() - 1;
    const AtomGroup& grp = groups_[j];
    double theta;
    if (grp.count == 0) {
        theta = 0.0; // no atom holder; cannot happen on a merged grid
    } else if (grp.identical) {
        double base = std::pow(y / grp.const_part, 1.0 / grp.count);
        theta = 1.0 - (base - grp.fb) / grp.m;
    } else {
        // P(theta) = const_part * prod(fb + (1-theta) m) is decreasing
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            double prod = grp.const_part;
            for (const auto& [fb, m] : grp.vars) prod *= fb + (1.0 - mid) * m;
            if (prod >= y) lo = mid;
            else hi = mid;
        }
        theta = 0.5 * (lo + hi);
    }
    if (theta < 0.0) theta = 0.0;
    if (theta > 1.0) theta = 1.0;
    return {grid_[j], theta};
}

bool TimePolicy::passes(double x, double t, Rng& rng) const {
    Bar b = bar_at(t);
    if (x > b.level) return true;
    if (x == b.level) return b.atom_prob >= 1.0 || rng.unit() < b.atom_prob;
    return false;
}

TimePolicy small_prophets_policy(const Instance& inst, double eps,
                                 const KertzSolution& sol) {
    if (!(eps > 0.0 && eps < 1.0))
        throw domain_error("small_prophets_policy needs eps in (0,1)");
    std::string offenders;
    for (int i = 0; i < inst.n(); ++i) {
        if (!is_small(inst.var(i), eps, 0.0))
            offenders += (offenders.empty() ? "" : ", ") + std::to_string(i);
    }
    if (!offenders.empty())
        throw precondition_error("variables not eps-small: indices " + offenders);
    return TimePolicy::kertz_curve(inst, eps, sol);
}

// ---- simulation helpers ----------------------------------------------------

namespace {

// Lazy Fisher-Yates: pick the pos-th arrival given scratch initialized with
// 0..n-1; scratch entries before pos hold the already-drawn identities.
int pick_arrival(std::vector<int>& scratch, int pos, Rng& rng) {
    int n = static_cast<int>(scratch.size());
    int j = pos + static_cast<int>(rng.below(static_cast<uint64_t>(n - pos)));
    std::swap(scratch[static_cast<size_t>(pos)], scratch[static_cast<size_t>(j)]);
    return scratch[static_cast<size_t>(pos)];
}

std::vector<int>& trial_scratch(int n) {
    thread_local std::vector<int> scratch;
    scratch.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) scratch[static_cast<size_t>(i)] = i;
    return scratch;
}

// next order statistic of `total` uniforms given the previous one and the
// number already consumed
double next_sorted_uniform(double prev, int consumed, int total, Rng& rng) {
    int remaining = total - consumed;
    return prev + (1.0 - prev) * (1.0 - std::pow(rng.unit_pos(), 1.0 / remaining));
}

int draw_binomial(int n, double prob, Rng& rng) {
    int c = 0;
    for (int i = 0; i < n; ++i) c += rng.unit() < prob ? 1 : 0;
    return c;
}

void require_discrete_sim(const Instance& inst, const char* who) {
    if (!inst.all_discrete())
        throw domain_error(std::string(who) + " needs discrete variables");
}

} // namespace

SimResult run_time_policy(const Instance& inst, const TimePolicy& pol, uint64_t trials,
                          uint64_t seed) {
    require_discrete_sim(inst, "run_time_policy");
    if (trials < 1) throw domain_error("run_time_policy needs trials >= 1");
    const int n = inst.n();
    const bool iid = inst.frequency_classes().size() == 1;
    const double ap = pol.accept_prob;

    auto trial = [&, n, iid, ap](uint64_t, Rng& rng) -> double {
        std::vector<int>* scratch = iid ? nullptr : &trial_scratch(n);
        double t = 0.0;
        for (int pos = 0; pos < n; ++pos) {
            t = next_sorted_uniform(t, pos, n, rng);
            int idx = iid ? 0 : pick_arrival(*scratch, pos, rng);
            double x = inst.var(idx).sample_value(rng.unit());
            if (pol.passes(x, t, rng) && (ap >= 1.0 || rng.unit() < ap)) return x;
        }
        return 0.0;
    };
    return run_trials(trials, seed, streams::kPolicySim, trial);
}

RestrictedSmallResult run_restricted_small(const Instance& inst, double eps,
                                           const KertzSolution& sol, uint64_t trials,
                                           uint64_t seed) {
    require_discrete_sim(inst, "run_restricted_small");
    if (eps < 0.0 || eps >= 0.5)
        throw domain_error("run_restricted_small needs eps in [0, 0.5)");
    const int n = inst.n();
    if (eps > 0.0) {
        double need = std::log(1.0 / eps) / (eps * eps);
        if (!(static_cast<double>(n) > need))
            throw precondition_error(
                "run_restricted_small needs n > eps^-2 log(1/eps) = " +
                std::to_string(need));
    }
    double delta = 0.0;
    for (const auto& d : inst.variables())
        delta = std::max(delta, eps > 0.0 ? smallness_point(d, eps) : d.support_max());

    TimePolicy pol = eps > 0.0 ? small_prophets_policy(inst, eps, sol)
                               : TimePolicy::kertz_curve(inst, 0.0, sol);
    const int cap = static_cast<int>(std::ceil((1.0 - eps) * n));
    const double keep = 1.0 - 2.0 * eps;
    const bool iid = inst.frequency_classes().size() == 1;
    const double ap = pol.accept_prob;

    std::atomic<int> max_stop{0};
    auto trial = [&, n, cap, keep, iid, ap](uint64_t, Rng& rng) -> double {
        int r = eps > 0.0 ? draw_binomial(n, keep, rng) : n;
        if (r > cap) return 0.0; // quit
        std::vector<int>* scratch = iid ? nullptr : &trial_scratch(n);
        double t = 0.0;
        double reward = 0.0;
        int stop = 0;
        for (int pos = 0; pos < r; ++pos) {
            t = next_sorted_uniform(t, pos, r, rng);
            int idx = iid ? 0 : pick_arrival(*scratch, pos, rng);
            double x = inst.var(idx).sample_value(rng.unit());
            if (pol.passes(x, t, rng) && (ap >= 1.0 || rng.unit() < ap)) {
                reward = x;
                stop = pos + 1;
                break;
            }
            stop = pos + 1;
        }
        int cur = max_stop.load(std::memory_order_relaxed);
        while (stop > cur &&
               !max_stop.compare_exchange_weak(cur, stop, std::memory_order_relaxed)) {
        }
        return reward;
    };
    RestrictedSmallResult res;
    res.sim = run_trials(trials, seed, streams::kPolicySim, trial);
    res.delta = delta;
    res.cap = cap;
    res.max_stop = max_stop.load();
    return res;
}

// ---- decomposition ---------------------------------------------------------

DecompositionResult decompose(const Instance& inst, double eps, int k, SmallMode mode) {
    if (!(eps > 0.0 && eps < 0.5)) throw domain_error("decompose needs eps in (0, 0.5)");
    if (k < 0) throw domain_error("decompose needs k >= 0");

    const int n = inst.n();
    DecompositionResult out;
    out.mode = mode;
    out.critical.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x_eps = smallness_point(inst.var(i), eps);
        out.critical[static_cast<size_t>(i)] =
            mode == SmallMode::EpsTSmall ? x_eps / (1.0 + eps) : x_eps;
    }

    std::vector<double> sorted(out.critical);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    int positive = 0;
    for (double s : sorted)
        if (s > 0.0) ++positive;
    out.t_star = positive > k ? sorted[static_cast<size_t>(k)] : 0.0;

    for (int i = 0; i < n; ++i)
        if (out.critical[static_cast<size_t>(i)] > out.t_star) out.big.push_back(i);

    std::vector<Distribution> residual;
    residual.reserve(static_cast<size_t>(n));
    for (const auto& d : inst.variables())
        residual.push_back(shift_residual(d, out.t_star));
    out.residual = std::make_unique<Instance>(std::move(residual));
    return out;
}

// ---- imperfect / frequent prophets ----------------------------------------

namespace {

struct TwoPhaseContext {
    const Instance* inst = nullptr; // the instance fed to the simulation
    std::vector<char> in_xprime;
    TimePolicy phase1;
    double t_star = 0.0;
    double delta = 0.0; // residuals are (eps, delta)-small with delta = eps t*
    int n_prime = 0;
    int cap1 = 0;
    double keep = 0.0; // 1 - 2 eps
    double accept_prob = 1.0;

    double trial(Rng& rng) const {
        const int n = inst->n();
        int budget = draw_binomial(n_prime, keep, rng);
        if (budget > cap1) budget = 0; // phase-1 quit
        std::vector<int>& scratch = trial_scratch(n);
        double t = 0.0;
        int seen_xp = 0;
        for (int pos = 0; pos < n; ++pos) {
            int idx = pick_arrival(scratch, pos, rng);
            bool phase1_active = seen_xp < budget;
            if (in_xprime[static_cast<size_t>(idx)] && phase1_active) {
                double x = inst->var(idx).sample_value(rng.unit());
                t = next_sorted_uniform(t, seen_xp, budget, rng);
                ++seen_xp;
                double z = x > t_star ? x - t_star : 0.0;
                double w = z > delta ? z : 0.0;
                if (w > 0.0 && phase1.passes(w, t, rng) &&
                    (accept_prob >= 1.0 || rng.unit() < accept_prob))
                    return x;
            } else if (!phase1_active) {
                // stragglers: first value worth at least t*
                double x = inst->var(idx).sample_value(rng.unit());
                if (x >= t_star && x > 0.0) return x;
            }
            // big arrivals during phase 1 are ignored
        }
        return 0.0;
    }
};

int removal_budget(double eps, double mult) {
    return static_cast<int>(std::ceil(mult * std::log(1.0 / eps) / (eps * eps)));
}

ImperfectResult run_two_phase(const Instance& inst, double eps, const KertzSolution& sol,
                              uint64_t trials, uint64_t seed, double mult) {
    int k = removal_budget(eps, mult);
    DecompositionResult dec = decompose(inst, eps, k, SmallMode::EpsTSmall);

    ImperfectResult res;
    res.removed = dec.big;
    res.t_star = dec.t_star;
    res.k_budget = k;

    std::vector<char> in_xprime(static_cast<size_t>(inst.n()), 1);
    for (int i : dec.big) in_xprime[static_cast<size_t>(i)] = 0;
    std::vector<int> keep_idx;
    std::vector<Distribution> phase1_vars;
    for (int i = 0; i < inst.n(); ++i) {
        if (!in_xprime[static_cast<size_t>(i)]) continue;
        keep_idx.push_back(i);
        phase1_vars.push_back(
            truncate_below(dec.residual->var(i), eps * dec.t_star));
    }
    if (keep_idx.empty())
        throw internal_error("imperfect policy: decomposition removed every variable");

    Instance phase1_inst(std::move(phase1_vars));
    res.benchmark = expected_max(inst.subset(keep_idx));

    TwoPhaseContext ctx;
    ctx.inst = &inst;
    ctx.in_xprime = std::move(in_xprime);
    ctx.phase1 = TimePolicy::kertz_curve(phase1_inst, eps, sol);
    ctx.t_star = dec.t_star;
    ctx.delta = eps * dec.t_star;
    ctx.n_prime = static_cast<int>(keep_idx.size());
    ctx.cap1 = static_cast<int>(std::ceil((1.0 - eps) * ctx.n_prime));
    ctx.keep = 1.0 - 2.0 * eps;
    ctx.accept_prob = (1.0 - eps) * (1.0 - eps);

    res.sim = run_trials(trials, seed, streams::kPolicySim,
                         [&ctx](uint64_t, Rng& rng) { return ctx.trial(rng); });
    return res;
}

} // namespace

ImperfectResult imperfect_prophet_policy(const Instance& inst, double eps,
                                         const KertzSolution& sol, uint64_t trials,
                                         uint64_t seed, double mult, bool self_competing) {
    if (!(eps > 0.0 && eps < 0.25))
        throw domain_error("imperfect_prophet_policy needs eps in (0, 0.25)");
    if (!self_competing) return run_two_phase(inst, eps, sol, trials, seed, mult);

    SelfCompetingSubset sub = self_competing_subset(inst, eps, mult);
    Instance kept = inst.subset(sub.kept);
    ImperfectResult res;
    if (sub.fallback) {
        // accept X* on sight
        int xstar_local = 0;
        for (size_t j = 0; j < sub.kept.size(); ++j)
            if (sub.kept[j] == sub.xstar) xstar_local = static_cast<int>(j);
        auto trial = [&kept, xstar_local](uint64_t, Rng& rng) -> double {
            return kept.var(xstar_local).sample_value(rng.unit());
        };
        res.sim = run_trials(trials, seed, streams::kPolicySim, trial);
        res.benchmark = expected_max(kept);
        res.t_star = 0.0;
        res.fallback = true;
    } else {
        res = run_two_phase(kept, eps, sol, trials, seed, mult);
        res.benchmark = expected_max(kept);
        res.fallback = false;
        // map residual-relative removals back to original indices
        std::vector<int> removed_orig;
        for (int local : res.removed)
            removed_orig.push_back(sub.kept[static_cast<size_t>(local)]);
        res.removed = std::move(removed_orig);
    }
    for (int i = 0; i < inst.n(); ++i)
        if (std::find(sub.kept.begin(), sub.kept.end(), i) == sub.kept.end())
            res.removed.push_back(i);
    std::sort(res.removed.begin(), res.removed.end());
    res.removed.erase(std::unique(res.removed.begin(), res.removed.end()),
                      res.removed.end());
    return res;
}

KthOrderResult kth_order_guarantee(const Instance& inst, double eps,
                                   const KertzSolution& sol, uint64_t trials,
                                   uint64_t seed, double mult) {
    KthOrderResult out;
    out.base = imperfect_prophet_policy(inst, eps, sol, trials, seed, mult);
    out.k = static_cast<int>(out.base.removed.size()) + 1;
    out.benchmark_k = expected_kth_max(inst, out.k);
    out.ratio = out.base.sim.mean / out.benchmark_k;
    return out;
}

FrequentResult frequent_guarantee(const Instance& inst, double eps,
                                  const KertzSolution& sol, uint64_t trials,
                                  uint64_t seed, double mult) {
    FrequentResult out;
    out.m = inst.min_class_size();
    if (out.m < 2)
        throw precondition_error("frequent_guarantee needs every class size >= 2");
    out.m_required = removal_budget(eps, mult);
    out.warned = out.m < out.m_required;
    out.base = imperfect_prophet_policy(inst, eps, sol, trials, seed, mult);
    out.sim = out.base.sim;
    out.ratio = out.sim.mean / expected_max(inst);
    return out;
}

SimResult single_threshold_baseline(const Instance& inst, uint64_t trials, uint64_t seed) {
    require_discrete_sim(inst, "single_threshold_baseline");
    std::vector<double> grid = merged_support(inst);
    double threshold = grid.back();
    for (double v : grid) {
        double prod = 1.0;
        for (const auto& d : inst.variables()) prod *= d.cdf(v);
        if (prod >= 0.5) {
            threshold = v;
            break;
        }
    }
    const int n = inst.n();
    const bool iid = inst.frequency_classes().size() == 1;
    auto trial = [&inst, threshold, n, iid](uint64_t, Rng& rng) -> double {
        std::vector<int>* scratch = iid ? nullptr : &trial_scratch(n);
        for (int pos = 0; pos < n; ++pos) {
            int idx = iid ? 0 : pick_arrival(*scratch, pos, rng);
            double x = inst.var(idx).sample_value(rng.unit());
            if (x >= threshold) return x;
        }
        return 0.0;
    };
    return run_trials(trials, seed, streams::kBaseline, trial);
}

TightnessInstance tightness_instance(double alpha, int r, const KertzSolution& sol,
                                     int cdf_grid) {
    if (!(alpha > sol.beta))
        throw domain_error("tightness_instance needs alpha > beta");
    if (r < 0) throw domain_error("tightness_instance needs r >= 0");
    double gap_target = 0.25 * (alpha - sol.beta);
    double q = 0.2;
    WorstCaseParams params = optimal_rate(sol, q);
    while (worst_case_ratio(params).ratio - sol.beta > gap_target && q > 2e-3) {
        q *= 0.5;
        params = optimal_rate(sol, q);
    }
    int n = std::max({static_cast<int>(std::ceil(4.0 * r * alpha / (alpha - sol.beta))),
                      r + 2, 64});
    return {worst_case_instance(params, n, cdf_grid), q, n};
}

SelfCompetingSubset self_competing_subset(const Instance& inst, double eps, double mult) {
    if (!(eps > 0.0 && eps < 0.25))
        throw domain_error("self_competing_subset needs eps in (0, 0.25)");
    int k_inner = removal_budget(eps, mult);
    int rounds = static_cast<int>(std::ceil(10.0 * std::log(1.0 / eps) / eps));

    std::vector<int> cur(static_cast<size_t>(inst.n()));
    for (int i = 0; i < inst.n(); ++i) cur[static_cast<size_t>(i)] = i;
    std::vector<int> removed_first;

    for (int round = 0; round < rounds; ++round) {
        Instance sub = inst.subset(cur);
        DecompositionResult dec = decompose(sub, eps, k_inner, SmallMode::EpsTSmall);
        if (dec.big.empty()) return {cur, false, -1};

        std::vector<char> drop(cur.size(), 0);
        for (int local : dec.big) drop[static_cast<size_t>(local)] = 1;
        std::vector<int> next;
        for (size_t j = 0; j < cur.size(); ++j)
            if (!drop[j]) next.push_back(cur[j]);
        if (round == 0)
            for (int local : dec.big) removed_first.push_back(cur[static_cast<size_t>(local)]);
        if (next.empty()) break;

        double prev_max = expected_max(sub);
        double next_max = expected_max(inst.subset(next));
        if (next_max >= (1.0 - eps) * prev_max) return {cur, false, -1};
        cur = std::move(next);
    }

    // fallback: keep the highest-mean variable removed in the first round
    int xstar = removed_first.empty() ? cur.front() : removed_first.front();
    double best = -1.0;
    for (int i : removed_first) {
        double m = inst.var(i).mean();
        if (m > best) {
            best = m;
            xstar = i;
        }
    }
    std::vector<int> kept = cur;
    kept.push_back(xstar);
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    return {kept, true, xstar};
}

// ---- sequential optimal rule for i.i.d. instances --------------------------

std::vector<double> iid_rule_thresholds(const Distribution& d, int n) {
    if (n < 0) throw domain_error("iid_rule_thresholds needs n >= 0");
    if (!d.is_discrete()) throw domain_error("iid rule needs a discrete distribution");
    std::vector<double> v(static_cast<size_t>(n) + 1, 0.0);
    for (int m = 1; m <= n; ++m) {
        double prev = v[static_cast<size_t>(m) - 1];
        double tail = d.tail_gt(prev);
        v[static_cast<size_t>(m)] =
            tail <= 0.0 ? prev : prev * (1.0 - tail) + d.partial_mean_gt(prev);
    }
    return v;
}

double iid_rule_value(const Distribution& d, int n) {
    if (n < 1) throw domain_error("iid_rule_value needs n >= 1");
    return iid_rule_thresholds(d, n).back();
}

SimResult simulate_iid_rule(const Distribution& d, int n, uint64_t trials, uint64_t seed) {
    if (n < 1) throw domain_error("simulate_iid_rule needs n >= 1");
    std::vector<double> v = iid_rule_thresholds(d, n);
    // position pos (0-based) accepts X >= taus[pos] = V(n - pos - 1)
    std::vector<double> taus(static_cast<size_t>(n));
    std::vector<double> hazard(static_cast<size_t>(n) + 1, 0.0); // cumulative
    for (int pos = 0; pos < n; ++pos) {
        taus[static_cast<size_t>(pos)] = v[static_cast<size_t>(n - pos - 1)];
        double prob = d.tail_geq(taus[static_cast<size_t>(pos)]);
        double step = prob >= 1.0 ? std::numeric_limits<double>::infinity()
                                  : -std::log1p(-prob);
        hazard[static_cast<size_t>(pos) + 1] = hazard[static_cast<size_t>(pos)] + step;
    }
    auto trial = [&d, &taus, &hazard, n](uint64_t, Rng& rng) -> double {
        double e = -std::log(rng.unit_pos());
        // smallest pos with hazard[pos+1] >= e
        int lo = 0, hi = n;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (hazard[static_cast<size_t>(mid) + 1] >= e) hi = mid;
            else lo = mid + 1;
        }
        if (lo >= n) return 0.0;
        return d.sample_tail(taus[static_cast<size_t>(lo)], rng.unit());
    };
    return run_trials(trials, seed, streams::kIidRule, trial);
}

} // namespace prophetlab
