#pragma once
#include "prophetlab/benchmarks.hpp"
#include "prophetlab/instance.hpp"
#include "prophetlab/kertz.hpp"
#include "prophetlab/simulate.hpp"

#include <memory>
#include <vector>

namespace prophetlab {

// n i.i.d. uniform timestamps, sorted ascending; deterministic given seed.
std::vector<double> sample_timestamps(int n, uint64_t seed);

/// Time-based stopping rule: an arrival at time t passes the bar when its
/// value exceeds level(t), with the atom exactly at level(t) passing
/// fractionally so that the no-pass probability product equals y(t) exactly.
/// The fractional tie-break is the discrete limit of the paper-style
/// smoothing of atoms; without it a coarse support quantizes the curve and
/// the Kertz guarantee is lost.  Passing arrivals are then accepted
/// independently with accept_prob.
class TimePolicy {
public:
    struct Bar {
        double level;
        double atom_prob; // acceptance probability of the atom at `level`
    };

    // Constant-threshold rule; ties at the level always pass.
    static TimePolicy constant(double level, double accept_prob);

    // r(t) = F^{-1}(y(t)) over the product cdf F of the instance.
    static TimePolicy kertz_curve(const Instance& inst, double eps,
                                  const KertzSolution& sol);

    Bar bar_at(double t) const;
    double threshold(double t) const { return bar_at(t).level; }

    // True if the arrival (value x at time t) passes the bar; consumes one
    // uniform from rng only when the tie-break is fractional.
    bool passes(double x, double t, Rng& rng) const;

    TimePolicy() = default;

    double accept_prob = 1.0;
    double eps = 0.0;
    double delta = 0.0;

private:
    bool constant_ = false;
    double level_ = 0.0;

    struct AtomGroup {
        double const_part;  // product of F_i(v) over variables without an atom at v
        bool identical;     // all atom-holders share (cdf_below, mass)
        double fb, m;       // the shared pair when identical
        int count;          // number of atom holders
        std::vector<std::pair<double, double>> vars; // (cdf_below, mass) otherwise
    };

    std::vector<double> grid_;     // merged support, ascending
    std::vector<double> prod_cdf_; // product cdf at grid values
    std::vector<AtomGroup> groups_;
    std::shared_ptr<const KertzSolution> sol_;
};

// Small-prophets policy: requires every variable eps-small, else a
// precondition error naming the offending indices.
TimePolicy small_prophets_policy(const Instance& inst, double eps,
                                 const KertzSolution& sol);

// Unbiased estimate of the policy value under uniform random arrival order
// with i.i.d. uniform timestamps; bit-identical for fixed (seed, trials).
SimResult run_time_policy(const Instance& inst, const TimePolicy& pol,
                          uint64_t trials, uint64_t seed);

struct RestrictedSmallResult {
    SimResult sim;
    double delta;     // least delta with every variable (eps, delta)-small
    int cap;          // hard stop position ceil((1-eps) n)
    int max_stop = 0; // deepest position observed across all trials
};

// Lemma-style restricted rule: observe only the first R' ~ Bin(n, 1-2eps)
// arrivals and quit when R' exceeds the hard cap.  eps = 0 degenerates to the
// unrestricted run.
RestrictedSmallResult run_restricted_small(const Instance& inst, double eps,
                                           const KertzSolution& sol, uint64_t trials,
                                           uint64_t seed);

enum class SmallMode {
    EpsTSmall, // residual (eps, eps t)-small: Pr[X > (1+eps) t] <= eps
    EpsSmall   // residual eps-small:          Pr[X > t] <= eps
};

struct DecompositionResult {
    double t_star = 0.0;
    std::vector<int> big;          // indices violating smallness at t_star
    std::vector<double> critical;  // per-variable s_i
    SmallMode mode = SmallMode::EpsTSmall;
    std::unique_ptr<Instance> residual; // shift_residual of every variable at t_star
};

// Per-variable critical shifts s_i and t* = (k+1)-th largest s_i (0 when
// fewer than k+1 are positive).
DecompositionResult decompose(const Instance& inst, double eps, int k, SmallMode mode);

struct ImperfectResult {
    std::vector<int> removed; // the big set
    SimResult sim;
    double benchmark = 0.0; // expected_max of the surviving subset
    double t_star = 0.0;
    int k_budget = 0;
    bool fallback = false; // self-competing fallback (accept X* on sight)
};

// Two-phase rule: the restricted small-prophets policy on the residuals of
// the surviving variables, then the first straggler worth at least t*.
// With self_competing the subset itself is chosen by the iterated-removal
// construction and the simulation runs on that subinstance.
ImperfectResult imperfect_prophet_policy(const Instance& inst, double eps,
                                         const KertzSolution& sol, uint64_t trials,
                                         uint64_t seed, double mult = 1.0,
                                         bool self_competing = false);

struct KthOrderResult {
    int k = 1;
    double ratio = 0.0; // simulated value / MAX_k
    double benchmark_k = 0.0;
    ImperfectResult base;
};

KthOrderResult kth_order_guarantee(const Instance& inst, double eps,
                                   const KertzSolution& sol, uint64_t trials,
                                   uint64_t seed, double mult = 1.0);

struct FrequentResult {
    SimResult sim;
    double ratio = 0.0; // simulated value / expected_max(full instance)
    int m = 0;          // minimum frequency class size
    int m_required = 0;
    bool warned = false; // instance not frequent enough for the guarantee
    ImperfectResult base;
};

FrequentResult frequent_guarantee(const Instance& inst, double eps,
                                  const KertzSolution& sol, uint64_t trials,
                                  uint64_t seed, double mult = 1.0);

// Single-threshold comparator: accepts the first value at or above the
// median of max_i X_i.
SimResult single_threshold_baseline(const Instance& inst, uint64_t trials, uint64_t seed);

struct TightnessInstance {
    Instance instance;
    double q = 0.0;
    int n = 0;
};

// i.i.d. Kertz-style witness that no alpha > beta survives r removals.
TightnessInstance tightness_instance(double alpha, int r, const KertzSolution& sol,
                                     int cdf_grid = 2048);

struct SelfCompetingSubset {
    std::vector<int> kept;
    bool fallback = false;
    int xstar = -1; // the single high-mean variable kept by the fallback
};

// Iterated removal of big sets, capped at 10 eps^-1 log(1/eps) rounds, with
// the accept-X*-on-sight fallback.
SelfCompetingSubset self_competing_subset(const Instance& inst, double eps,
                                          double mult = 1.0);

// ---- Sequential optimal rule for i.i.d. instances -------------------------

// V(m) for m = 0..n: V(m) = E[max(X, V(m-1))].  The optimal policy with m
// variables left accepts values at or above V(m-1).
std::vector<double> iid_rule_thresholds(const Distribution& d, int n);
double iid_rule_value(const Distribution& d, int n);

// Monte Carlo of the sequential rule (accept the first X_i >= V(n-i)).
SimResult simulate_iid_rule(const Distribution& d, int n, uint64_t trials, uint64_t seed);

} // namespace prophetlab
