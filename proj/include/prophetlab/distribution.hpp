#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace prophetlab {

/// One nonnegative random variable.  The canonical representation is a finite
/// discrete distribution (sorted atoms with positive masses summing to one);
/// uniform and exponential variables are thin parametric adapters that answer
/// cdf/quantile/mean exactly and are discretized onto a quantile grid before
/// any exact algorithm touches them.
class Distribution {
public:
    enum class Kind { Discrete, Uniform, Exponential };

    static constexpr int kDefaultQuantileGrid = 10000;
    // Atoms closer than this are merged on construction so that equality
    // tests used by frequency classes are stable.
    static constexpr double kMergeEps = 1e-12;

    static Distribution discrete(std::vector<double> values, std::vector<double> masses,
                                 std::string label = "");
    static Distribution point_mass(double value, std::string label = "");
    static Distribution uniform(double a, double b, std::string label = "");
    static Distribution exponential(double rate, std::string label = "");

    Kind kind() const { return kind_; }
    bool is_discrete() const { return kind_ == Kind::Discrete; }
    const std::string& label() const { return label_; }

    // Pr[X <= x]; exact for every kind.
    double cdf(double x) const;
    // Generalized inverse inf{x : cdf(x) >= u}; for discrete inputs the
    // smallest atom meeting the mass.  u outside [0,1] is a domain error.
    double quantile(double u) const;
    double mean() const;

    // Discrete accessors (throw domain_error on parametric kinds).
    const std::vector<double>& values() const;
    const std::vector<double>& masses() const;
    size_t atom_count() const;
    double support_min() const;
    double support_max() const;

    // Pr[X >= t] and Pr[X > t], exact complements of the suffix-sum cache.
    double tail_geq(double t) const;
    double tail_gt(double t) const;
    // Mass placed exactly at v (0 when v is not an atom).
    double mass_at(double v) const;
    // E[X * 1{X >= t}] and E[X * 1{X > t}].
    double partial_mean_geq(double t) const;
    double partial_mean_gt(double t) const;

    // Inverse-cdf sampling: sample_value(u) with u ~ U[0,1) draws from the
    // distribution; sample_tail(t, u) draws from X | X >= t (t must have
    // positive tail mass).
    double sample_value(double u) const { return quantile(u); }
    double sample_tail(double t, double u) const;

    // Midpoint quantile-grid discretization of a parametric variable;
    // discrete inputs are returned unchanged.
    Distribution discretized(int grid = kDefaultQuantileGrid) const;

    // Structural equality (kind, atoms/parameters); labels are ignored.
    bool same_distribution(const Distribution& other) const;
    uint64_t structure_hash() const;

    // Parametric parameters: (a,b) for uniform, (rate, unused) for exponential.
    double param_a() const { return a_; }
    double param_b() const { return b_; }

private:
    Distribution() = default;

    Kind kind_ = Kind::Discrete;
    std::string label_;
    double a_ = 0.0, b_ = 0.0;
    std::vector<double> values_;
    std::vector<double> masses_;
    // Suffix sums over atoms: tail_m_[j] = sum_{k>=j} masses_[k] (size m+1,
    // last entry 0); tail_vm_ likewise for value*mass.
    std::vector<double> tail_m_;
    std::vector<double> tail_vm_;

    void build_suffix_sums();
    size_t first_atom_geq(double t) const;
    size_t first_atom_gt(double t) const;
};

struct TailStats {
    double lambda; // E[X | X >= t], 0 when the conditioning event is null
    double p;      // Pr[X < t], 1 in the same degenerate case
};

// Exact (lambda, p) at threshold t with the empty-tail convention
// (lambda = 0, p = 1) when Pr[X >= t] = 0.
TailStats tail_stats(const Distribution& d, double t);

// Variant used by stateless policies: a policy never accepts a zero-value
// item, so at threshold 0 the acceptance event is {X > 0} rather than
// {X >= 0}.  For t > 0 this is identical to tail_stats.
TailStats accept_stats(const Distribution& d, double t);

// True iff 1 - F(r) <= eps for all r > delta; by right-continuity this is
// 1 - F(delta) <= eps.
bool is_small(const Distribution& d, double eps, double delta);

// inf{x >= 0 : Pr[X > x] <= eps}; the least delta making X (eps,delta)-small.
double smallness_point(const Distribution& d, double eps);

// Distribution with cdf F^{1/k} on the same support.
Distribution power_cdf(const Distribution& d, int k);

// Distribution of max(X, t) - t.
Distribution shift_residual(const Distribution& d, double t);

// Mass at values <= delta moved to an atom at 0.
Distribution truncate_below(const Distribution& d, double delta);

} // namespace prophetlab
