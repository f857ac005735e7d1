#include "prophetlab/distribution.hpp"
#include "prophetlab/errors.hpp"
#include "prophetlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

namespace prophetlab {

Distribution Distribution::discrete(std::vector<double> values, std::vector<double> masses,
                                    std::string label) {
    if (values.empty() || values.size() != masses.size())
        throw domain_error("discrete distribution needs matching non-empty value/mass arrays");

    std::vector<size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return values[a] < values[b]; });

    Distribution d;
    d.kind_ = Kind::Discrete;
    d.label_ = std::move(label);
    d.values_.reserve(values.size());
    d.masses_.reserve(values.size());
    for (size_t k : idx) {
        double v = values[k], m = masses[k];
        if (std::isnan(v) || std::isinf(v)) throw domain_error("atom value must be finite");
        if (v < -kMergeEps) throw domain_error("atom values must be nonnegative");
        if (v < 0.0) v = 0.0;
        if (m < 0.0) throw domain_error("atom masses must be positive");
        if (m == 0.0) continue;
        if (!d.values_.empty() && v - d.values_.back() <= kMergeEps) {
            d.masses_.back() += m;
        } else {
            d.values_.push_back(v);
            d.masses_.push_back(m);
        }
    }
    if (d.values_.empty()) throw domain_error("discrete distribution has no mass");

    double sum = std::accumulate(d.masses_.begin(), d.masses_.end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-9)
        throw domain_error("atom masses must sum to 1 (got " + std::to_string(sum) + ")");
    if (sum != 1.0)
        for (double& m : d.masses_) m /= sum;

    d.build_suffix_sums();
    return d;
}

Distribution Distribution::point_mass(double value, std::string label) {
    return discrete({value}, {1.0}, std::move(label));
}

Distribution Distribution::uniform(double a, double b, std::string label) {
    if (!(a >= 0.0) || !(b > a)) throw domain_error("uniform needs 0 <= a < b");
    Distribution d;
    d.kind_ = Kind::Uniform;
    d.a_ = a;
    d.b_ = b;
    d.label_ = std::move(label);
    return d;
}

Distribution Distribution::exponential(double rate, std::string label) {
    if (!(rate > 0.0)) throw domain_error("exponential needs rate > 0");
    Distribution d;
    d.kind_ = Kind::Exponential;
    d.a_ = rate;
    d.label_ = std::move(label);
    return d;
}

void Distribution::build_suffix_sums() {
    size_t m = values_.size();
    tail_m_.assign(m + 1, 0.0);
    tail_vm_.assign(m + 1, 0.0);
    for (size_t j = m; j-- > 0;) {
        tail_m_[j] = tail_m_[j + 1] + masses_[j];
        tail_vm_[j] = tail_vm_[j + 1] + masses_[j] * values_[j];
    }
}

size_t Distribution::first_atom_geq(double t) const {
    return std::lower_bound(values_.begin(), values_.end(), t) - values_.begin();
}

size_t Distribution::first_atom_gt(double t) const {
    return std::upper_bound(values_.begin(), values_.end(), t) - values_.begin();
}

double Distribution::cdf(double x) const {
    switch (kind_) {
    case Kind::Discrete:
        return 1.0 - tail_m_[first_atom_gt(x)];
    case Kind::Uniform:
        if (x <= a_) return 0.0;
        if (x >= b_) return 1.0;
        return (x - a_) / (b_ - a_);
    case Kind::Exponential:
        return x <= 0.0 ? 0.0 : -std::expm1(-a_ * x);
    }
    return 0.0;
}

double Distribution::quantile(double u) const {
    if (std::isnan(u) || u < 0.0 || u > 1.0)
        throw domain_error("quantile argument must lie in [0,1]");
    switch (kind_) {
    case Kind::Discrete: {
        if (u <= 0.0) return values_.front();
        // smallest atom j with cdf(v_j) = 1 - tail_m_[j+1] >= u
        size_t lo = 0, hi = values_.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (1.0 - tail_m_[mid + 1] >= u) hi = mid;
            else lo = mid + 1;
        }
        return values_[lo];
    }
    case Kind::Uniform:
        return a_ + u * (b_ - a_);
    case Kind::Exponential:
        return u >= 1.0 ? std::numeric_limits<double>::infinity() : -std::log1p(-u) / a_;
    }
    return 0.0;
}

double Distribution::mean() const {
    switch (kind_) {
    case Kind::Discrete: return tail_vm_[0];
    case Kind::Uniform: return 0.5 * (a_ + b_);
    case Kind::Exponential: return 1.0 / a_;
    }
    return 0.0;
}

const std::vector<double>& Distribution::values() const {
    if (!is_discrete()) throw domain_error("parametric distribution has no atoms");
    return values_;
}

const std::vector<double>& Distribution::masses() const {
    if (!is_discrete()) throw domain_error("parametric distribution has no atoms");
    return masses_;
}

size_t Distribution::atom_count() const { return values().size(); }

double Distribution::support_min() const {
    return is_discrete() ? values_.front() : a_;
}

double Distribution::support_max() const {
    if (is_discrete()) return values_.back();
    return kind_ == Kind::Uniform ? b_ : std::numeric_limits<double>::infinity();
}

double Distribution::tail_geq(double t) const {
    if (!is_discrete()) return 1.0 - cdf(t) + mass_at(t);
    return tail_m_[first_atom_geq(t)];
}

double Distribution::tail_gt(double t) const {
    if (!is_discrete()) return 1.0 - cdf(t);
    return tail_m_[first_atom_gt(t)];
}

double Distribution::mass_at(double v) const {
    if (!is_discrete()) return 0.0;
    size_t j = first_atom_geq(v);
    if (j < values_.size() && values_[j] == v) return masses_[j];
    return 0.0;
}

double Distribution::partial_mean_geq(double t) const {
    if (!is_discrete()) throw domain_error("partial_mean_geq needs a discrete distribution");
    return tail_vm_[first_atom_geq(t)];
}

double Distribution::partial_mean_gt(double t) const {
    if (!is_discrete()) throw domain_error("partial_mean_gt needs a discrete distribution");
    return tail_vm_[first_atom_gt(t)];
}

double Distribution::sample_tail(double t, double u) const {
    if (!is_discrete()) throw domain_error("sample_tail needs a discrete distribution");
    size_t idx0 = first_atom_geq(t);
    double tail = tail_m_[idx0];
    if (tail <= 0.0) throw domain_error("sample_tail: empty tail");
    double target = u * tail;
    size_t lo = idx0, hi = values_.size() - 1;
    // smallest j >= idx0 with cumulative-from-idx0 mass > target
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (tail_m_[idx0] - tail_m_[mid + 1] > target) hi = mid;
        else lo = mid + 1;
    }
    return values_[lo];
}

Distribution Distribution::discretized(int grid) const {
    if (is_discrete()) return *this;
    if (grid < 2) throw domain_error("discretization grid must have at least 2 points");
    std::vector<double> vals(grid), ms(grid, 1.0 / grid);
    for (int j = 0; j < grid; ++j)
        vals[j] = quantile((j + 0.5) / grid);
    return discrete(std::move(vals), std::move(ms), label_);
}

bool Distribution::same_distribution(const Distribution& other) const {
    if (kind_ != other.kind_) return false;
    if (!is_discrete()) return a_ == other.a_ && b_ == other.b_;
    return values_ == other.values_ && masses_ == other.masses_;
}

uint64_t Distribution::structure_hash() const {
    uint64_t h = mix64(static_cast<uint64_t>(kind_) + 0x51ab3f);
    auto fold = [&h](double x) {
        uint64_t bits;
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&bits, &x, sizeof(bits));
        h = mix64(h ^ bits);
    };
    if (!is_discrete()) {
        fold(a_);
        fold(b_);
        return h;
    }
    for (size_t j = 0; j < values_.size(); ++j) {
        fold(values_[j]);
        fold(masses_[j]);
    }
    return h;
}

TailStats tail_stats(const Distribution& d, double t) {
    if (t < 0.0) throw domain_error("tail_stats threshold must be nonnegative");
    double tail = d.tail_geq(t);
    if (tail <= 0.0) return {0.0, 1.0};
    return {d.partial_mean_geq(t) / tail, 1.0 - tail};
}

TailStats accept_stats(const Distribution& d, double t) {
    if (t < 0.0) throw domain_error("accept_stats threshold must be nonnegative");
    if (t > 0.0) return tail_stats(d, t);
    double tail = d.tail_gt(0.0);
    if (tail <= 0.0) return {0.0, 1.0};
    double vm = d.partial_mean_geq(0.0); // atoms at zero contribute nothing
    return {vm / tail, 1.0 - tail};
}

bool is_small(const Distribution& d, double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0)) throw domain_error("is_small needs eps in (0,1)");
    if (delta < 0.0) throw domain_error("is_small needs delta >= 0");
    // tail_gt is an exact suffix sum for discrete inputs, so a tail of
    // exactly eps compares as small.
    return d.tail_gt(delta) <= eps;
}

double smallness_point(const Distribution& d, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw domain_error("smallness_point needs eps in (0,1)");
    // {x : Pr[X > x] <= eps} is closed by right-continuity; return its
    // infimum.  Exact suffix sums for discrete inputs.
    if (!d.is_discrete()) return d.quantile(1.0 - eps);
    if (d.tail_gt(0.0) <= eps) return 0.0;
    const auto& vals = d.values();
    size_t lo = 0, hi = vals.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (d.tail_gt(vals[mid]) <= eps) hi = mid;
        else lo = mid + 1;
    }
    return vals[lo];
}

Distribution power_cdf(const Distribution& d, int k) {
    if (k < 1) throw domain_error("power_cdf needs k >= 1");
    Distribution base = d.discretized();
    if (k == 1) return base;
    const auto& vals = base.values();
    size_t m = vals.size();
    std::vector<double> out_m(m);
    double prev = 0.0;
    for (size_t j = 0; j < m; ++j) {
        double F = base.cdf(vals[j]);
        double G = std::pow(F, 1.0 / k);
        out_m[j] = G - prev;
        prev = G;
    }
    return Distribution::discrete(std::vector<double>(vals), std::move(out_m), base.label());
}

Distribution shift_residual(const Distribution& d, double t) {
    if (t < 0.0) throw domain_error("shift_residual needs t >= 0");
    Distribution base = d.discretized();
    if (t == 0.0) return base;
    const auto& vals = base.values();
    const auto& ms = base.masses();
    std::vector<double> nv(vals.size()), nm(ms);
    for (size_t j = 0; j < vals.size(); ++j)
        nv[j] = vals[j] <= t ? 0.0 : vals[j] - t;
    return Distribution::discrete(std::move(nv), std::move(nm), base.label());
}

Distribution truncate_below(const Distribution& d, double delta) {
    if (delta < 0.0) throw domain_error("truncate_below needs delta >= 0");
    Distribution base = d.discretized();
    const auto& vals = base.values();
    const auto& ms = base.masses();
    std::vector<double> nv(vals.size()), nm(ms);
    for (size_t j = 0; j < vals.size(); ++j)
        nv[j] = vals[j] <= delta ? 0.0 : vals[j];
    return Distribution::discrete(std::move(nv), std::move(nm), base.label());
}

} // namespace prophetlab
