// Test-only brute-force oracles, independent of the library's closed forms:
// joint-outcome enumeration over small discrete instances and a seeded
// random-instance generator.
#pragma once
#include "prophetlab/benchmarks.hpp"
#include "prophetlab/instance.hpp"
#include "prophetlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

using prophetlab::Distribution;
using prophetlab::Instance;
using prophetlab::Rng;

struct Outcome {
    std::vector<double> values;
    double prob;
};

// every value tuple with its probability (product measure)
inline std::vector<Outcome> joint_outcomes(const Instance& inst) {
    std::vector<Outcome> out{{{}, 1.0}};
    for (const auto& d : inst.variables()) {
        std::vector<Outcome> next;
        next.reserve(out.size() * d.atom_count());
        for (const auto& o : out) {
            for (size_t j = 0; j < d.atom_count(); ++j) {
                Outcome e = o;
                e.values.push_back(d.values()[j]);
                e.prob *= d.masses()[j];
                next.push_back(std::move(e));
            }
        }
        out = std::move(next);
    }
    return out;
}

inline double expected_max(const Instance& inst) {
    double e = 0.0;
    for (const auto& o : joint_outcomes(inst))
        e += o.prob * *std::max_element(o.values.begin(), o.values.end());
    return e;
}

inline double expected_kth_max(const Instance& inst, int k) {
    double e = 0.0;
    for (const auto& o : joint_outcomes(inst)) {
        std::vector<double> v = o.values;
        std::sort(v.begin(), v.end(), std::greater<>());
        e += o.prob * v[static_cast<size_t>(k) - 1];
    }
    return e;
}

// expectation of the first value meeting its threshold (zero never accepted),
// by exhaustive enumeration of outcomes
inline double policy_value(const Instance& inst, const std::vector<int>& order,
                           const std::vector<double>& thresholds) {
    double e = 0.0;
    for (const auto& o : joint_outcomes(inst)) {
        for (int idx : order) {
            double x = o.values[static_cast<size_t>(idx)];
            if (x >= thresholds[static_cast<size_t>(idx)] && x > 0.0) {
                e += o.prob * x;
                break;
            }
        }
    }
    return e;
}

// random discrete instance; values in (0, scale], optional extra atom at 0
inline Instance random_instance(Rng& rng, int max_n, int max_support, double scale,
                                double zero_mass_bias = 0.3) {
    int n = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_n)));
    std::vector<Distribution> vars;
    for (int i = 0; i < n; ++i) {
        int support = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_support)));
        std::vector<double> vals, ms;
        double rest = 1.0;
        if (rng.unit() < zero_mass_bias) {
            double m0 = 0.3 + 0.65 * rng.unit();
            vals.push_back(0.0);
            ms.push_back(m0);
            rest -= m0;
        }
        std::vector<double> weights;
        for (int j = 0; j < support; ++j) weights.push_back(0.05 + rng.unit());
        double wsum = 0.0;
        for (double w : weights) wsum += w;
        for (int j = 0; j < support; ++j) {
            vals.push_back(scale * (0.01 + rng.unit()));
            ms.push_back(rest * weights[static_cast<size_t>(j)] / wsum);
        }
        vars.push_back(Distribution::discrete(vals, ms));
    }
    return Instance(std::move(vars));
}

// eps-small random instance: mass at 0 at least 1 - eps
inline Instance random_small_instance(Rng& rng, int n, int max_support, double scale,
                                      double eps) {
    std::vector<Distribution> vars;
    for (int i = 0; i < n; ++i) {
        int support = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_support)));
        double tail = eps * (0.2 + 0.8 * rng.unit());
        std::vector<double> vals{0.0}, ms{1.0 - tail};
        std::vector<double> weights;
        double wsum = 0.0;
        for (int j = 0; j < support; ++j) {
            weights.push_back(0.05 + rng.unit());
            wsum += weights.back();
        }
        for (int j = 0; j < support; ++j) {
            vals.push_back(scale * (0.05 + rng.unit()));
            ms.push_back(tail * weights[static_cast<size_t>(j)] / wsum);
        }
        vars.push_back(Distribution::discrete(vals, ms));
    }
    return Instance(std::move(vars));
}

} // namespace oracles
