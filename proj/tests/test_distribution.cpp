#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prophetlab/distribution.hpp"
#include "prophetlab/errors.hpp"
#include "prophetlab/instance.hpp"
#include "prophetlab/rng.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace prophetlab;

namespace {
Distribution coin() { return Distribution::discrete({0.0, 1.0}, {0.5, 0.5}); }
}

TEST_CASE("cdf basics") {
    CHECK(Distribution::point_mass(1.0).cdf(0.5) == 0.0);
    CHECK(coin().cdf(0.0) == 0.5);
    CHECK(coin().cdf(2.0) == 1.0);
    CHECK(coin().cdf(0.999) == 0.5);
}

TEST_CASE("quantile generalized inverse") {
    CHECK(coin().quantile(0.5) == 0.0);
    CHECK(coin().quantile(0.7) == 1.0);
    CHECK(Distribution::uniform(0, 1).quantile(0.25) == 0.25);
    CHECK_THROWS_AS(coin().quantile(1.5), domain_error);
    CHECK_THROWS_AS(coin().quantile(-0.1), domain_error);
}

TEST_CASE("quantile/cdf consistency") {
    Rng rng(17, 99, 0);
    for (int rep = 0; rep < 50; ++rep) {
        Instance inst = oracles::random_instance(rng, 1, 6, 3.0);
        const Distribution& d = inst.var(0);
        for (double v : d.values())
            CHECK(d.quantile(d.cdf(v)) <= v);
        for (int j = 0; j < 20; ++j) {
            double u = 0.999 * rng.unit() + 1e-6;
            CHECK(d.cdf(d.quantile(u)) >= u);
        }
    }
}

TEST_CASE("tail_stats") {
    auto [l1, p1] = tail_stats(coin(), 0.6);
    CHECK(l1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p1 == doctest::Approx(0.5).epsilon(1e-15));
    auto [l2, p2] = tail_stats(coin(), 0.0);
    CHECK(l2 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p2 == 0.0);
    auto [l3, p3] = tail_stats(coin(), 2.0);
    CHECK(l3 == 0.0);
    CHECK(p3 == 1.0);
}

TEST_CASE("accept_stats skips zero values only at the zero threshold") {
    auto [l, p] = accept_stats(coin(), 0.0);
    CHECK(l == doctest::Approx(1.0));
    CHECK(p == doctest::Approx(0.5));
    // lambda (1-p) equals the mean either way
    CHECK(l * (1 - p) == doctest::Approx(coin().mean()).epsilon(1e-15));
    auto [lt, pt] = accept_stats(coin(), 0.6);
    CHECK(lt == doctest::Approx(1.0));
    CHECK(pt == doctest::Approx(0.5));
}

TEST_CASE("is_small") {
    Distribution d = Distribution::discrete({0.0, 1.0}, {0.95, 0.05});
    CHECK(is_small(d, 0.05, 0.0));
    CHECK(!is_small(d, 0.04, 0.0));
    CHECK(is_small(Distribution::point_mass(0.5), 0.01, 0.5));
    // monotone in both arguments
    Rng rng(3, 98, 0);
    for (int rep = 0; rep < 100; ++rep) {
        Instance inst = oracles::random_instance(rng, 1, 5, 2.0);
        double eps = 0.05 + 0.4 * rng.unit(), delta = 2.0 * rng.unit();
        if (is_small(inst.var(0), eps, delta)) {
            CHECK(is_small(inst.var(0), eps + 0.2, delta));
            CHECK(is_small(inst.var(0), eps, delta + 0.5));
        }
    }
}

TEST_CASE("power_cdf") {
    Distribution split = power_cdf(coin(), 2);
    CHECK(split.masses()[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(split.masses()[1] == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-12));

    Distribution same = power_cdf(coin(), 1);
    CHECK(same.same_distribution(coin()));

    Distribution pm = power_cdf(Distribution::point_mass(3.0), 7);
    CHECK(pm.atom_count() == 1);
    CHECK(pm.values()[0] == 3.0);
}

TEST_CASE("splitting preserves the expected max") {
    // n i.i.d. copies of d vs nk copies of power_cdf(d, k)
    Rng rng(11, 97, 0);
    for (int rep = 0; rep < 20; ++rep) {
        Instance one = oracles::random_instance(rng, 1, 4, 2.0);
        const Distribution& d = one.var(0);
        int n = 1 + static_cast<int>(rng.below(3));
        for (int k : {2, 5}) {
            Instance base(std::vector<Distribution>(static_cast<size_t>(n), d));
            Instance split(std::vector<Distribution>(static_cast<size_t>(n * k),
                                                     power_cdf(d, k)));
            CHECK(expected_max(base) ==
                  doctest::Approx(expected_max(split)).epsilon(1e-12));
        }
    }
}

TEST_CASE("shift_residual") {
    Distribution d = Distribution::discrete({0.0, 5.0}, {0.5, 0.5});
    Distribution z = shift_residual(d, 2.0);
    CHECK(z.values() == std::vector<double>{0.0, 3.0});
    CHECK(z.masses()[0] == doctest::Approx(0.5));

    CHECK(shift_residual(d, 0.0).same_distribution(d));
    Distribution absorbed = shift_residual(Distribution::point_mass(1.0), 4.0);
    CHECK(absorbed.atom_count() == 1);
    CHECK(absorbed.values()[0] == 0.0);
}

TEST_CASE("shift_residual is monotone in the shift") {
    Rng rng(5, 96, 0);
    for (int rep = 0; rep < 30; ++rep) {
        Instance inst = oracles::random_instance(rng, 1, 5, 3.0);
        double t1 = 2.0 * rng.unit(), t2 = t1 + rng.unit();
        Distribution a = shift_residual(inst.var(0), t1);
        Distribution b = shift_residual(inst.var(0), t2);
        for (double v : a.values())
            CHECK(a.cdf(v) <= b.cdf(v) + 1e-12); // larger shift dominates below
    }
}

TEST_CASE("truncate_below") {
    Distribution d = Distribution::discrete({0.1, 2.0}, {0.9, 0.1});
    Distribution t = truncate_below(d, 0.5);
    CHECK(t.values() == std::vector<double>{0.0, 2.0});
    CHECK(t.masses()[0] == doctest::Approx(0.9));
    CHECK(truncate_below(d, 0.0).same_distribution(d));
    Distribution z = truncate_below(Distribution::point_mass(0.3), 1.0);
    CHECK(z.values()[0] == 0.0);
}

TEST_CASE("mass conservation across transforms") {
    Rng rng(7, 95, 0);
    for (int rep = 0; rep < 50; ++rep) {
        Instance inst = oracles::random_instance(rng, 1, 6, 4.0);
        const Distribution& d = inst.var(0);
        for (const Distribution& out :
             {power_cdf(d, 3), shift_residual(d, rng.unit()), truncate_below(d, rng.unit())}) {
            double sum = 0.0;
            for (double m : out.masses()) sum += m;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("smallness_point") {
    CHECK(smallness_point(Distribution::point_mass(5.0), 0.1) == 5.0);
    Distribution d = Distribution::discrete({0.0, 5.0}, {0.95, 0.05});
    CHECK(smallness_point(d, 0.1) == 0.0);
    CHECK(smallness_point(d, 0.01) == 5.0);
}

TEST_CASE("parametric discretization") {
    Distribution u = Distribution::uniform(0, 1).discretized(1000);
    CHECK(u.is_discrete());
    CHECK(u.mean() == doctest::Approx(0.5).epsilon(1e-9));
    Distribution e = Distribution::exponential(2.0).discretized(4000);
    CHECK(e.mean() == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("frequency classes") {
    Distribution a = coin(), b = Distribution::point_mass(0.6);
    Instance inst({a, b, a, a, b});
    CHECK(inst.frequency_classes().size() == 2);
    CHECK(inst.min_class_size() == 2);
    Instance single({a, a});
    CHECK(single.frequency_classes().size() == 1);
}

TEST_CASE("atom merge on construction") {
    Distribution d = Distribution::discrete({1.0, 1.0 + 5e-13, 2.0}, {0.3, 0.3, 0.4});
    CHECK(d.atom_count() == 2);
    CHECK(d.masses()[0] == doctest::Approx(0.6));
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(Distribution::discrete({-1.0}, {1.0}), domain_error);
    CHECK_THROWS_AS(Distribution::discrete({1.0}, {0.9}), domain_error);
    CHECK_THROWS_AS(Distribution::discrete({}, {}), domain_error);
}
