#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prophetlab/benchmarks.hpp"
#include "prophetlab/errors.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace prophetlab;

namespace {

// instance A: X1 = {0 w.p. .5, 1 w.p. .5}, X2 = point mass 0.6
Instance instance_a() {
    return Instance({Distribution::discrete({0.0, 1.0}, {0.5, 0.5}),
                     Distribution::point_mass(0.6)});
}

} // namespace

TEST_CASE("expected_max on instance A") {
    // joint enumeration: (0,.6)->.6, (1,.6)->1, each w.p. 1/2
    CHECK(oracles::expected_max(instance_a()) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(expected_max(instance_a()) == doctest::Approx(0.8).epsilon(1e-12));
    Instance pm({Distribution::point_mass(3.0)});
    CHECK(expected_max(pm) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("expected_max equals the enumeration oracle") {
    Rng rng(41, 90, 0);
    for (int rep = 0; rep < 40; ++rep) {
        Instance inst = oracles::random_instance(rng, 5, 4, 3.0);
        CHECK(expected_max(inst) ==
              doctest::Approx(oracles::expected_max(inst)).epsilon(1e-10));
    }
}

TEST_CASE("expected_kth_max") {
    CHECK(expected_kth_max(instance_a(), 1) ==
          doctest::Approx(expected_max(instance_a())).epsilon(1e-12));
    // k = 2 is the minimum here: min(0,.6)=0, min(1,.6)=.6 -> 0.3
    CHECK(oracles::expected_kth_max(instance_a(), 2) == doctest::Approx(0.3));
    CHECK(expected_kth_max(instance_a(), 2) == doctest::Approx(0.3).epsilon(1e-12));
    Instance pms(std::vector<Distribution>(4, Distribution::point_mass(2.5)));
    CHECK(expected_kth_max(pms, 4) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK_THROWS_AS(expected_kth_max(instance_a(), 3), domain_error);
    CHECK_THROWS_AS(expected_kth_max(instance_a(), 0), domain_error);
}

TEST_CASE("order statistics match the oracle and decrease in k") {
    Rng rng(42, 90, 0);
    for (int rep = 0; rep < 25; ++rep) {
        Instance inst = oracles::random_instance(rng, 5, 3, 2.0);
        int n = inst.n();
        std::vector<double> stats = expected_order_stats(inst, n);
        for (int k = 1; k <= n; ++k) {
            CHECK(stats[static_cast<size_t>(k) - 1] ==
                  doctest::Approx(oracles::expected_kth_max(inst, k)).epsilon(1e-10));
            if (k > 1)
                CHECK(stats[static_cast<size_t>(k) - 1] <=
                      stats[static_cast<size_t>(k) - 2]);
        }
    }
}

TEST_CASE("opt_random_order on instance A") {
    // V({1,2}) = avg(E[max(X1, .6)], E[max(.6, E[X1]))) = avg(.8, .6) = .7
    CHECK(opt_random_order(instance_a()) == doctest::Approx(0.7).epsilon(1e-12));
    Instance single({Distribution::discrete({0.0, 2.0}, {0.25, 0.75})});
    CHECK(opt_random_order(single) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("opt_free_order on instance A") {
    FreeOrderResult res = opt_free_order(instance_a());
    CHECK(res.value == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(res.order == std::vector<int>{0, 1});
    Instance single({Distribution::point_mass(0.42)});
    FreeOrderResult s = opt_free_order(single);
    CHECK(s.value == doctest::Approx(0.42));
    CHECK(s.order == std::vector<int>{0});
}

TEST_CASE("dominance chain") {
    Rng rng(43, 90, 0);
    for (int rep = 0; rep < 50; ++rep) {
        Instance inst = oracles::random_instance(rng, 8, 3, 2.0);
        double rnd = opt_random_order(inst);
        double fre = opt_free_order(inst).value;
        double mx = expected_max(inst);
        CHECK(rnd <= fre + 1e-9);
        CHECK(fre <= mx + 1e-9);
        CHECK(fre >= 0.5 * mx - 1e-9); // classic worst-order bound
        // any stateless policy is dominated by the free-order optimum
        std::vector<int> order(static_cast<size_t>(inst.n()));
        for (int i = 0; i < inst.n(); ++i) order[static_cast<size_t>(i)] = i;
        std::vector<double> taus(static_cast<size_t>(inst.n()));
        for (auto& t : taus) t = 2.0 * rng.unit();
        CHECK(eval_policy(inst, order, taus) <= fre + 1e-9);
    }
}

TEST_CASE("subset DP capacity") {
    std::vector<Distribution> many(21, Distribution::point_mass(1.0));
    Instance inst(std::move(many));
    CHECK_THROWS_AS(opt_random_order(inst), capacity_error);
    CHECK_THROWS_AS(opt_free_order(inst), capacity_error);
}

TEST_CASE("backward induction on instance A") {
    StatelessPolicy pol = backward_induction(instance_a(), {0, 1});
    CHECK(pol.thresholds[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(pol.thresholds[1] == 0.0);
    CHECK(pol.value == doctest::Approx(0.8).epsilon(1e-12));

    StatelessPolicy rev = backward_induction(instance_a(), {1, 0});
    CHECK(rev.thresholds[1] == doctest::Approx(0.5).epsilon(1e-12)); // E[X1]
    CHECK(rev.value == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("backward induction thresholds never exceed the prophet value") {
    Rng rng(44, 90, 0);
    for (int rep = 0; rep < 40; ++rep) {
        Instance inst = oracles::random_instance(rng, 7, 3, 2.0);
        std::vector<int> order(static_cast<size_t>(inst.n()));
        for (int i = 0; i < inst.n(); ++i) order[static_cast<size_t>(i)] = i;
        StatelessPolicy pol = backward_induction(inst, order);
        double mx = expected_max(inst);
        for (double t : pol.thresholds) CHECK(t <= mx + 1e-9);
    }
}

TEST_CASE("backward induction is optimal per order") {
    Rng rng(45, 90, 0);
    for (int rep = 0; rep < 200; ++rep) {
        Instance inst = oracles::random_instance(rng, 5, 3, 2.0);
        int n = inst.n();
        std::vector<int> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(order[static_cast<size_t>(i)],
                      order[static_cast<size_t>(rng.below(static_cast<uint64_t>(i) + 1))]);
        StatelessPolicy best = backward_induction(inst, order);
        std::vector<double> taus = best.thresholds;
        for (auto& t : taus) t = std::max(0.0, t + 0.4 * (rng.unit() - 0.5));
        CHECK(eval_policy(inst, order, taus) <= best.value + 1e-9);
    }
}

TEST_CASE("eval_policy closed form equals the enumeration oracle") {
    Rng rng(46, 90, 0);
    for (int rep = 0; rep < 60; ++rep) {
        Instance inst = oracles::random_instance(rng, 5, 3, 2.0);
        int n = inst.n();
        std::vector<int> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(order[static_cast<size_t>(i)],
                      order[static_cast<size_t>(rng.below(static_cast<uint64_t>(i) + 1))]);
        std::vector<double> taus(static_cast<size_t>(n));
        for (auto& t : taus) t = 2.0 * rng.unit();
        CHECK(eval_policy(inst, order, taus) ==
              doctest::Approx(oracles::policy_value(inst, order, taus)).epsilon(1e-10));
    }
}

TEST_CASE("eval_policy extremes") {
    // thresholds above every support except a zero on the last item
    Instance inst = instance_a();
    CHECK(eval_policy(inst, {0, 1}, {10.0, 0.0}) == doctest::Approx(0.6).epsilon(1e-12));
    // all-zero thresholds accept the first arrival (support is positive)
    Instance pos({Distribution::discrete({0.2, 1.0}, {0.5, 0.5}),
                  Distribution::point_mass(0.6)});
    CHECK(eval_policy(pos, {0, 1}, {0.0, 0.0}) ==
          doctest::Approx(pos.var(0).mean()).epsilon(1e-12));
}

TEST_CASE("adjacent swap with lambda out of order never loses value") {
    Rng rng(47, 90, 0);
    int done = 0;
    while (done < 1000) {
        Instance inst = oracles::random_instance(rng, 6, 3, 2.0);
        int n = inst.n();
        if (n < 2) continue;
        std::vector<int> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
        std::vector<double> taus(static_cast<size_t>(n));
        for (auto& t : taus) t = 1.5 * rng.unit();
        StatelessPolicy pol = make_policy(inst, order, taus);
        int pos = static_cast<int>(rng.below(static_cast<uint64_t>(n - 1)));
        if (pol.lambdas[static_cast<size_t>(pos)] >=
            pol.lambdas[static_cast<size_t>(pos) + 1])
            continue;
        std::vector<int> swapped = order;
        std::swap(swapped[static_cast<size_t>(pos)],
                  swapped[static_cast<size_t>(pos) + 1]);
        CHECK(eval_policy(inst, swapped, taus) >= pol.value - 1e-9);
        ++done;
    }
}

TEST_CASE("frequency coupling holds exhaustively on small frequent instances") {
    Rng rng(48, 90, 0);
    for (int rep = 0; rep < 10; ++rep) {
        int classes = 1 + static_cast<int>(rng.below(3));
        int m = 2 + static_cast<int>(rng.below(3));
        std::vector<Distribution> vars;
        for (int c = 0; c < classes && static_cast<int>(vars.size()) + m <= 10; ++c) {
            Instance base = oracles::random_instance(rng, 1, 3, 2.0);
            for (int j = 0; j < m; ++j) vars.push_back(base.var(0));
        }
        Instance inst(vars);
        int n = inst.n();
        int mfreq = inst.min_class_size();
        double mx = expected_max(inst);
        for (uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
            std::vector<int> keep;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) keep.push_back(i);
            int k = n - static_cast<int>(keep.size());
            double bound = (1.0 - static_cast<double>(k) / mfreq) * mx;
            if (bound <= 0.0) continue;
            CHECK(expected_max(inst.subset(keep)) >= bound - 1e-12);
        }
    }
}

TEST_CASE("merged grid capacity") {
    std::vector<double> vals(60000), ms(60000, 1.0 / 60000);
    for (size_t i = 0; i < vals.size(); ++i) vals[i] = 1.0 + static_cast<double>(i);
    Distribution big = Distribution::discrete(vals, ms);
    std::vector<double> vals2 = vals;
    for (auto& v : vals2) v += 0.5;
    Instance inst({big, Distribution::discrete(vals2, ms)});
    CHECK_THROWS_AS(expected_max(inst), capacity_error);
}
