#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prophetlab/benchmarks.hpp"
#include "prophetlab/errors.hpp"
#include "prophetlab/kertz.hpp"
#include "prophetlab/policies.hpp"
#include "prophetlab/quadrature.hpp"

#include <cmath>

using namespace prophetlab;

namespace {
const double beta_ref = solve_beta(1e-8);
const KertzSolution& solution() {
    static KertzSolution sol = solve_y(beta_ref, 4096);
    return sol;
}
} // namespace

TEST_CASE("defining equation residual") {
    CHECK(std::fabs(kertz_residual(beta_ref, 1e-12)) <= 1e-8);
    // agreement across quadrature refinement
    double b2 = solve_beta(1e-9);
    CHECK(std::fabs(beta_ref - b2) <= 1e-7);
    // the fixed-panel route agrees too
    auto f = [](double y) { return kertz_integrand(beta_ref, y); };
    double fixed = integrate_fixed(f, 0.0, 1.0, 20000);
    CHECK(fixed == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("beta against the literature anchor") {
    // 1/beta ~ 1.342 at the paper's display precision
    CHECK(1.0 / beta_ref == doctest::Approx(1.3415).epsilon(2e-4));
    CHECK(beta_ref == doctest::Approx(0.745440332).epsilon(1e-7));
}

TEST_CASE("solve_beta domain") {
    CHECK_THROWS_AS(solve_beta(0.0), domain_error);
    CHECK_THROWS_AS(solve_beta(1e-3), domain_error);
}

TEST_CASE("curve boundary values") {
    const KertzSolution& sol = solution();
    CHECK(std::fabs(sol.y_of_t(0.0) - 1.0) <= 1e-6);
    CHECK(std::fabs(sol.y_of_t(1.0) - 0.0) <= 1e-6);
    CHECK(sol.yprime_of_t(0.0) == doctest::Approx(-1.0 / beta_ref).epsilon(1e-5));
}

TEST_CASE("curve matches the published polyline") {
    // (t, y) pairs read off the paper's tabulated curve
    const KertzSolution& sol = solution();
    CHECK(sol.y_of_t(0.2) == doctest::Approx(0.734252).epsilon(5e-4));
    CHECK(sol.y_of_t(0.5) == doctest::Approx(0.371669).epsilon(5e-4));
    CHECK(sol.y_of_t(0.9) == doctest::Approx(0.043671).epsilon(5e-3));
}

TEST_CASE("y strictly decreasing with negative derivative") {
    const KertzSolution& sol = solution();
    for (size_t i = 1; i < sol.t.size(); ++i) {
        CHECK(sol.y[i] < sol.y[i - 1]);
        CHECK(sol.yp[i] < 0.0);
    }
}

TEST_CASE("ODE consistency by finite differences") {
    const KertzSolution& sol = solution();
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        double h = 1e-5;
        double fd = (sol.y_of_t(t + h) - sol.y_of_t(t - h)) / (2 * h);
        CHECK(fd == doctest::Approx(sol.yprime_of_t(t)).epsilon(1e-4));
    }
}

TEST_CASE("exp integral identity") {
    // exp(int_0^t log y) = -beta y'(t), left side by independent quadrature
    const KertzSolution& sol = solution();
    for (double t : {0.25, 0.5, 0.75}) {
        double lhs = std::exp(
            integrate([&](double s) { return std::log(sol.y_of_t(s)); }, 0.0, t, 1e-12));
        double rhs = -beta_ref * sol.yprime_of_t(t);
        CHECK(std::fabs(lhs - rhs) <= 1e-5);
    }
}

TEST_CASE("worst-case params at q = 0.2") {
    const KertzSolution& sol = solution();
    WorstCaseParams wc = optimal_rate(sol, 0.2);
    CHECK(wc.p == doctest::Approx(sol.y_of_t(0.2)).epsilon(1e-12));
    CHECK(wc.r_star(1.0) == 0.0);
    CHECK(wc.H > wc.r_q());
    // r* nonincreasing, H plateau on [0, q]
    CHECK(wc.r_star(0.05) == wc.H);
    double prev = wc.H;
    for (double t = 0.2; t <= 1.0; t += 0.025) {
        double r = wc.r_star(t);
        CHECK(r <= prev + 1e-12);
        prev = r;
    }
    // independent trapezoid quadrature of -1/y' for H and r*(q)
    int panels = 20000;
    double rq_trap = 0.0;
    for (int i = 0; i < panels; ++i) {
        double a = 0.2 + 0.8 * i / panels, b = 0.2 + 0.8 * (i + 1) / panels;
        rq_trap += 0.5 * (b - a) * (-1.0 / sol.yprime_of_t(a) - 1.0 / sol.yprime_of_t(b));
    }
    CHECK(wc.r_q() == doctest::Approx(rq_trap).epsilon(1e-4));
    double H_trap = 1.0 / (sol.yprime_of_t(0.2) * std::log(wc.p)) + rq_trap;
    CHECK(wc.H == doctest::Approx(H_trap).epsilon(1e-4));
}

TEST_CASE("optimal_rate resolution guard") {
    const KertzSolution& sol = solution();
    CHECK_THROWS_AS(optimal_rate(sol, 1e-13), resolution_error);
}

TEST_CASE("appendix optimality identity for r*") {
    // r*'(t) = int_{r*(t)}^inf log F_q(u) du at interior t
    const KertzSolution& sol = solution();
    WorstCaseParams wc = optimal_rate(sol, 0.2);
    for (double t : {0.35, 0.5, 0.7}) {
        double rt = wc.r_star(t);
        double inner = integrate(
            [&](double u) { return std::log(sol.y_of_t(wc.r_star_inv(u))); }, rt,
            wc.r_q(), 1e-11);
        inner += (wc.H - wc.r_q()) * std::log(wc.p);
        double lhs = 1.0 / sol.yprime_of_t(t);
        CHECK(std::fabs(lhs - inner) <= 1e-3);
    }
}

TEST_CASE("worst-case cdf shape") {
    const KertzSolution& sol = solution();
    WorstCaseParams wc = optimal_rate(sol, 0.2);
    Distribution fq = worst_case_cdf(wc, 2048);
    // atom of mass 1 - p at H, plateau at p just below
    CHECK(fq.mass_at(wc.H) == doctest::Approx(1.0 - wc.p).epsilon(1e-9));
    CHECK(fq.cdf(0.5 * (wc.r_q() + wc.H)) == doctest::Approx(wc.p).epsilon(1e-9));
    CHECK(fq.cdf(wc.H) == doctest::Approx(1.0).epsilon(1e-12));
    // vanishing lower boundary
    CHECK(fq.cdf(1e-9) <= 2e-3);
    // median-type check against the tabulated curve
    CHECK(fq.cdf(wc.r_star(0.5)) == doctest::Approx(sol.y_of_t(0.5)).epsilon(5e-3));
}

TEST_CASE("worst-case instance splits the cdf") {
    const KertzSolution& sol = solution();
    WorstCaseParams wc = optimal_rate(sol, 0.2);
    Distribution fq = worst_case_cdf(wc, 512);
    Instance inst = worst_case_instance(wc, 50, 512);
    CHECK(inst.n() == 50);
    CHECK(expected_max(inst) == doctest::Approx(fq.mean()).epsilon(1e-9));
    Instance one = worst_case_instance(wc, 1, 512);
    CHECK(one.var(0).same_distribution(fq));
}

TEST_CASE("continuous ratio trend toward beta") {
    const KertzSolution& sol = solution();
    double prev = 1.0;
    for (double q : {0.2, 0.1, 0.05}) {
        WorstCaseRatio r = worst_case_ratio(optimal_rate(sol, q));
        CHECK(r.ratio > beta_ref);
        CHECK(r.ratio < prev);
        prev = r.ratio;
    }
    CHECK(prev < beta_ref + 0.015);
}
