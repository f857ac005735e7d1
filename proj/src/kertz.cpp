#include "prophetlab/kertz.hpp"
#include "prophetlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace prophetlab {

double KertzSolution::ode_rhs(double beta, double yv) {
    double ylog = yv > 0.0 ? yv * (std::log(yv) - 1.0) : 0.0;
    return ylog - (1.0 / beta - 1.0);
}

double kertz_integrand(double beta, double yv) {
    double denom = (1.0 / beta - 1.0);
    if (yv > 0.0) denom -= yv * (std::log(yv) - 1.0);
    return 1.0 / denom;
}

double kertz_residual(double beta, double quad_tol) {
    return integrate([beta](double yv) { return kertz_integrand(beta, yv); }, 0.0, 1.0,
                     quad_tol) - 1.0;
}

double solve_beta(double tol) {
    if (!(tol > 0.0 && tol <= 1e-4))
        throw domain_error("solve_beta tolerance must lie in (0, 1e-4]");
    double quad_tol = tol * 1e-3;
    auto g = [quad_tol](double b) { return kertz_residual(b, quad_tol); };
    // The integrand is monotone increasing in beta, so the residual brackets
    // on (0.5, 1).
    double lo = 0.5, hi = 0.999999;
    if (g(lo) >= 0.0 || g(hi) <= 0.0)
        throw internal_error("solve_beta: defining equation failed to bracket");
    double beta = bisect(g, lo, hi, tol * 1e-3);
    if (std::fabs(kertz_residual(beta, quad_tol)) > tol)
        throw internal_error("solve_beta: bisection did not reach tolerance");
    return beta;
}

namespace {

// y-grid geometrically refined near both endpoints.
std::vector<double> make_y_grid(int grid_size) {
    int half = std::max(grid_size / 2, 64);
    std::vector<double> ys;
    ys.reserve(static_cast<size_t>(grid_size) + 2 * static_cast<size_t>(half));
    ys.push_back(0.0);
    ys.push_back(1.0);
    const double lo_exp = -14.0, hi_exp = std::log10(0.5);
    for (int j = 0; j <= half; ++j) {
        double e = lo_exp + (hi_exp - lo_exp) * j / half;
        ys.push_back(std::pow(10.0, e));        // dense near 0
        ys.push_back(1.0 - std::pow(10.0, e));  // dense near 1
    }
    int lin = std::max(grid_size - 2 * half, 64);
    for (int j = 1; j < lin; ++j)
        ys.push_back(static_cast<double>(j) / lin);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

} // namespace

void KertzSolution::finalize() {
    // dy/dt at knots from the ODE; dt/dy as exact reciprocals.
    std::vector<double> dtdy(t.size());
    for (size_t i = 0; i < t.size(); ++i)
        dtdy[i] = 1.0 / yp[i];
    y_interp_ = HermiteTable(t, y, yp);
    // knots ascending in y = reversed order
    std::vector<double> yr(y.rbegin(), y.rend()), tr(t.rbegin(), t.rend()),
        dr(dtdy.rbegin(), dtdy.rend());
    t_interp_ = HermiteTable(std::move(yr), std::move(tr), std::move(dr));
}

KertzSolution solve_y(double beta, int grid_size) {
    if (grid_size < 100) throw domain_error("solve_y grid_size must be >= 100");
    if (!(beta > 0.5 && beta < 1.0)) throw domain_error("solve_y beta out of range");

    std::vector<double> ys = make_y_grid(grid_size);
    KertzSolution sol;
    sol.beta = beta;
    sol.tolerance = 1e-9;

    // cumulative t(y) = int_y^1 integrand, accumulated from y = 1 downward
    size_t m = ys.size();
    std::vector<double> ts(m, 0.0);
    auto f = [beta](double yv) { return kertz_integrand(beta, yv); };
    for (size_t j = m - 1; j-- > 0;) {
        double seg = integrate(f, ys[j], ys[j + 1], 1e-13);
        ts[j] = ts[j + 1] + seg;
    }
    for (size_t j = 1; j < m; ++j)
        if (!(ts[j] < ts[j - 1]))
            throw internal_error("solve_y: t(y) table is not strictly monotone");

    // store knots by ascending t (descending y)
    sol.t.assign(ts.rbegin(), ts.rend());
    sol.y.assign(ys.rbegin(), ys.rend());
    sol.yp.resize(m);
    for (size_t j = 0; j < m; ++j)
        sol.yp[j] = KertzSolution::ode_rhs(beta, sol.y[j]);
    sol.finalize();
    return sol;
}

double WorstCaseParams::r_star(double tt) const {
    if (tt <= q) return H;
    if (tt >= 1.0) return 0.0;
    return r_interp_(tt);
}

double WorstCaseParams::r_star_inv(double x) const {
    if (x >= r_q()) return q;
    if (x <= 0.0) return 1.0;
    return rinv_interp_(x);
}

void WorstCaseParams::finalize() {
    std::vector<double> drdt(rt.size());
    for (size_t i = 0; i < rt.size(); ++i)
        drdt[i] = 1.0 / sol.yprime_of_t(rt[i]); // r*' = 1/y'
    r_interp_ = HermiteTable(rt, rv, drdt);
    // inverse: knots ascending in r* value
    std::vector<double> xr(rv.rbegin(), rv.rend()), tr(rt.rbegin(), rt.rend());
    std::vector<double> dinv(xr.size());
    for (size_t i = 0; i < xr.size(); ++i) {
        size_t k = rt.size() - 1 - i;
        dinv[i] = drdt[k] != 0.0 ? 1.0 / drdt[k] : 0.0;
    }
    rinv_interp_ = HermiteTable(std::move(xr), std::move(tr), std::move(dinv));
}

WorstCaseParams optimal_rate(const KertzSolution& sol, double q) {
    if (!(q > 0.0 && q < 0.5)) throw domain_error("optimal_rate needs q in (0, 0.5)");
    int knots_below = 0;
    for (double tt : sol.t) {
        if (tt >= q) break;
        ++knots_below;
    }
    if (knots_below < 16)
        throw resolution_error(
            "optimal_rate: q too small for the solution grid; raise grid_size");

    WorstCaseParams wc;
    wc.sol = sol;
    wc.q = q;
    wc.p = sol.y_of_t(q);
    if (1.0 - wc.p < 1e-9)
        throw resolution_error(
            "optimal_rate: y(q) indistinguishable from 1 at this q; raise grid_size "
            "or use a larger q");

    // tabulate r*(t) = -int_t^1 ds/y'(s), cumulative from t = 1 leftward
    const int segments = 4096;
    wc.rt.resize(segments + 1);
    wc.rv.resize(segments + 1);
    for (int j = 0; j <= segments; ++j)
        wc.rt[static_cast<size_t>(j)] = q + (1.0 - q) * j / segments;
    auto integrand = [&sol](double s) { return -1.0 / sol.yprime_of_t(s); };
    wc.rv[segments] = 0.0;
    for (int j = segments; j-- > 0;) {
        double seg = integrate(integrand, wc.rt[static_cast<size_t>(j)],
                               wc.rt[static_cast<size_t>(j) + 1], 1e-12);
        wc.rv[static_cast<size_t>(j)] = wc.rv[static_cast<size_t>(j) + 1] + seg;
    }

    double ypq = sol.yprime_of_t(q);
    wc.H = 1.0 / (ypq * std::log(wc.p)) + wc.r_q();
    if (!(wc.H > wc.r_q()))
        throw internal_error("optimal_rate: H <= r*(q); sign convention violated at q=" +
                             std::to_string(q));
    wc.finalize();
    return wc;
}

Distribution worst_case_cdf(const WorstCaseParams& params, int grid) {
    if (grid < 8) throw domain_error("worst_case_cdf grid too small");
    double rq = params.r_q();
    std::vector<double> vals;
    std::vector<double> ms;
    vals.reserve(static_cast<size_t>(grid) + 1);
    ms.reserve(static_cast<size_t>(grid) + 1);
    double prev_cdf = 0.0; // F_q(0) = y(1) = 0
    for (int j = 1; j <= grid; ++j) {
        double x = rq * j / grid;
        double cdf = params.sol.y_of_t(params.r_star_inv(x));
        if (j == grid) cdf = params.p; // F_q(r*(q)) = y(q) exactly
        double mass = cdf - prev_cdf;
        if (mass > 0.0) {
            vals.push_back(x);
            ms.push_back(mass);
        }
        prev_cdf = cdf;
    }
    vals.push_back(params.H);
    ms.push_back(1.0 - params.p);
    return Distribution::discrete(std::move(vals), std::move(ms), "F_q");
}

Instance worst_case_instance(const WorstCaseParams& params, int n, int cdf_grid) {
    if (n < 1) throw domain_error("worst_case_instance needs n >= 1");
    Distribution fq = worst_case_cdf(params, cdf_grid);
    Distribution split = power_cdf(fq, n);
    return Instance(std::vector<Distribution>(static_cast<size_t>(n), split));
}

Instance worst_case_instance(double q, int n, double beta_tol, int solution_grid,
                             int cdf_grid) {
    double beta = solve_beta(beta_tol);
    KertzSolution sol = solve_y(beta, solution_grid);
    WorstCaseParams wc = optimal_rate(sol, q);
    return worst_case_instance(wc, n, cdf_grid);
}

WorstCaseRatio worst_case_ratio(const WorstCaseParams& params) {
    const KertzSolution& sol = params.sol;
    double q = params.q, p = params.p, H = params.H, rq = params.r_q();
    double opt = (1.0 - std::pow(p, q)) * H + std::pow(p, q) * rq;
    // int_0^{r*(q)} (1 - F_q) du = int_q^1 (y(t)-1)/y'(t) dt
    double tail_part = integrate(
        [&sol](double t) { return (sol.y_of_t(t) - 1.0) / sol.yprime_of_t(t); }, q, 1.0,
        1e-11);
    double max = (H - rq) * (1.0 - p) + tail_part;
    return {opt, max, opt / max};
}

} // namespace prophetlab
