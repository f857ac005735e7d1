#pragma once
#include "prophetlab/distribution.hpp"
#include "prophetlab/instance.hpp"
#include "prophetlab/quadrature.hpp"

#include <vector>

namespace prophetlab {

/// Solution of the boundary-value curve y(t): y' = y(log y - 1) - (1/beta - 1)
/// with y(0) = 1, y(1) = 0.  Built through the inverse integral
/// t(y) = int_y^1 [(1/beta - 1) - s(log s - 1)]^{-1} ds rather than forward
/// stepping (the forward ODE is stiff near y = 0); derivatives come from the
/// ODE right-hand side, never from differencing.
class KertzSolution {
public:
    double beta = 0.0;
    double tolerance = 0.0;
    // Knots sorted by t ascending (y descending): t in [0,1], y in [0,1].
    std::vector<double> t, y, yp;

    double y_of_t(double tt) const { return y_interp_(tt); }
    double t_of_y(double yy) const { return t_interp_(yy); }
    // ODE right-hand side evaluated at y(t).
    double yprime_of_t(double tt) const { return ode_rhs(beta, y_of_t(tt)); }

    static double ode_rhs(double beta, double y);

    void finalize(); // builds interpolants; called by solve_y

private:
    HermiteTable y_interp_; // y as a function of t
    HermiteTable t_interp_; // t as a function of y (knots ascending in y)
};

// Integrand of the defining equation, with the y -> 0 limit substituted.
double kertz_integrand(double beta, double y);

// Residual of the defining equation at a given beta: integral - 1.
double kertz_residual(double beta, double quad_tol = 1e-12);

// Root of the defining equation by bisection on (0.5, 1).
// Post: |kertz_residual(beta)| <= tol.
double solve_beta(double tol);

KertzSolution solve_y(double beta, int grid_size = 4096);

/// Worst-case objects of the upper-bound construction: the threshold curve
/// r*(t), the plateau height H, and the c.d.f. F_q.
class WorstCaseParams {
public:
    double q = 0.0;
    double p = 0.0; // y(q)
    double H = 0.0;
    // r* tabulated on [q, 1]: rt ascending, rv = r*(rt) descending to 0.
    std::vector<double> rt, rv;
    KertzSolution sol;

    double r_q() const { return rv.front(); }
    // r*(t): H on [0,q], tabulated curve on [q,1].
    double r_star(double t) const;
    // Inverse on [0, r_q()]: the time in [q,1] at which r* passes x.
    double r_star_inv(double x) const;

    void finalize();

private:
    HermiteTable r_interp_;    // r* as a function of t on [q,1]
    HermiteTable rinv_interp_; // t as a function of r* value
};

// r*, H, p = y(q) for a given q.  Throws resolution_error when q is too small
// for the solution grid.
WorstCaseParams optimal_rate(const KertzSolution& sol, double q);

// Discretized F_q: a grid over [0, r*(q)] plus the atom of mass 1-p at H.
Distribution worst_case_cdf(const WorstCaseParams& params, int grid = 2048);

// n i.i.d. variables with c.d.f. F_q^{1/n}.
Instance worst_case_instance(const WorstCaseParams& params, int n, int cdf_grid = 2048);
Instance worst_case_instance(double q, int n, double beta_tol = 1e-8,
                             int solution_grid = 4096, int cdf_grid = 2048);

// Value and benchmark of the continuous construction (used to pick q for
// tightness instances): OPT_q = (1-p^q) H + p^q r*(q),
// MAX_q = (H - r*(q))(1-p) + int_0^{r*(q)} (1 - F_q).
struct WorstCaseRatio {
    double opt, max, ratio;
};
WorstCaseRatio worst_case_ratio(const WorstCaseParams& params);

} // namespace prophetlab
