#pragma once
#include <functional>
#include <vector>

namespace prophetlab {

// Adaptive Simpson on [a,b].  The integrand must be finite on the closed
// interval (endpoint limits substituted by the caller).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-11, int max_depth = 48);

// Composite Simpson with a fixed even panel count; used as the independent
// second quadrature route in tests.
double integrate_fixed(const std::function<double(double)>& f, double a, double b,
                       int panels);

// Bisection root of a monotone function with g(lo) and g(hi) of opposite sign.
double bisect(const std::function<double(double)>& g, double lo, double hi,
              double xtol, int max_iter = 200);

// Monotone piecewise-cubic Hermite table: knots (x_i, f_i, f'_i) with x
// strictly ascending.  Evaluation clamps to the knot range.
class HermiteTable {
public:
    HermiteTable() = default;
    HermiteTable(std::vector<double> x, std::vector<double> f, std::vector<double> d);
    double operator()(double x) const;
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return f_; }

private:
    std::vector<double> x_, f_, d_;
};

} // namespace prophetlab
