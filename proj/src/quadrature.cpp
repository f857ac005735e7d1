#include "prophetlab/quadrature.hpp"
#include "prophetlab/errors.hpp"

#include <cmath>
#include <vector>

namespace prophetlab {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double fa, double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson(fa, fm, fb, b - a);
    return adaptive(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b,
                       int panels) {
    if (panels % 2 != 0) ++panels;
    double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; i += 2) sum += 4.0 * f(a + i * h);
    for (int i = 2; i < panels; i += 2) sum += 2.0 * f(a + i * h);
    return sum * h / 3.0;
}

double bisect(const std::function<double(double)>& g, double lo, double hi,
              double xtol, int max_iter) {
    double glo = g(lo), ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo < 0.0) == (ghi < 0.0))
        throw internal_error("bisect: root not bracketed");
    for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid; glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> f, std::vector<double> d)
    : x_(std::move(x)), f_(std::move(f)), d_(std::move(d)) {
    if (x_.size() < 2 || x_.size() != f_.size() || x_.size() != d_.size())
        throw internal_error("HermiteTable: bad knot arrays");
    for (size_t i = 1; i < x_.size(); ++i)
        if (!(x_[i] > x_[i - 1])) throw internal_error("HermiteTable: knots not ascending");
}

double HermiteTable::operator()(double x) const {
    if (x <= x_.front()) return f_.front();
    if (x >= x_.back()) return f_.back();
    size_t hi = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    size_t lo = hi - 1;
    double h = x_[hi] - x_[lo];
    double s = (x - x_[lo]) / h;
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * f_[lo] + h10 * h * d_[lo] + h01 * f_[hi] + h11 * h * d_[hi];
}

} // namespace prophetlab
