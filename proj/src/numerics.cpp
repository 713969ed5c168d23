#include "pzw/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace pzw {

void natural_spline_coeffs(const double* y, std::size_t n, std::size_t stride, double h,
                           double* y2) {
    if (n < 2) throw std::invalid_argument("spline needs at least 2 points");
    y2[0] = y2[n - 1] = 0.0;
    if (n == 2) return;

    // Tridiagonal system (Thomas): 1 4 1 rows scaled by h/6 against the
    // second differences of y.
    std::vector<double> c(n - 2), d(n - 2);
    const double inv_h = 1.0 / h;
    for (std::size_t i = 0; i + 2 < n; ++i)
        d[i] = 6.0 * inv_h * inv_h *
               (y[(i + 2) * stride] - 2.0 * y[(i + 1) * stride] + y[i * stride]);
    double beta = 4.0;
    c[0] = 1.0 / beta;
    d[0] /= beta;
    for (std::size_t i = 1; i + 2 < n; ++i) {
        beta = 4.0 - c[i - 1];
        c[i] = 1.0 / beta;
        d[i] = (d[i] - d[i - 1]) / beta;
    }
    for (std::size_t i = n - 2; i-- > 1;) d[i - 1] -= c[i - 1] * d[i];
    for (std::size_t i = 0; i + 2 < n; ++i) y2[i + 1] = d[i];
}

double spline_segment(double yj, double yj1, double y2j, double y2j1, double u, double h) {
    const double a = 1.0 - u;
    return a * yj + u * yj1 +
           ((a * a * a - a) * y2j + (u * u * u - u) * y2j1) * h * h / 6.0;
}

double spline_eval(std::span<const double> y, std::span<const double> y2, double x0, double h,
                   double xq) {
    const std::size_t n = y.size();
    double s = (xq - x0) / h;
    long j = long(std::floor(s));
    if (j < 0) j = 0;
    if (j > long(n) - 2) j = long(n) - 2;
    const double u = s - double(j);
    return spline_segment(y[std::size_t(j)], y[std::size_t(j) + 1], y2[std::size_t(j)],
                          y2[std::size_t(j) + 1], u, h);
}

std::vector<double> fd_weights(int deriv_order, int halfwidth, double h) {
    // Fornberg's recursion for weights at x0 = 0 with nodes -hw..+hw.
    const int nn = 2 * halfwidth + 1;
    const int m = deriv_order;
    if (m < 0 || m >= nn) throw std::invalid_argument("fd_weights: derivative order too high for stencil");

    std::vector<double> alpha(std::size_t(nn), 0.0);
    for (int i = 0; i < nn; ++i) alpha[std::size_t(i)] = double(i - halfwidth);

    std::vector<double> delta(std::size_t(nn) * std::size_t(m + 1), 0.0);
    auto d = [&](int i, int k) -> double& { return delta[std::size_t(i) * std::size_t(m + 1) + std::size_t(k)]; };

    d(0, 0) = 1.0;
    double c1 = 1.0;
    for (int i = 1; i < nn; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        for (int j = 0; j < i; ++j) {
            const double c3 = alpha[std::size_t(i)] - alpha[std::size_t(j)];
            c2 *= c3;
            if (j == i - 1) {
                // New node's row, from the previous node's not-yet-updated row.
                for (int k = mn; k >= 0; --k) {
                    const double prev = k > 0 ? d(i - 1, k - 1) : 0.0;
                    d(i, k) = c1 / c2 * (double(k) * prev - alpha[std::size_t(i - 1)] * d(i - 1, k));
                }
            }
            for (int k = mn; k >= 0; --k) {
                const double prev = k > 0 ? d(j, k - 1) : 0.0;
                d(j, k) = (alpha[std::size_t(i)] * d(j, k) - double(k) * prev) / c3;
            }
        }
        c1 = c2;
    }

    std::vector<double> w(std::size_t(nn), 0.0);
    const double scale = std::pow(h, -double(m));
    for (int i = 0; i < nn; ++i) w[std::size_t(i)] = d(i, m) * scale;
    return w;
}

} // namespace pzw
