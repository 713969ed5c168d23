#ifndef PZW_NUMERICS_HPP
#define PZW_NUMERICS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace pzw {

// Natural cubic spline on a uniform grid x_i = x0 + i * h (second
// derivative zero at both ends).

// Fills y2 (size n) with the spline's second derivatives; stride addresses
// strided columns of a row-major table.
void natural_spline_coeffs(const double* y, std::size_t n, std::size_t stride, double h,
                           double* y2);

// Evaluates the spline on interval j (0 <= j <= n-2) at local offset
// u = (x - x_j) / h in [0, 1].
double spline_segment(double yj, double yj1, double y2j, double y2j1, double u, double h);

// Evaluates the full spline at xq; xq must lie within [x0, x0 + (n-1) h].
double spline_eval(std::span<const double> y, std::span<const double> y2, double x0, double h,
                   double xq);

// Finite-difference weights (Fornberg) for the m-th derivative at x = 0 on
// the symmetric integer stencil {-halfwidth, ..., +halfwidth}, scaled by a
// grid spacing h.
std::vector<double> fd_weights(int deriv_order, int halfwidth, double h);

} // namespace pzw

#endif
