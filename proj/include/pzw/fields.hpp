#ifndef PZW_FIELDS_HPP
#define PZW_FIELDS_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pzw/linalg.hpp"
#include "pzw/units.hpp"

namespace pzw {

// Gauss-Legendre rule mapped to [0, 1]: nodes strictly increasing, weights
// summing to 1; exact for polynomials of degree <= 2 n_q - 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n_q);  // 1 <= n_q <= 64

// Gaussian (in space and time) beam at its z = 0 focal plane, polarized
// along x and propagating along z:
//   E_x = E0 exp[-(t-t0)^2/sigma^2] exp[-((x-xc)^2+(y-yc)^2)/spot^2]
//         cos(omega (t-t0)).
// spot may be +infinity (no spatial envelope).  The beam center (xc, yc)
// carries the beam's physical location, so relabeling the coordinate origin
// shifts it together with the chain.
struct GaussianBeamField {
    double e0 = 0.0;     // V/Angstrom
    double omega = 0.0;  // rad/fs
    double sigma = 0.0;  // fs
    double t0 = 0.0;     // fs
    double spot = 0.0;   // Angstrom
    double center_x = 0.0, center_y = 0.0;  // Angstrom

    double envelope(double t) const;
    double spatial(double x, double y) const;
    double operator()(const Vec3& p, double t) const;
};

// Gaussian (in time) pulse propagating along +y, polarized along x:
//   E_x = E0 exp[-(t-t0)^2/sigma^2] cos(k y - omega (t-t0)),  k = omega / c.
struct PlaneWaveField {
    double e0 = 0.0;
    double omega = 0.0;
    double sigma = 0.0;
    double t0 = 0.0;

    double wavenumber() const { return omega / units::c_light; }
    double operator()(const Vec3& p, double t) const;
};

// Externally computed field sampled on a uniform (x, t) grid, polarized
// along x with no y or z variation.  Values in V/Angstrom.
struct FieldGrid {
    double x0 = 0.0, dx = 0.0;
    int nx = 0;
    double t_start = 0.0, dt = 0.0;
    int nt = 0;
    std::vector<double> frames;  // nt rows of nx samples

    double sample(int j, int p) const { return frames[std::size_t(j) * std::size_t(nx) + std::size_t(p)]; }
    double x_max() const { return x0 + dx * double(nx - 1); }
    double t_max() const { return t_start + dt * double(nt - 1); }
};

FieldGrid parse_field_grid(std::istream& in);
std::string write_field_grid(const FieldGrid& grid);

// Cubic-spline interpolation of a FieldGrid: natural spline along x within
// each frame and a natural spline across frames in t (tensor product, so
// the two orders commute).  Queries outside the window throw
// FieldRangeError; there is no extrapolation.
class GriddedField {
public:
    explicit GriddedField(std::shared_ptr<const FieldGrid> grid);

    double operator()(const Vec3& p, double t) const;
    const FieldGrid& grid() const { return *grid_; }

private:
    const std::vector<double>& slice_at(double t) const;

    std::shared_ptr<const FieldGrid> grid_;
    std::vector<double> d2_time_;  // per-column second derivatives in t
    mutable double cache_t_;
    mutable std::vector<double> cache_slice_, cache_d2x_;
};

// Driving field: tagged union over the three field families, with an
// amplitude scale carrying the 1/gamma factor of the position-scaling pair.
class DriveField {
public:
    using Spec = std::variant<GaussianBeamField, PlaneWaveField, GriddedField>;

    explicit DriveField(GaussianBeamField f) : spec_(f) {}
    explicit DriveField(PlaneWaveField f) : spec_(f) {}
    explicit DriveField(GriddedField f) : spec_(std::move(f)) {}

    // E_x at a lab point (V/Angstrom); the chain physics lives at z = 0.
    double amplitude(const Vec3& p, double t) const;
    Vec3 evaluate(const Vec3& p, double t) const { return {amplitude(p, t), 0.0, 0.0}; }

    void set_amplitude_scale(double s) { scale_ = s; }
    double amplitude_scale() const { return scale_; }

    const Spec& spec() const { return spec_; }

private:
    Spec spec_;
    double scale_ = 1.0;
};

// The u-integral of Eq.-(20) type interactions: the field averaged over the
// straight ray from the coordinate origin to r_site,
//   sum_k w_k E_x(u_k r_site, t).
double ray_average(const DriveField& field, const Vec3& r_site, double t,
                   const QuadratureRule& rule);

} // namespace pzw

#endif
