#include "pzw/fields.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <sstream>

#include "pzw/errors.hpp"
#include "pzw/numerics.hpp"

namespace pzw {

namespace {

void require_plane(const Vec3& p) {
    if (std::abs(p.z) > 1e-9)
        throw ConfigError("field evaluation requires z = 0 (chain plane)");
}

} // namespace

QuadratureRule gauss_legendre(int n_q) {
    if (n_q < 1 || n_q > 64) throw ConfigError("quadrature order must be in [1, 64]");

    // Legendre roots on (-1, 1) by Newton iteration, then affine map to (0, 1).
    QuadratureRule rule;
    rule.nodes.resize(std::size_t(n_q));
    rule.weights.resize(std::size_t(n_q));
    const int m = (n_q + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (double(i) + 0.75) / (double(n_q) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n_q; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - double(j) * p3) / double(j + 1);
            }
            pp = double(n_q) * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.nodes[std::size_t(i)] = 0.5 * (1.0 - z);  // descending z -> ascending node
        rule.nodes[std::size_t(n_q - 1 - i)] = 0.5 * (1.0 + z);
        rule.weights[std::size_t(i)] = 0.5 * w;
        rule.weights[std::size_t(n_q - 1 - i)] = 0.5 * w;
    }
    return rule;
}

double GaussianBeamField::envelope(double t) const {
    const double dt = (t - t0) / sigma;
    return std::exp(-dt * dt);
}

double GaussianBeamField::spatial(double x, double y) const {
    const double dx = x - center_x, dy = y - center_y;
    return std::exp(-(dx * dx + dy * dy) / (spot * spot));
}

double GaussianBeamField::operator()(const Vec3& p, double t) const {
    require_plane(p);
    return e0 * envelope(t) * spatial(p.x, p.y) * std::cos(omega * (t - t0));
}

double PlaneWaveField::operator()(const Vec3& p, double t) const {
    require_plane(p);
    const double dt = (t - t0) / sigma;
    return e0 * std::exp(-dt * dt) * std::cos(wavenumber() * p.y - omega * (t - t0));
}

FieldGrid parse_field_grid(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto next = [&](const char* what) {
        if (!std::getline(in, line))
            throw ParseError(std::string("truncated field file: expected ") + what);
        ++line_no;
    };

    next("magic line");
    if (line != "# pzw-field v1")
        throw ParseError("bad magic line: expected '# pzw-field v1', found '" + line + "'");
    next("polarization line");
    if (line != "pol: x") throw ParseError("unsupported polarization: '" + line + "'");

    FieldGrid g;
    next("grid line");
    {
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag >> g.x0 >> g.dx >> g.nx) || tag != "grid:")
            throw ParseError("line 3: expected 'grid: x0 dx nx'");
    }
    next("time line");
    {
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag >> g.t_start >> g.dt >> g.nt) || tag != "time:")
            throw ParseError("line 4: expected 'time: t0 dt nt'");
    }
    if (g.nx < 4 || g.nt < 4)
        throw ParseError("grid too small for cubic splines: need nx >= 4 and nt >= 4");
    if (!(g.dx > 0.0) || !(g.dt > 0.0)) throw ParseError("grid spacings must be positive");

    g.frames.resize(std::size_t(g.nt) * std::size_t(g.nx));
    for (int j = 0; j < g.nt; ++j) {
        next("frame line");
        std::istringstream ss(line);
        int p = 0;
        double v;
        while (ss >> v) {
            if (p >= g.nx)
                throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(g.nx) + " samples, found more");
            g.frames[std::size_t(j) * std::size_t(g.nx) + std::size_t(p)] = v;
            ++p;
        }
        if (p != g.nx)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(g.nx) + " samples, found " + std::to_string(p));
    }
    return g;
}

std::string write_field_grid(const FieldGrid& g) {
    char buf[32];
    std::ostringstream out;
    out << "# pzw-field v1\n";
    out << "pol: x\n";
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "grid: " << num(g.x0) << " " << num(g.dx) << " " << g.nx << "\n";
    out << "time: " << num(g.t_start) << " " << num(g.dt) << " " << g.nt << "\n";
    for (int j = 0; j < g.nt; ++j) {
        for (int p = 0; p < g.nx; ++p) {
            if (p) out << " ";
            out << num(g.sample(j, p));
        }
        out << "\n";
    }
    return out.str();
}

GriddedField::GriddedField(std::shared_ptr<const FieldGrid> grid)
    : grid_(std::move(grid)), cache_t_(std::numeric_limits<double>::quiet_NaN()) {
    const auto& g = *grid_;
    if (g.nx < 4 || g.nt < 4) throw ConfigError("field grid too small for cubic splines");
    // Natural spline second derivatives along t for every grid column.
    d2_time_.resize(g.frames.size());
    std::vector<double> col(std::size_t(g.nt));
    for (int p = 0; p < g.nx; ++p) {
        natural_spline_coeffs(g.frames.data() + p, std::size_t(g.nt), std::size_t(g.nx), g.dt,
                              col.data());
        for (int j = 0; j < g.nt; ++j)
            d2_time_[std::size_t(j) * std::size_t(g.nx) + std::size_t(p)] = col[std::size_t(j)];
    }
    cache_slice_.resize(std::size_t(g.nx));
    cache_d2x_.resize(std::size_t(g.nx));
}

const std::vector<double>& GriddedField::slice_at(double t) const {
    const auto& g = *grid_;
    if (t != cache_t_) {
        const double s = (t - g.t_start) / g.dt;
        long j = long(std::floor(s));
        if (j < 0) j = 0;
        if (j > long(g.nt) - 2) j = long(g.nt) - 2;
        const double u = s - double(j);
        for (int p = 0; p < g.nx; ++p) {
            const std::size_t lo = std::size_t(j) * std::size_t(g.nx) + std::size_t(p);
            const std::size_t hi = lo + std::size_t(g.nx);
            cache_slice_[std::size_t(p)] =
                spline_segment(g.frames[lo], g.frames[hi], d2_time_[lo], d2_time_[hi], u, g.dt);
        }
        natural_spline_coeffs(cache_slice_.data(), std::size_t(g.nx), 1, g.dx, cache_d2x_.data());
        cache_t_ = t;
    }
    return cache_slice_;
}

double GriddedField::operator()(const Vec3& p, double t) const {
    require_plane(p);
    const auto& g = *grid_;
    const double eps_x = 1e-9 * g.dx, eps_t = 1e-9 * g.dt;
    if (p.x < g.x0 - eps_x || p.x > g.x_max() + eps_x)
        throw FieldRangeError("field query x = " + std::to_string(p.x) +
                              " outside gridded window [" + std::to_string(g.x0) + ", " +
                              std::to_string(g.x_max()) + "]");
    if (t < g.t_start - eps_t || t > g.t_max() + eps_t)
        throw FieldRangeError("field query t = " + std::to_string(t) +
                              " outside gridded window [" + std::to_string(g.t_start) + ", " +
                              std::to_string(g.t_max()) + "]");
    const auto& slice = slice_at(t);
    return spline_eval(slice, cache_d2x_, g.x0, g.dx, p.x);
}

double DriveField::amplitude(const Vec3& p, double t) const {
    const double raw = std::visit([&](const auto& f) { return f(p, t); }, spec_);
    return scale_ * raw;
}

double ray_average(const DriveField& field, const Vec3& r_site, double t,
                   const QuadratureRule& rule) {
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        acc += rule.weights[k] * field.amplitude(r_site * rule.nodes[k], t);
    return acc;
}

} // namespace pzw
