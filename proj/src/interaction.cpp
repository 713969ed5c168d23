#include "pzw/interaction.hpp"

#include <cmath>
#include <stdexcept>

#include "pzw/errors.hpp"
#include "pzw/numerics.hpp"

namespace pzw {

double multipole_coefficient(int m, double spot) {
    if (m < 0) throw ConfigError("multipole index m must be >= 0");
    if (!(spot > 0.0)) throw ConfigError("spot size must be positive");
    double mfact = 1.0;
    for (int k = 2; k <= m; ++k) mfact *= double(k);
    const double sign = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^(m+1)
    return sign / (double(2 * m + 1) * mfact) * std::pow(spot, -2.0 * double(m));
}

InteractionOperator::InteractionOperator(InteractionKind kind, const ModifiedBasis& basis,
                                         DriveField field, std::vector<double> charge_reference)
    : kind_(kind), field_(std::move(field)), charge_reference_(std::move(charge_reference)) {
    const std::size_t dim = basis.dim();
    if (!charge_reference_.empty() && charge_reference_.size() != dim)
        throw ConfigError("charge reference length does not match basis dimension");
    lab_x_.resize(dim);
    lab_y_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        lab_x_[i] = basis.lab_x(i);
        lab_y_[i] = basis.lab_y(i);
    }
}

InteractionOperator InteractionOperator::pzw(const ModifiedBasis& basis, DriveField field,
                                             QuadratureRule rule,
                                             std::vector<double> charge_reference) {
    InteractionOperator op(InteractionKind::full_pzw, basis, std::move(field),
                           std::move(charge_reference));
    if (rule.nodes.empty()) throw ConfigError("quadrature rule must not be empty");
    op.rule_ = std::move(rule);
    return op;
}

InteractionOperator InteractionOperator::dipole(const ModifiedBasis& basis, DriveField field,
                                                Vec3 expansion_point,
                                                std::vector<double> charge_reference) {
    InteractionOperator op(InteractionKind::dipole, basis, std::move(field),
                           std::move(charge_reference));
    op.expansion_point_ = expansion_point;
    return op;
}

InteractionOperator InteractionOperator::multipole_gaussian(const ModifiedBasis& basis,
                                                            DriveField field, int max_m,
                                                            std::vector<double> charge_reference) {
    if (max_m < 0) throw ConfigError("max_m must be >= 0");
    const auto* beam = std::get_if<GaussianBeamField>(&field.spec());
    if (!beam) throw ConfigError("closed-form multipole corrections require a Gaussian beam");
    const double spot = beam->spot;

    const double xc = beam->center_x, yc = beam->center_y;
    InteractionOperator op(InteractionKind::multipole_gaussian, basis, std::move(field),
                           std::move(charge_reference));
    op.expansion_point_ = {xc, yc, 0.0};
    op.gaussian_poly_.resize(op.dim());
    for (std::size_t i = 0; i < op.dim(); ++i) {
        const double dx = op.lab_x_[i] - xc, dy = op.lab_y_[i] - yc;
        const double r2 = dx * dx + dy * dy;
        double poly = 0.0, r2m = 1.0;
        for (int m = 0; m <= max_m; ++m) {
            poly += units::electron_charge * multipole_coefficient(m, spot) * r2m;
            r2m *= r2;
        }
        op.gaussian_poly_[i] = poly;
    }
    return op;
}

InteractionOperator InteractionOperator::multipole_numeric(const ModifiedBasis& basis,
                                                           DriveField field, Vec3 expansion_point,
                                                           int max_order, double stencil_h,
                                                           std::vector<double> charge_reference) {
    if (max_order < 1) throw ConfigError("multipole order must be >= 1");
    if (!(stencil_h > 0.0)) throw ConfigError("stencil step must be positive");

    InteractionOperator op(InteractionKind::multipole_numeric, basis, std::move(field),
                           std::move(charge_reference));
    op.expansion_point_ = expansion_point;
    op.max_order_ = max_order;
    op.stencil_h_ = stencil_h;

    const int max_deriv = max_order - 1;
    op.stencil_halfwidth_ = std::max(1, (max_deriv + 3) / 2);
    op.stencil_weights_.resize(std::size_t(max_deriv) + 1);
    for (int d = 0; d <= max_deriv; ++d)
        op.stencil_weights_[std::size_t(d)] = fd_weights(d, op.stencil_halfwidth_, stencil_h);

    // Multipole order n couples the monomial x^a y^b (a + b = n - 1) of the
    // site coordinates to d^a_x d^b_y E with weight binom(n-1, a) / n!.
    for (int n = 1; n <= max_order; ++n) {
        double nfact = 1.0;
        for (int k = 2; k <= n; ++k) nfact *= double(k);
        double binom = 1.0;
        for (int a = 0; a <= n - 1; ++a) {
            op.term_ab_.emplace_back(a, n - 1 - a);
            op.term_coeff_.push_back(binom / nfact);
            binom = binom * double(n - 1 - a) / double(a + 1);
        }
    }

    const std::size_t n_terms = op.term_ab_.size();
    op.site_monomials_.resize(op.dim() * n_terms);
    for (std::size_t i = 0; i < op.dim(); ++i) {
        const double dx = op.lab_x_[i] - expansion_point.x;
        const double dy = op.lab_y_[i] - expansion_point.y;
        for (std::size_t k = 0; k < n_terms; ++k) {
            const auto [a, b] = op.term_ab_[k];
            op.site_monomials_[i * n_terms + k] = std::pow(dx, a) * std::pow(dy, b);
        }
    }
    return op;
}

void InteractionOperator::evaluate(double t, std::span<double> diag, double* scalar) const {
    const std::size_t n = dim();
    if (diag.size() != n) throw std::invalid_argument("diagonal buffer size mismatch");

    switch (kind_) {
        case InteractionKind::full_pzw: {
            for (std::size_t i = 0; i < n; ++i) {
                try {
                    diag[i] = lab_x_[i] *
                              ray_average(field_, {lab_x_[i], lab_y_[i], 0.0}, t, rule_);
                } catch (const FieldRangeError& e) {
                    throw FieldRangeError(std::string(e.what()) + " (ray to site at x = " +
                                          std::to_string(lab_x_[i]) + " A, y = " +
                                          std::to_string(lab_y_[i]) + " A)");
                }
            }
            break;
        }
        case InteractionKind::dipole: {
            const double e = field_.amplitude(expansion_point_, t);
            for (std::size_t i = 0; i < n; ++i) diag[i] = lab_x_[i] * e;
            break;
        }
        case InteractionKind::multipole_gaussian: {
            // Field and moments referenced to the beam center; the coupling
            // coordinate too, so the operator is shift-covariant.
            const double e = field_.amplitude(expansion_point_, t);
            for (std::size_t i = 0; i < n; ++i)
                diag[i] = (lab_x_[i] - expansion_point_.x) * e * gaussian_poly_[i];
            break;
        }
        case InteractionKind::multipole_numeric: {
            // Field patch around the expansion point, one evaluation per
            // stencil node pair.
            const int hw = stencil_halfwidth_;
            const int np = 2 * hw + 1;
            std::vector<double> patch(std::size_t(np) * std::size_t(np));
            for (int ia = -hw; ia <= hw; ++ia)
                for (int ib = -hw; ib <= hw; ++ib)
                    patch[std::size_t(ia + hw) * std::size_t(np) + std::size_t(ib + hw)] =
                        field_.amplitude({expansion_point_.x + double(ia) * stencil_h_,
                                          expansion_point_.y + double(ib) * stencil_h_, 0.0},
                                         t);

            const std::size_t n_terms = term_ab_.size();
            std::vector<double> deriv(n_terms);
            for (std::size_t k = 0; k < n_terms; ++k) {
                const auto [a, b] = term_ab_[k];
                const auto& wa = stencil_weights_[std::size_t(a)];
                const auto& wb = stencil_weights_[std::size_t(b)];
                double acc = 0.0;
                for (int ia = 0; ia < np; ++ia) {
                    if (wa[std::size_t(ia)] == 0.0) continue;
                    double row = 0.0;
                    for (int ib = 0; ib < np; ++ib)
                        row += wb[std::size_t(ib)] *
                               patch[std::size_t(ia) * std::size_t(np) + std::size_t(ib)];
                    acc += wa[std::size_t(ia)] * row;
                }
                deriv[k] = term_coeff_[k] * acc;
            }
            // Moments are taken about the expansion point, so the coupling
            // coordinate is referenced to it as well; the induced c-number
            // offset cancels in the charge-neutral form.
            for (std::size_t i = 0; i < n; ++i) {
                const double* mono = site_monomials_.data() + i * n_terms;
                double s = 0.0;
                for (std::size_t k = 0; k < n_terms; ++k) s += mono[k] * deriv[k];
                diag[i] = (lab_x_[i] - expansion_point_.x) * s;
            }
            break;
        }
    }

    if (scalar) {
        double s = 0.0;
        if (!charge_reference_.empty())
            for (std::size_t i = 0; i < n; ++i) s -= diag[i] * charge_reference_[i];
        *scalar = s;
    }
}

std::vector<double> InteractionOperator::diagonal(double t) const {
    std::vector<double> d(dim());
    evaluate(t, d, nullptr);
    return d;
}

double InteractionOperator::scalar_offset(double t) const {
    std::vector<double> d(dim());
    double s = 0.0;
    evaluate(t, d, &s);
    return s;
}

} // namespace pzw
