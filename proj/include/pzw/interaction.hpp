#ifndef PZW_INTERACTION_HPP
#define PZW_INTERACTION_HPP

#include <span>
#include <vector>

#include "pzw/fields.hpp"
#include "pzw/lattice.hpp"

namespace pzw {

enum class InteractionKind { full_pzw, dipole, multipole_gaussian, multipole_numeric };

// Recipe for the light-matter coupling at any time t.  In the modified
// basis of a collinear chain every variant is diagonal with real entries
// d_i(t) (eV); the charge-neutral subtraction contributes the c-number
// -sum_i d_i(t) rho0_ii on top of the matrix part.
//
// Sign convention: couplings act on electrons (charge -e), so the dipole
// entry is +x_i E(t) as in the charge-neutral interaction Hamiltonian.
class InteractionOperator {
public:
    // Full multipolar interaction: d_i = x_i * ray_average(field, r_i, t).
    static InteractionOperator pzw(const ModifiedBasis& basis, DriveField field,
                                   QuadratureRule rule, std::vector<double> charge_reference);

    // Electric-dipole approximation: d_i = x_i * E(expansion_point, t).
    static InteractionOperator dipole(const ModifiedBasis& basis, DriveField field,
                                      Vec3 expansion_point, std::vector<double> charge_reference);

    // Closed-form odd-order corrections for a Gaussian beam expanded at the
    // beam center; includes the terms m = 0 (dipole) through max_m, each
    // coupling x_i r_i^{2m}.  Even orders vanish there by symmetry.
    static InteractionOperator multipole_gaussian(const ModifiedBasis& basis, DriveField field,
                                                  int max_m, std::vector<double> charge_reference);

    // Taylor expansion through multipole order max_order for an arbitrary
    // field, with spatial derivatives taken by central finite differences
    // (accuracy order >= 4) of step stencil_h about expansion_point.
    static InteractionOperator multipole_numeric(const ModifiedBasis& basis, DriveField field,
                                                 Vec3 expansion_point, int max_order,
                                                 double stencil_h,
                                                 std::vector<double> charge_reference);

    // Writes d_i(t) into diag (size dim); when scalar is non-null also the
    // charge-neutral c-number (0 if the reference is disabled).
    void evaluate(double t, std::span<double> diag, double* scalar) const;

    std::vector<double> diagonal(double t) const;
    double scalar_offset(double t) const;

    std::size_t dim() const { return lab_x_.size(); }
    InteractionKind kind() const { return kind_; }
    bool charge_neutral() const { return !charge_reference_.empty(); }
    const DriveField& field() const { return field_; }

private:
    InteractionOperator(InteractionKind kind, const ModifiedBasis& basis, DriveField field,
                        std::vector<double> charge_reference);

    InteractionKind kind_;
    DriveField field_;
    std::vector<double> charge_reference_;

    std::vector<double> lab_x_, lab_y_;  // per basis state

    // full_pzw
    QuadratureRule rule_;

    // dipole / multipole_numeric
    Vec3 expansion_point_{};

    // multipole_gaussian: per-site static polynomial sum_m q C_m r^{2m}.
    std::vector<double> gaussian_poly_;

    // multipole_numeric
    int max_order_ = 0;
    double stencil_h_ = 0.0;
    int stencil_halfwidth_ = 0;
    std::vector<std::vector<double>> stencil_weights_;  // per derivative order
    std::vector<double> term_coeff_;                    // binom(a+b, a) / (a+b+1)! per (a, b)
    std::vector<std::pair<int, int>> term_ab_;
    std::vector<double> site_monomials_;                // dim x n_terms, x^a y^b
};

// Coefficient of the (2m+1)-order multipole term of a Gaussian beam expanded
// at the beam center: (-1)^(m+1) / ((2m+1) m!) / spot^(2m).
double multipole_coefficient(int m, double spot);

} // namespace pzw

#endif
