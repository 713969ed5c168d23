#ifndef PZW_LATTICE_HPP
#define PZW_LATTICE_HPP

#include <vector>

#include "pzw/linalg.hpp"
#include "pzw/wannier.hpp"

namespace pzw {

// Finite chain embedded in the z = 0 plane.  tilt_theta is the angle of the
// chain axis measured from the +y axis, so theta = 0 lays the chain along y
// (the propagation direction) and theta = pi/2 along x (the polarization
// direction).
struct ChainGeometry {
    int n_cells = 0;
    double gamma = 1.0;                       // position scaling factor, >= 1
    double tilt_theta = 0.0;                  // radians from +y, in the xy plane
    std::array<double, 3> origin_shift{0, 0, 0};  // Angstrom, lab frame

    void validate() const;
};

// gamma-scaled chain-coordinate operator s together with the geometry that
// maps s to lab coordinates.  Lab components are sin(theta) * s (x) and
// cos(theta) * s (y) plus the origin shift; z is identically the shift.
struct PositionOperator {
    BandedMatrix chain;  // Hermitian, Angstrom (already times gamma)
    ChainGeometry geom;
    double scaled_cell_length = 0.0;  // gamma * lattice constant

    // Lab-frame component xi in {0,1,2}; includes the origin shift.
    BandedMatrix component(int xi) const;
};

// Basis in which the position operator is diagonal.  For block-diagonal
// position operators one orbital-space unitary applies to every cell
// (translation invariance of the intra-cell block); with inter-cell
// elements retained the unitary is global.
struct ModifiedBasis {
    int n_cells = 0;
    int orbitals_per_cell = 0;
    bool global = false;
    Matrix cell_unitary;            // orbitals x orbitals, when !global
    Matrix global_unitary;          // dim x dim, when global
    std::vector<double> chain_coords;  // s_i (Angstrom, gamma-scaled), per basis state
    double sin_theta = 0.0, cos_theta = 1.0;
    std::array<double, 3> origin{0, 0, 0};

    std::size_t dim() const { return chain_coords.size(); }
    double lab_x(std::size_t i) const { return chain_coords[i] * sin_theta + origin[0]; }
    double lab_y(std::size_t i) const { return chain_coords[i] * cos_theta + origin[1]; }
    Vec3 lab(std::size_t i) const { return {lab_x(i), lab_y(i), origin[2]}; }

    Matrix full_unitary() const;  // dim x dim in either mode
};

// H_M in the modified basis: banded for block-diagonal bases, dense when
// inter-cell position elements force a global rotation.
struct MatterOperator {
    bool dense = false;
    BandedMatrix banded;
    Matrix full;

    std::size_t dim() const { return dense ? full.rows() : banded.dim(); }
    void apply(const cplx* x, cplx* y, std::size_t ncols, std::size_t ld) const;
    Matrix densify() const { return dense ? full : banded.dense(); }
};

// Open-boundary finite-chain Hamiltonian in the Wannier basis (eV).
// Couplings reaching past the chain ends are dropped; if n_cells does not
// cover the coupling range a warning is emitted on stderr.
BandedMatrix assemble_matter_hamiltonian(const WannierModel& model, const ChainGeometry& geom);

PositionOperator assemble_position_operator(const WannierModel& model, const ChainGeometry& geom,
                                            bool include_intercell);

ModifiedBasis diagonalize_position(const PositionOperator& pos, bool include_intercell);

MatterOperator to_modified_basis(const BandedMatrix& h_wannier, const ModifiedBasis& basis);

struct ChargeScalingPair {
    double position_factor;  // gamma
    double field_factor;     // 1 / gamma
};
ChargeScalingPair charge_scaling_pair(double gamma);

} // namespace pzw

#endif
