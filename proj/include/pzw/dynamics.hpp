#ifndef PZW_DYNAMICS_HPP
#define PZW_DYNAMICS_HPP

#include <vector>

#include "pzw/interaction.hpp"
#include "pzw/lattice.hpp"
#include "pzw/linalg.hpp"

namespace pzw {

// Equilibrium occupation of the matter Hamiltonian: the lowest n_occupied
// eigenorbitals filled (f = 1), everything above empty.
struct GroundState {
    EigenSystem eig;  // full spectrum of H_M in the modified basis
    int n_occupied = 0;
    double fermi_energy = 0.0;  // midpoint of HOMO and LUMO

    Matrix occupied_orbitals() const;
    std::vector<double> occupations() const;     // f per eigenorbital (dim entries)
    std::vector<double> rho0_diagonal() const;   // site occupations of rho(0)
    double homo_lumo_gap() const;
};

GroundState ground_state(const MatterOperator& h_m, int n_electrons);

struct PropagationOptions {
    double t_begin = 0.0;
    double t_end = 0.0;    // fs
    double dt_out = 0.1;   // fs
    double rtol = 1e-8;
    double atol = 1e-10;
    bool store_orbitals = false;
    // Integrate in the interaction picture of the diagonal coupling: the
    // accumulated phases theta_i = (1/hbar) int d_i dt' are carried as extra
    // unknowns and the twisted H_M drives the wavefunctions.  Removes the
    // large diagonal from the stepper without changing the propagated state.
    bool lift_diagonal_phase = true;
    long max_steps = 200000000;
};

struct Trajectory {
    std::vector<double> times;         // fs, uniform dt_out grid
    std::vector<double> energy;        // <H(t)> including the charge-neutral c-number (eV)
    std::vector<double> polarization;  // Tr[x rho(t)] - Tr[x rho(0)] (e A)
    double max_norm_drift = 0.0;
    std::vector<Matrix> snapshots;     // orbital snapshots per sample when requested
    Matrix final_orbitals;
    long n_steps = 0;
    long n_rhs = 0;
    long n_rejected = 0;
};

// Propagates every occupied orbital under H(t) = H_M + H_LM(t) with an
// adaptive eighth-order Dormand-Prince integrator (Hairer's DOP853
// coefficients), stepping exactly onto the dt_out sample grid.
Trajectory propagate(const MatterOperator& h_m, const InteractionOperator& h_lm,
                     const Matrix& initial_orbitals, const ModifiedBasis& basis,
                     const PropagationOptions& opt);

// rho = Phi Phi^dagger over the occupied columns.
Matrix density_matrix(const Matrix& orbitals);

} // namespace pzw

#endif
