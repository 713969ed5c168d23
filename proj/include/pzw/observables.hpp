#ifndef PZW_OBSERVABLES_HPP
#define PZW_OBSERVABLES_HPP

#include <vector>

#include "pzw/dynamics.hpp"

namespace pzw {

struct TimeSeries {
    std::vector<double> times;   // fs, uniform
    std::vector<double> values;

    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

enum class SpectralWindow { none, hann };

struct Spectrum {
    std::vector<double> frequencies;  // rad/fs, ascending from 0
    std::vector<double> power;        // |omega^2 P(omega)|^2
    double omega0 = 0.0;              // drive frequency for the harmonic axis
};

// <H(t)> = Tr[(H_M + H_LM(t)) rho(t)] plus the charge-neutral c-number.
// Recomputed from snapshots when the trajectory stores them, otherwise the
// series recorded during propagation is returned.
TimeSeries energy(const Trajectory& traj, const MatterOperator& h_m,
                  const InteractionOperator& h_lm);

// Tr[x rho(t)] - Tr[x rho(0)] along the laser polarization.
TimeSeries polarization(const Trajectory& traj, const ModifiedBasis& basis);

// Diagonal of rho in the H_M eigenbasis for one orbital snapshot.
std::vector<double> populations(const Matrix& orbitals, const EigenSystem& eig);

struct AbsorbedEnergy {
    double value = 0.0;   // <H>(tf_post) - <H>(t0_pre), eV
    bool plateau = true;  // false when tf_post still sits inside the pulse
};
AbsorbedEnergy absorbed_energy(const TimeSeries& energy_series, double t0_pre, double tf_post);

// |int f* g dt| / (||f|| ||g||) over [0, T] by trapezoidal quadrature.
double fidelity(const TimeSeries& f, const TimeSeries& g, double t_total);

Spectrum power_spectrum(const TimeSeries& pol, SpectralWindow window, int pad_factor,
                        double omega0);

// Largest power in the harmonic band [lo, hi] (units of omega0).
double peak_power(const Spectrum& s, double lo, double hi);

} // namespace pzw

#endif
