#include "pzw/observables.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "pzw/errors.hpp"

namespace pzw {

TimeSeries energy(const Trajectory& traj, const MatterOperator& h_m,
                  const InteractionOperator& h_lm) {
    if (traj.snapshots.empty()) return {traj.times, traj.energy};

    const std::size_t dim = h_m.dim();
    TimeSeries out;
    out.times = traj.times;
    out.values.reserve(traj.times.size());
    std::vector<double> diag(dim);
    std::vector<cplx> w(dim);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Matrix& phi = traj.snapshots[s];
        double scalar = 0.0;
        h_lm.evaluate(traj.times[s], diag, &scalar);
        double e = scalar;
        for (std::size_t c = 0; c < phi.cols(); ++c) {
            h_m.apply(phi.col(c), w.data(), 1, dim);
            const cplx* fc = phi.col(c);
            for (std::size_t i = 0; i < dim; ++i)
                e += (std::conj(fc[i]) * w[i]).real() + diag[i] * std::norm(fc[i]);
        }
        out.values.push_back(e);
    }
    return out;
}

TimeSeries polarization(const Trajectory& traj, const ModifiedBasis& basis) {
    if (traj.snapshots.empty()) return {traj.times, traj.polarization};

    TimeSeries out;
    out.times = traj.times;
    out.values.reserve(traj.times.size());
    double baseline = 0.0;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Matrix& phi = traj.snapshots[s];
        double p = 0.0;
        for (std::size_t c = 0; c < phi.cols(); ++c) {
            const cplx* fc = phi.col(c);
            for (std::size_t i = 0; i < basis.dim(); ++i)
                p += basis.lab_x(i) * std::norm(fc[i]);
        }
        if (s == 0) baseline = p;
        out.values.push_back(p - baseline);
    }
    return out;
}

std::vector<double> populations(const Matrix& orbitals, const EigenSystem& eig) {
    const Matrix proj = adjoint_multiply(eig.vectors, orbitals);
    std::vector<double> p(eig.values.size(), 0.0);
    for (std::size_t c = 0; c < proj.cols(); ++c) {
        const cplx* pc = proj.col(c);
        for (std::size_t k = 0; k < p.size(); ++k) p[k] += std::norm(pc[k]);
    }
    return p;
}

AbsorbedEnergy absorbed_energy(const TimeSeries& series, double t0_pre, double tf_post) {
    if (series.times.size() < 2) throw ConfigError("energy series too short");
    const double dt = series.dt();
    auto index_of = [&](double t) {
        long k = std::lround((t - series.times.front()) / dt);
        k = std::clamp(k, 0L, long(series.times.size()) - 1);
        return std::size_t(k);
    };
    const std::size_t i0 = index_of(t0_pre);
    const std::size_t i1 = index_of(tf_post);

    AbsorbedEnergy result;
    result.value = series.values[i1] - series.values[i0];

    // Plateau check: <H> must be flat over the trailing 5% window before
    // tf_post, otherwise the pulse is still on.
    const std::size_t back = std::max<std::size_t>(2, series.times.size() / 20);
    const std::size_t j0 = i1 > back ? i1 - back : 0;
    double lo = series.values[i1], hi = series.values[i1];
    for (std::size_t j = j0; j <= i1; ++j) {
        lo = std::min(lo, series.values[j]);
        hi = std::max(hi, series.values[j]);
    }
    const double scale = std::max({std::abs(result.value), 1e-12});
    result.plateau = (hi - lo) <= 1e-6 * scale + 1e-12;
    return result;
}

double fidelity(const TimeSeries& f, const TimeSeries& g, double t_total) {
    if (f.times.size() != g.times.size() || f.times.size() < 2)
        throw ConfigError("fidelity requires two series on a common grid");
    const double dt = f.dt();
    std::size_t n = f.times.size();
    // Restrict to [t_begin, t_begin + t_total].
    const double t_end = f.times.front() + t_total;
    while (n > 2 && f.times[n - 1] > t_end + 1e-9) --n;

    double fg = 0.0, ff = 0.0, gg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        fg += wt * f.values[i] * g.values[i];
        ff += wt * f.values[i] * f.values[i];
        gg += wt * g.values[i] * g.values[i];
    }
    fg *= dt;
    ff *= dt;
    gg *= dt;
    if (ff <= 0.0 || gg <= 0.0) throw NumericalError("fidelity undefined for a zero-norm series");
    return std::abs(fg) / std::sqrt(ff * gg);
}

Spectrum power_spectrum(const TimeSeries& pol, SpectralWindow window, int pad_factor,
                        double omega0) {
    if (pol.times.size() < 4) throw ConfigError("series too short for a spectrum");
    if (pad_factor < 1) throw ConfigError("pad_factor must be >= 1");
    const std::size_t n = pol.times.size();
    const double dt = pol.dt();
    const std::size_t n_pad = n * std::size_t(pad_factor);

    std::vector<double> in(n_pad, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        if (window == SpectralWindow::hann)
            w = 0.5 * (1.0 - std::cos(2.0 * M_PI * double(i) / double(n - 1)));
        in[i] = w * pol.values[i];
    }

    std::vector<cplx> out(n_pad / 2 + 1);
    {
        // FFTW planning is not thread-safe; execution is.
        static std::mutex plan_mutex;
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(plan_mutex);
            plan = fftw_plan_dft_r2c_1d(int(n_pad), in.data(),
                                        reinterpret_cast<fftw_complex*>(out.data()),
                                        FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
        }
        fftw_execute(plan);
        {
            std::lock_guard<std::mutex> lock(plan_mutex);
            fftw_destroy_plan(plan);
        }
    }

    Spectrum s;
    s.omega0 = omega0;
    s.frequencies.reserve(out.size());
    s.power.reserve(out.size());
    const double domega = 2.0 * M_PI / (double(n_pad) * dt);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double omega = domega * double(k);
        const double mag = std::abs(out[k]) * dt;  // DFT -> integral normalization
        s.frequencies.push_back(omega);
        s.power.push_back(std::pow(omega, 4) * mag * mag);
    }
    return s;
}

double peak_power(const Spectrum& s, double lo, double hi) {
    double peak = 0.0;
    for (std::size_t k = 0; k < s.frequencies.size(); ++k) {
        const double h = s.frequencies[k] / s.omega0;
        if (h >= lo && h <= hi) peak = std::max(peak, s.power[k]);
    }
    return peak;
}

} // namespace pzw
