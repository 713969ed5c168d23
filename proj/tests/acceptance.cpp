// Acceptance suite: one integration check per shipped guarantee, each
// printing a single PASS/FAIL line.  Run all with no arguments or one with
// --criterion N.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "pzw/observables.hpp"
#include "pzw/scenario.hpp"
#include "pzw/units.hpp"

using namespace pzw;

namespace {

int g_failures = 0;

void report(int crit, bool pass, const std::string& name, const std::string& detail) {
    std::printf("[criterion %02d] %s: %s — %s\n", crit, pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double peak_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_series_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

RunResult run_async_pair(const Workspace& ws, const ScenarioConfig& cfg, const std::string& kind) {
    return run_scenario(ws, cfg, kind);
}

// ---------------------------------------------------------------- criterion 1
// Spatially uniform field: full PZW, dipole, and every finite-multipole run
// produce identical energy and polarization series (< 1e-10 of peak).
void criterion_1() {
    ScenarioConfig c = scenario_defaults('a');
    c.n_cells = 100;
    c.spot_nm = -1.0;  // infinite spot: no spatial structure
    c.t_end_fs = 250.0;
    c.rtol = 1e-13;
    c.atol = 1e-15;

    const Workspace ws = build_workspace(c);
    const auto ref = run_scenario(ws, c, "pzw");
    const double pe = peak_abs(ref.energy_series.values);
    const double pp = peak_abs(ref.polarization_series.values);

    double worst = 0.0;
    for (const char* kind : {"dipole", "multipole:3", "multipole:5"}) {
        const auto r = run_scenario(ws, c, kind);
        worst = std::max(worst, max_series_diff(r.energy_series.values, ref.energy_series.values) / pe);
        worst = std::max(worst,
                         max_series_diff(r.polarization_series.values, ref.polarization_series.values) / pp);
    }
    report(1, worst < 1e-10, "dipole-limit oracle",
           "max series difference " + fmt(worst) + " of peak (tolerance 1e-10)");
}

// ---------------------------------------------------------------- criterion 2
// Perpendicular illumination with s = 10 um >> L: PZW and dipole
// polarization agree to < 1e-6 of peak.
void criterion_2() {
    ScenarioConfig c = scenario_defaults('a');
    c.n_cells = 400;
    c.spot_nm = 10000.0;
    c.t_end_fs = 400.0;
    c.rtol = 1e-11;
    c.atol = 1e-13;

    const Workspace ws = build_workspace(c);
    auto fut = std::async(std::launch::async, run_async_pair, std::cref(ws), c, "dipole");
    const auto pzw = run_scenario(ws, c, "pzw");
    const auto dip = fut.get();

    const double pk = peak_abs(pzw.polarization_series.values);
    const double diff =
        max_series_diff(pzw.polarization_series.values, dip.polarization_series.values) / pk;
    // The spatial envelope still curves over the chain at s = 10 um: the
    // ray-averaged coupling at the chain ends is weaker than the dipole one
    // by (L/2s)^2/3, which bounds how identical the two runs can be.
    const double envelope_floor =
        std::pow(c.chain_length() / (2.0 * c.spot_nm * units::nm), 2) / 3.0;
    report(2, diff < 1e-6, "perpendicular-illumination robustness",
           "max polarization difference " + fmt(diff) + " of peak (tolerance 1e-6; physical "
           "envelope-curvature floor ~" + fmt(envelope_floor) + ")");
}

// ---------------------------------------------------------------- criterion 3
// Nonuniform-illumination breakdown trends across L/s in [0.25, 2.2].
void criterion_3() {
    ScenarioConfig c = scenario_defaults('a');
    c.t_end_fs = 400.0;
    c.sweep_n_cells = {80, 160, 320, 480, 600, 705};
    c.sweep_interactions = {"dipole", "multipole:3", "multipole:5"};
    c.fidelity_durations_fs = {400.0};

    const auto rows = sweep(c);
    std::ostringstream detail;
    bool pass = true;
    for (const auto& row : rows)
        if (row.failed) {
            pass = false;
            detail << "point N=" << row.n_cells << " failed: " << row.error << "; ";
        }

    // (a) dipole overestimates absorption beyond L/s = 1, monotonically.
    double prev_ratio = 0.0;
    for (const auto& row : rows) {
        if (row.failed || row.ratio <= 1.0) continue;
        const double ratio = row.delta_h.at("dipole") / row.delta_h_pzw;
        if (ratio < 1.0) {
            pass = false;
            detail << "dipole/pzw ratio " << ratio << " < 1 at L/s=" << row.ratio << "; ";
        }
        if (ratio < prev_ratio) {
            pass = false;
            detail << "ratio not monotonic at L/s=" << row.ratio << "; ";
        }
        prev_ratio = ratio;
    }

    // (b) dipole fidelity stays >= 0.92 for L <= s/2.
    for (const auto& row : rows) {
        if (row.failed || row.ratio > 0.5) continue;
        const double f = row.fidelity.at("dipole")[0];
        if (f < 0.92) {
            pass = false;
            detail << "fidelity " << f << " < 0.92 at L/s=" << row.ratio << "; ";
        }
    }

    // (c) octupole and 32-pole reduce the absorption error for L/s <= 1.5.
    for (const auto& row : rows) {
        if (row.failed || row.ratio > 1.5) continue;
        const double err_dip = std::abs(row.delta_h.at("dipole") - row.delta_h_pzw);
        for (const char* kind : {"multipole:3", "multipole:5"}) {
            const double err = std::abs(row.delta_h.at(kind) - row.delta_h_pzw);
            if (err > err_dip) {
                pass = false;
                detail << kind << " error " << err << " exceeds dipole error " << err_dip
                       << " at L/s=" << row.ratio << "; ";
            }
        }
    }

    if (pass) {
        detail << "ratios:";
        for (const auto& row : rows)
            detail << " " << row.ratio << "->" << row.delta_h.at("dipole") / row.delta_h_pzw;
    }
    report(3, pass, "nonuniform-illumination breakdown", detail.str());
}

// ---------------------------------------------------------------- criterion 4
// The numerically assembled quadrupole operator vanishes at the Gaussian
// beam center (norm < 1e-12 of the dipole operator's norm).
void criterion_4() {
    ScenarioConfig c = scenario_defaults('a');
    c.n_cells = 400;
    const Workspace ws = build_workspace(c);

    // Quadrupole piece alone: the numeric order-2 operator minus its
    // order-1 (dipole) part, both expanded at the beam center.
    const auto dip = build_interaction(ws, c, "dipole");
    const auto quad = InteractionOperator::multipole_numeric(
        ws.basis, ws.field, {0.0, 0.0, 0.0}, 2, c.spot_nm * units::nm / 200.0,
        ws.gs.rho0_diagonal());

    double worst = 0.0;
    for (double t : {70.0, 80.0, 90.0}) {
        const auto dq = quad.diagonal(t);
        const auto dd = dip.diagonal(t);
        double nq = 0.0, nd = 0.0;
        for (std::size_t i = 0; i < dq.size(); ++i) {
            nq = std::max(nq, std::abs(dq[i] - dd[i]));
            nd = std::max(nd, std::abs(dd[i]));
        }
        worst = std::max(worst, nq / nd);
    }
    report(4, worst < 1e-12, "symmetry-forced quadrupole null",
           "quadrupole/dipole operator norm ratio " + fmt(worst) + " (tolerance 1e-12)");
}

// ---------------------------------------------------------------- criterion 5
// Charge-neutral subtraction makes the dynamics origin independent.
void criterion_5() {
    ScenarioConfig base = scenario_defaults('a');
    base.n_cells = 80;
    // Push the envelope center out so the t = 0 baseline is field-free to
    // machine precision (exp(-25) ~ 1e-11): the pre-pulse energy reference
    // must not sample the envelope tail.
    base.t0_fs = 100.0;
    base.t_end_fs = 280.0;
    base.rtol = 1e-11;
    base.atol = 1e-13;

    // Relabel the coordinate origin by one scaled lattice constant: the
    // chain AND the beam move together in lab coordinates, so the physics
    // is unchanged and only the ray reference point differs.
    const double shift = base.gamma * 2.496;  // Angstrom
    ScenarioConfig shifted = base;
    shifted.origin_shift_angstrom = {shift, 0.0, 0.0};
    shifted.beam_center_x_nm = shift / units::nm;

    auto run_one = [](const ScenarioConfig& cfg) { return run_scenario(cfg); };

    auto f1 = std::async(std::launch::async, run_one, base);
    const auto r2 = run_one(shifted);
    const auto r1 = f1.get();

    const double pk = peak_abs(r1.polarization_series.values);
    const double dh_diff = std::abs(r1.delta_h - r2.delta_h);
    const double pol_diff =
        max_series_diff(r1.polarization_series.values, r2.polarization_series.values) / pk;

    // Subtraction disabled: instantaneous <H(t)> differs during the pulse,
    // while the post-pulse absorbed energy still matches.
    ScenarioConfig nobase = base;
    nobase.charge_neutral = false;
    ScenarioConfig noshift = shifted;
    noshift.charge_neutral = false;
    auto f3 = std::async(std::launch::async, run_one, nobase);
    const auto r4 = run_one(noshift);
    const auto r3 = f3.get();
    const double e_diff = max_series_diff(r3.energy_series.values, r4.energy_series.values);
    const double dh_diff_nosub = std::abs(r3.delta_h - r4.delta_h);

    const bool pass = dh_diff < 1e-7 && pol_diff < 1e-7 && e_diff > 1e-3 && dh_diff_nosub < 1e-7;
    report(5, pass, "origin independence",
           "with subtraction: dH diff " + fmt(dh_diff) + " eV, pol diff " + fmt(pol_diff) +
               " of peak; without: in-pulse <H> diff " + fmt(e_diff) + " eV, post-pulse dH diff " +
               fmt(dh_diff_nosub) + " eV");
}

// ---------------------------------------------------------------- criterion 6
// Inter-cell position elements of <= 1% of a leave the dynamics unchanged
// within 1e-3 of peak polarization.
void criterion_6() {
    // Builtin model plus small inter-cell elements, written to disk so both
    // paths consume the identical fixture.
    WannierModel m = builtin_tpa_model();
    const double eps = 0.01 * m.lattice_constant;
    m.positions.push_back({{1, 0, 0}, 1, 0, {cplx(eps), cplx(0.0), cplx(0.0)}});
    m.positions.push_back({{-1, 0, 0}, 0, 1, {cplx(eps), cplx(0.0), cplx(0.0)}});

    const auto dir = std::filesystem::temp_directory_path() / "pzw_acceptance";
    std::filesystem::create_directories(dir);
    const std::string hr = (dir / "intercell_hr.dat").string();
    const std::string rr = (dir / "intercell_r.dat").string();
    {
        std::ofstream(hr, std::ios::binary) << write_hr(m);
        std::ofstream(rr, std::ios::binary) << write_r(m);
    }

    ScenarioConfig c = scenario_defaults('a');
    c.model = "file";
    c.hr_path = hr;
    c.r_path = rr;
    c.lattice_constant_angstrom = m.lattice_constant;
    c.n_cells = 80;
    c.t_end_fs = 250.0;
    c.rtol = 1e-10;
    c.atol = 1e-12;

    ScenarioConfig inter = c;
    inter.include_intercell = true;

    auto run_one = [](const ScenarioConfig& cfg) { return run_scenario(cfg); };
    auto fut = std::async(std::launch::async, run_one, c);
    const auto with = run_one(inter);
    const auto without = fut.get();

    const double pk = peak_abs(without.polarization_series.values);
    const double diff =
        max_series_diff(with.polarization_series.values, without.polarization_series.values) / pk;
    report(6, diff < 1e-3, "inter-cell robustness",
           "polarization difference " + fmt(diff) + " of peak (tolerance 1e-3)");
}

// ---------------------------------------------------------------- criterion 7
// Long-wavelength breakdown for the tilted chain.
void criterion_7() {
    ScenarioConfig c = scenario_defaults('b');
    c.t_end_fs = 400.0;
    c.sweep_n_cells = {80, 160, 240, 320, 400, 480, 560, 680};
    c.sweep_interactions = {"dipole"};
    c.fidelity_durations_fs = {120.0, 400.0};

    const auto rows = sweep(c);
    std::ostringstream detail;
    bool pass = true;

    std::vector<double> ratios, f120, f400;
    for (const auto& row : rows) {
        if (row.failed) {
            pass = false;
            detail << "point N=" << row.n_cells << " failed: " << row.error << "; ";
            continue;
        }
        ratios.push_back(row.ratio);
        f120.push_back(row.fidelity.at("dipole")[0]);
        f400.push_back(row.fidelity.at("dipole")[1]);
    }

    // Early-time fidelity >= 0.95 while L_y <= 0.3 lambda.
    for (std::size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] <= 0.3 && f120[i] < 0.95) {
            pass = false;
            detail << "f(T=120) " << f120[i] << " < 0.95 at Ly/lambda=" << ratios[i] << "; ";
        }

    // Full-duration fidelity dips below 0.8 somewhere in (0.3, 1.2).
    bool dipped = false;
    for (std::size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] > 0.3 && ratios[i] < 1.2 && f400[i] < 0.8) dipped = true;
    if (!dipped) {
        pass = false;
        detail << "f(T=400) never fell below 0.8 in (0.3, 1.2); ";
    }

    // Oscillatory modulation: the decay is not monotonic.
    bool fell = false, rebounded = false;
    for (std::size_t i = 1; i < f400.size(); ++i) {
        if (f400[i] < f400[i - 1] - 0.005) fell = true;
        else if (fell && f400[i] > f400[i - 1] + 0.005) rebounded = true;
    }
    if (!rebounded) {
        pass = false;
        detail << "f(T=400) decayed monotonically; ";
    }

    detail << "f400:";
    for (std::size_t i = 0; i < ratios.size(); ++i) detail << " " << ratios[i] << "->" << f400[i];
    report(7, pass, "long-wavelength breakdown", detail.str());
}

// ---------------------------------------------------------------- criterion 8
// Harmonic selection rules for the tilted chain at N = 120.
void criterion_8() {
    ScenarioConfig c = scenario_defaults('b');
    c.n_cells = 120;
    c.t_end_fs = 400.0;
    c.dt_out_fs = 0.05;
    c.rtol = 1e-9;
    c.atol = 1e-11;

    const Workspace ws = build_workspace(c);
    auto fut = std::async(std::launch::async, run_async_pair, std::cref(ws), c, "dipole");
    const auto pzw = run_scenario(ws, c, "pzw");
    const auto dip = fut.get();

    const double omega0 = c.omega();
    const auto sp_pzw = power_spectrum(pzw.polarization_series, SpectralWindow::hann, 4, omega0);
    const auto sp_dip = power_spectrum(dip.polarization_series, SpectralWindow::hann, 4, omega0);

    const double dip_fund = peak_power(sp_dip, 0.75, 1.25);
    const double dip_second = peak_power(sp_dip, 1.75, 2.25);
    const double pzw_second = peak_power(sp_pzw, 1.75, 2.25);
    const double dip_low = peak_power(sp_dip, 0.0, 0.2);
    const double pzw_low = peak_power(sp_pzw, 0.0, 0.2);

    const bool pass = dip_second <= 1e-4 * dip_fund && pzw_second >= 10.0 * dip_second &&
                      pzw_low > dip_low;
    report(8, pass, "harmonic selection rules",
           "dipole SH/fundamental " + fmt(dip_second / dip_fund) + " (<=1e-4), PZW/dipole SH " +
               fmt(pzw_second / std::max(dip_second, 1e-300)) + " (>=10), low-freq PZW/dipole " +
               fmt(pzw_low / std::max(dip_low, 1e-300)) + " (>1)");
}

// ---------------------------------------------------------------- criterion 9
// Gauss-Legendre order convergence: absorbed energy at n_q = 6 matches
// n_q = 24 within 1e-8 relative.
void criterion_9() {
    ScenarioConfig c = scenario_defaults('a');
    c.n_cells = 400;
    c.t_end_fs = 250.0;
    c.rtol = 1e-11;
    c.atol = 1e-13;

    const Workspace ws = build_workspace(c);
    ScenarioConfig c6 = c;
    c6.n_q = 6;
    ScenarioConfig c24 = c;
    c24.n_q = 24;

    auto run_one = [&ws](const ScenarioConfig& cfg) { return run_scenario(ws, cfg, "pzw"); };
    auto fut = std::async(std::launch::async, run_one, c6);
    const auto r24 = run_one(c24);
    const auto r6 = fut.get();

    const double rel = std::abs(r6.delta_h - r24.delta_h) / std::abs(r24.delta_h);
    report(9, rel < 1e-8, "quadrature convergence",
           "dH(nq=6) = " + fmt(r6.delta_h) + " eV vs dH(nq=24) = " + fmt(r24.delta_h) +
               " eV, relative difference " + fmt(rel) + " (tolerance 1e-8)");
}

// --------------------------------------------------------------- criterion 10
// Expansion-point sensitivity on the synthetic bow-tie field.
void criterion_10() {
    const auto dir = std::filesystem::temp_directory_path() / "pzw_acceptance";
    std::filesystem::create_directories(dir);
    const std::string grid_path = (dir / "bowtie.field").string();
    {
        std::ofstream out(grid_path, std::ios::binary);
        out << write_field_grid(make_bowtie_fixture());
    }

    ScenarioConfig c = scenario_defaults('c');
    c.grid_path = grid_path;
    c.t_end_fs = 200.0;

    const Workspace ws = build_workspace(c);

    // (a) quadrupole-corrected ~ dipole when expanded at the center.
    auto fut_dip = std::async(std::launch::async, run_async_pair, std::cref(ws), c, "dipole");
    const auto quad = run_scenario(ws, c, "multipole:2");
    const auto dip = fut_dip.get();
    const double pk = peak_abs(dip.polarization_series.values);
    const double quad_diff =
        max_series_diff(quad.polarization_series.values, dip.polarization_series.values) / pk;

    // (b) moving the expansion point to x = 25 nm changes the dipole run by
    // more than 10% while full PZW is exactly unchanged.
    ScenarioConfig c25 = c;
    c25.expansion_x_nm = 25.0;
    auto fut_dip25 = std::async(std::launch::async, run_async_pair, std::cref(ws), c25, "dipole");
    const auto pzw0 = run_scenario(ws, c, "pzw");
    const auto dip25 = fut_dip25.get();
    const auto pzw25 = run_scenario(ws, c25, "pzw");

    const double dip_change = std::abs(dip25.delta_h - dip.delta_h) / std::abs(dip.delta_h);
    const bool pzw_identical =
        pzw0.delta_h == pzw25.delta_h &&
        max_series_diff(pzw0.polarization_series.values, pzw25.polarization_series.values) == 0.0;

    const bool pass = quad_diff < 1e-3 && dip_change > 0.10 && pzw_identical;
    report(10, pass, "expansion-point sensitivity",
           "quadrupole-vs-dipole pol diff " + fmt(quad_diff) + " (<1e-3), dipole dH change " +
               fmt(dip_change) + " (>0.10), PZW bit-identical: " +
               (pzw_identical ? "yes" : "no"));
}

// --------------------------------------------------------------- criterion 11
// Orbital propagation against direct Liouville-von Neumann integration on a
// 4-dimensional instance.
void criterion_11() {
    WannierModel model = builtin_tpa_model();
    for (auto& h : model.hoppings) {
        if (h.cell_offset[0] == 0 && h.m != h.n) h.value = -1.0;
        if (h.cell_offset[0] != 0 && h.m != h.n) h.value = -0.4;
    }
    ChainGeometry geom;
    geom.n_cells = 2;
    geom.tilt_theta = M_PI / 2.0;
    const auto hw = assemble_matter_hamiltonian(model, geom);
    const auto basis = diagonalize_position(assemble_position_operator(model, geom, false), false);
    const auto hm = to_modified_basis(hw, basis);
    const auto gs = ground_state(hm, 2);

    GaussianBeamField f;
    f.e0 = 0.05;
    f.omega = gs.homo_lumo_gap() / units::hbar;
    f.sigma = 20.0;
    f.t0 = 40.0;
    f.spot = std::numeric_limits<double>::infinity();
    const DriveField field(f);
    const auto h_lm = InteractionOperator::dipole(basis, field, {0, 0, 0}, gs.rho0_diagonal());

    PropagationOptions opt;
    opt.t_end = 100.0;
    opt.dt_out = 0.5;
    opt.rtol = 1e-10;
    opt.atol = 1e-12;
    opt.store_orbitals = true;
    const auto traj = propagate(hm, h_lm, gs.occupied_orbitals(), basis, opt);

    const Matrix hdense = hm.densify();
    const std::size_t n = 4;
    auto rhs = [&](double t, const Matrix& rho) {
        std::vector<double> d(n);
        h_lm.evaluate(t, d, nullptr);
        Matrix h = hdense;
        for (std::size_t i = 0; i < n; ++i) h(i, i) += d[i];
        const Matrix hr = multiply(h, rho);
        Matrix out(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                out(i, j) = cplx(0.0, -1.0 / units::hbar) * (hr(i, j) - std::conj(hr(j, i)));
        return out;
    };
    auto axpy = [&](const Matrix& a, const Matrix& b, double fac) {
        Matrix r = a;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) r(i, j) += fac * b(i, j);
        return r;
    };

    Matrix rho = density_matrix(gs.occupied_orbitals());
    const double h_rk = 1e-3;
    double t = 0.0;
    double worst = 0.0;
    std::size_t sample = 0;
    while (sample < traj.times.size()) {
        if (std::abs(t - traj.times[sample]) < h_rk / 2.0) {
            worst = std::max(worst, max_abs_diff(density_matrix(traj.snapshots[sample]), rho));
            ++sample;
        }
        if (t >= 100.0) break;
        const Matrix k1 = rhs(t, rho);
        const Matrix k2 = rhs(t + h_rk / 2, axpy(rho, k1, h_rk / 2));
        const Matrix k3 = rhs(t + h_rk / 2, axpy(rho, k2, h_rk / 2));
        const Matrix k4 = rhs(t + h_rk, axpy(rho, k3, h_rk));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                rho(i, j) += h_rk / 6.0 * (k1(i, j) + 2.0 * k2(i, j) + 2.0 * k3(i, j) + k4(i, j));
        t += h_rk;
    }
    report(11, worst < 1e-8 && sample == traj.times.size(), "small-instance Liouville oracle",
           "max |rho_orbital - rho_direct| element " + fmt(worst) + " over 100 fs (tolerance 1e-8)");
}

// --------------------------------------------------------------- criterion 12
// Two-level Rabi oracle: resonant weak drive of the HOMO-LUMO pair.
void criterion_12() {
    WannierModel model = builtin_tpa_model();
    for (auto& h : model.hoppings) {
        if (h.cell_offset[0] == 0 && h.m != h.n) h.value = -1.0;
        if (h.cell_offset[0] != 0 && h.m != h.n) h.value = -0.4;
    }
    ChainGeometry geom;
    geom.n_cells = 2;
    geom.tilt_theta = M_PI / 2.0;
    const auto hw = assemble_matter_hamiltonian(model, geom);
    const auto basis = diagonalize_position(assemble_position_operator(model, geom, false), false);
    const auto hm = to_modified_basis(hw, basis);
    const auto gs = ground_state(hm, 2);

    const double omega = gs.homo_lumo_gap() / units::hbar;
    cplx mu = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        mu += std::conj(gs.eig.vectors(i, 2)) * basis.lab_x(i) * gs.eig.vectors(i, 1);
    const double rabi = omega / 100.0;
    const double e0 = rabi * units::hbar / std::abs(mu);
    const double t_half = M_PI / rabi;

    GaussianBeamField f;
    f.e0 = e0;
    f.omega = omega;
    f.sigma = 1e8;
    f.t0 = 0.0;
    f.spot = std::numeric_limits<double>::infinity();
    const DriveField field(f);
    const auto h_lm = InteractionOperator::dipole(basis, field, {0, 0, 0}, gs.rho0_diagonal());

    PropagationOptions opt;
    opt.t_end = 1.15 * t_half;
    opt.dt_out = t_half / 400.0;
    opt.store_orbitals = true;
    const auto traj = propagate(hm, h_lm, gs.occupied_orbitals(), basis, opt);

    std::size_t imax = 0;
    double pmax = -1.0;
    std::vector<double> plumo(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        plumo[k] = populations(traj.snapshots[k], gs.eig)[2];
        if (plumo[k] > pmax) {
            pmax = plumo[k];
            imax = k;
        }
    }
    double t_peak = traj.times[imax];
    if (imax > 0 && imax + 1 < plumo.size()) {
        const double denom = plumo[imax - 1] - 2.0 * plumo[imax] + plumo[imax + 1];
        t_peak += 0.5 * (plumo[imax - 1] - plumo[imax + 1]) / denom * opt.dt_out;
    }
    const double rel = std::abs(t_peak - t_half) / t_half;
    report(12, rel < 0.01 && pmax > 0.98, "two-level Rabi oracle",
           "population maximum at t = " + fmt(t_peak) + " fs vs pi/Omega = " + fmt(t_half) +
               " fs, relative error " + fmt(rel) + " (tolerance 0.01)");
}

// --------------------------------------------------------------- criterion 13
// Writer/parser round trips are value-exact for hr, r, and field grids.
void criterion_13() {
    bool pass = true;
    std::string detail = "hr, r, and field-grid round trips bit-exact";

    const auto model = builtin_tpa_model();
    {
        std::istringstream in(write_hr(model));
        const auto parsed = parse_hr(in);
        for (const auto& orig : model.hoppings) {
            bool found = false;
            for (const auto& e : parsed.entries)
                if (e.cell_offset == orig.cell_offset && e.m == orig.m && e.n == orig.n &&
                    e.value == orig.value)
                    found = true;
            if (!found) {
                pass = false;
                detail = "hr round trip lost an entry";
            }
        }
    }
    {
        std::istringstream in(write_r(model));
        const auto entries = parse_r(in);
        for (const auto& orig : model.positions) {
            bool found = false;
            for (const auto& e : entries)
                if (e.cell_offset == orig.cell_offset && e.m == orig.m && e.n == orig.n &&
                    e.value == orig.value)
                    found = true;
            if (!found) {
                pass = false;
                detail = "r round trip lost an entry";
            }
        }
    }
    {
        const auto grid = make_bowtie_fixture();
        std::istringstream in(write_field_grid(grid));
        const auto back = parse_field_grid(in);
        if (!(back.frames == grid.frames && back.x0 == grid.x0 && back.dx == grid.dx &&
              back.t_start == grid.t_start && back.dt == grid.dt)) {
            pass = false;
            detail = "field-grid round trip not bit-exact";
        }
    }
    report(13, pass, "parser round trips", detail);
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

    using Fn = void (*)();
    const Fn criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                           criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
                           criterion_11, criterion_12, criterion_13};
    if (only > 0) {
        if (only < 1 || only > 13) {
            std::fprintf(stderr, "criterion out of range\n");
            return 2;
        }
        criteria[only - 1]();
    } else {
        for (Fn fn : criteria) fn();
    }
    return g_failures == 0 ? 0 : 1;
}
