// Command-line front end: scenario runs, chain-length sweeps, spectra, and
// fixture generation.  Exit codes: 0 success, 1 configuration error, 2
// numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pzw/errors.hpp"
#include "pzw/scenario.hpp"
#include "pzw/units.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string scenario;
    std::string model;
    std::string hr_path, r_path;
    double lattice_constant = -1.0;
    int n_cells = -1;
    double gamma = -1.0;
    double theta_rad = std::nan("");
    std::string field;
    double e0 = std::nan("");
    double sigma_fs = std::nan("");
    double t0_fs = std::nan("");
    double lambda_nm = std::nan("");
    double spot_nm = std::nan("");
    std::string interaction;
    int n_q = -1;
    double expansion_x_nm = std::nan("");
    double t_end_fs = std::nan("");
    double dt_out_fs = std::nan("");
    double rtol = std::nan("");
    double atol = std::nan("");
    int charge_neutral = -1;
    int intercell = -1;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--scenario", f.scenario, "preset: a (nonuniform beam), b (tilted chain), c (gridded junction)");
    cmd->add_option("--model", f.model, "builtin-tpa, or 'file' with --hr/--r");
    cmd->add_option("--hr", f.hr_path, "Wannier90-style _hr.dat file");
    cmd->add_option("--r", f.r_path, "Wannier90-style _r.dat file");
    cmd->add_option("--a-angstrom", f.lattice_constant, "lattice constant for file models");
    cmd->add_option("--n-cells", f.n_cells, "number of unit cells");
    cmd->add_option("--gamma", f.gamma, "position scaling factor");
    cmd->add_option("--theta-rad", f.theta_rad, "chain tilt from the +y axis");
    cmd->add_option("--field", f.field, "gaussian | planewave | grid:FILE");
    cmd->add_option("--e0", f.e0, "field amplitude (V/Angstrom)");
    cmd->add_option("--sigma-fs", f.sigma_fs, "temporal width");
    cmd->add_option("--t0-fs", f.t0_fs, "envelope center");
    cmd->add_option("--lambda-nm", f.lambda_nm, "wavelength");
    cmd->add_option("--spot-nm", f.spot_nm, "beam spot size (<= 0: infinite)");
    cmd->add_option("--interaction", f.interaction, "pzw | dipole | multipole:N");
    cmd->add_option("--nq", f.n_q, "Gauss-Legendre quadrature order");
    cmd->add_option("--expansion-x", f.expansion_x_nm, "expansion point on x (nm)");
    cmd->add_option("--t-end-fs", f.t_end_fs, "propagation end time");
    cmd->add_option("--dt-out-fs", f.dt_out_fs, "output sample spacing");
    cmd->add_option("--rtol", f.rtol, "relative tolerance");
    cmd->add_option("--atol", f.atol, "absolute tolerance");
    cmd->add_option("--charge-neutral", f.charge_neutral, "1: subtract rho(0) (default), 0: disable");
    cmd->add_option("--intercell", f.intercell, "1: retain inter-cell position elements");
}

pzw::ScenarioConfig resolve_config(const CommonFlags& f) {
    pzw::ScenarioConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw pzw::ConfigError("cannot open config: " + f.config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = pzw::config_from_json_text(ss.str());
    } else if (!f.scenario.empty()) {
        if (f.scenario.size() != 1) throw pzw::ConfigError("scenario must be a, b, or c");
        cfg = pzw::scenario_defaults(f.scenario[0]);
    }
    if (!f.scenario.empty() && !f.config_path.empty())
        throw pzw::ConfigError("give either --config or --scenario, not both");

    if (!f.model.empty()) cfg.model = f.model;
    if (!f.hr_path.empty()) {
        cfg.model = "file";
        cfg.hr_path = f.hr_path;
    }
    if (!f.r_path.empty()) cfg.r_path = f.r_path;
    if (f.lattice_constant > 0.0) cfg.lattice_constant_angstrom = f.lattice_constant;
    if (f.n_cells > 0) cfg.n_cells = f.n_cells;
    if (f.gamma > 0.0) cfg.gamma = f.gamma;
    if (!std::isnan(f.theta_rad)) cfg.tilt_theta_rad = f.theta_rad;
    if (!f.field.empty()) {
        if (f.field.rfind("grid:", 0) == 0) {
            cfg.field = "grid";
            cfg.grid_path = f.field.substr(5);
        } else {
            cfg.field = f.field;
        }
    }
    if (!std::isnan(f.e0)) cfg.e0 = f.e0;
    if (!std::isnan(f.sigma_fs)) cfg.sigma_fs = f.sigma_fs;
    if (!std::isnan(f.t0_fs)) cfg.t0_fs = f.t0_fs;
    if (!std::isnan(f.lambda_nm)) cfg.lambda_nm = f.lambda_nm;
    if (!std::isnan(f.spot_nm)) cfg.spot_nm = f.spot_nm;
    if (!f.interaction.empty()) cfg.interaction = f.interaction;
    if (f.n_q > 0) cfg.n_q = f.n_q;
    if (!std::isnan(f.expansion_x_nm)) cfg.expansion_x_nm = f.expansion_x_nm;
    if (!std::isnan(f.t_end_fs)) cfg.t_end_fs = f.t_end_fs;
    if (!std::isnan(f.dt_out_fs)) cfg.dt_out_fs = f.dt_out_fs;
    if (!std::isnan(f.rtol)) cfg.rtol = f.rtol;
    if (!std::isnan(f.atol)) cfg.atol = f.atol;
    if (f.charge_neutral >= 0) cfg.charge_neutral = f.charge_neutral != 0;
    if (f.intercell >= 0) cfg.include_intercell = f.intercell != 0;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laser-driven tight-binding dynamics with full multipolar (PZW) light-matter coupling"};
    app.require_subcommand(1);

    CommonFlags run_flags, sweep_flags, val_flags;
    std::string run_out = "out";
    auto* run_cmd = app.add_subcommand("run", "run one scenario and write CSV outputs");
    add_common_flags(run_cmd, run_flags);
    run_cmd->add_option("--out", run_out, "output directory");

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep chain length against full-PZW reference");
    add_common_flags(sweep_cmd, sweep_flags);
    std::vector<int> sweep_cells;
    std::vector<std::string> sweep_kinds;
    std::string sweep_out = "sweep.csv";
    sweep_cmd->add_option("--cells", sweep_cells, "n_cells list")->delimiter(',');
    sweep_cmd->add_option("--kinds", sweep_kinds, "interaction kinds to compare")->delimiter(',');
    sweep_cmd->add_option("--out", sweep_out, "summary CSV path");

    auto* spec_cmd = app.add_subcommand("spectrum", "polarization-acceleration power spectrum from timeseries.csv");
    std::string spec_in, spec_out = "spectrum.csv", spec_window = "none";
    int spec_pad = 4;
    double spec_lambda_nm = 738.0;
    spec_cmd->add_option("--in", spec_in, "timeseries.csv from a run")->required();
    spec_cmd->add_option("--out", spec_out, "spectrum CSV path");
    spec_cmd->add_option("--window", spec_window, "none | hann");
    spec_cmd->add_option("--pad-factor", spec_pad, "zero-padding factor");
    spec_cmd->add_option("--lambda-nm", spec_lambda_nm, "drive wavelength for the harmonic axis");

    auto* fix_cmd = app.add_subcommand("fixture", "generate fixture files");
    std::string fix_kind, fix_out = "bowtie.field";
    fix_cmd->add_option("kind", fix_kind, "bowtie")->required();
    fix_cmd->add_option("--out", fix_out, "output path");

    auto* val_cmd = app.add_subcommand("validate-config", "validate a config and echo the resolved form");
    add_common_flags(val_cmd, val_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto cfg = resolve_config(run_flags);
            const auto result = pzw::run_scenario(cfg);
            pzw::write_run_outputs(result, run_out);
            std::cout << "delta_h_eV = " << pzw::format_csv_value(result.delta_h) << "\n";
            if (!result.plateau)
                std::cerr << "warning: tf_post lies inside the pulse window; "
                             "delta H is not yet a plateau value\n";
            std::cout << "wrote " << run_out << "/timeseries.csv, populations.csv, manifest.json\n";
        } else if (sweep_cmd->parsed()) {
            auto cfg = resolve_config(sweep_flags);
            if (!sweep_cells.empty()) cfg.sweep_n_cells = sweep_cells;
            if (!sweep_kinds.empty()) cfg.sweep_interactions = sweep_kinds;
            const auto rows = pzw::sweep(cfg);
            pzw::write_sweep_csv(rows, cfg, sweep_out);
            int failed = 0;
            for (const auto& row : rows)
                if (row.failed) {
                    ++failed;
                    std::cerr << "point n_cells=" << row.n_cells << " failed: " << row.error << "\n";
                }
            std::cout << "wrote " << sweep_out << " (" << rows.size() - std::size_t(failed) << "/"
                      << rows.size() << " points ok)\n";
            if (failed == int(rows.size())) return 2;
        } else if (spec_cmd->parsed()) {
            std::ifstream in(spec_in);
            if (!in) throw pzw::ConfigError("cannot open " + spec_in);
            std::string line;
            if (!std::getline(in, line) || line.rfind("t_fs,", 0) != 0)
                throw pzw::ParseError("expected a timeseries.csv header");
            pzw::TimeSeries pol;
            while (std::getline(in, line)) {
                double t, e, p;
                if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &e, &p) != 3)
                    throw pzw::ParseError("bad timeseries row: " + line);
                pol.times.push_back(t);
                pol.values.push_back(p);
            }
            const double omega0 = 2.0 * M_PI * pzw::units::c_light / (spec_lambda_nm * pzw::units::nm);
            const auto window = spec_window == "hann" ? pzw::SpectralWindow::hann
                                                      : pzw::SpectralWindow::none;
            const auto spec = pzw::power_spectrum(pol, window, spec_pad, omega0);
            std::ostringstream out;
            out << "omega_over_omega0,power\n";
            for (std::size_t k = 0; k < spec.frequencies.size(); ++k)
                out << pzw::format_csv_value(spec.frequencies[k] / omega0) << ","
                    << pzw::format_csv_value(spec.power[k]) << "\n";
            std::ofstream of(spec_out, std::ios::binary);
            of << out.str();
            std::cout << "wrote " << spec_out << "\n";
        } else if (fix_cmd->parsed()) {
            if (fix_kind != "bowtie") throw pzw::ConfigError("unknown fixture kind: " + fix_kind);
            const auto grid = pzw::make_bowtie_fixture();
            std::ofstream out(fix_out, std::ios::binary);
            if (!out) throw pzw::ConfigError("cannot write " + fix_out);
            out << pzw::write_field_grid(grid);
            std::cout << "wrote " << fix_out << "\n";
        } else if (val_cmd->parsed()) {
            const auto cfg = resolve_config(val_flags);
            std::cout << pzw::config_to_json_text(cfg) << "\n";
        }
    } catch (const pzw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const pzw::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
