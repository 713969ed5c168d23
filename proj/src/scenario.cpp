#include "pzw/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "pzw/errors.hpp"
#include "pzw/units.hpp"

namespace pzw {

using nlohmann::json;

void ScenarioConfig::validate() const {
    if (model != "builtin-tpa" && model != "file")
        throw ConfigError("model: expected 'builtin-tpa' or 'file', got '" + model + "'");
    if (model == "file") {
        if (hr_path.empty() || r_path.empty())
            throw ConfigError("model 'file' requires hr_path and r_path");
        if (!(lattice_constant_angstrom > 0.0))
            throw ConfigError("model 'file' requires lattice_constant_angstrom > 0");
        if (!std::filesystem::exists(hr_path)) throw ConfigError("hr_path does not exist: " + hr_path);
        if (!std::filesystem::exists(r_path)) throw ConfigError("r_path does not exist: " + r_path);
    }
    if (n_cells < 2) throw ConfigError("n_cells: must be >= 2");
    if (!(gamma >= 1.0)) throw ConfigError("gamma: must be >= 1");
    if (field != "gaussian" && field != "planewave" && field != "grid")
        throw ConfigError("field: expected gaussian|planewave|grid, got '" + field + "'");
    if (field == "grid") {
        if (grid_path.empty()) throw ConfigError("field 'grid' requires grid_path");
        if (!std::filesystem::exists(grid_path))
            throw ConfigError("grid_path does not exist: " + grid_path);
    } else {
        if (!(sigma_fs > 0.0)) throw ConfigError("sigma_fs: must be positive");
        if (!(lambda_nm > 0.0)) throw ConfigError("lambda_nm: must be positive");
    }
    if (interaction != "pzw" && interaction != "dipole" &&
        interaction.rfind("multipole:", 0) != 0)
        throw ConfigError("interaction: expected pzw|dipole|multipole:N, got '" + interaction + "'");
    if (n_q < 1 || n_q > 64) throw ConfigError("n_q: must be in [1, 64]");
    if (!(t_end_fs > 0.0)) throw ConfigError("t_end_fs: must be positive");
    if (!(dt_out_fs > 0.0)) throw ConfigError("dt_out_fs: must be positive");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("rtol/atol: must be positive");
    if (window != "none" && window != "hann")
        throw ConfigError("window: expected none|hann, got '" + window + "'");
    if (pad_factor < 1) throw ConfigError("pad_factor: must be >= 1");
    for (int n : sweep_n_cells)
        if (n < 2) throw ConfigError("sweep_n_cells: every entry must be >= 2");
}

double ScenarioConfig::omega() const {
    return 2.0 * M_PI * units::c_light / (lambda_nm * units::nm);
}

double ScenarioConfig::chain_length() const {
    double a = lattice_constant_angstrom;
    if (model == "builtin-tpa") a = 2.496;
    return double(n_cells) * gamma * a;
}

double ScenarioConfig::ratio_label_value() const {
    if (field == "gaussian" && spot_nm > 0.0) return chain_length() / (spot_nm * units::nm);
    return chain_length() * std::cos(tilt_theta_rad) / (lambda_nm * units::nm);
}

std::string ScenarioConfig::ratio_label() const {
    if (field == "gaussian" && spot_nm > 0.0) return "L_over_s";
    return "Ly_over_lambda";
}

ScenarioConfig scenario_defaults(char which) {
    ScenarioConfig c;
    switch (which) {
        case 'a':
            // Nonuniform illumination: beam spot smaller than the chain.
            c.field = "gaussian";
            c.spot_nm = 800.0;
            c.e0 = 0.005;
            c.gamma = 10.0;
            c.n_cells = 400;
            c.tilt_theta_rad = M_PI / 2.0;
            break;
        case 'b':
            // Long-wavelength limit: tilted chain, uniform spatial envelope.
            c.field = "planewave";
            c.e0 = 0.005;
            c.gamma = 10.0;
            c.n_cells = 400;
            c.tilt_theta_rad = M_PI / 6.0;
            break;
        case 'c':
            // Gridded bow-tie junction field, unscaled lattice.
            c.field = "grid";
            c.gamma = 1.0;
            c.n_cells = 400;
            c.tilt_theta_rad = M_PI / 2.0;
            c.t_end_fs = 200.0;
            c.e0 = 0.1;
            break;
        default:
            throw ConfigError("unknown scenario preset");
    }
    return c;
}

namespace {

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("config key '") + key + "' has the wrong type");
        }
    }
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "scenario", "model", "hr_path", "r_path", "lattice_constant_angstrom",
        "include_intercell", "n_cells", "gamma", "tilt_theta_rad", "center_chain",
        "origin_shift_angstrom", "field", "grid_path", "e0", "sigma_fs", "t0_fs", "lambda_nm",
        "spot_nm", "beam_center_x_nm", "beam_center_y_nm", "interaction", "n_q", "expansion_x_nm", "stencil_h_angstrom", "charge_neutral",
        "t_end_fs", "dt_out_fs", "rtol", "atol", "lift_diagonal_phase", "store_orbitals",
        "t0_pre_fs", "tf_post_fs", "fidelity_durations_fs", "window", "pad_factor",
        "sweep_n_cells", "sweep_interactions"};
    return keys;
}

} // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
            throw ConfigError("unknown config key '" + key + "'");

    ScenarioConfig c;
    if (j.contains("scenario")) {
        const std::string s = j.at("scenario").get<std::string>();
        if (s.size() != 1 || (s[0] != 'a' && s[0] != 'b' && s[0] != 'c'))
            throw ConfigError("scenario: expected 'a', 'b', or 'c'");
        c = scenario_defaults(s[0]);
    }
    read_key(j, "model", c.model);
    read_key(j, "hr_path", c.hr_path);
    read_key(j, "r_path", c.r_path);
    read_key(j, "lattice_constant_angstrom", c.lattice_constant_angstrom);
    read_key(j, "include_intercell", c.include_intercell);
    read_key(j, "n_cells", c.n_cells);
    read_key(j, "gamma", c.gamma);
    read_key(j, "tilt_theta_rad", c.tilt_theta_rad);
    read_key(j, "center_chain", c.center_chain);
    read_key(j, "origin_shift_angstrom", c.origin_shift_angstrom);
    read_key(j, "field", c.field);
    read_key(j, "grid_path", c.grid_path);
    read_key(j, "e0", c.e0);
    read_key(j, "sigma_fs", c.sigma_fs);
    read_key(j, "t0_fs", c.t0_fs);
    read_key(j, "lambda_nm", c.lambda_nm);
    read_key(j, "spot_nm", c.spot_nm);
    read_key(j, "beam_center_x_nm", c.beam_center_x_nm);
    read_key(j, "beam_center_y_nm", c.beam_center_y_nm);
    read_key(j, "interaction", c.interaction);
    read_key(j, "n_q", c.n_q);
    read_key(j, "expansion_x_nm", c.expansion_x_nm);
    read_key(j, "stencil_h_angstrom", c.stencil_h_angstrom);
    read_key(j, "charge_neutral", c.charge_neutral);
    read_key(j, "t_end_fs", c.t_end_fs);
    read_key(j, "dt_out_fs", c.dt_out_fs);
    read_key(j, "rtol", c.rtol);
    read_key(j, "atol", c.atol);
    read_key(j, "lift_diagonal_phase", c.lift_diagonal_phase);
    read_key(j, "store_orbitals", c.store_orbitals);
    read_key(j, "t0_pre_fs", c.t0_pre_fs);
    read_key(j, "tf_post_fs", c.tf_post_fs);
    read_key(j, "fidelity_durations_fs", c.fidelity_durations_fs);
    read_key(j, "window", c.window);
    read_key(j, "pad_factor", c.pad_factor);
    read_key(j, "sweep_n_cells", c.sweep_n_cells);
    read_key(j, "sweep_interactions", c.sweep_interactions);
    c.validate();
    return c;
}

std::string config_to_json_text(const ScenarioConfig& c) {
    json j;
    j["model"] = c.model;
    if (c.model == "file") {
        j["hr_path"] = c.hr_path;
        j["r_path"] = c.r_path;
        j["lattice_constant_angstrom"] = c.lattice_constant_angstrom;
    }
    j["include_intercell"] = c.include_intercell;
    j["n_cells"] = c.n_cells;
    j["gamma"] = c.gamma;
    j["tilt_theta_rad"] = c.tilt_theta_rad;
    j["center_chain"] = c.center_chain;
    j["origin_shift_angstrom"] = c.origin_shift_angstrom;
    j["field"] = c.field;
    if (c.field == "grid") j["grid_path"] = c.grid_path;
    j["e0"] = c.e0;
    j["sigma_fs"] = c.sigma_fs;
    j["t0_fs"] = c.t0_fs;
    j["lambda_nm"] = c.lambda_nm;
    j["spot_nm"] = c.spot_nm;
    j["beam_center_x_nm"] = c.beam_center_x_nm;
    j["beam_center_y_nm"] = c.beam_center_y_nm;
    j["interaction"] = c.interaction;
    j["n_q"] = c.n_q;
    j["expansion_x_nm"] = c.expansion_x_nm;
    j["stencil_h_angstrom"] = c.stencil_h_angstrom;
    j["charge_neutral"] = c.charge_neutral;
    j["t_end_fs"] = c.t_end_fs;
    j["dt_out_fs"] = c.dt_out_fs;
    j["rtol"] = c.rtol;
    j["atol"] = c.atol;
    j["lift_diagonal_phase"] = c.lift_diagonal_phase;
    j["store_orbitals"] = c.store_orbitals;
    j["t0_pre_fs"] = c.t0_pre_fs;
    j["tf_post_fs"] = c.tf_post_fs;
    j["fidelity_durations_fs"] = c.fidelity_durations_fs;
    j["window"] = c.window;
    j["pad_factor"] = c.pad_factor;
    j["sweep_n_cells"] = c.sweep_n_cells;
    j["sweep_interactions"] = c.sweep_interactions;
    return j.dump(2);
}

Workspace build_workspace(const ScenarioConfig& cfg) {
    cfg.validate();
    Workspace ws;
    ws.model = cfg.model == "builtin-tpa"
                   ? builtin_tpa_model()
                   : load_model(cfg.hr_path, cfg.r_path, cfg.lattice_constant_angstrom);

    ws.geom.n_cells = cfg.n_cells;
    ws.geom.gamma = cfg.gamma;
    ws.geom.tilt_theta = cfg.tilt_theta_rad;
    ws.geom.origin_shift = cfg.origin_shift_angstrom;
    if (cfg.center_chain) {
        // Chain coordinates span [0, (N-1) a + max intra-cell offset]; put
        // the midpoint of the scaled chain at the lab origin.
        const double a = ws.model.lattice_constant;
        double d_min = 0.0, d_max = 0.0;
        for (const auto& p : ws.model.positions)
            if (p.cell_offset == std::array<int, 3>{0, 0, 0} && p.m == p.n) {
                d_min = std::min(d_min, p.value[0].real());
                d_max = std::max(d_max, p.value[0].real());
            }
        const double span_center =
            0.5 * cfg.gamma * (double(cfg.n_cells - 1) * a + d_min + d_max);
        ws.geom.origin_shift[0] -= span_center * std::sin(cfg.tilt_theta_rad);
        ws.geom.origin_shift[1] -= span_center * std::cos(cfg.tilt_theta_rad);
    }

    const BandedMatrix h_wannier = assemble_matter_hamiltonian(ws.model, ws.geom);
    const PositionOperator pos = assemble_position_operator(ws.model, ws.geom, cfg.include_intercell);
    ws.basis = diagonalize_position(pos, cfg.include_intercell);
    ws.h_m = to_modified_basis(h_wannier, ws.basis);
    ws.gs = ground_state(ws.h_m, int(ws.h_m.dim()) / 2);

    const auto scaling = charge_scaling_pair(cfg.gamma);
    if (cfg.field == "gaussian") {
        GaussianBeamField f;
        f.e0 = cfg.e0;
        f.omega = cfg.omega();
        f.sigma = cfg.sigma_fs;
        f.t0 = cfg.t0_fs;
        f.spot = cfg.spot_nm > 0.0 ? cfg.spot_nm * units::nm
                                   : std::numeric_limits<double>::infinity();
        f.center_x = cfg.beam_center_x_nm * units::nm;
        f.center_y = cfg.beam_center_y_nm * units::nm;
        ws.field = DriveField(f);
    } else if (cfg.field == "planewave") {
        PlaneWaveField f;
        f.e0 = cfg.e0;
        f.omega = cfg.omega();
        f.sigma = cfg.sigma_fs;
        f.t0 = cfg.t0_fs;
        ws.field = DriveField(f);
    } else {
        std::ifstream in(cfg.grid_path);
        if (!in) throw ConfigError("cannot open grid file: " + cfg.grid_path);
        auto grid = std::make_shared<FieldGrid>(parse_field_grid(in));
        ws.field = DriveField(GriddedField(std::move(grid)));
    }
    ws.field.set_amplitude_scale(scaling.field_factor);
    return ws;
}

InteractionOperator build_interaction(const Workspace& ws, const ScenarioConfig& cfg,
                                      const std::string& kind) {
    std::vector<double> charge_ref;
    if (cfg.charge_neutral) charge_ref = ws.gs.rho0_diagonal();

    const Vec3 expansion{cfg.expansion_x_nm * units::nm, 0.0, 0.0};

    if (kind == "pzw")
        return InteractionOperator::pzw(ws.basis, ws.field, gauss_legendre(cfg.n_q),
                                        std::move(charge_ref));
    if (kind == "dipole")
        return InteractionOperator::dipole(ws.basis, ws.field, expansion, std::move(charge_ref));
    if (kind.rfind("multipole:", 0) == 0) {
        int order = 0;
        try {
            order = std::stoi(kind.substr(10));
        } catch (const std::exception&) {
            throw ConfigError("bad multipole order in '" + kind + "'");
        }
        if (order < 1) throw ConfigError("multipole order must be >= 1");

        const bool at_beam_center = std::holds_alternative<GaussianBeamField>(ws.field.spec()) &&
                                    cfg.expansion_x_nm == cfg.beam_center_x_nm &&
                                    cfg.beam_center_y_nm == 0.0;
        if (at_beam_center) {
            // Closed form: odd orders only; order 2m+1 keeps terms up to m.
            const int max_m = (order - 1) / 2;
            return InteractionOperator::multipole_gaussian(ws.basis, ws.field, max_m,
                                                           std::move(charge_ref));
        }
        double h = cfg.stencil_h_angstrom;
        if (h <= 0.0) {
            if (const auto* g = std::get_if<GriddedField>(&ws.field.spec()))
                h = g->grid().dx;
            else if (const auto* gb = std::get_if<GaussianBeamField>(&ws.field.spec());
                     gb && std::isfinite(gb->spot))
                h = gb->spot / 200.0;
            else
                h = cfg.lambda_nm * units::nm / 200.0;
        }
        return InteractionOperator::multipole_numeric(ws.basis, ws.field, expansion, order, h,
                                                      std::move(charge_ref));
    }
    throw ConfigError("unknown interaction kind '" + kind + "'");
}

RunResult run_scenario(const Workspace& ws, const ScenarioConfig& cfg, const std::string& kind) {
    RunResult r;
    r.resolved = cfg;
    r.resolved.interaction = kind;

    const InteractionOperator h_lm = build_interaction(ws, cfg, kind);

    PropagationOptions opt;
    opt.t_end = cfg.t_end_fs;
    opt.dt_out = cfg.dt_out_fs;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;
    opt.lift_diagonal_phase = cfg.lift_diagonal_phase;
    opt.store_orbitals = cfg.store_orbitals;

    const Matrix phi0 = ws.gs.occupied_orbitals();
    r.trajectory = propagate(ws.h_m, h_lm, phi0, ws.basis, opt);

    r.energy_series = TimeSeries{r.trajectory.times, r.trajectory.energy};
    r.polarization_series = TimeSeries{r.trajectory.times, r.trajectory.polarization};

    const double tf = cfg.tf_post_fs > 0.0 ? cfg.tf_post_fs : cfg.t_end_fs;
    const auto dh = absorbed_energy(r.energy_series, cfg.t0_pre_fs, tf);
    r.delta_h = dh.value;
    r.plateau = dh.plateau;

    r.eigenvalues = ws.gs.eig.values;
    r.fermi_energy = ws.gs.fermi_energy;
    r.populations_t0 = populations(phi0, ws.gs.eig);
    r.populations_tf = populations(r.trajectory.final_orbitals, ws.gs.eig);
    return r;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
    const Workspace ws = build_workspace(cfg);
    return run_scenario(ws, cfg, cfg.interaction);
}

std::string format_csv_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

unsigned long long fnv1a64(const std::string& bytes) {
    unsigned long long h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

void write_run_outputs(const RunResult& r, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::ostringstream ts;
    ts << "t_fs,energy_eV,polarization_eA\n";
    for (std::size_t i = 0; i < r.trajectory.times.size(); ++i)
        ts << format_csv_value(r.trajectory.times[i]) << ","
           << format_csv_value(r.trajectory.energy[i]) << ","
           << format_csv_value(r.trajectory.polarization[i]) << "\n";
    const std::string ts_path = out_dir + "/timeseries.csv";
    write_file_atomic(ts_path, ts.str());

    std::ostringstream pop;
    pop << "epsilon_eV,occ_t0,occ_tf\n";
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k)
        pop << format_csv_value(r.eigenvalues[k]) << ","
            << format_csv_value(r.populations_t0[k]) << ","
            << format_csv_value(r.populations_tf[k]) << "\n";
    const std::string pop_path = out_dir + "/populations.csv";
    write_file_atomic(pop_path, pop.str());

    json manifest;
    manifest["config"] = json::parse(config_to_json_text(r.resolved));
    manifest["delta_h_eV"] = r.delta_h;
    manifest["plateau"] = r.plateau;
    manifest["fermi_energy_eV"] = r.fermi_energy;
    manifest["n_steps"] = r.trajectory.n_steps;
    manifest["n_rhs"] = r.trajectory.n_rhs;
    manifest["max_norm_drift"] = r.trajectory.max_norm_drift;
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", fnv1a64(ts.str()));
    manifest["checksums"]["timeseries.csv"] = hex;
    std::snprintf(hex, sizeof hex, "%016llx", fnv1a64(pop.str()));
    manifest["checksums"]["populations.csv"] = hex;
    write_file_atomic(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

std::vector<SweepRow> sweep(const ScenarioConfig& base) {
    if (base.sweep_n_cells.empty()) throw ConfigError("sweep requires a nonempty n_cells list");

    std::vector<SweepRow> rows(base.sweep_n_cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= rows.size()) return;
            SweepRow& row = rows[idx];
            row.n_cells = base.sweep_n_cells[idx];
            ScenarioConfig cfg = base;
            cfg.n_cells = row.n_cells;
            row.ratio = cfg.ratio_label_value();
            try {
                const Workspace ws = build_workspace(cfg);
                const RunResult ref = run_scenario(ws, cfg, "pzw");
                row.delta_h_pzw = ref.delta_h;
                for (const auto& kind : base.sweep_interactions) {
                    const RunResult res = run_scenario(ws, cfg, kind);
                    row.delta_h[kind] = res.delta_h;
                    auto& fids = row.fidelity[kind];
                    for (double dur : base.fidelity_durations_fs)
                        fids.push_back(
                            fidelity(res.polarization_series, ref.polarization_series, dur));
                }
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
        }
    };

    unsigned n_threads = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("PZW_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n_threads = unsigned(v);
    }
    n_threads = std::max(1u, std::min<unsigned>(n_threads, unsigned(rows.size())));

    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const ScenarioConfig& base,
                     const std::string& path) {
    std::ostringstream out;
    out << "n_cells," << base.ratio_label() << ",status,delta_h_pzw_eV";
    for (const auto& kind : base.sweep_interactions) out << ",delta_h_" << kind << "_eV";
    for (const auto& kind : base.sweep_interactions)
        for (double dur : base.fidelity_durations_fs)
            out << ",fidelity_" << kind << "_T" << format_csv_value(dur);
    out << "\n";

    for (const auto& row : rows) {
        out << row.n_cells << "," << format_csv_value(row.ratio) << ","
            << (row.failed ? "failed" : "ok") << "," << format_csv_value(row.delta_h_pzw);
        for (const auto& kind : base.sweep_interactions) {
            const auto it = row.delta_h.find(kind);
            out << "," << (it == row.delta_h.end() ? "nan" : format_csv_value(it->second));
        }
        for (const auto& kind : base.sweep_interactions) {
            const auto it = row.fidelity.find(kind);
            for (std::size_t d = 0; d < base.fidelity_durations_fs.size(); ++d)
                out << ","
                    << (it == row.fidelity.end() || d >= it->second.size()
                            ? "nan"
                            : format_csv_value(it->second[d]));
        }
        out << "\n";
    }

    if (!path.empty()) {
        std::filesystem::create_directories(std::filesystem::path(path).parent_path().string().empty()
                                                ? "."
                                                : std::filesystem::path(path).parent_path().string());
        write_file_atomic(path, out.str());
    }
}

FieldGrid make_bowtie_fixture() {
    FieldGrid g;
    g.x0 = -500.0;  // Angstrom: the 100 nm gap
    g.dx = 10.0;    // 1 nm spacing
    g.nx = 101;
    g.t_start = 0.0;
    g.dt = 0.25;  // fs
    g.nt = 801;   // 200 fs
    g.frames.resize(std::size_t(g.nt) * std::size_t(g.nx));

    // Tip enhancement: flat near the gap center, symmetric peaks toward the
    // metal edges at +-50 nm.
    const double e0 = 0.1;          // V/Angstrom incident strength
    const double enhancement = 2.0; // tip amplitude on top of the incident field
    const double tip_x = 500.0;     // Angstrom
    const double tip_width = 150.0; // Angstrom
    const double sigma = 20.8;      // fs
    const double t0 = 80.0;         // fs
    const double omega = 2.0 * M_PI * units::c_light / 7380.0;  // 738 nm

    for (int j = 0; j < g.nt; ++j) {
        const double t = g.t_start + g.dt * double(j);
        const double dt = (t - t0) / sigma;
        const double carrier = std::exp(-dt * dt) * std::cos(omega * (t - t0));
        for (int p = 0; p < g.nx; ++p) {
            const double x = g.x0 + g.dx * double(p);
            const double lobe_p = (x - tip_x) / tip_width;
            const double lobe_m = (x + tip_x) / tip_width;
            const double profile =
                1.0 + enhancement * (std::exp(-lobe_p * lobe_p) + std::exp(-lobe_m * lobe_m));
            g.frames[std::size_t(j) * std::size_t(g.nx) + std::size_t(p)] = e0 * profile * carrier;
        }
    }
    return g;
}

} // namespace pzw
