#ifndef PZW_SCENARIO_HPP
#define PZW_SCENARIO_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pzw/dynamics.hpp"
#include "pzw/observables.hpp"

namespace pzw {

// Declarative description of one simulation.  Interface units are nm / fs /
// eV / V/Angstrom; lengths are converted to Angstrom internally.
struct ScenarioConfig {
    // model
    std::string model = "builtin-tpa";  // builtin-tpa | file
    std::string hr_path, r_path;
    double lattice_constant_angstrom = 0.0;  // required for file models
    bool include_intercell = false;

    // geometry
    int n_cells = 400;
    double gamma = 10.0;
    double tilt_theta_rad = M_PI / 2.0;  // pi/2: chain along x (polarization)
    bool center_chain = true;            // place the chain center at the lab origin
    std::array<double, 3> origin_shift_angstrom{0.0, 0.0, 0.0};  // additional shift

    // field; spot_nm <= 0 means an infinite spot (no spatial envelope)
    std::string field = "gaussian";  // gaussian | planewave | grid
    std::string grid_path;
    double e0 = 0.005;       // V/Angstrom, before the 1/gamma scaling
    double sigma_fs = 20.0;
    double t0_fs = 80.0;
    double lambda_nm = 738.0;
    double spot_nm = 800.0;
    double beam_center_x_nm = 0.0, beam_center_y_nm = 0.0;

    // interaction: pzw | dipole | multipole:N  (N = highest multipole order)
    std::string interaction = "pzw";
    int n_q = 12;
    double expansion_x_nm = 0.0;
    double stencil_h_angstrom = 0.0;  // 0: grid dx for gridded fields, spot/200 otherwise
    bool charge_neutral = true;

    // propagation
    double t_end_fs = 400.0;
    double dt_out_fs = 0.1;
    double rtol = 1e-8;
    double atol = 1e-10;
    bool lift_diagonal_phase = true;
    bool store_orbitals = false;

    // observables
    double t0_pre_fs = 0.0;
    double tf_post_fs = -1.0;  // < 0: end of run
    std::vector<double> fidelity_durations_fs{120.0, 400.0};
    std::string window = "none";  // none | hann
    int pad_factor = 4;

    // sweep
    std::vector<int> sweep_n_cells;
    std::vector<std::string> sweep_interactions{"dipole"};

    void validate() const;
    double omega() const;            // rad/fs from lambda_nm
    double chain_length() const;     // L = N gamma a (Angstrom)
    double ratio_label_value() const;  // L/s (gaussian) or L_y/lambda (otherwise)
    std::string ratio_label() const;
};

ScenarioConfig scenario_defaults(char which);  // 'a', 'b', or 'c'

ScenarioConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ScenarioConfig& cfg);

// Model/basis/ground-state bundle reused across interaction kinds.
struct Workspace {
    WannierModel model;
    ChainGeometry geom;
    ModifiedBasis basis;
    MatterOperator h_m;
    GroundState gs;
    DriveField field;

    Workspace() : field(GaussianBeamField{}) {}
};

Workspace build_workspace(const ScenarioConfig& cfg);

InteractionOperator build_interaction(const Workspace& ws, const ScenarioConfig& cfg,
                                      const std::string& kind);

struct RunResult {
    ScenarioConfig resolved;
    Trajectory trajectory;
    TimeSeries energy_series;
    TimeSeries polarization_series;
    double delta_h = 0.0;
    bool plateau = true;
    std::vector<double> eigenvalues;  // of H_M
    std::vector<double> populations_t0, populations_tf;
    double fermi_energy = 0.0;
};

RunResult run_scenario(const ScenarioConfig& cfg);
RunResult run_scenario(const Workspace& ws, const ScenarioConfig& cfg, const std::string& kind);

// Writes timeseries.csv, populations.csv, and manifest.json under out_dir.
void write_run_outputs(const RunResult& result, const std::string& out_dir);

struct SweepRow {
    int n_cells = 0;
    double ratio = 0.0;
    bool failed = false;
    std::string error;
    double delta_h_pzw = 0.0;
    std::map<std::string, double> delta_h;                       // per interaction kind
    std::map<std::string, std::vector<double>> fidelity;         // per kind, per duration
};

// Runs full-PZW plus every configured comparison interaction at each chain
// length; points run in parallel (PZW_THREADS caps the worker count) and
// per-point failures are flagged in the row instead of aborting the sweep.
std::vector<SweepRow> sweep(const ScenarioConfig& base);

void write_sweep_csv(const std::vector<SweepRow>& rows, const ScenarioConfig& base,
                     const std::string& path);

// Synthetic stand-in for the bow-tie junction field: flat center, symmetric
// tip enhancement near the gap edges, Gaussian-in-time carrier.  Not a
// Maxwell solution; real FDTD output is supplied via `--field grid:FILE`.
FieldGrid make_bowtie_fixture();

std::string format_csv_value(double v);  // fixed 12 significant digits
unsigned long long fnv1a64(const std::string& bytes);

} // namespace pzw

#endif
