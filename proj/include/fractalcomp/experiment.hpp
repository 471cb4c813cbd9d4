#pragma once

// Experiment runner: named sweeps over thresholds, cooperative-set sizes, and
// SBS intensities, executed by both engines and persisted as CSV plus a JSON
// summary that round-trips as a config. Output is byte-identical for a fixed
// spec regardless of worker count.

#include <string>
#include <vector>

#include "fractalcomp/analytic.hpp"
#include "fractalcomp/model.hpp"
#include "fractalcomp/montecarlo.hpp"

namespace fractalcomp {

// Named presets: fig2 (mean cooperative count and users per SBS vs threshold),
// fig3 (distance-rule rate vs k), fig4 (threshold rate vs threshold),
// fig5 (energy efficiency vs threshold), table1 (paired k/threshold rows with
// both rates and the relative gain), custom (caller-specified metric).
struct ExperimentSpec {
    std::string name = "custom";
    std::string metric = "rate_power";  // custom runs only; one of rate_distance,
                                        // rate_power, coop_count, ue_per_sbs, eta
    std::vector<double> t_dbm;          // threshold sweep, dBm
    std::vector<int> k_list;            // cooperative-set sweep
    std::vector<double> c_list;         // per-curve intensity idiom lambda_b = 1/(pi c^2);
                                        // empty -> use config.lambda_b as the only curve
    bool engine_mc = true;
    bool engine_analytic = true;
    std::string output_dir = "results";
    bool run_truncation_check = true;

    NetworkConfig config = NetworkConfig::defaults();
    PathLossLaw law;
    McPlan mc;
    QuadSpec quad;
    bool quad_r_max_explicit = false;  // false -> quad.r_max follows mc.window_radius
};

// Fill empty sweep lists from the named preset, tie the quadrature window to
// the simulation window unless set explicitly, and validate: known name and
// metric, nonempty resolved sweep, at least one engine, table1 pairing
// aligned. Throws std::invalid_argument on violations.
void resolve(ExperimentSpec& spec);

// Parse a config file: JSON when the first non-space byte is '{', otherwise
// INI ([network], [pathloss], [mc], [quad], [experiment] sections). Unknown
// sections or keys are errors; a JSON "results" section is ignored so a run
// summary can be fed back in as a config.
ExperimentSpec load_config(const std::string& path);

// Replace the engine flags from a comma list ("mc,analytic", spaces allowed).
// Throws std::invalid_argument on anything else.
void set_engines(ExperimentSpec& spec, const std::string& list);

struct RunResult {
    bool checks_passed = true;
    std::vector<std::string> csv_paths;
    std::string summary_path;
    std::vector<std::string> messages;  // human-readable diagnostics
};

// Execute the sweep: one CSV per engine per metric (per intensity curve) with
// columns param_name,param_value,metric,value,half_width,n_trials,seed, plus
// a JSON summary embedding the resolved config, wall-clock per point, and the
// truncation-check outcome. checks_passed reflects the truncation check.
RunResult run(const ExperimentSpec& spec);

struct CompareRow {
    std::string param_name;
    std::string param_value;
    std::string metric;
    double mc_value = 0.0;
    double mc_half_width = 0.0;
    double an_value = 0.0;
    double an_half_width = 0.0;
    double gap = 0.0;        // |mc - analytic|
    double tolerance = 0.0;  // analytic error + k_sigma * mc standard error
    bool ok = false;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    int n_pass = 0;
    int n_fail = 0;
    bool ok() const { return n_fail == 0 && !rows.empty(); }
};

// Point-by-point oracle gate between the two engines:
// |mc - analytic| <= analytic_half_width + k_sigma * (mc_half_width / 1.96).
// Rows are matched on (param_name, param_value, metric); throws
// std::runtime_error listing the missing points when the grids differ.
CompareReport compare_files(const std::string& mc_csv, const std::string& analytic_csv,
                            double k_sigma = 3.0);

}  // namespace fractalcomp
