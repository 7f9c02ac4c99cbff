#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heatsrc/regularizer.hpp"

namespace heatsrc::cli {

// Parsed run configuration. A JSON config file populates it; command-line
// flags override individual fields. Field semantics follow the subcommand
// documentation in the README.
struct RunConfig {
  struct ExperimentCfg {
    // Canonical kinds: "exact", "perturbed", "counterexample",
    // "custom-series". The legacy aliases "sec4-exact" and "sec4-perturbed"
    // are accepted and normalized to the canonical names.
    std::string kind = "exact";
    std::optional<double> m;  // perturbed: bump frequency (even integer >= 2)
    // custom-series payloads (lists of [k, n, c] triples):
    CosineSeries2D g0;
    CosineSeries2D g1;
    CosineSeries2D f_true;
    bool has_g1 = false;  // distinguishes "absent" from "explicitly zero"
    bool has_f_true = false;
    TimeProfile phi = TimeProfile::make_constant(1.0);
    bool has_phi = false;
  };
  struct ParamsCfg {
    RadiusStrategy strategy = RadiusStrategy::Power;
    std::optional<double> eps;   // defaults to 1/m for perturbed kind
    std::optional<double> beta;
    std::optional<double> q1;
    std::optional<double> delta_override;
  };
  struct GridCfg {
    int nx = 201;
    int ny = 201;
  };
  struct QuadCfg {
    std::optional<int> alpha_nodes;  // overrides the radius-derived rule
    std::string t_rule = "gauss";    // "gauss" | "simpson"
    int t_points = 256;              // total time nodes
  };
  struct OutputCfg {
    std::string dir = ".";
    bool csv = true;
    bool json = true;
  };

  ExperimentCfg experiment;
  ParamsCfg params;
  GridCfg grid;
  QuadCfg quadrature;
  OutputCfg output;
  // diagnose: which checks to run. Unset = full default set; explicitly empty
  // in the config = config error.
  std::optional<std::vector<std::string>> diagnostics_checks;
  // table1: noise levels; defaults to the fast rows, --long appends the slow
  // ones.
  std::vector<double> table_eps;
  bool long_rows = false;
};

// Reads and validates a JSON config file. Throws ConfigError on unreadable
// files, malformed JSON, unknown kinds/strategies, or out-of-range values.
RunConfig load_config(const std::string& path);

// Applies defaults and cross-field validation shared by all subcommands.
void finalize_config(RunConfig& cfg);

// Subcommand drivers. Each returns a process exit code: 0 success, 2 config
// error, 3 numerical failure. Outputs land in cfg.output.dir:
//   reconstruct -> field.csv (x,y,f_rec,f_true,abs_err), summary.json
//   table1     -> table1.csv (eps,R1,R2,delta,err_sq_f1,err_sq_f2,runtime_s)
//   diagnose   -> diagnostics.csv (name,value,bound,passed)
//   forward    -> g0.csv, g1.csv (x,y,value), forward.json
int run_reconstruct(RunConfig cfg);
int run_table1(RunConfig cfg);
int run_diagnose(RunConfig cfg);
int run_forward(RunConfig cfg);

// Shared helpers (exposed for tests).
Experiment build_experiment(const RunConfig& cfg);
RegularizationParams build_params(const RunConfig& cfg);
std::string format_double(double v);  // shortest round-trip decimal

}  // namespace heatsrc::cli
