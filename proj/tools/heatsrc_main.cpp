#include <charconv>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "heatsrc/cli.hpp"
#include "heatsrc/errors.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string strategy;
  std::string grid;
  double m = 0.0;
  bool long_rows = false;
};

void add_common_options(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "JSON config file");
  sub->add_option("--out", f.out_dir, "output directory (default: config or .)");
  sub->add_option("--strategy", f.strategy,
                  "truncation radius strategy: log|power");
  sub->add_option("--m", f.m,
                  "perturbed-data bump frequency (even integer >= 2); implies "
                  "the perturbed experiment");
  sub->add_option("--grid", f.grid, "output grid as <nx>x<ny>, e.g. 201x201");
  sub->add_flag("--long", f.long_rows, "enable the long benchmark rows");
}

bool parse_grid(const std::string& s, int& nx, int& ny) {
  const auto sep = s.find('x');
  if (sep == std::string::npos) return false;
  const char* b = s.data();
  auto r1 = std::from_chars(b, b + sep, nx);
  auto r2 = std::from_chars(b + sep + 1, b + s.size(), ny);
  return r1.ec == std::errc{} && r1.ptr == b + sep && r2.ec == std::errc{} &&
         r2.ptr == b + s.size();
}

int apply_overrides(const CLI::App* sub, const CommonFlags& f,
                    heatsrc::cli::RunConfig& cfg) {
  if (sub->count("--out") > 0) cfg.output.dir = f.out_dir;
  if (sub->count("--strategy") > 0) {
    if (f.strategy == "log")
      cfg.params.strategy = heatsrc::RadiusStrategy::Log;
    else if (f.strategy == "power")
      cfg.params.strategy = heatsrc::RadiusStrategy::Power;
    else {
      std::cerr << "config error: --strategy must be log or power\n";
      return 2;
    }
  }
  if (sub->count("--m") > 0) {
    cfg.experiment.m = f.m;
    if (cfg.experiment.kind == "exact") cfg.experiment.kind = "perturbed";
  }
  if (sub->count("--grid") > 0) {
    int nx = 0, ny = 0;
    if (!parse_grid(f.grid, nx, ny)) {
      std::cerr << "config error: --grid expects <nx>x<ny>, e.g. 201x201\n";
      return 2;
    }
    cfg.grid.nx = nx;
    cfg.grid.ny = ny;
  }
  if (f.long_rows) cfg.long_rows = true;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat-source factor reconstruction from initial/final data"};
  app.require_subcommand(1);

  CommonFlags flags;
  CLI::App* sc_rec = app.add_subcommand(
      "reconstruct", "Recover the source factor; writes field.csv, summary.json");
  CLI::App* sc_tab = app.add_subcommand(
      "table1", "Benchmark error table over noise levels; writes table1.csv");
  CLI::App* sc_diag = app.add_subcommand(
      "diagnose", "Spectral sanity checks; writes diagnostics.csv");
  CLI::App* sc_fwd = app.add_subcommand(
      "forward", "Emit the initial/final data grids; writes g0.csv, g1.csv");
  for (CLI::App* sub : {sc_rec, sc_tab, sc_diag, sc_fwd})
    add_common_options(sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  heatsrc::cli::RunConfig cfg;
  if (sub->count("--config") > 0) {
    try {
      cfg = heatsrc::cli::load_config(flags.config_path);
    } catch (const heatsrc::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
  }
  if (const int rc = apply_overrides(sub, flags, cfg); rc != 0) return rc;

  if (sub == sc_rec) return heatsrc::cli::run_reconstruct(cfg);
  if (sub == sc_tab) return heatsrc::cli::run_table1(cfg);
  if (sub == sc_diag) return heatsrc::cli::run_diagnose(cfg);
  return heatsrc::cli::run_forward(cfg);
}
