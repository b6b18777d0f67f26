#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdcqed/config.hpp"
#include "pdcqed/errors.hpp"
#include "pdcqed/kernels.hpp"
#include "pdcqed/output.hpp"
#include "pdcqed/presets.hpp"
#include "pdcqed/scenarios.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pdc;

// Relative output paths land in --out-dir.
std::string place(const std::string& out_dir, const std::string& path) {
  if (path.empty() || out_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(out_dir) / path).string();
}

void place_outputs(ConfigDocument& doc, const std::string& out_dir) {
  if (out_dir.empty()) return;
  fs::create_directories(out_dir);
  doc.scenario.output.csv = place(out_dir, doc.scenario.output.csv);
  doc.scenario.output.summary = place(out_dir, doc.scenario.output.summary);
  doc.sweep.output = place(out_dir, doc.sweep.output);
  doc.compare.output_csv = place(out_dir, doc.compare.output_csv);
  doc.compare.output_summary = place(out_dir, doc.compare.output_summary);
  doc.couplings.output = place(out_dir, doc.couplings.output);
}

RunOptions run_options(bool quiet) {
  RunOptions o;
  if (!quiet) o.log = [](const std::string& m) { std::cerr << "[pdcqed] " << m << '\n'; };
  return o;
}

int do_run(ConfigDocument doc, bool quiet) {
  if (doc.type == "couplings") {
    const auto rows = coupling_table(doc.couplings);
    write_coupling_csv(std::cout, rows);
    if (!doc.couplings.output.empty()) write_coupling_csv(doc.couplings.output, rows);
    return 0;
  }
  if (doc.type != "run") throw ConfigError("'run' expects a run or couplings document, got '" + doc.type + "'");
  const auto res = run_scenario(doc.scenario, run_options(quiet));
  std::cout << res.summary.dump(2) << '\n';
  return 0;
}

int do_sweep(ConfigDocument doc, bool quiet, int jobs) {
  if (doc.type != "sweep") throw ConfigError("'sweep' expects a sweep document, got '" + doc.type + "'");
  if (jobs > 0) doc.sweep.jobs = jobs;
  const auto rows = run_sweep(doc.sweep, doc.scenario, run_options(quiet));
  write_sweep_csv(std::cout, rows, doc.sweep.parameter);
  for (const auto& r : rows)
    if (!r.ok) return 3;
  return 0;
}

int do_compare(ConfigDocument doc, bool quiet) {
  if (doc.type != "compare") throw ConfigError("'compare' expects a compare document, got '" + doc.type + "'");
  ScenarioConfig base = doc.scenario;
  base.output.csv = doc.compare.output_csv;
  base.output.summary = doc.compare.output_summary;
  const auto res = compare_methods(base, doc.compare.methods, run_options(quiet));
  std::cout << res.summary.dump(2) << '\n';
  return 0;
}

int do_calibrate(const ConfigDocument& doc) {
  if (doc.type != "run") throw ConfigError("'calibrate-drive' expects a run document");
  const auto cal = calibrate_from_config(doc.scenario);
  nlohmann::json j = {{"amplitude", cal.amplitude}, {"n1", cal.n1}, {"iterations", cal.iterations}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int do_validate(const ConfigDocument& doc) {
  nlohmann::json j = {{"type", doc.type}, {"valid", true}};
  if (doc.type == "run" || doc.type == "sweep" || doc.type == "compare") {
    doc.scenario.validate();
    const auto m = estimate_memory(doc.scenario);
    j["name"] = doc.scenario.name;
    j["dimension"] = m.dimension;
    j["basis"] = m.shape;
    j["memory_estimate_mb"] = m.total_mb;
    j["memory_budget_mb"] = memory_budget_mb(doc.scenario);
    j["fits_budget"] = m.total_mb <= memory_budget_mb(doc.scenario);
  }
  if (doc.type == "sweep") {
    for (double v : doc.sweep.values) apply_sweep_value(doc.scenario, doc.sweep, v);
    j["rows"] = doc.sweep.values.size();
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int do_list() {
  for (const auto& p : list_presets()) std::cout << p.name << '\t' << p.type << '\t' << p.description << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric down-conversion in cavity QED: scenario runner"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (default: $PDC_THREADS, else the runtime default)")
      ->check(CLI::NonNegativeNumber);

  std::string target, out_dir;
  bool quiet = false;
  int jobs = 0;
  auto add_target = [&](CLI::App* sub) {
    sub->add_option("config", target, "config file or preset name")->required();
    sub->add_option("-o,--out-dir", out_dir, "directory for relative output paths");
    sub->add_flag("-q,--quiet", quiet, "no progress messages");
  };
  auto* run = app.add_subcommand("run", "run a scenario or print a coupling table");
  add_target(run);
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_target(sweep);
  sweep->add_option("-j,--jobs", jobs, "rows run concurrently")->check(CLI::PositiveNumber);
  auto* compare = app.add_subcommand("compare", "compare full, few-level and mean-field dynamics");
  add_target(compare);
  auto* calibrate = app.add_subcommand("calibrate-drive", "fit the drive amplitude to the target pump occupation");
  add_target(calibrate);
  auto* validate = app.add_subcommand("validate-config", "check a config and estimate its memory");
  validate->add_option("config", target, "config file or preset name")->required();
  auto* list = app.add_subcommand("list-presets", "list the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (threads == 0)
      if (const char* env = std::getenv("PDC_THREADS")) {
        threads = std::atoi(env);
        if (threads <= 0) throw ConfigError("PDC_THREADS must be a positive integer");
      }
    if (threads > 0) kernels::set_threads(threads);

    if (list->parsed()) return do_list();
    ConfigDocument doc = load_document(target);
    if (validate->parsed()) return do_validate(doc);
    place_outputs(doc, out_dir);
    if (run->parsed()) return do_run(doc, quiet);
    if (sweep->parsed()) return do_sweep(doc, quiet, jobs);
    if (compare->parsed()) return do_compare(doc, quiet);
    if (calibrate->parsed()) return do_calibrate(doc);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "resource refusal: " << e.what() << '\n';
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
