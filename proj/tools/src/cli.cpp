#include "folcalc_cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "folcalc/errors.hpp"
#include "folcalc/parallel.hpp"

#ifndef FOLCALC_DEFAULT_MANIFEST_DIR
#define FOLCALC_DEFAULT_MANIFEST_DIR "manifests"
#endif

namespace folcalc::cli {

namespace fs = std::filesystem;

namespace {

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::SingularAtPoint:
    case ErrorKind::NewtonDivergence: return false;
    default: return true;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void print_summary(const RunResult& r, const fs::path& out_dir, std::ostream& out) {
  out << r.report["scenario"].get<std::string>() << ": " << r.report["verdict"].get<std::string>() << " (exit "
      << r.exit_code << ")\n";
  for (const auto& c : r.report["claims"]) out << "  " << c["name"].get<std::string>() << ": " << c["status"].get<std::string>() << "\n";
  out << "report: " << (out_dir / "report.json").string() << "\n";
}

}  // namespace

int run_file(const fs::path& manifest, const fs::path& out_dir, const RunOptions& options, bool json_to_stdout,
             std::ostream& out, std::ostream& err) {
  std::ifstream f(manifest);
  if (!f) {
    err << "error: cannot read manifest " << manifest.string() << "\n";
    return kInputError;
  }
  RunResult result;
  try {
    Json m = Json::parse(f);
    result = run_manifest(std::move(m), options);
  } catch (const Json::parse_error& e) {
    err << "manifest error at '': " << e.what() << "\n";
    return kInputError;
  } catch (const ManifestError& e) {
    err << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kInputError : kInconclusive;
  }

  try {
    fs::create_directories(out_dir);
    write_text(out_dir / "report.json", result.report.dump(2) + "\n");
    if (!result.diagnostics_csv.empty()) write_text(out_dir / "diagnostics.csv", result.diagnostics_csv);
    if (!result.plotdata.empty()) {
      fs::create_directories(out_dir / "plotdata");
      for (const auto& [name, text] : result.plotdata) write_text(out_dir / "plotdata" / name, text);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (json_to_stdout) out << result.report.dump(2) << "\n";
  else print_summary(result, out_dir, out);
  return result.exit_code;
}

fs::path default_manifest_dir() {
  if (const char* env = std::getenv("FOLCALC_MANIFEST_DIR"); env && *env) return env;
  return FOLCALC_DEFAULT_MANIFEST_DIR;
}

std::vector<CatalogEntry> catalog(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("manifest directory '" + dir.string() + "' not found");
  std::vector<CatalogEntry> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream f(entry.path());
    CatalogEntry e{entry.path().stem().string(), entry.path().string(), "?", ""};
    Json m = Json::parse(f, nullptr, false);
    if (m.is_object()) {
      if (m.contains("scenario") && m["scenario"].is_string()) e.scenario = m["scenario"].get<std::string>();
      if (m.contains("description") && m["description"].is_string()) e.description = m["description"].get<std::string>();
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
  return out;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"folcalc: exact foliated calculus and deformation scenarios"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* run = app.add_subcommand("run", "Run a manifest and write report.json, diagnostics.csv and plotdata/");
  std::string manifest;
  std::string out_dir = "folcalc-out";
  int grid = 0;
  double dt = 0;
  std::uint64_t seed = 0;
  bool json = false;
  run->add_option("manifest", manifest, "Manifest JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* grid_opt = run->add_option("--grid", grid, "Grid points per axis")->check(CLI::PositiveNumber);
  auto* dt_opt = run->add_option("--dt", dt, "Time step for moser-prolong")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Seed for randomized inputs");
  run->add_flag("--json", json, "Print report.json to stdout");

  auto* examples = app.add_subcommand("examples", "List the bundled manifests");
  bool examples_json = false;
  std::string dir;
  examples->add_flag("--json", examples_json, "Machine-readable catalog");
  examples->add_option("--dir", dir, "Manifest directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kInputError;
  }

  if (*run) {
    RunOptions opt;
    if (*grid_opt) opt.grid = grid;
    if (*dt_opt) opt.dt = dt;
    if (*seed_opt) opt.seed = seed;
    opt.threads = default_threads();
    return run_file(manifest, out_dir, opt, json, out, err);
  }

  std::vector<CatalogEntry> entries;
  try {
    entries = catalog(dir.empty() ? default_manifest_dir() : fs::path(dir));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (examples_json) {
    Json j = Json::array();
    for (const auto& e : entries) {
      Json row;
      row["name"] = e.name;
      row["file"] = e.file;
      row["scenario"] = e.scenario;
      row["description"] = e.description;
      j.push_back(row);
    }
    out << j.dump(2) << "\n";
  } else {
    std::size_t w = 0;
    for (const auto& e : entries) w = std::max(w, e.name.size());
    for (const auto& e : entries)
      out << e.name << std::string(w + 2 - e.name.size(), ' ') << e.scenario << "  " << e.description << "\n";
  }
  return kPass;
}

}  // namespace folcalc::cli
