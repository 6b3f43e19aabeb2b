#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "folcalc_cli/json_io.hpp"

namespace folcalc::cli {

enum ExitCode : int { kPass = 0, kInputError = 1, kCertifiedFailure = 2, kInconclusive = 3 };

inline constexpr const char* kVersion = "0.1.0";
inline const std::vector<std::string> kScenarios = {"coisotropic-check", "dnu-kernel",    "kuranishi",    "moser-prolong",
                                                    "contact-slices",    "anosov-check", "suspension-h1"};

struct RunOptions {
  std::optional<int> grid;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

struct RunResult {
  int exit_code = kPass;
  Json report;
  std::string diagnostics_csv;                                // empty when the scenario has no grid rows
  std::vector<std::pair<std::string, std::string>> plotdata;  // file name, contents
};

// Runs a parsed manifest. Throws ManifestError on schema violations.
RunResult run_manifest(Json manifest, const RunOptions& options);

// Reads, runs and writes report.json, diagnostics.csv and plotdata/ under out_dir.
int run_file(const std::filesystem::path& manifest, const std::filesystem::path& out_dir, const RunOptions& options,
             bool json_to_stdout, std::ostream& out, std::ostream& err);

struct CatalogEntry {
  std::string name;
  std::string file;
  std::string scenario;
  std::string description;
};
std::vector<CatalogEntry> catalog(const std::filesystem::path& dir);  // throws std::runtime_error on a missing dir
std::filesystem::path default_manifest_dir();

// Entry point shared by the binary and the tests.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace folcalc::cli
