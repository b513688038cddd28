#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdu/optimizer.hpp"
#include "mdu/simulation.hpp"
#include "mdu/types.hpp"

namespace mdu {

/// Unreadable/malformed inputs and shape violations (CLI exit code 2).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite results and undefined statistics (CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes content to a temp file in the target directory, then renames it
/// over `path`, so interrupted runs never leave truncated outputs.
void write_file_atomic(const std::string& path, const std::string& content);

/// Rectangular CSV of 0/1/NA (empty cell = NA). An optional header row and an
/// optional leading ID column are auto-detected by their non-numeric cells.
ResponseMatrix load_response_csv(const std::string& path);
void save_response_csv(const ResponseMatrix& data, const std::string& path);

/// Columns: set (person|item), index (1-based within set), coord_1..coord_K;
/// 17 significant digits. Loading checks rows against `expect_bound` when
/// given, otherwise the stored bound is the largest row norm.
void save_configuration(const Configuration& config, const std::string& path);
Configuration load_configuration(const std::string& path,
                                 std::optional<double> expect_bound = std::nullopt);

/// Cluster labels as CSV: set (person|item), index, label.
struct LabelTable {
  std::vector<int> person_labels;
  std::vector<int> item_labels;
};
void save_labels_csv(const LabelTable& labels, const std::string& path);
LabelTable load_labels_csv(const std::string& path);

/// Single numeric column, optional header auto-detected.
std::vector<double> load_column_csv(const std::string& path);

struct RunReport {
  std::string version;
  std::uint64_t seed = 0;
  FitOptions options;
  double final_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  int start_index = 0;
  std::vector<double> per_start_objectives;
  std::vector<int> per_start_iterations;
  std::vector<bool> per_start_converged;
  double wall_seconds = 0.0;

  std::string to_json() const;
  static RunReport from_json(const std::string& text);
};

StudySpec load_study_spec_json(const std::string& path);
std::string study_report_csv(const StudyReport& report);
std::string study_report_summary(const StudyReport& report);

}  // namespace mdu
