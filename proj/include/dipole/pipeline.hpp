#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dipole/evaluation.hpp"
#include "dipole/geometry.hpp"
#include "dipole/isomap.hpp"
#include "dipole/optimizer.hpp"

#include <json.hpp>

namespace dipole {

inline constexpr const char* kToolVersion = "0.1.0";

/// Where the target metric comes from: a named generator, a point-cloud CSV, or a
/// distance-matrix CSV (exactly one).
struct InputOptions {
  std::string dataset;        // swiss-roll-hole | swiss-roll | circle | torus
  std::size_t n = 600;
  double noise = 0.0;
  std::optional<std::uint64_t> data_seed;  // defaults to the run seed
  std::string cloud_path;
  std::string distance_path;
  std::size_t m1 = 5;         // neighbor count of the geodesic graph
  bool connect = false;       // bridge disconnected neighbor graphs
};

struct EmbedOptions {
  InputOptions input;
  std::size_t dim = 0;
  DipoleConfig dipole;
  bool evaluate = true;
  std::size_t ijk_samples = 10000;
  std::size_t fps_size = 256;
  bool svg = false;
  std::string colors_path;    // optional numeric color columns for the SVG
  std::filesystem::path out_dir;
};

/// Flat key/value form used by run manifests and grid files.
nlohmann::ordered_json options_to_json(const EmbedOptions& options);
/// Overlays the keys present in `j` onto `base`. Unknown keys are a ValidationError.
EmbedOptions options_from_json(const nlohmann::json& j, EmbedOptions base = {});

struct PreparedInput {
  DistanceMatrix target;
  Matrix colors;  // generator parameters, empty for file inputs
};

/// Builds the target metric: geodesic distances on the m1-nearest-neighbor graph for
/// point clouds, pass-through for distance matrices.
PreparedInput prepare_input(const InputOptions& input, std::uint64_t run_seed,
                            std::size_t threads = 1);

struct StageTimes {
  double input = 0.0;
  double isomap = 0.0;
  double optimize = 0.0;
  double evaluate = 0.0;
};

struct EmbedResult {
  Embedding initial;
  OptimizerState state;
  std::optional<EvaluationReport> report;
  StageTimes times;
};

/// Runs the pipeline in memory (no files written).
EmbedResult embed(const EmbedOptions& options, const PreparedInput& input);

/// Full `embed` command: runs the pipeline and writes embedding.csv, trace.csv,
/// manifest.json, metrics.json (unless evaluation is disabled) and embedding.svg
/// (when requested) under options.out_dir.
EmbedResult cmd_embed(const EmbedOptions& options);

struct EvaluateOptions {
  InputOptions input;
  std::uint64_t seed = 0;
  std::string embedding_path;
  std::size_t ijk_samples = 10000;
  std::size_t fps_size = 256;
  std::filesystem::path out_dir;
};

/// Scores an embedding CSV against the target metric; writes metrics.json.
EvaluationReport cmd_evaluate(const EvaluateOptions& options);

/// Runs every combination of a grid file and writes one row per combination to
/// out_dir/grid.csv, skipping combinations already present there. Returns the
/// number of combinations run in this invocation.
std::size_t cmd_grid(const std::filesystem::path& grid_file, const std::filesystem::path& out_dir);

/// Stable-order JSON serialization of a report.
std::string report_to_json(const EvaluationReport& report);

std::string trace_to_csv(const std::vector<LossBreakdown>& trace);

/// Self-contained SVG scatter of the first two columns of `coords`. `colors` is
/// empty or has one row per point: one column maps to a red-blue ramp, two columns
/// to (red, 0.5, blue), three or more to RGB.
std::string emit_svg(const Matrix& coords, const Matrix& colors = {});

/// Writes via a temporary file and rename, so readers never see partial content.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace dipole
