#include "dipole/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "dipole/datasets.hpp"
#include "dipole/errors.hpp"

namespace dipole {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;
using nlohmann::ordered_json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string schedule_name(StepSchedule s) {
  return s == StepSchedule::Harmonic ? "harmonic" : "annealed";
}

StepSchedule parse_schedule(const std::string& name) {
  if (name == "annealed") return StepSchedule::Annealed;
  if (name == "harmonic") return StepSchedule::Harmonic;
  throw ValidationError("unknown step schedule '" + name + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ordered_json options_to_json(const EmbedOptions& o) {
  ordered_json j;
  j["dataset"] = o.input.dataset;
  j["n"] = o.input.n;
  j["noise"] = o.input.noise;
  j["data_seed"] = o.input.data_seed ? json(*o.input.data_seed) : json(nullptr);
  j["cloud"] = o.input.cloud_path;
  j["distance"] = o.input.distance_path;
  j["m1"] = o.input.m1;
  j["connect"] = o.input.connect;
  j["dim"] = o.dim;
  j["m2"] = o.dipole.m2;
  j["k"] = o.dipole.k;
  j["alpha"] = o.dipole.alpha;
  j["lr"] = o.dipole.lr;
  j["p"] = o.dipole.p;
  j["steps"] = o.dipole.steps;
  j["anneal"] = o.dipole.anneal_const;
  j["batch"] = o.dipole.batch_size;
  j["max_degree"] = o.dipole.max_degree;
  j["schedule"] = schedule_name(o.dipole.schedule);
  j["seed"] = o.dipole.seed;
  j["threads"] = o.dipole.threads;
  j["evaluate"] = o.evaluate;
  j["ijk_samples"] = o.ijk_samples;
  j["fps_size"] = o.fps_size;
  j["svg"] = o.svg;
  j["colors"] = o.colors_path;
  return j;
}

EmbedOptions options_from_json(const json& j, EmbedOptions o) {
  if (!j.is_object()) throw ValidationError("options must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "dataset") o.input.dataset = value.get<std::string>();
      else if (key == "n") o.input.n = value.get<std::size_t>();
      else if (key == "noise") o.input.noise = value.get<double>();
      else if (key == "data_seed") {
        if (value.is_null()) o.input.data_seed.reset();
        else o.input.data_seed = value.get<std::uint64_t>();
      }
      else if (key == "cloud") o.input.cloud_path = value.get<std::string>();
      else if (key == "distance") o.input.distance_path = value.get<std::string>();
      else if (key == "m1") o.input.m1 = value.get<std::size_t>();
      else if (key == "connect") o.input.connect = value.get<bool>();
      else if (key == "dim") o.dim = value.get<std::size_t>();
      else if (key == "m2") o.dipole.m2 = value.get<std::size_t>();
      else if (key == "k") o.dipole.k = value.get<std::size_t>();
      else if (key == "alpha") o.dipole.alpha = value.get<double>();
      else if (key == "lr") o.dipole.lr = value.get<double>();
      else if (key == "p") o.dipole.p = value.get<double>();
      else if (key == "steps") o.dipole.steps = value.get<std::size_t>();
      else if (key == "anneal") o.dipole.anneal_const = value.get<double>();
      else if (key == "batch") o.dipole.batch_size = value.get<std::size_t>();
      else if (key == "max_degree") o.dipole.max_degree = value.get<int>();
      else if (key == "schedule") o.dipole.schedule = parse_schedule(value.get<std::string>());
      else if (key == "seed") o.dipole.seed = value.get<std::uint64_t>();
      else if (key == "threads") o.dipole.threads = value.get<std::size_t>();
      else if (key == "evaluate") o.evaluate = value.get<bool>();
      else if (key == "ijk_samples") o.ijk_samples = value.get<std::size_t>();
      else if (key == "fps_size") o.fps_size = value.get<std::size_t>();
      else if (key == "svg") o.svg = value.get<bool>();
      else if (key == "colors") o.colors_path = value.get<std::string>();
      else throw ValidationError("unknown option '" + key + "'");
    } catch (const json::exception& e) {
      throw ValidationError("option '" + key + "': " + e.what());
    }
  }
  return o;
}

PreparedInput prepare_input(const InputOptions& input, std::uint64_t run_seed, std::size_t threads) {
  const int sources = static_cast<int>(!input.dataset.empty()) +
                      static_cast<int>(!input.cloud_path.empty()) +
                      static_cast<int>(!input.distance_path.empty());
  if (sources != 1) {
    throw ValidationError("exactly one of --dataset, --cloud or --distance is required");
  }
  PreparedInput out;
  if (!input.distance_path.empty()) {
    out.target = load_distance(input.distance_path);
    return out;
  }

  std::optional<PointCloud> cloud;
  if (!input.cloud_path.empty()) {
    cloud = load_cloud(input.cloud_path);
  } else {
    const std::uint64_t seed = input.data_seed.value_or(run_seed);
    std::optional<GeneratedCloud> generated;
    if (input.dataset == "swiss-roll-hole") {
      generated = swiss_roll(input.n, seed, {true, input.noise});
    } else if (input.dataset == "swiss-roll") {
      generated = swiss_roll(input.n, seed, {false, input.noise});
    } else if (input.dataset == "circle") {
      generated = circle_sample(input.n, 1.0, input.noise, seed);
    } else if (input.dataset == "torus") {
      generated = torus_sample(input.n, 3.0, 1.0, seed);
    } else {
      throw ValidationError("unknown dataset '" + input.dataset + "'");
    }
    cloud = std::move(generated->cloud);
    out.colors = std::move(generated->parameters);
  }

  const auto ambient = euclidean_distances(*cloud);
  auto graph = knn_graph(ambient, input.m1);
  if (input.connect) graph = bridge_components(graph, ambient);
  out.target = geodesic_distances(graph, threads);
  return out;
}

EmbedResult embed(const EmbedOptions& options, const PreparedInput& input) {
  if (options.dim < 1) throw ParameterError("--dim must be at least 1");
  options.dipole.validate(input.target.size());
  EmbedResult result;

  auto start = Clock::now();
  result.initial = isomap_embed(input.target, options.dim);
  result.times.isomap = seconds_since(start);

  start = Clock::now();
  result.state = run(result.initial, input.target, options.dipole);
  result.times.optimize = seconds_since(start);

  if (options.evaluate) {
    start = Clock::now();
    const auto low = euclidean_distances(result.state.embedding.coords());
    result.report = evaluate(input.target, low, {options.ijk_samples, options.fps_size, options.dipole.seed});
    result.times.evaluate = seconds_since(start);
  }
  return result;
}

std::string report_to_json(const EvaluationReport& r) {
  ordered_json j;
  j["ijk"] = r.ijk;
  j["residual_variance"] = r.residual_variance;
  j["ph0"] = r.ph0;
  j["ph1"] = r.ph1;
  j["parameters"] = {{"ijk_samples", r.ijk_samples},
                     {"ijk_seed", r.ijk_seed},
                     {"fps_size", r.fps_size},
                     {"fps_seed_high", r.fps_seed_high},
                     {"fps_seed_low", r.fps_seed_low}};
  return j.dump(2) + "\n";
}

std::string trace_to_csv(const std::vector<LossBreakdown>& trace) {
  std::string out = "step,total,topological,metric,degree0,degree1\n";
  for (std::size_t s = 0; s < trace.size(); ++s) {
    const auto& t = trace[s];
    out += std::to_string(s) + "," + format_number(t.total) + "," + format_number(t.topological) +
           "," + format_number(t.metric);
    for (std::size_t d = 0; d < 2; ++d) {
      out += ",";
      if (d < t.per_degree.size()) out += format_number(t.per_degree[d]);
    }
    out += "\n";
  }
  return out;
}

EmbedResult cmd_embed(const EmbedOptions& options) {
  if (options.out_dir.empty()) throw ValidationError("--out is required");
  auto start = Clock::now();
  const auto input = prepare_input(options.input, options.dipole.seed, options.dipole.threads);
  const double input_time = seconds_since(start);

  Matrix colors = input.colors;
  if (!options.colors_path.empty()) {
    colors = load_matrix_csv(options.colors_path);
    if (colors.rows() != input.target.size()) {
      throw ValidationError("color file has " + std::to_string(colors.rows()) + " rows, expected " +
                            std::to_string(input.target.size()));
    }
  }

  auto result = embed(options, input);
  result.times.input = input_time;

  const auto& out = options.out_dir;
  atomic_write(out / "embedding.csv", matrix_to_csv(result.state.embedding.coords()));
  atomic_write(out / "trace.csv", trace_to_csv(result.state.trace));
  if (result.report) atomic_write(out / "metrics.json", report_to_json(*result.report));
  if (options.svg) {
    if (options.dim < 2) throw ParameterError("SVG output needs --dim >= 2");
    atomic_write(out / "embedding.svg", emit_svg(result.state.embedding.coords(), colors));
  }

  ordered_json manifest;
  manifest["tool"] = "dipole";
  manifest["version"] = kToolVersion;
  manifest["config"] = options_to_json(options);
  manifest["points"] = input.target.size();
  manifest["timing_seconds"] = {{"input", result.times.input},
                                {"isomap", result.times.isomap},
                                {"optimize", result.times.optimize},
                                {"evaluate", result.times.evaluate}};
  atomic_write(out / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

EvaluationReport cmd_evaluate(const EvaluateOptions& options) {
  const auto input = prepare_input(options.input, options.seed);
  const Matrix coords = load_matrix_csv(options.embedding_path);
  if (coords.rows() != input.target.size()) {
    throw ValidationError("embedding has " + std::to_string(coords.rows()) +
                          " rows but the target metric has " + std::to_string(input.target.size()) +
                          " points");
  }
  const auto report = evaluate(input.target, euclidean_distances(coords),
                               {options.ijk_samples, options.fps_size, options.seed});
  if (!options.out_dir.empty()) atomic_write(options.out_dir / "metrics.json", report_to_json(report));
  return report;
}

// ---------------------------------------------------------------------------
// Grid runner

namespace {

struct GridAxis {
  std::string name;
  std::vector<json> values;
};

std::string value_text(const json& v) {
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Orders numbers numerically and everything else by text.
bool value_less(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return a.get<double>() < b.get<double>();
  return value_text(a) < value_text(b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::size_t cmd_grid(const std::filesystem::path& grid_file, const std::filesystem::path& out_dir) {
  json spec;
  try {
    spec = json::parse(read_file(grid_file));
  } catch (const json::exception& e) {
    throw ValidationError("malformed grid file " + grid_file.string() + ": " + e.what());
  }
  if (!spec.is_object() || !spec.contains("axes") || !spec["axes"].is_object()) {
    throw ValidationError("grid file needs an \"axes\" object");
  }
  EmbedOptions base;
  if (spec.contains("base")) base = options_from_json(spec["base"], base);

  std::vector<GridAxis> axes;
  for (const auto& [name, values] : spec["axes"].items()) {
    if (!values.is_array() || values.empty()) {
      throw ValidationError("grid axis '" + name + "' must be a nonempty array");
    }
    GridAxis axis{name, {}};
    for (const auto& v : values) axis.values.push_back(v);
    std::stable_sort(axis.values.begin(), axis.values.end(), value_less);
    (void)options_from_json(json{{name, axis.values.front()}}, base);  // validates the key
    axes.push_back(std::move(axis));
  }
  std::sort(axes.begin(), axes.end(), [](const auto& a, const auto& b) { return a.name < b.name; });

  // Cartesian product, lexicographic in (axis name, value) order.
  std::vector<std::vector<std::size_t>> combos{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& c : combos) {
      for (std::size_t v = 0; v < axis.values.size(); ++v) {
        auto extended = c;
        extended.push_back(v);
        next.push_back(std::move(extended));
      }
    }
    combos = std::move(next);
  }

  std::string header;
  for (const auto& axis : axes) header += axis.name + ",";
  header += "ijk,residual_variance,ph0,ph1,wall_seconds";

  const auto csv_path = out_dir / "grid.csv";
  std::map<std::string, std::string> rows;  // parameter key -> full row
  if (std::filesystem::exists(csv_path)) {
    std::ifstream in(csv_path);
    std::string line;
    std::getline(in, line);
    if (line != header) {
      throw ValidationError(csv_path.string() + " has a different header; refusing to resume");
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != axes.size() + 5) continue;  // partial row from an older writer
      std::string key;
      for (std::size_t a = 0; a < axes.size(); ++a) key += fields[a] + ",";
      rows[key] = line;
    }
  }

  auto write_table = [&] {
    std::string body = header + "\n";
    for (const auto& combo : combos) {
      std::string key;
      for (std::size_t a = 0; a < axes.size(); ++a) key += value_text(axes[a].values[combo[a]]) + ",";
      if (auto it = rows.find(key); it != rows.end()) body += it->second + "\n";
    }
    atomic_write(csv_path, body);
  };

  std::map<std::string, PreparedInput> input_cache;
  std::size_t ran = 0;
  for (const auto& combo : combos) {
    json overlay = json::object();
    std::string key;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      overlay[axes[a].name] = axes[a].values[combo[a]];
      key += value_text(axes[a].values[combo[a]]) + ",";
    }
    if (rows.contains(key)) continue;

    auto options = options_from_json(overlay, base);
    options.evaluate = true;
    const auto start = Clock::now();
    const auto input_json = ordered_json{{"dataset", options.input.dataset},
                                         {"n", options.input.n},
                                         {"noise", options.input.noise},
                                         {"data_seed", options.input.data_seed.value_or(options.dipole.seed)},
                                         {"cloud", options.input.cloud_path},
                                         {"distance", options.input.distance_path},
                                         {"m1", options.input.m1},
                                         {"connect", options.input.connect}}
                                .dump();
    auto cached = input_cache.find(input_json);
    if (cached == input_cache.end()) {
      cached = input_cache
                   .emplace(input_json,
                            prepare_input(options.input, options.dipole.seed, options.dipole.threads))
                   .first;
    }
    const auto result = embed(options, cached->second);
    const double wall = seconds_since(start);

    const auto& r = *result.report;
    rows[key] = key + format_number(r.ijk) + "," + format_number(r.residual_variance) + "," +
                format_number(r.ph0) + "," + format_number(r.ph1) + "," + format_number(wall);
    write_table();
    ++ran;
  }
  write_table();
  return ran;
}

}  // namespace dipole
