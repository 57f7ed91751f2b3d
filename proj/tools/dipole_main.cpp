// Command-line front end: embed, evaluate and grid subcommands.
//
// Exit codes: 0 success, 1 validation or parameter error, 2 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>

#include "dipole/errors.hpp"
#include "dipole/pipeline.hpp"

namespace {

void add_input_flags(CLI::App* cmd, dipole::InputOptions& in, std::uint64_t& data_seed) {
  cmd->add_option("--dataset", in.dataset, "Generator: swiss-roll-hole, swiss-roll, circle, torus");
  cmd->add_option("--n", in.n, "Generated point count")->capture_default_str();
  cmd->add_option("--noise", in.noise, "Generator noise stddev")->capture_default_str();
  cmd->add_option("--data-seed", data_seed, "Generator seed (defaults to --seed)");
  cmd->add_option("--cloud", in.cloud_path, "Point cloud CSV");
  cmd->add_option("--distance", in.distance_path, "Distance matrix CSV");
  cmd->add_option("--m1", in.m1, "Neighbors in the geodesic graph")->capture_default_str();
  cmd->add_flag("--connect", in.connect, "Bridge disconnected neighbor graphs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology-aware correction of low-dimensional embeddings"};
  app.require_subcommand(1);

  dipole::EmbedOptions embed;
  std::string manifest_path, embed_out;
  std::uint64_t embed_data_seed = 0;
  auto* embed_cmd = app.add_subcommand("embed", "Isomap initialization followed by topological correction");
  add_input_flags(embed_cmd, embed.input, embed_data_seed);
  embed_cmd->add_option("--manifest", manifest_path, "Re-run from a manifest.json (other flags override)");
  embed_cmd->add_option("--dim", embed.dim, "Target dimension");
  embed_cmd->add_option("--seed", embed.dipole.seed, "Run seed");
  embed_cmd->add_option("--m2", embed.dipole.m2, "Neighbors defining the metric regularizer pairs")->capture_default_str();
  embed_cmd->add_option("--k", embed.dipole.k, "Subset size")->capture_default_str();
  embed_cmd->add_option("--alpha", embed.dipole.alpha, "Tradeoff: 1 keeps only the metric regularizer")->capture_default_str();
  embed_cmd->add_option("--lr", embed.dipole.lr, "Base learning rate")->capture_default_str();
  embed_cmd->add_option("--p", embed.dipole.p, "Wasserstein order")->capture_default_str();
  embed_cmd->add_option("--steps", embed.dipole.steps, "Descent steps")->capture_default_str();
  embed_cmd->add_option("--anneal", embed.dipole.anneal_const, "Annealing constant C in lr*C/(C+step)")->capture_default_str();
  embed_cmd->add_option("--batch", embed.dipole.batch_size, "Subsets per step")->capture_default_str();
  const std::map<std::string, dipole::StepSchedule> schedules{{"annealed", dipole::StepSchedule::Annealed},
                                                              {"harmonic", dipole::StepSchedule::Harmonic}};
  embed_cmd->add_option("--schedule", embed.dipole.schedule, "Step sizes: annealed lr*C/(C+step) or harmonic lr/(step+1)")
      ->transform(CLI::CheckedTransformer(schedules, CLI::ignore_case));
  embed_cmd->add_option("--max-degree", embed.dipole.max_degree, "Highest homology degree (0 or 1)")->capture_default_str();
  embed_cmd->add_option("--threads", embed.dipole.threads, "Workers for per-subset diagrams")->capture_default_str();
  embed_cmd->add_option("--ijk-samples", embed.ijk_samples, "Triples for the ijk test")->capture_default_str();
  embed_cmd->add_option("--fps-size", embed.fps_size, "Farthest-point sample size for PH scores")->capture_default_str();
  embed_cmd->add_flag("!--no-eval", embed.evaluate, "Skip metrics.json");
  embed_cmd->add_flag("--svg", embed.svg, "Write embedding.svg");
  embed_cmd->add_option("--colors", embed.colors_path, "CSV of per-point color columns for the SVG");
  embed_cmd->add_option("--out", embed_out, "Output directory");

  dipole::EvaluateOptions eval;
  std::uint64_t eval_data_seed = 0;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score an embedding against the target metric");
  add_input_flags(eval_cmd, eval.input, eval_data_seed);
  eval_cmd->add_option("--embedding", eval.embedding_path, "Embedding CSV")->required();
  eval_cmd->add_option("--seed", eval.seed, "Seed for sampling")->required();
  eval_cmd->add_option("--ijk-samples", eval.ijk_samples, "Triples for the ijk test")->capture_default_str();
  eval_cmd->add_option("--fps-size", eval.fps_size, "Farthest-point sample size")->capture_default_str();
  std::string eval_out;
  eval_cmd->add_option("--out", eval_out, "Output directory for metrics.json");

  std::string grid_file, grid_out;
  auto* grid_cmd = app.add_subcommand("grid", "Run every combination of a hyperparameter grid");
  grid_cmd->add_option("--grid", grid_file, "Grid JSON file")->required();
  grid_cmd->add_option("--out", grid_out, "Output directory for grid.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*embed_cmd) {
      dipole::EmbedOptions options = embed;
      if (!manifest_path.empty()) {
        std::ifstream in(manifest_path);
        if (!in) throw dipole::ValidationError("cannot open " + manifest_path);
        nlohmann::json manifest;
        try {
          manifest = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw dipole::ValidationError("malformed manifest: " + std::string(e.what()));
        }
        if (!manifest.contains("config")) throw dipole::ValidationError("manifest has no config");
        options = dipole::options_from_json(manifest["config"]);
        // Explicitly given flags override the manifest.
        nlohmann::json overrides = nlohmann::json::object();
        const auto flat = dipole::options_to_json(embed);
        auto note = [&](const char* flag, const char* key) {
          if (embed_cmd->count(flag) > 0) overrides[key] = flat[key];
        };
        note("--dataset", "dataset"); note("--n", "n"); note("--noise", "noise");
        note("--cloud", "cloud"); note("--distance", "distance"); note("--m1", "m1");
        note("--connect", "connect"); note("--dim", "dim"); note("--seed", "seed");
        note("--m2", "m2"); note("--k", "k"); note("--alpha", "alpha"); note("--lr", "lr");
        note("--p", "p"); note("--steps", "steps"); note("--anneal", "anneal");
        note("--batch", "batch"); note("--schedule", "schedule"); note("--max-degree", "max_degree"); note("--threads", "threads");
        note("--ijk-samples", "ijk_samples"); note("--fps-size", "fps_size");
        note("--no-eval", "evaluate"); note("--svg", "svg"); note("--colors", "colors");
        options = dipole::options_from_json(overrides, options);
        if (embed_cmd->count("--data-seed") > 0) options.input.data_seed = embed_data_seed;
      } else {
        if (embed_cmd->count("--dim") == 0) throw dipole::ValidationError("--dim is required");
        if (embed_cmd->count("--seed") == 0) throw dipole::ValidationError("--seed is required");
        if (embed_cmd->count("--data-seed") > 0) options.input.data_seed = embed_data_seed;
      }
      if (embed_out.empty()) throw dipole::ValidationError("--out is required");
      options.out_dir = embed_out;
      const auto result = dipole::cmd_embed(options);
      std::printf("wrote %s (%zu points, %zu steps, final sampled loss %.6g)\n", embed_out.c_str(),
                  result.state.embedding.size(), result.state.step,
                  result.state.trace.empty() ? 0.0 : result.state.trace.back().total);
    } else if (*eval_cmd) {
      if (eval_cmd->count("--data-seed") > 0) eval.input.data_seed = eval_data_seed;
      eval.out_dir = eval_out;
      const auto report = dipole::cmd_evaluate(eval);
      std::cout << dipole::report_to_json(report);
    } else if (*grid_cmd) {
      const auto ran = dipole::cmd_grid(grid_file, grid_out);
      std::printf("ran %zu new combinations; table in %s/grid.csv\n", ran, grid_out.c_str());
    }
  } catch (const dipole::NumericalError& e) {
    std::fprintf(stderr, "dipole: numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dipole: %s\n", e.what());
    return 1;
  }
  return 0;
}
