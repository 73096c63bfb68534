#include <CLI11.hpp>

#include "app.hpp"
#include "common.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/ply_io.hpp"
#include "gsnav/random.hpp"
#include "gsnav/scene_bundle.hpp"
#include "gsnav/synthetic_scene.hpp"

namespace gsnav::cli {

namespace {

struct GenerateArgs {
  CommonOptions common;
  std::string kind = "random";
  std::size_t count = 2000;
  double anisotropy = 0.0;
  int pillars = 12;
  std::string out;
  std::string bundle;
};

int run_generate(const GenerateArgs& a, std::ostream& out) {
  if (a.out.empty() == a.bundle.empty()) throw ArgumentError("give exactly one of --out or --bundle");
  if (a.count == 0) throw ArgumentError("--count must be positive");
  if (a.anisotropy < 0.0) throw ArgumentError("--anisotropy must be >= 0");
  EngineConfig config = load_engine_config(a.common);
  const EpisodeConfig& ep = config.env.episode;
  const std::uint64_t seed = derive_seed(a.common.seed, "scene");

  GaussianCloud cloud;
  if (a.kind == "random") {
    RandomSceneOptions opts;
    opts.count = a.count;
    opts.anisotropy = a.anisotropy;
    opts.box_min = {1.0, -2.5, 0.0};
    opts.box_max = {9.0, 2.5, 2.0};
    cloud = make_random_scene(opts, seed);
  } else if (a.kind == "pillars") {
    PillarForestOptions opts;
    opts.pillars = a.pillars;
    opts.keep_clear = {0.5 * (ep.start_min + ep.start_max), ep.goal};
    cloud = make_pillar_forest(opts, seed);
  } else {
    throw ArgumentError("--kind must be random or pillars");
  }

  if (!a.out.empty()) {
    save_ply(cloud, a.out);
  } else {
    save_scene_bundle(a.bundle, cloud, nullptr, SceneTransform{}, ep);
  }
  out << "gaussians=" << cloud.size() << '\n';
  return kExitOk;
}

struct ConfigArgs {
  CommonOptions common;
};

}  // namespace

void register_generate(CLI::App& app, Command& selected, std::ostream& out) {
  auto args = std::make_shared<GenerateArgs>();
  CLI::App* cmd = app.add_subcommand("generate", "Write a synthetic scene as PLY or as a scene bundle");
  add_common_options(*cmd, args->common);
  cmd->add_option("--kind", args->kind, "random or pillars");
  cmd->add_option("--count", args->count, "Gaussians for --kind random");
  cmd->add_option("--anisotropy", args->anisotropy, "Per-axis log-scale spread for --kind random");
  cmd->add_option("--pillars", args->pillars, "Pillar count for --kind pillars");
  cmd->add_option("--out", args->out, "Output PLY path");
  cmd->add_option("--bundle", args->bundle, "Output scene bundle directory");
  cmd->callback([args, &selected, &out] { selected = [args, &out] { return run_generate(*args, out); }; });
}

void register_config(CLI::App& app, Command& selected, std::ostream& out) {
  auto args = std::make_shared<ConfigArgs>();
  CLI::App* cmd = app.add_subcommand("config", "Print the effective config with every key");
  add_common_options(*cmd, args->common);
  cmd->callback([args, &selected, &out] {
    selected = [args, &out] {
      out << to_config_text(load_engine_config(args->common));
      return kExitOk;
    };
  });
}

}  // namespace gsnav::cli
