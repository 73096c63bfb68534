#include <algorithm>
#include <numeric>

#include <CLI11.hpp>

#include "app.hpp"
#include "common.hpp"
#include "gsnav/errors.hpp"
#include "gsnav/ply_io.hpp"
#include "gsnav/random.hpp"
#include "gsnav/scene_bundle.hpp"

namespace gsnav::cli {

namespace {

struct PruneArgs {
  CommonOptions common;
  int views = 16;
  double keep = 0.5;
  std::string out;
  int heldout = 8;
};

double mean_psnr(const GaussianCloud& cloud, std::span<const View> views,
                 const std::vector<RenderOutput>& reference, const RenderSettings& settings,
                 unsigned threads) {
  std::vector<RenderJob> jobs;
  for (const View& v : views) jobs.push_back(RenderJob{&cloud, v.camera, v.pose});
  const auto images = render_batch(jobs, RenderMode::rgb, settings, threads);
  double sum = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) sum += psnr(images[i].rgb, reference[i].rgb);
  return sum / static_cast<double>(images.size());
}

int run_prune(const PruneArgs& a, std::ostream& out) {
  if (a.views < 1) throw ArgumentError("--views must be >= 1");
  if (a.heldout < 1) throw ArgumentError("--heldout must be >= 1");
  if (!(a.keep > 0.0 && a.keep <= 1.0)) throw ArgumentError("--keep must lie in (0, 1]");
  EngineConfig config = load_engine_config(a.common);
  const RenderSettings& settings = config.env.render;
  const LoadedScene scene = load_scene(config, a.common.seed);
  const GaussianCloud& cloud = scene.cloud;

  const auto views = sample_views(scene.env, a.views, a.common.seed, "prune.views");
  const auto scores = importance_scores(cloud, views, settings, a.common.threads);
  const GaussianCloud pruned = prune(cloud, scores, a.keep);
  save_ply(pruned, a.out);

  // Random baseline of the same size.
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(a.common.seed, "prune.random");
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(pruned.size());
  std::sort(order.begin(), order.end());
  const GaussianCloud baseline = select(cloud, order);

  const auto held = sample_views(scene.env, a.heldout, a.common.seed, "prune.heldout");
  std::vector<RenderJob> jobs;
  for (const View& v : held) jobs.push_back(RenderJob{&cloud, v.camera, v.pose});
  const auto reference = render_batch(jobs, RenderMode::rgb, settings, a.common.threads);

  out << "gaussians_before=" << cloud.size() << '\n';
  out << "gaussians_after=" << pruned.size() << '\n';
  out << "psnr_importance=" << format_double(mean_psnr(pruned, held, reference, settings, a.common.threads))
      << '\n';
  out << "psnr_random=" << format_double(mean_psnr(baseline, held, reference, settings, a.common.threads))
      << '\n';
  return kExitOk;
}

}  // namespace

void register_prune(CLI::App& app, Command& selected, std::ostream& out) {
  auto args = std::make_shared<PruneArgs>();
  CLI::App* cmd = app.add_subcommand("prune", "Prune a scene by rendering importance and write PLY");
  add_common_options(*cmd, args->common);
  cmd->add_option("--views", args->views, "Views used for the importance scores");
  cmd->add_option("--keep", args->keep, "Fraction of Gaussians to keep, in (0, 1]");
  cmd->add_option("--out", args->out, "Output PLY path")->required();
  cmd->add_option("--heldout", args->heldout, "Held-out views for the PSNR report");
  cmd->callback([args, &selected, &out] { selected = [args, &out] { return run_prune(*args, out); }; });
}

}  // namespace gsnav::cli
