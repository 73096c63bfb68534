#include "gsnav/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsnav/errors.hpp"
#include "gsnav/parallel.hpp"

namespace gsnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kShC0 = 0.28209479177387814;
constexpr double kShC1 = 0.4886025119029199;
constexpr double kShC2[] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005,
                            -1.0925484305920792, 0.5462742152960396};
constexpr double kShC3[] = {-0.5900435899266435, 2.890611442640554, -0.4570457994644658,
                            0.3731763325901154,  -0.4570457994644658, 1.445305721320277,
                            -0.5900435899266435};

struct TileRange {
  int x0 = 0, x1 = -1, y0 = 0, y1 = -1;
  bool empty() const { return x0 > x1 || y0 > y1; }
};

// floor(v) and ceil(v) clamped to [lo, hi]; NaN gives hi.
int floor_in(double v, int lo, int hi) {
  if (!(v >= lo)) return v < lo ? lo : hi;
  if (v >= hi) return hi;
  const int i = static_cast<int>(v);
  return i - (i > v);
}

int ceil_in(double v, int lo, int hi) {
  if (!(v >= lo)) return v < lo ? lo : hi;
  if (v >= hi) return hi;
  const int i = static_cast<int>(v);
  return i + (i < v);
}

TileRange tiles_covering(double cx, double cy, double hx, double hy, int tile_size, int tiles_x,
                         int tiles_y) {
  TileRange r;
  r.x0 = floor_in((cx - hx) / tile_size, 0, tiles_x);
  r.x1 = ceil_in((cx + hx) / tile_size, 0, tiles_x) - 1;
  r.y0 = floor_in((cy - hy) / tile_size, 0, tiles_y);
  r.y1 = ceil_in((cy + hy) / tile_size, 0, tiles_y) - 1;
  return r;
}

TileBins empty_bins(const CameraModel& cam, int tile_size) {
  if (tile_size <= 0) throw ArgumentError("tile size must be positive");
  TileBins bins;
  bins.tile_size = tile_size;
  bins.tiles_x = (cam.width + tile_size - 1) / tile_size;
  bins.tiles_y = (cam.height + tile_size - 1) / tile_size;
  bins.tiles.resize(static_cast<std::size_t>(bins.tiles_x) * bins.tiles_y);
  return bins;
}

/// Projected indices ordered by (depth, index). Binning in this order leaves
/// every tile list sorted front to back.
std::vector<std::uint32_t> depth_order(std::span<const ProjectedGaussian> projected) {
  std::vector<std::uint32_t> order(projected.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<std::uint32_t>(k);
  std::sort(order.begin(), order.end(), [&projected](std::uint32_t a, std::uint32_t b) {
    const double da = projected[a].depth, db = projected[b].depth;
    return da < db || (da == db && a < b);
  });
  return order;
}

double max_eigenvalue(const Eigen::Matrix2d& m) {
  const double mid = 0.5 * (m(0, 0) + m(1, 1));
  const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
  return mid + std::sqrt(half_diff * half_diff + m(0, 1) * m(0, 1));
}

TileRange square_range(const ProjectedGaussian& g, const TileBins& bins) {
  const double r = square_radius(g.cov2d);
  return tiles_covering(g.mean2d.x(), g.mean2d.y(), r, r, bins.tile_size, bins.tiles_x,
                        bins.tiles_y);
}

/// Minimum of the quadratic form over the segment d0 + t * dir, t in [0, 1].
double segment_min(const Eigen::Vector3d& conic, const Eigen::Vector2d& d0,
                   const Eigen::Vector2d& dir) {
  const double a = conic[0], b = conic[1], c = conic[2];
  const auto q = [&](const Eigen::Vector2d& d) {
    return a * d.x() * d.x() + 2.0 * b * d.x() * d.y() + c * d.y() * d.y();
  };
  const double qq = a * dir.x() * dir.x() + 2.0 * b * dir.x() * dir.y() + c * dir.y() * dir.y();
  const double lin = a * d0.x() * dir.x() + b * (d0.x() * dir.y() + d0.y() * dir.x()) +
                     c * d0.y() * dir.y();
  double t = qq > 0.0 ? -lin / qq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::min({q(d0 + t * dir), q(d0), q(d0 + dir)});
}

struct PixelSample {
  std::uint32_t g;
  double alpha;
  double transmittance;
  bool clamped;
};

}  // namespace

Eigen::Vector3d sh_to_color(const Eigen::Vector3f& dc, std::span<const float> rest,
                            const Eigen::Vector3d& dir) {
  Eigen::Vector3d color = kShC0 * dc.cast<double>();
  if (rest.size() == kShRestCount) {
    const double x = dir.x(), y = dir.y(), z = dir.z();
    const double xx = x * x, yy = y * y, zz = z * z;
    const double basis[15] = {
        -kShC1 * y,
        kShC1 * z,
        -kShC1 * x,
        kShC2[0] * x * y,
        kShC2[1] * y * z,
        kShC2[2] * (2.0 * zz - xx - yy),
        kShC2[3] * x * z,
        kShC2[4] * (xx - yy),
        kShC3[0] * y * (3.0 * xx - yy),
        kShC3[1] * x * y * z,
        kShC3[2] * y * (4.0 * zz - xx - yy),
        kShC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy),
        kShC3[4] * x * (4.0 * zz - xx - yy),
        kShC3[5] * z * (xx - yy),
        kShC3[6] * x * (xx - 3.0 * yy),
    };
    for (int ch = 0; ch < 3; ++ch) {
      double acc = 0.0;
      for (std::size_t k = 0; k < kShRestPerChannel; ++k) {
        acc += basis[k] * rest[ch * kShRestPerChannel + k];
      }
      color[ch] += acc;
    }
  }
  return (color.array() + 0.5).max(0.0).matrix();
}

std::vector<ProjectedGaussian> project(const GaussianCloud& cloud, const CameraModel& cam,
                                       const Pose& pose, const RenderSettings& settings) {
  cam.validate();
  pose.validate();
  const Eigen::Matrix3d view = pose.rotation.normalized().toRotationMatrix();
  const double level_cap = settings.support_sigma * settings.support_sigma;

  std::vector<ProjectedGaussian> out;
  out.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d mean = cloud.means[i].cast<double>();
    const Eigen::Vector3d t = view * (mean - pose.translation);
    if (!(t.z() > settings.near_plane)) continue;

    const Eigen::Matrix3d rot = cloud.rotations[i].cast<double>().normalized().toRotationMatrix();
    const Eigen::Vector3d scale = cloud.log_scales[i].cast<double>().array().exp();
    const Eigen::Matrix3d m = rot * scale.asDiagonal();
    const Eigen::Matrix3d cov_cam = view * (m * m.transpose()) * view.transpose();

    const double inv_z = 1.0 / t.z();
    Eigen::Matrix<double, 2, 3> jac;
    jac << cam.fx * inv_z, 0.0, -cam.fx * t.x() * inv_z * inv_z,
           0.0, cam.fy * inv_z, -cam.fy * t.y() * inv_z * inv_z;

    ProjectedGaussian g;
    g.index = static_cast<std::uint32_t>(i);
    g.cov2d = jac * cov_cam * jac.transpose();
    g.cov2d(0, 0) += settings.blur;
    g.cov2d(1, 1) += settings.blur;
    g.cov2d(0, 1) = g.cov2d(1, 0) = 0.5 * (g.cov2d(0, 1) + g.cov2d(1, 0));
    g.mean2d = {cam.fx * t.x() * inv_z + cam.cx, cam.fy * t.y() * inv_z + cam.cy};
    g.depth = t.z();
    g.opacity = cloud.opacity(i);

    const double det = g.cov2d.determinant();
    if (det > 1e-12) {
      g.conic = {g.cov2d(1, 1) / det, -g.cov2d(0, 1) / det, g.cov2d(0, 0) / det};
      if (g.opacity > settings.alpha_min) {
        g.footprint = std::min(level_cap, 2.0 * std::log(g.opacity / settings.alpha_min));
      }
    }

    const auto rest = cloud.rest_of(i);
    if (rest.empty()) {
      g.color = sh_to_color(cloud.sh_dc[i], rest, Eigen::Vector3d::UnitZ());
    } else {
      g.color = sh_to_color(cloud.sh_dc[i], rest, (mean - pose.translation).normalized());
    }
    out.push_back(g);
  }
  return out;
}

std::size_t TileBins::pair_count() const {
  std::size_t n = 0;
  for (const auto& t : tiles) n += t.size();
  return n;
}

std::vector<int> TileBins::tiles_of(std::uint32_t g) const {
  std::vector<int> out;
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    for (const auto& e : tiles[t]) {
      if (e.gaussian == g) {
        out.push_back(static_cast<int>(t));
        break;
      }
    }
  }
  return out;
}

int square_radius(const Eigen::Matrix2d& cov2d) {
  return static_cast<int>(std::ceil(3.0 * std::sqrt(std::max(0.0, max_eigenvalue(cov2d)))));
}

TileBins tile_bins_square(std::span<const ProjectedGaussian> projected, const CameraModel& cam,
                          int tile_size) {
  TileBins bins = empty_bins(cam, tile_size);
  for (const std::uint32_t k : depth_order(projected)) {
    const ProjectedGaussian& g = projected[k];
    if (!g.mean2d.allFinite() || !g.cov2d.allFinite()) continue;
    const TileRange r = square_range(g, bins);
    for (int ty = r.y0; ty <= r.y1; ++ty) {
      for (int tx = r.x0; tx <= r.x1; ++tx) {
        bins.tiles[ty * bins.tiles_x + tx].push_back({k, g.depth});
      }
    }
  }
  return bins;
}

bool ellipse_meets_rect(const Eigen::Vector2d& center, const Eigen::Vector3d& conic, double level,
                        const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  if (level < 0.0 || lo.x() > hi.x() || lo.y() > hi.y()) return false;
  if (center.x() >= lo.x() && center.x() <= hi.x() && center.y() >= lo.y() &&
      center.y() <= hi.y()) {
    return true;
  }
  const Eigen::Vector2d a = lo - center;
  const Eigen::Vector2d b = hi - center;
  const Eigen::Vector2d w(b.x() - a.x(), 0.0);
  const Eigen::Vector2d h(0.0, b.y() - a.y());
  const double best = std::min({segment_min(conic, a, w), segment_min(conic, {a.x(), b.y()}, w),
                                segment_min(conic, a, h), segment_min(conic, {b.x(), a.y()}, h)});
  return best <= level;
}

TileBins tile_bins_exact(std::span<const ProjectedGaussian> projected, const CameraModel& cam,
                         int tile_size, double eps, double support_sigma) {
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("exact binning eps must lie in (0, 1)");
  TileBins bins = empty_bins(cam, tile_size);
  const double level_cap = support_sigma * support_sigma;
  for (const std::uint32_t k : depth_order(projected)) {
    const ProjectedGaussian& g = projected[k];
    if (!g.mean2d.allFinite() || !g.cov2d.allFinite()) continue;
    if (g.opacity <= eps) continue;
    const double det = g.cov2d.determinant();
    if (!(det > 1e-12)) continue;
    const double level = std::min(level_cap, 2.0 * std::log(g.opacity / eps));

    // Tight ellipse AABB, intersected with the square range so that the
    // exact set never leaves the square set.
    const double hx = std::sqrt(level * g.cov2d(0, 0));
    const double hy = std::sqrt(level * g.cov2d(1, 1));
    TileRange r = tiles_covering(g.mean2d.x(), g.mean2d.y(), hx, hy, tile_size, bins.tiles_x,
                                 bins.tiles_y);
    const TileRange sq = square_range(g, bins);
    r.x0 = std::max(r.x0, sq.x0);
    r.x1 = std::min(r.x1, sq.x1);
    r.y0 = std::max(r.y0, sq.y0);
    r.y1 = std::min(r.y1, sq.y1);

    // Per tile row, the x-extent of the ellipse restricted to the row's
    // band of pixel centers. x_lo(dy) is convex and x_hi(dy) concave, so
    // each extreme sits at the tangent point or at a band edge.
    const double sxx = g.cov2d(0, 0), sxy = g.cov2d(0, 1), syy = g.cov2d(1, 1);
    const double slope = sxy / syy;
    const double width_scale = det / syy;
    const double tangent_dy = sxy * std::sqrt(level / sxx);
    const auto half_width = [&](double dy) {
      return std::sqrt(std::max(0.0, (level - dy * dy / syy) * width_scale));
    };
    for (int ty = r.y0; ty <= r.y1; ++ty) {
      const double y0 = std::max(ty * tile_size + 0.5 - g.mean2d.y(), -hy);
      const double y1 = std::min(std::min((ty + 1) * tile_size, cam.height) - 0.5 - g.mean2d.y(), hy);
      if (y0 > y1) continue;
      const double top = std::clamp(tangent_dy, y0, y1);
      const double bottom = std::clamp(-tangent_dy, y0, y1);
      const double x_hi = g.mean2d.x() + slope * top + half_width(top);
      const double x_lo = g.mean2d.x() + slope * bottom - half_width(bottom);
      for (int tx = r.x0; tx <= r.x1; ++tx) {
        if (tx * tile_size + 0.5 <= x_hi && std::min((tx + 1) * tile_size, cam.width) - 0.5 >= x_lo) {
          bins.tiles[ty * bins.tiles_x + tx].push_back({k, g.depth});
        }
      }
    }
  }
  return bins;
}

RenderOutput composite(std::span<const ProjectedGaussian> projected, const TileBins& bins,
                       const CameraModel& cam, RenderMode mode, const RenderSettings& settings,
                       std::span<const double> alpha_gains) {
  const bool want_rgb = mode != RenderMode::depth;
  const bool want_depth = mode != RenderMode::rgb;
  RenderOutput out;
  if (want_rgb) out.rgb = Image(cam.width, cam.height, 3);
  if (want_depth) out.depth = Image(cam.width, cam.height, 1);
  out.alpha = Image(cam.width, cam.height, 1);

  // Splats are visited in front-to-back order and each one only touches
  // the pixel runs its ellipse covers in every row. Every pixel still sees
  // the same sequence of contributions as a per-pixel loop would.
  struct Splat {
    double mx, my, a, b2, c, footprint, opacity, depth, hy, step, col_pad;
    Eigen::Vector3d color;
  };
  constexpr double kStepLimit = 8.0;
  std::vector<Splat> splats;
  const int ts = bins.tile_size;
  const std::size_t tile_pixels = static_cast<std::size_t>(ts) * ts;
  std::vector<double> trans(tile_pixels), depth_acc(tile_pixels);
  std::vector<Eigen::Vector3d> color(tile_pixels);
  std::vector<char> done(tile_pixels);
  std::vector<int> row_remaining(static_cast<std::size_t>(ts));
  constexpr double kPad = 1e-6;

  for (int ty = 0; ty < bins.tiles_y; ++ty) {
    for (int tx = 0; tx < bins.tiles_x; ++tx) {
      const auto& entries = bins.at(tx, ty);
      splats.clear();
      for (const TileEntry& e : entries) {
        const ProjectedGaussian& g = projected[e.gaussian];
        if (!(g.footprint >= 0.0)) continue;
        const double gain = alpha_gains.empty() ? 1.0 : alpha_gains[g.index];
        const double det = g.conic[0] * g.conic[2] - g.conic[1] * g.conic[1];
        const double hy = det > 0.0 ? std::sqrt(g.footprint * g.conic[0] / det) : kInf;
        // Bounds the magnitude of the row roots over every row the splat spans.
        const double a = g.conic[0], b2 = 2.0 * g.conic[1], c = g.conic[2];
        double root_scale =
            a > 0.0 ? std::sqrt(b2 * b2 * hy * hy + 4.0 * a * (std::abs(c) * hy * hy + g.footprint)) / (2.0 * a)
                    : 0.0;
        if (std::isnan(root_scale)) root_scale = kInf;
        splats.push_back({g.mean2d.x(), g.mean2d.y(), a, b2, c, g.footprint, gain * g.opacity, g.depth,
                          hy * (1.0 + kPad) + kPad, a < kStepLimit ? std::exp(-a) : 0.0,
                          kPad * (1.0 + root_scale + std::abs(g.mean2d.x())), g.color});
      }
      const int x0 = tx * ts, y0 = ty * ts;
      const int x_end = std::min(x0 + ts, cam.width);
      const int y_end = std::min(y0 + ts, cam.height);
      const int w = x_end - x0;
      std::fill(trans.begin(), trans.end(), 1.0);
      std::fill(depth_acc.begin(), depth_acc.end(), 0.0);
      std::fill(color.begin(), color.end(), Eigen::Vector3d::Zero());
      std::fill(done.begin(), done.end(), 0);
      int remaining = w * (y_end - y0);
      std::fill(row_remaining.begin(), row_remaining.end(), w);

      for (const Splat& g : splats) {
        if (remaining == 0) break;
        const int row_lo = ceil_in(g.my - g.hy - 0.5, y0, y_end);
        const int row_hi = floor_in(g.my + g.hy - 0.5, y0 - 1, y_end - 1);
        for (int py = row_lo; py <= row_hi; ++py) {
          if (row_remaining[py - y0] == 0) continue;
          const double sy = py + 0.5;
          const double dy = sy - g.my;
          // Columns where a dx^2 + b2 dy dx + c dy^2 <= footprint, padded well
          // beyond the rounding error of the roots.
          int col_lo = x0, col_hi = x_end - 1;
          if (g.a > 0.0) {
            const double bb = g.b2 * dy;
            const double cc = g.c * dy * dy;
            const double disc = std::max(0.0, bb * bb - 4.0 * g.a * (cc - g.footprint));
            const double mid = -bb / (2.0 * g.a);
            const double half = std::sqrt(disc) / (2.0 * g.a);
            col_lo = ceil_in(g.mx + mid - half - g.col_pad - 0.5, x0, x_end);
            col_hi = floor_in(g.mx + mid + half + g.col_pad - 0.5, x0 - 1, x_end - 1);
          }
          const std::size_t row_base = static_cast<std::size_t>(py - y0) * ts;
          // exp(-q/2) stepped along the row: the ratio between neighbours
          // itself shrinks by exp(-a) per pixel.
          const bool stepped = g.a < kStepLimit && col_hi - col_lo >= 2;
          double falloff = 0.0, ratio = 0.0;
          if (stepped) {
            const double dx = col_lo + 0.5 - g.mx;
            falloff = std::exp(-0.5 * (g.a * dx * dx + g.b2 * dx * dy + g.c * dy * dy));
            ratio = std::exp(-0.5 * (g.a * (2.0 * dx + 1.0) + g.b2 * dy));
          }
          for (int px = col_lo; px <= col_hi; ++px) {
            const double g_px = falloff;
            falloff *= ratio;
            ratio *= g.step;
            const std::size_t k = row_base + (px - x0);
            if (done[k]) continue;
            const double dx = px + 0.5 - g.mx;
            const double q = g.a * dx * dx + g.b2 * dx * dy + g.c * dy * dy;
            if (q > g.footprint) continue;
            const double alpha =
                std::min(settings.alpha_max, g.opacity * (stepped ? g_px : std::exp(-0.5 * q)));
            const double weight = alpha * trans[k];
            if (want_rgb) color[k] += weight * g.color;
            if (want_depth) depth_acc[k] += weight * g.depth;
            trans[k] *= 1.0 - alpha;
            if (trans[k] < settings.min_transmittance) {
              done[k] = 1;
              --remaining;
              --row_remaining[py - y0];
            }
          }
        }
      }

      for (int py = y0; py < y_end; ++py) {
        for (int px = x0; px < x_end; ++px) {
          const std::size_t k = static_cast<std::size_t>(py - y0) * ts + (px - x0);
          const double accumulated = 1.0 - trans[k];
          out.alpha.at(px, py) = accumulated;
          if (want_rgb) {
            const Eigen::Vector3d c = color[k] + trans[k] * settings.background;
            for (int ch = 0; ch < 3; ++ch) out.rgb.at(px, py, ch) = c[ch];
          }
          if (want_depth) {
            out.depth.at(px, py) = accumulated > 1e-6 ? depth_acc[k] / accumulated : settings.far_depth;
          }
        }
      }
    }
  }
  return out;
}

namespace {

TileBins bin(std::span<const ProjectedGaussian> projected, const CameraModel& cam,
             const RenderSettings& settings) {
  return settings.binning == Binning::exact
             ? tile_bins_exact(projected, cam, settings.tile_size, settings.alpha_min,
                               settings.support_sigma)
             : tile_bins_square(projected, cam, settings.tile_size);
}

}  // namespace

RenderOutput render(const GaussianCloud& cloud, const CameraModel& cam, const Pose& pose,
                    RenderMode mode, const RenderSettings& settings,
                    std::span<const double> alpha_gains) {
  if (!alpha_gains.empty() && alpha_gains.size() != cloud.size()) {
    throw ArgumentError("alpha_gains must hold one value per gaussian");
  }
  const auto projected = project(cloud, cam, pose, settings);
  const TileBins bins = bin(projected, cam, settings);
  return composite(projected, bins, cam, mode, settings, alpha_gains);
}

std::vector<RenderOutput> render_batch(std::span<const RenderJob> jobs, RenderMode mode,
                                       const RenderSettings& settings, unsigned threads) {
  if (jobs.empty()) throw ArgumentError("render_batch needs at least one job");
  for (const auto& job : jobs) {
    if (job.cloud == nullptr) throw ArgumentError("render job without a cloud");
  }
  std::vector<RenderOutput> out(jobs.size());
  parallel_for(
      jobs.size(),
      [&](std::size_t i) {
        out[i] = render(*jobs[i].cloud, jobs[i].camera, jobs[i].pose, mode, settings);
      },
      threads);
  return out;
}

std::vector<double> importance_scores(const GaussianCloud& cloud, std::span<const View> views,
                                      const RenderSettings& settings, unsigned threads) {
  if (views.empty()) throw ArgumentError("importance_scores needs at least one view");
  std::vector<std::vector<double>> per_view(views.size());

  parallel_for(
      views.size(),
      [&](std::size_t v) {
        const CameraModel& cam = views[v].camera;
        const auto projected = project(cloud, cam, views[v].pose, settings);
        const TileBins bins = bin(projected, cam, settings);
        std::vector<double>& score = per_view[v];
        score.assign(cloud.size(), 0.0);
        std::vector<PixelSample> samples;

        for (int ty = 0; ty < bins.tiles_y; ++ty) {
          for (int tx = 0; tx < bins.tiles_x; ++tx) {
            const auto& entries = bins.at(tx, ty);
            const int x_end = std::min((tx + 1) * bins.tile_size, cam.width);
            const int y_end = std::min((ty + 1) * bins.tile_size, cam.height);
            for (int py = ty * bins.tile_size; py < y_end; ++py) {
              for (int px = tx * bins.tile_size; px < x_end; ++px) {
                const double sx = px + 0.5;
                const double sy = py + 0.5;
                samples.clear();
                double transmittance = 1.0;
                for (const TileEntry& e : entries) {
                  const ProjectedGaussian& g = projected[e.gaussian];
                  const double q = g.mahalanobis_sq(sx - g.mean2d.x(), sy - g.mean2d.y());
                  if (q > g.footprint) continue;
                  const double raw = g.opacity * std::exp(-0.5 * q);
                  const bool clamped = raw >= settings.alpha_max;
                  const double alpha = clamped ? settings.alpha_max : raw;
                  samples.push_back({e.gaussian, alpha, transmittance, clamped});
                  transmittance *= 1.0 - alpha;
                  if (transmittance < settings.min_transmittance) break;
                }
                // Back-to-front: suffix holds everything composited behind the
                // current sample, background included.
                Eigen::Vector3d suffix = transmittance * settings.background;
                for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
                  const ProjectedGaussian& g = projected[it->g];
                  const Eigen::Vector3d own = it->alpha * it->transmittance * g.color;
                  if (!it->clamped) {
                    const Eigen::Vector3d grad = own - (it->alpha / (1.0 - it->alpha)) * suffix;
                    score[g.index] += grad.squaredNorm();
                  }
                  suffix += own;
                }
              }
            }
          }
        }
      },
      threads);

  std::vector<double> total(cloud.size(), 0.0);
  for (const auto& s : per_view) {
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += s[i];
  }
  return total;
}

double psnr(const Image& a, const Image& b, double peak) {
  if (a.data.size() != b.data.size() || a.data.empty()) {
    throw ArgumentError("psnr needs equally sized non-empty images");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(a.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace gsnav
