#include "gsnav/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "gsnav/errors.hpp"

namespace gsnav {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  if (!v.empty() && v.back() == ',') out.push_back({});
  return out;
}

double to_double(const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) throw ConfigError("expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& v) {
  long long out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError("expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& v, std::size_t n) {
  const auto items = split_list(v);
  if (n != 0 && items.size() != n) {
    throw ConfigError("expected " + std::to_string(n) + " comma-separated numbers, got '" + v + "'");
  }
  std::vector<double> out;
  for (const auto& s : items) out.push_back(to_double(s));
  return out;
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_vec(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

std::string fmt_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

struct Field {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

class Registry {
 public:
  using Key = std::pair<std::string, std::string>;

  void add(const std::string& section, const std::string& key, Field f) {
    order_.push_back({section, key});
    fields_[{section, key}] = std::move(f);
  }
  void num(const std::string& s, const std::string& k, double& ref) {
    add(s, k, {[&ref](const std::string& v) { ref = to_double(v); }, [&ref] { return fmt(ref); }});
  }
  void integer(const std::string& s, const std::string& k, int& ref) {
    add(s, k, {[&ref](const std::string& v) { ref = static_cast<int>(to_int(v)); },
               [&ref] { return std::to_string(ref); }});
  }
  void flag(const std::string& s, const std::string& k, bool& ref) {
    add(s, k, {[&ref](const std::string& v) { ref = to_bool(v); }, [&ref] { return ref ? "true" : "false"; }});
  }
  void vec3(const std::string& s, const std::string& k, Eigen::Vector3d& ref) {
    add(s, k, {[&ref](const std::string& v) {
                 const auto d = to_doubles(v, 3);
                 ref = {d[0], d[1], d[2]};
               },
               [&ref] { return fmt_vec(ref); }});
  }
  void ints(const std::string& s, const std::string& k, std::vector<int>& ref) {
    add(s, k, {[&ref](const std::string& v) {
                 ref.clear();
                 if (trim(v).empty()) return;
                 for (const auto& item : split_list(v)) ref.push_back(static_cast<int>(to_int(item)));
               },
               [&ref] { return fmt_ints(ref); }});
  }

  bool has_section(const std::string& s) const {
    for (const auto& k : order_) {
      if (k.first == s) return true;
    }
    return false;
  }
  const Field* find(const std::string& s, const std::string& k) const {
    const auto it = fields_.find({s, k});
    return it == fields_.end() ? nullptr : &it->second;
  }
  const std::vector<Key>& order() const { return order_; }

 private:
  std::vector<Key> order_;
  std::map<Key, Field> fields_;
};

std::string source_name(SceneSource s) {
  switch (s) {
    case SceneSource::ply: return "ply";
    case SceneSource::bundle: return "bundle";
    case SceneSource::random: return "random";
    case SceneSource::pillars: return "pillars";
  }
  return "pillars";
}

Registry make_registry(EngineConfig& c, const std::filesystem::path& base) {
  Registry r;
  auto path_field = [&r, base](const std::string& k, std::filesystem::path& ref) {
    r.add("scene", k, {[&ref, base](const std::string& v) {
                         std::filesystem::path p(v);
                         ref = (p.is_relative() && !base.empty() && !v.empty()) ? base / p : p;
                       },
                       [&ref] { return ref.string(); }});
  };
  SceneConfig& sc = c.scene;
  r.add("scene", "source", {[&sc](const std::string& v) {
                              if (v == "ply") sc.source = SceneSource::ply;
                              else if (v == "bundle") sc.source = SceneSource::bundle;
                              else if (v == "random") sc.source = SceneSource::random;
                              else if (v == "pillars") sc.source = SceneSource::pillars;
                              else throw ConfigError("scene source must be ply, bundle, random or pillars");
                            },
                            [&sc] { return source_name(sc.source); }});
  path_field("ply", sc.ply);
  path_field("points", sc.points);
  path_field("bundle", sc.bundle);
  r.add("scene", "synthetic_count", {[&sc](const std::string& v) {
                                       const long long n = to_int(v);
                                       if (n <= 0) throw ConfigError("synthetic_count must be positive");
                                       sc.synthetic_count = static_cast<std::size_t>(n);
                                     },
                                     [&sc] { return std::to_string(sc.synthetic_count); }});
  r.num("scene", "synthetic_anisotropy", sc.synthetic_anisotropy);
  r.integer("scene", "pillars", sc.pillars);
  r.num("scene", "scale", sc.transform.scale);
  r.add("scene", "rotation", {[&sc](const std::string& v) {
                                const auto q = to_doubles(v, 4);
                                sc.transform.rotation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]);
                              },
                              [&sc] {
                                const auto& q = sc.transform.rotation;
                                return fmt(q.w()) + ", " + fmt(q.x()) + ", " + fmt(q.y()) + ", " + fmt(q.z());
                              }});
  r.vec3("scene", "translation", sc.transform.translation);
  r.num("scene", "collision_opacity_min", sc.collision_opacity_min);
  r.num("scene", "voxel", sc.voxel);
  r.num("scene", "inflation", sc.inflation);
  VisualRandomization& vis = c.env.visual;
  r.num("scene", "color_alpha_min", vis.color.alpha_min);
  r.num("scene", "color_alpha_max", vis.color.alpha_max);
  r.num("scene", "color_beta_min", vis.color.beta_min);
  r.num("scene", "color_beta_max", vis.color.beta_max);
  r.num("scene", "fov_min", vis.fov_min_deg);
  r.num("scene", "fov_max", vis.fov_max_deg);

  EnvConfig& e = c.env;
  r.integer("camera", "width", e.width);
  r.integer("camera", "height", e.height);
  r.num("camera", "fov", e.fov_deg);
  r.num("camera", "mount_pitch", e.mount_pitch_deg);
  r.integer("camera", "tile_size", e.render.tile_size);
  r.add("camera", "binning", {[&e](const std::string& v) {
                                if (v == "exact") e.render.binning = Binning::exact;
                                else if (v == "square") e.render.binning = Binning::square;
                                else throw ConfigError("binning must be exact or square");
                              },
                              [&e] { return std::string(e.render.binning == Binning::exact ? "exact" : "square"); }});
  r.num("camera", "near", e.render.near_plane);
  r.num("camera", "far", e.render.far_depth);
  r.vec3("camera", "background", e.render.background);

  DynamicsParams& d = e.dynamics;
  r.num("dynamics", "mass", d.mass);
  r.vec3("dynamics", "inertia", d.inertia);
  r.num("dynamics", "drag", d.drag);
  r.num("dynamics", "gravity", d.gravity);
  r.num("dynamics", "thrust_max_ratio", d.thrust_max_ratio);
  r.num("dynamics", "thrust_gain", d.thrust_gain);
  r.num("dynamics", "tilt_max", d.tilt_max_deg);
  r.num("dynamics", "yawrate_max", d.yawrate_max_deg);
  r.num("dynamics", "attitude_kp", d.attitude_kp);
  r.vec3("dynamics", "rate_kp", d.rate_kp);
  r.vec3("dynamics", "rate_kd", d.rate_kd);
  r.num("dynamics", "dt_sim", d.dt_sim);
  r.integer("dynamics", "control_decimation", d.control_decimation);

  r.flag("randomization", "colors", vis.colors);
  r.num("randomization", "sh_noise", vis.color.noise_sigma);
  r.flag("randomization", "fov", vis.fov);
  r.flag("randomization", "latency", e.latency.enabled);
  r.flag("randomization", "latency_resample", e.latency.resample);
  r.num("randomization", "delay_min", e.latency.delay_min_ms);
  r.num("randomization", "delay_max", e.latency.delay_max_ms);
  r.num("randomization", "interval_min", e.latency.interval_min_ms);
  r.num("randomization", "interval_max", e.latency.interval_max_ms);
  r.num("randomization", "action_noise", e.latency.action_noise_sigma);
  r.flag("randomization", "perception", e.perception.enabled);
  r.num("randomization", "ou_theta", e.perception.theta);
  r.num("randomization", "velocity_noise", e.perception.velocity_sigma);
  r.num("randomization", "direction_noise", e.perception.direction_sigma);
  r.num("randomization", "altitude_noise", e.perception.altitude_sigma);

  EpisodeConfig& ep = e.episode;
  r.vec3("env", "goal", ep.goal);
  r.vec3("env", "start_min", ep.start_min);
  r.vec3("env", "start_max", ep.start_max);
  r.num("env", "start_yaw_range", e.start_yaw_range_deg);
  r.num("env", "z_min", ep.z_min);
  r.num("env", "z_max", ep.z_max);
  r.num("env", "v_max", ep.v_max);
  r.num("env", "reach_radius", ep.reach_radius);
  r.integer("env", "max_steps", ep.max_steps);
  r.integer("env", "max_reset_tries", e.max_reset_tries);
  r.flag("env", "privileged", e.privileged);
  r.num("env", "w_collision", ep.weights.collision);
  r.num("env", "w_z_velocity", ep.weights.z_velocity);
  r.num("env", "w_action", ep.weights.action_magnitude);
  r.num("env", "w_action_change", ep.weights.action_change);
  r.num("env", "w_distance", ep.weights.distance);
  r.num("env", "w_success", ep.weights.success);
  r.num("env", "w_velocity_excess", ep.weights.velocity_excess);

  DaDemoOptions& da = c.da;
  r.ints("da", "encoder_hidden", da.network.encoder_hidden);
  r.integer("da", "feature_dim", da.network.feature_dim);
  r.ints("da", "discriminator_hidden", da.network.discriminator_hidden);
  r.num("da", "lambda", da.network.lambda_grl);
  r.num("da", "lambda1", da.network.lambda1);
  r.num("da", "lambda2", da.network.lambda2);
  r.num("da", "lr", da.network.learning_rate);
  r.num("da", "discriminator_lr", da.network.discriminator_learning_rate);
  r.integer("da", "epochs", da.epochs);
  r.integer("da", "batch_size", da.batch_size);
  r.integer("da", "train_per_domain", da.train_per_domain);
  r.integer("da", "test_per_domain", da.test_per_domain);
  r.integer("da", "input_dim", da.data.input_dim);
  r.integer("da", "content_dim", da.data.content_dim);
  r.num("da", "shift", da.data.shift);
  r.num("da", "distortion", da.data.distortion);
  r.num("da", "noise", da.data.noise);
  return r;
}

}  // namespace

void EngineConfig::validate() const {
  env.validate();
  da.network.validate();
  if (!(scene.transform.scale > 0.0)) throw ConfigError("scene scale must be positive");
  if (std::abs(scene.transform.rotation.norm() - 1.0) > 1e-6) {
    throw ConfigError("scene rotation must be a unit quaternion (w, x, y, z)");
  }
  if (!(scene.voxel > 0.0)) throw ConfigError("scene voxel must be positive");
  if (scene.inflation < 0.0) throw ConfigError("scene inflation must be >= 0");
  if (scene.pillars < 0) throw ConfigError("scene pillars must be >= 0");
  if (scene.synthetic_anisotropy < 0.0) throw ConfigError("scene synthetic_anisotropy must be >= 0");
  if (scene.collision_opacity_min < 0.0 || scene.collision_opacity_min >= 1.0) {
    throw ConfigError("collision_opacity_min must lie in [0, 1)");
  }
  if (scene.source == SceneSource::ply && scene.ply.empty()) throw ConfigError("scene source ply needs scene.ply");
  if (scene.source == SceneSource::bundle && scene.bundle.empty()) {
    throw ConfigError("scene source bundle needs scene.bundle");
  }
  if (da.epochs < 0 || da.batch_size <= 0 || da.train_per_domain <= 0 || da.test_per_domain <= 0) {
    throw ConfigError("da epochs, batch size and sample counts must be positive");
  }
}

EngineConfig parse_config(const std::string& text, const std::string& origin,
                          const std::filesystem::path& base_dir) {
  EngineConfig config;
  Registry reg = make_registry(config, base_dir);
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!reg.has_section(section)) throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Field* f = reg.find(section, key);
    if (!f) throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
    try {
      f->set(value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + key + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string(), path.parent_path());
}

std::string to_config_text(const EngineConfig& config) {
  EngineConfig copy = config;
  Registry reg = make_registry(copy, {});
  std::string out;
  std::string section;
  for (const auto& [s, k] : reg.order()) {
    if (s != section) {
      out += (section.empty() ? "" : "\n") + std::string("[") + s + "]\n";
      section = s;
    }
    out += k + " = " + reg.find(s, k)->get() + "\n";
  }
  return out;
}

}  // namespace gsnav
