#include "gsnav/ply_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

#include "gsnav/errors.hpp"

namespace gsnav {
namespace {

static_assert(std::endian::native == std::endian::little,
              "PLY I/O assumes a little-endian host");

struct PlyProperty {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
  bool is_float = false;
};

struct PlyHeader {
  std::size_t vertex_count = 0;
  std::size_t stride = 0;
  std::vector<PlyProperty> properties;
  std::unordered_map<std::string, std::size_t> index;

  std::optional<std::size_t> float_offset(const std::string& name) const {
    const auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    const PlyProperty& p = properties[it->second];
    if (!p.is_float) throw ParseError("property " + name + " must be float");
    return p.offset;
  }

  std::size_t require(const std::string& name) const {
    const auto off = float_offset(name);
    if (!off) throw ParseError("missing property: " + name);
    return *off;
  }
};

std::size_t type_size(const std::string& type, bool& is_float) {
  is_float = (type == "float" || type == "float32");
  if (is_float) return 4;
  if (type == "double" || type == "float64") return 8;
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
  if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
  if (type == "int" || type == "uint" || type == "int32" || type == "uint32") return 4;
  throw ParseError("unsupported PLY property type: " + type);
}

PlyHeader read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) {
    throw ParseError("not a PLY file (missing 'ply' magic)");
  }
  PlyHeader header;
  bool format_ok = false;
  bool in_vertex = false;
  bool seen_vertex = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "end_header") {
      if (!format_ok) throw ParseError("PLY must be binary_little_endian 1.0");
      if (!seen_vertex) throw ParseError("PLY declares no vertex element");
      return header;
    }
    if (keyword == "format") {
      std::string fmt;
      ls >> fmt;
      format_ok = (fmt == "binary_little_endian");
      if (!format_ok) throw ParseError("unsupported PLY format: " + fmt);
    } else if (keyword == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      if (name == "vertex") {
        if (seen_vertex) throw ParseError("duplicate vertex element");
        header.vertex_count = count;
        in_vertex = true;
        seen_vertex = true;
      } else {
        if (!seen_vertex) throw ParseError("element '" + name + "' precedes vertex data");
        in_vertex = false;
      }
    } else if (keyword == "property") {
      if (!in_vertex) continue;
      std::string type;
      std::string name;
      ls >> type;
      if (type == "list") throw ParseError("list properties are not supported on vertices");
      ls >> name;
      PlyProperty p;
      p.name = name;
      p.offset = header.stride;
      p.size = type_size(type, p.is_float);
      header.stride += p.size;
      header.index[name] = header.properties.size();
      header.properties.push_back(p);
    } else if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) {
      continue;
    } else {
      throw ParseError("unexpected PLY header line: " + line);
    }
  }
  throw ParseError("PLY header has no end_header");
}

float read_float(const char* row, std::size_t offset) {
  float v;
  std::memcpy(&v, row + offset, sizeof(float));
  return v;
}

std::vector<char> read_payload(std::istream& in, const PlyHeader& header,
                               const std::filesystem::path& path) {
  std::vector<char> data(header.vertex_count * header.stride);
  in.read(data.data(), static_cast<std::streamsize>(data.size()));
  if (static_cast<std::size_t>(in.gcount()) != data.size()) {
    throw LoadError("truncated PLY payload in " + path.string());
  }
  return data;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  return in;
}

template <class T>
void write_raw(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

}  // namespace

GaussianCloud load_ply(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  const PlyHeader header = read_header(in);

  const std::array<std::size_t, 3> pos = {header.require("x"), header.require("y"),
                                          header.require("z")};
  const std::array<std::size_t, 3> dc = {header.require("f_dc_0"), header.require("f_dc_1"),
                                         header.require("f_dc_2")};
  const std::size_t opacity = header.require("opacity");
  const std::array<std::size_t, 3> scale = {header.require("scale_0"), header.require("scale_1"),
                                            header.require("scale_2")};
  const std::array<std::size_t, 4> rot = {header.require("rot_0"), header.require("rot_1"),
                                          header.require("rot_2"), header.require("rot_3")};

  std::vector<std::size_t> rest;
  if (header.float_offset("f_rest_0")) {
    rest.reserve(kShRestCount);
    for (std::size_t k = 0; k < kShRestCount; ++k) {
      rest.push_back(header.require("f_rest_" + std::to_string(k)));
    }
  }

  const std::vector<char> data = read_payload(in, header, path);
  GaussianCloud cloud;
  cloud.reserve(header.vertex_count);
  cloud.sh_rest.reserve(rest.size() * header.vertex_count);
  std::array<float, kShRestCount> rest_values{};
  for (std::size_t i = 0; i < header.vertex_count; ++i) {
    const char* row = data.data() + i * header.stride;
    Eigen::Vector3f mean(read_float(row, pos[0]), read_float(row, pos[1]), read_float(row, pos[2]));
    Eigen::Vector3f color(read_float(row, dc[0]), read_float(row, dc[1]), read_float(row, dc[2]));
    Eigen::Vector3f log_scale(read_float(row, scale[0]), read_float(row, scale[1]),
                              read_float(row, scale[2]));
    Eigen::Quaternionf q(read_float(row, rot[0]), read_float(row, rot[1]), read_float(row, rot[2]),
                         read_float(row, rot[3]));
    const float op = read_float(row, opacity);
    for (std::size_t k = 0; k < rest.size(); ++k) rest_values[k] = read_float(row, rest[k]);

    bool finite = mean.allFinite() && color.allFinite() && log_scale.allFinite() &&
                  q.coeffs().allFinite() && std::isfinite(op);
    for (std::size_t k = 0; k < rest.size(); ++k) finite = finite && std::isfinite(rest_values[k]);
    if (!finite) throw_load_error_at("non-finite value in " + path.string(), i);

    const float norm = q.norm();
    if (!(norm > 0.0f)) throw_load_error_at("zero-length rotation in " + path.string(), i);
    // Already-unit quaternions are kept bit-exact so load/save round-trips.
    if (std::abs(norm - 1.0f) > 1e-7f) q.coeffs() /= norm;

    cloud.push_back(mean, log_scale, q, op, color,
                    std::span<const float>(rest_values.data(), rest.size()));
  }
  return cloud;
}

void save_ply(const GaussianCloud& cloud, const std::filesystem::path& path) {
  cloud.check_consistent();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path.string());

  out << "ply\nformat binary_little_endian 1.0\n";
  out << "element vertex " << cloud.size() << "\n";
  for (const char* name : {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"}) {
    out << "property float " << name << "\n";
  }
  if (cloud.has_sh_rest()) {
    for (std::size_t k = 0; k < kShRestCount; ++k) out << "property float f_rest_" << k << "\n";
  }
  for (const char* name : {"opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2",
                           "rot_3"}) {
    out << "property float " << name << "\n";
  }
  out << "end_header\n";

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int c = 0; c < 3; ++c) write_raw(out, cloud.means[i][c]);
    for (int c = 0; c < 3; ++c) write_raw(out, 0.0f);
    for (int c = 0; c < 3; ++c) write_raw(out, cloud.sh_dc[i][c]);
    for (float v : cloud.rest_of(i)) write_raw(out, v);
    write_raw(out, cloud.opacity_logits[i]);
    for (int c = 0; c < 3; ++c) write_raw(out, cloud.log_scales[i][c]);
    const Eigen::Quaternionf& q = cloud.rotations[i];
    write_raw(out, q.w());
    write_raw(out, q.x());
    write_raw(out, q.y());
    write_raw(out, q.z());
  }
  if (!out) throw LoadError("failed writing " + path.string());
}

std::vector<Eigen::Vector3d> load_points_ply(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  const PlyHeader header = read_header(in);
  const std::size_t x = header.require("x");
  const std::size_t y = header.require("y");
  const std::size_t z = header.require("z");
  const std::vector<char> data = read_payload(in, header, path);
  std::vector<Eigen::Vector3d> points;
  points.reserve(header.vertex_count);
  for (std::size_t i = 0; i < header.vertex_count; ++i) {
    const char* row = data.data() + i * header.stride;
    Eigen::Vector3d p(read_float(row, x), read_float(row, y), read_float(row, z));
    if (!p.allFinite()) throw_load_error_at("non-finite point in " + path.string(), i);
    points.push_back(p);
  }
  return points;
}

void save_points_ply(const std::vector<Eigen::Vector3d>& points,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path.string());
  out << "ply\nformat binary_little_endian 1.0\nelement vertex " << points.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (const auto& p : points) {
    for (int c = 0; c < 3; ++c) write_raw(out, static_cast<float>(p[c]));
  }
  if (!out) throw LoadError("failed writing " + path.string());
}

}  // namespace gsnav
