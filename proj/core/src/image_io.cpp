#include "gsnav/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "gsnav/errors.hpp"

namespace gsnav {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path.string());
  return out;
}

struct PnmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
};

PnmHeader read_pnm_header(std::istream& in, const std::filesystem::path& path) {
  PnmHeader h;
  in >> h.magic >> h.width >> h.height >> h.maxval;
  in.get();
  if (!in || h.width <= 0 || h.height <= 0) throw ParseError("bad PNM header in " + path.string());
  return h;
}

}  // namespace

void write_ppm(const Image& rgb, const std::filesystem::path& path) {
  if (rgb.channels != 3) throw ArgumentError("write_ppm expects a 3-channel image");
  std::ofstream out = open_out(path);
  out << "P6\n" << rgb.width << " " << rgb.height << "\n255\n";
  std::vector<unsigned char> bytes(rgb.data.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<unsigned char>(std::lround(std::clamp(rgb.data[i], 0.0, 1.0) * 255.0));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw LoadError("failed writing " + path.string());
}

void write_pgm_depth(const Image& depth, const std::filesystem::path& path) {
  if (depth.channels != 1) throw ArgumentError("write_pgm_depth expects a 1-channel image");
  std::ofstream out = open_out(path);
  out << "P5\n" << depth.width << " " << depth.height << "\n65535\n";
  std::vector<unsigned char> bytes(depth.data.size() * 2);
  for (std::size_t i = 0; i < depth.data.size(); ++i) {
    const double mm = std::clamp(depth.data[i] * 1000.0, 0.0, 65535.0);
    const auto v = static_cast<std::uint16_t>(std::lround(mm));
    bytes[2 * i] = static_cast<unsigned char>(v >> 8);
    bytes[2 * i + 1] = static_cast<unsigned char>(v & 0xff);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw LoadError("failed writing " + path.string());
}

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  const PnmHeader h = read_pnm_header(in, path);
  if (h.magic != "P6" || h.maxval != 255) throw ParseError("expected 8-bit P6 in " + path.string());
  Image img(h.width, h.height, 3);
  std::vector<unsigned char> bytes(img.data.size());
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) throw LoadError("truncated " + path.string());
  for (std::size_t i = 0; i < bytes.size(); ++i) img.data[i] = bytes[i] / 255.0;
  return img;
}

Image read_pgm_depth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  const PnmHeader h = read_pnm_header(in, path);
  if (h.magic != "P5" || h.maxval != 65535) throw ParseError("expected 16-bit P5 in " + path.string());
  Image img(h.width, h.height, 1);
  std::vector<unsigned char> bytes(img.data.size() * 2);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) throw LoadError("truncated " + path.string());
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    img.data[i] = ((bytes[2 * i] << 8) | bytes[2 * i + 1]) / 1000.0;
  }
  return img;
}

}  // namespace gsnav
