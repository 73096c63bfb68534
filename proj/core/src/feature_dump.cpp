#include "gsnav/feature_dump.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gsnav/errors.hpp"

namespace gsnav {

static_assert(std::endian::native == std::endian::little, "feature dumps assume a little-endian host");

void write_feature_dump(const std::filesystem::path& path, const Eigen::MatrixXd& features,
                        std::span<const std::uint8_t> labels) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw ArgumentError("feature dump needs one label per row");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write feature dump: " + path.string());
  const std::uint64_t header[2] = {static_cast<std::uint64_t>(features.rows()),
                                   static_cast<std::uint64_t>(features.cols())};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  std::vector<float> row(static_cast<std::size_t>(features.cols()));
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.cols(); ++c) row[c] = static_cast<float>(features(r, c));
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
  if (!out) throw LoadError("failed writing feature dump: " + path.string());
}

FeatureDump read_feature_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open feature dump: " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16) throw ParseError("feature dump too short for its header: " + path.string());
  std::uint64_t n = 0, d = 0;
  std::memcpy(&n, bytes.data(), 8);
  std::memcpy(&d, bytes.data() + 8, 8);
  if (d == 0 && n > 0) throw ParseError("feature dump declares zero feature width");
  if (n > (1ull << 32) || d > (1ull << 20)) throw ParseError("feature dump header is implausibly large");
  const std::uint64_t expected = 16 + n * d * 4 + n;
  if (bytes.size() != expected) {
    throw ParseError("feature dump size mismatch: header implies " + std::to_string(expected) +
                     " bytes, file has " + std::to_string(bytes.size()));
  }
  FeatureDump dump;
  dump.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const char* p = bytes.data() + 16;
  for (std::uint64_t r = 0; r < n; ++r) {
    for (std::uint64_t c = 0; c < d; ++c, p += 4) {
      float v = 0.0f;
      std::memcpy(&v, p, 4);
      if (!std::isfinite(v)) throw ParseError("feature dump holds a non-finite value at row " + std::to_string(r));
      dump.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  dump.labels.assign(reinterpret_cast<const std::uint8_t*>(p), reinterpret_cast<const std::uint8_t*>(p) + n);
  return dump;
}

}  // namespace gsnav
