#include "cssl/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <zlib.h>

#include "cssl/errors.hpp"

namespace cssl {

namespace {

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(buf), std::end(buf));
  out.insert(out.end(), std::begin(buf), std::end(buf));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw ValidationError("checkpoint truncated");
    std::uint8_t buf[sizeof(T)];
    std::memcpy(buf, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(buf), std::end(buf));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1u << 30));
    crc = crc32(crc, bytes.data() + pos, chunk);
    pos += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const ModelParams& params) {
  const auto [d, m, n] = params.dims;
  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 + 24 + 8 * (d * m + d + n * d) + 4);
  for (char c : {'C', 'S', 'S', 'L'}) out.push_back(static_cast<std::uint8_t>(c));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, d);
  put<std::uint64_t>(out, m);
  put<std::uint64_t>(out, n);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < m; ++c) put<double>(out, params.emb(r, c));
  for (double w : params.w_link) put<double>(out, w);
  for (double w : params.psi) put<double>(out, w);
  put<std::uint32_t>(out, crc_of(out));
  return out;
}

ModelParams decode_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 + 4 + 24 + 4 || std::memcmp(bytes.data(), "CSSL", 4) != 0)
    throw ValidationError("not a checkpoint (bad magic)");
  const auto body = bytes.first(bytes.size() - 4);
  Reader tail(bytes.last(4));
  if (tail.get<std::uint32_t>() != crc_of(body)) throw ValidationError("checkpoint CRC mismatch");

  Reader in(body.subspan(4));
  const auto version = in.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  Dims dims;
  dims.d = in.get<std::uint64_t>();
  dims.m = in.get<std::uint64_t>();
  dims.n = in.get<std::uint64_t>();
  const std::size_t expected = 4 + 4 + 24 + 8 * (dims.d * dims.m + dims.d + dims.n * dims.d);
  if (body.size() != expected) throw ValidationError("checkpoint size does not match its dimensions");
  ModelParams p(dims);
  for (std::size_t r = 0; r < dims.d; ++r)
    for (std::size_t c = 0; c < dims.m; ++c) p.emb(r, c) = in.get<double>();
  for (auto& w : p.w_link) w = in.get<double>();
  for (auto& w : p.psi) w = in.get<double>();
  return p;
}

std::filesystem::path checkpoint_meta_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params, const nlohmann::json& meta) {
  const auto bytes = encode_checkpoint(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  std::ofstream side(checkpoint_meta_path(path));
  if (!side) throw std::runtime_error("cannot write " + checkpoint_meta_path(path).string());
  side << meta.dump(2) << "\n";
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

nlohmann::json load_checkpoint_meta(const std::filesystem::path& path) {
  std::ifstream in(checkpoint_meta_path(path));
  if (!in) throw std::runtime_error("cannot read " + checkpoint_meta_path(path).string());
  return nlohmann::json::parse(in);
}

}  // namespace cssl
