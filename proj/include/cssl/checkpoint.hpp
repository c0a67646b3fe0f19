#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"

#include "cssl/model.hpp"

namespace cssl {

// Binary checkpoint, little-endian:
//   "CSSL" | u32 version | u64 d | u64 m | u64 n |
//   W_emb (d x m, row-major f64) | W_link (d f64) | Psi (n x d, row-major f64) |
//   u32 CRC32 of everything before it
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const ModelParams& params);
ModelParams decode_checkpoint(std::span<const std::uint8_t> bytes);

// Writes `path` and the metadata sidecar `path` + ".json".
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const nlohmann::json& meta);
ModelParams load_checkpoint(const std::filesystem::path& path);
nlohmann::json load_checkpoint_meta(const std::filesystem::path& path);
std::filesystem::path checkpoint_meta_path(const std::filesystem::path& path);

}  // namespace cssl
