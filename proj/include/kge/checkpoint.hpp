#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kge/config.hpp"
#include "kge/kg_data.hpp"
#include "kge/scoring.hpp"

namespace kge {

inline constexpr char kCheckpointMagic[8] = {'K', 'G', 'E', 'A', 'M', 'L', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  EmbeddingState state;
  Vocabulary vocab;
  Settings config;
};

// Layout (all integers and reals little-endian):
//   magic[8] | u32 version | u64 dim | u64 |E| | u64 |R|
//   f64 entities[|E|*dim] | f64 relations[|R|*dim] | f64 slack
//   u64 n | f64 per_triple_slack[n]
//   u64 |E| | (u32 len, bytes)*  entity labels
//   u64 |R| | (u32 len, bytes)*  relation labels
//   u64 len | bytes  config as key=value lines
//   u32 crc32 of every preceding byte

std::vector<std::uint8_t> encode_checkpoint(const EmbeddingState& state, const Vocabulary& vocab,
                                            const Settings& config);
/// Throws FormatError on bad magic, unsupported version, truncation or
/// checksum mismatch. Nothing is returned unless the whole file verifies.
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const std::filesystem::path& path, const EmbeddingState& state, const Vocabulary& vocab,
                     const Settings& config);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace kge
