#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "kge/kg_data.hpp"

namespace kge {

enum class GeneratorKind {
  Chain,      // (i, r_{i mod R}, i+1)
  Clustered,  // relation r links every entity of cluster A_r to every entity of cluster B_r
  RandomER,   // every (h, r, t) with h != t kept with probability `density`
};

std::string_view to_string(GeneratorKind kind);
/// Accepts chain, clustered-relations (or clustered), random-er.
GeneratorKind parse_generator(std::string_view text);

struct SyntheticSpec {
  GeneratorKind generator = GeneratorKind::Clustered;
  std::size_t num_entities = 50;
  std::size_t num_relations = 5;
  std::size_t num_clusters = 5;  // clustered only
  double density = 1.0;          // link keep-probability (clustered, random-er)
  double valid_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 1;
  bool shuffle = true;  // shuffle before splitting; chain keeps order when false
};

struct RawSplits {
  std::vector<RawTriple> train;
  std::vector<RawTriple> valid;
  std::vector<RawTriple> test;
};

/// Deterministic labelled splits. Throws ConfigError for invalid parameters
/// and DataError when the training split would be empty.
RawSplits generate_splits(const SyntheticSpec& spec);

/// Splits indexed into a Dataset; entity and relation ids follow the
/// generator's numbering (e0, e1, ...; r0, r1, ...).
Dataset generate(const SyntheticSpec& spec);

/// Writes train.txt, valid.txt and test.txt into `dir`.
void write_splits(const std::filesystem::path& dir, const RawSplits& splits);

}  // namespace kge
