#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kge/kg_data.hpp"
#include "kge/rng.hpp"

namespace kge {

enum class SamplerKind { Uniform, Bernoulli };

std::string_view to_string(SamplerKind kind);
/// Accepts "unif" and "bern".
SamplerKind parse_sampler(std::string_view text);

/// Per-relation corruption statistics for Bernoulli sampling.
struct RelationStats {
  double tails_per_head = 0.0;
  double heads_per_tail = 0.0;
  double p_head = 0.5;  // tph / (tph + hpt)
};

class BernStats {
 public:
  BernStats() = default;
  explicit BernStats(std::vector<std::optional<RelationStats>> per_relation)
      : per_relation_(std::move(per_relation)) {}

  /// Empty when the relation never occurs in training.
  const std::optional<RelationStats>& of(RelationId r) const;
  std::size_t size() const { return per_relation_.size(); }

 private:
  std::vector<std::optional<RelationStats>> per_relation_;
};

BernStats compute_bern_stats(std::span<const Triple> train, std::size_t num_relations);

/// Replaces head or tail with probability 1/2 each by an entity drawn
/// uniformly from the others. Requires num_entities >= 2.
Triple corrupt_uniform(const Triple& t, std::size_t num_entities, Rng& rng);

/// Replaces the head with probability `p_head`, the tail otherwise.
Triple corrupt_with(const Triple& t, double p_head, std::size_t num_entities, Rng& rng);

/// Bernoulli corruption; relations without statistics fall back to 1/2.
Triple corrupt_bern(const Triple& t, const BernStats& stats, std::size_t num_entities, Rng& rng);

/// Draws corruptions for training with the configured scheme.
class NegativeSampler {
 public:
  NegativeSampler(SamplerKind kind, std::span<const Triple> train, std::size_t num_entities,
                  std::size_t num_relations);

  Triple corrupt(const Triple& t, Rng& rng) const;
  SamplerKind kind() const { return kind_; }
  const BernStats& stats() const { return stats_; }

 private:
  SamplerKind kind_;
  std::size_t num_entities_;
  BernStats stats_;
};

}  // namespace kge
