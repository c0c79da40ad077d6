#include "kge/sampling.hpp"

#include <map>
#include <set>
#include <string>

#include "kge/errors.hpp"

namespace kge {
namespace {

EntityId other_entity(EntityId original, std::size_t num_entities, Rng& rng) {
  // Draw from the n-1 alternatives and skip over the original.
  auto e = static_cast<EntityId>(rng.below(num_entities - 1));
  return e >= original ? e + 1 : e;
}

}  // namespace

std::string_view to_string(SamplerKind kind) { return kind == SamplerKind::Uniform ? "unif" : "bern"; }

SamplerKind parse_sampler(std::string_view text) {
  if (text == "unif") return SamplerKind::Uniform;
  if (text == "bern") return SamplerKind::Bernoulli;
  throw ConfigError("sampler must be unif or bern, got '" + std::string(text) + "'");
}

const std::optional<RelationStats>& BernStats::of(RelationId r) const {
  static const std::optional<RelationStats> none;
  return r < per_relation_.size() ? per_relation_[r] : none;
}

BernStats compute_bern_stats(std::span<const Triple> train, std::size_t num_relations) {
  if (train.empty()) throw DataError("bern statistics need a non-empty training split");
  // relation -> head -> distinct tails, and relation -> tail -> distinct heads
  std::vector<std::map<EntityId, std::set<EntityId>>> tails_of(num_relations), heads_of(num_relations);
  for (const auto& t : train) {
    tails_of.at(t.relation)[t.head].insert(t.tail);
    heads_of.at(t.relation)[t.tail].insert(t.head);
  }
  std::vector<std::optional<RelationStats>> out(num_relations);
  for (std::size_t r = 0; r < num_relations; ++r) {
    if (tails_of[r].empty()) continue;
    double pairs = 0.0;
    for (const auto& [h, tails] : tails_of[r]) pairs += static_cast<double>(tails.size());
    RelationStats s;
    s.tails_per_head = pairs / static_cast<double>(tails_of[r].size());
    s.heads_per_tail = pairs / static_cast<double>(heads_of[r].size());
    s.p_head = s.tails_per_head / (s.tails_per_head + s.heads_per_tail);
    out[r] = s;
  }
  return BernStats(std::move(out));
}

Triple corrupt_with(const Triple& t, double p_head, std::size_t num_entities, Rng& rng) {
  Triple out = t;
  if (rng.bernoulli(p_head))
    out.head = other_entity(t.head, num_entities, rng);
  else
    out.tail = other_entity(t.tail, num_entities, rng);
  return out;
}

Triple corrupt_uniform(const Triple& t, std::size_t num_entities, Rng& rng) {
  return corrupt_with(t, 0.5, num_entities, rng);
}

Triple corrupt_bern(const Triple& t, const BernStats& stats, std::size_t num_entities, Rng& rng) {
  const auto& s = stats.of(t.relation);
  return corrupt_with(t, s ? s->p_head : 0.5, num_entities, rng);
}

NegativeSampler::NegativeSampler(SamplerKind kind, std::span<const Triple> train, std::size_t num_entities,
                                 std::size_t num_relations)
    : kind_(kind), num_entities_(num_entities) {
  if (num_entities < 2) throw DataError("negative sampling needs at least 2 entities");
  if (kind == SamplerKind::Bernoulli) stats_ = compute_bern_stats(train, num_relations);
}

Triple NegativeSampler::corrupt(const Triple& t, Rng& rng) const {
  if (kind_ == SamplerKind::Bernoulli) return corrupt_bern(t, stats_, num_entities_, rng);
  return corrupt_uniform(t, num_entities_, rng);
}

}  // namespace kge
