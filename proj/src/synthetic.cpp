#include "kge/synthetic.hpp"

#include <cmath>
#include <string>

#include "kge/errors.hpp"
#include "kge/rng.hpp"

namespace kge {
namespace {

std::string entity_label(std::size_t i) { return "e" + std::to_string(i); }
std::string relation_label(std::size_t r) { return "r" + std::to_string(r); }

struct Link {
  std::size_t head, relation, tail;
};

std::vector<Link> chain_links(const SyntheticSpec& s) {
  std::vector<Link> out;
  for (std::size_t i = 0; i + 1 < s.num_entities; ++i) out.push_back({i, i % s.num_relations, i + 1});
  return out;
}

std::vector<Link> clustered_links(const SyntheticSpec& s, Rng& rng) {
  const std::size_t k = s.num_clusters;
  if (k < 2 || k > s.num_entities) throw ConfigError("clustered generator needs 2 <= clusters <= entities");
  // Entity i sits in cluster i % k. Relation r links every member of its
  // source cluster to every member of its target cluster, so placing each
  // cluster at one point and r at the difference scores every true triple 0.
  std::vector<Link> out;
  for (std::size_t r = 0; r < s.num_relations; ++r) {
    const std::size_t src = r % k;
    std::size_t dst = (src + 1 + r / k) % k;
    if (dst == src) dst = (dst + 1) % k;
    for (std::size_t h = src; h < s.num_entities; h += k)
      for (std::size_t t = dst; t < s.num_entities; t += k)
        if (s.density >= 1.0 || rng.bernoulli(s.density)) out.push_back({h, r, t});
  }
  return out;
}

std::vector<Link> random_links(const SyntheticSpec& s, Rng& rng) {
  std::vector<Link> out;
  for (std::size_t h = 0; h < s.num_entities; ++h)
    for (std::size_t r = 0; r < s.num_relations; ++r)
      for (std::size_t t = 0; t < s.num_entities; ++t)
        if (h != t && rng.bernoulli(s.density)) out.push_back({h, r, t});
  return out;
}

RawTriple label(const Link& l) { return {entity_label(l.head), relation_label(l.relation), entity_label(l.tail)}; }

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Chain: return "chain";
    case GeneratorKind::Clustered: return "clustered-relations";
    case GeneratorKind::RandomER: return "random-er";
  }
  return "?";
}

GeneratorKind parse_generator(std::string_view text) {
  if (text == "chain") return GeneratorKind::Chain;
  if (text == "clustered-relations" || text == "clustered") return GeneratorKind::Clustered;
  if (text == "random-er") return GeneratorKind::RandomER;
  throw ConfigError("unknown generator '" + std::string(text) + "' (expected chain, clustered-relations, random-er)");
}

RawSplits generate_splits(const SyntheticSpec& s) {
  if (s.num_entities < 2) throw ConfigError("generator needs at least 2 entities");
  if (s.num_relations < 1) throw ConfigError("generator needs at least 1 relation");
  if (!(s.density > 0.0 && s.density <= 1.0)) throw ConfigError("density must lie in (0, 1]");
  if (!(s.valid_fraction >= 0.0 && s.test_fraction >= 0.0 && s.valid_fraction + s.test_fraction < 1.0))
    throw ConfigError("valid and test fractions must be >= 0 and sum below 1");

  Rng rng(s.seed);
  std::vector<Link> links;
  switch (s.generator) {
    case GeneratorKind::Chain: links = chain_links(s); break;
    case GeneratorKind::Clustered: links = clustered_links(s, rng); break;
    case GeneratorKind::RandomER: links = random_links(s, rng); break;
  }
  if (s.shuffle) shuffle(links.begin(), links.end(), rng);

  const auto n = links.size();
  const auto n_valid = static_cast<std::size_t>(std::floor(s.valid_fraction * static_cast<double>(n)));
  const auto n_test = static_cast<std::size_t>(std::floor(s.test_fraction * static_cast<double>(n)));
  if (n == 0 || n_valid + n_test >= n) throw DataError("synthetic spec produces an empty training split");

  RawSplits out;
  for (std::size_t i = 0; i < n; ++i) {
    auto& dst = i < n_valid ? out.valid : (i < n_valid + n_test ? out.test : out.train);
    dst.push_back(label(links[i]));
  }
  return out;
}

Dataset generate(const SyntheticSpec& s) {
  const auto splits = generate_splits(s);
  std::vector<bool> used(s.num_entities, false);
  std::vector<bool> used_rel(s.num_relations, false);
  for (const auto* split : {&splits.train, &splits.valid, &splits.test}) {
    for (const auto& t : *split) {
      used[std::stoul(t.head.substr(1))] = true;
      used[std::stoul(t.tail.substr(1))] = true;
      used_rel[std::stoul(t.relation.substr(1))] = true;
    }
  }
  Vocabulary vocab;
  for (std::size_t i = 0; i < used.size(); ++i)
    if (used[i]) vocab.entities.intern(entity_label(i));
  for (std::size_t r = 0; r < used_rel.size(); ++r)
    if (used_rel[r]) vocab.relations.intern(relation_label(r));

  auto index = [&](const std::vector<RawTriple>& raw) {
    std::vector<Triple> out;
    out.reserve(raw.size());
    for (const auto& t : raw) out.push_back(vocab.index(t));
    return out;
  };
  auto train = index(splits.train);
  auto valid = index(splits.valid);
  auto test = index(splits.test);
  return build_dataset(std::move(vocab), std::move(train), std::move(valid), std::move(test));
}

void write_splits(const std::filesystem::path& dir, const RawSplits& splits) {
  save_triples(dir / "train.txt", splits.train);
  save_triples(dir / "valid.txt", splits.valid);
  save_triples(dir / "test.txt", splits.test);
}

}  // namespace kge
