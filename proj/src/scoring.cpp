#include "kge/scoring.hpp"

#include <cmath>

#include "kge/errors.hpp"
#include "kge/rng.hpp"

namespace kge {
std::string_view to_string(Norm norm) { return norm == Norm::L1 ? "l1" : "l2"; }

Norm parse_norm(std::string_view text) {
  if (text == "l1" || text == "L1") return Norm::L1;
  if (text == "l2" || text == "L2") return Norm::L2;
  throw ConfigError("norm must be l1 or l2, got '" + std::string(text) + "'");
}

double distance(std::span<const double> head, std::span<const double> relation, std::span<const double> tail,
                Norm norm) {
  const std::size_t d = head.size();
  double acc = 0.0;
  if (norm == Norm::L1) {
    for (std::size_t i = 0; i < d; ++i) acc += std::abs(head[i] + relation[i] - tail[i]);
    return acc;
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double r = head[i] + relation[i] - tail[i];
    acc += r * r;
  }
  return std::sqrt(acc);
}

double score(const EmbeddingState& state, const Triple& t, Norm norm) {
  return distance(state.entities.row(t.head), state.relations.row(t.relation), state.entities.row(t.tail), norm);
}

double score_direction(std::span<const double> head, std::span<const double> relation,
                       std::span<const double> tail, Norm norm, std::span<double> out) {
  const std::size_t d = head.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double r = head[i] + relation[i] - tail[i];
    out[i] = r;
    acc += norm == Norm::L1 ? std::abs(r) : r * r;
  }
  if (norm == Norm::L1) {
    for (std::size_t i = 0; i < d; ++i) out[i] = out[i] > 0.0 ? 1.0 : (out[i] < 0.0 ? -1.0 : 0.0);
    return acc;
  }
  const double len = std::sqrt(acc);
  if (len == 0.0) {
    for (std::size_t i = 0; i < d; ++i) out[i] = 0.0;
    return 0.0;
  }
  for (std::size_t i = 0; i < d; ++i) out[i] /= len;
  return len;
}

ScoredGrad score_grad(const EmbeddingState& state, const Triple& t, Norm norm) {
  ScoredGrad out;
  out.grad.d_head.resize(state.dim());
  out.score = score_direction(state.entities.row(t.head), state.relations.row(t.relation),
                              state.entities.row(t.tail), norm, out.grad.d_head);
  out.grad.d_relation = out.grad.d_head;
  out.grad.d_tail.resize(state.dim());
  for (std::size_t i = 0; i < state.dim(); ++i) out.grad.d_tail[i] = -out.grad.d_head[i];
  return out;
}

EmbeddingState init_embeddings(std::size_t num_entities, std::size_t num_relations, std::size_t dim,
                               std::uint64_t seed, const SlackInit& slack) {
  if (num_entities == 0 || num_relations == 0 || dim == 0)
    throw ConfigError("embedding sizes must be at least 1");
  Rng rng(seed);
  const double bound = 6.0 / std::sqrt(static_cast<double>(dim));
  EmbeddingState state;
  state.entities = Matrix(num_entities, dim);
  state.relations = Matrix(num_relations, dim);
  for (double& v : state.relations.data()) v = rng.uniform(-bound, bound);
  for (double& v : state.entities.data()) v = rng.uniform(-bound, bound);
  for (std::size_t i = 0; i < num_entities; ++i) normalize_row(state.entities.row(i));
  state.slack = slack.shared;
  state.per_triple_slack.assign(slack.per_triple_count, slack.per_triple_value);
  return state;
}

void normalize_row(std::span<double> row) {
  double sq = 0.0;
  for (double v : row) sq += v * v;
  if (sq == 0.0) return;
  const double len = std::sqrt(sq);
  for (double& v : row) v /= len;
}

}  // namespace kge
