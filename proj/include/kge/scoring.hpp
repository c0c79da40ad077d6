#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kge/kg_data.hpp"

namespace kge {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Learned parameters: one row per entity and per relation, the shared
/// margin slack, and (Soft Margin only) one slack per training triple.
struct EmbeddingState {
  Matrix entities;
  Matrix relations;
  double slack = 0.0;
  std::vector<double> per_triple_slack;

  std::size_t dim() const { return entities.cols(); }
  std::size_t num_entities() const { return entities.rows(); }
  std::size_t num_relations() const { return relations.rows(); }

  bool operator==(const EmbeddingState&) const = default;
};

enum class Norm { L1, L2 };

std::string_view to_string(Norm norm);
/// Accepts "l1"/"L1" and "l2"/"L2"; throws ConfigError otherwise.
Norm parse_norm(std::string_view text);

/// Partial derivatives of ||h + r - t|| with respect to the three rows.
struct ScoreGrad {
  std::vector<double> d_head;
  std::vector<double> d_relation;
  std::vector<double> d_tail;
};

struct ScoredGrad {
  double score = 0.0;
  ScoreGrad grad;
};

/// ||h + r - t|| under `norm`.
double distance(std::span<const double> head, std::span<const double> relation, std::span<const double> tail,
                Norm norm);

double score(const EmbeddingState& state, const Triple& t, Norm norm);

/// Score together with its gradient. At an L1 kink (zero residual
/// coordinate) and at a zero L2 residual the subgradient 0 is used.
ScoredGrad score_grad(const EmbeddingState& state, const Triple& t, Norm norm);

/// Writes d score / d head into `out` and returns the score. The relation
/// gradient equals this vector and the tail gradient is its negation.
double score_direction(std::span<const double> head, std::span<const double> relation,
                       std::span<const double> tail, Norm norm, std::span<double> out);

struct SlackInit {
  double shared = 0.0;
  std::size_t per_triple_count = 0;
  double per_triple_value = 0.0;
};

/// Uniform draws in [-6/sqrt(d), 6/sqrt(d)], entity rows rescaled to unit
/// L2 norm. Deterministic for a given seed.
EmbeddingState init_embeddings(std::size_t num_entities, std::size_t num_relations, std::size_t dim,
                               std::uint64_t seed, const SlackInit& slack = {});

/// Rescales `row` to unit L2 norm; a zero row is left untouched.
void normalize_row(std::span<double> row);

}  // namespace kge
