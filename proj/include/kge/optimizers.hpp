#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kge/scoring.hpp"

namespace kge {

enum class OptimizerKind { SGD, Adagrad, Adam };

std::string_view to_string(OptimizerKind kind);
/// Accepts sgd, adagrad, adam.
OptimizerKind parse_optimizer(std::string_view text);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adagrad;
  double learning_rate = 0.1;
  double epsilon = 1e-8;
  double beta1 = 0.9;
  double beta2 = 0.999;
};

void validate(const OptimizerConfig& config);

/// Sparse first-order updates over registered parameter blocks.
///
/// Each block keeps per-coordinate accumulators sized like the parameters
/// it shadows. Only the coordinates passed to apply() change, and a
/// coordinate whose gradient is exactly zero is left alone (parameter and
/// accumulators), so untouched rows never move.
class Optimizer {
 public:
  using BlockId = std::size_t;

  explicit Optimizer(OptimizerConfig config);

  BlockId add_block(std::size_t size);

  /// Marks the start of one batch update; advances the Adam step counter.
  void begin_step() { ++step_; }

  /// Updates param[i] from grad[i]; accumulators live at block[offset + i].
  void apply(BlockId block, std::size_t offset, std::span<double> param, std::span<const double> grad);
  void apply(BlockId block, std::size_t offset, double& param, double grad);

  const OptimizerConfig& config() const { return config_; }
  std::uint64_t step() const { return step_; }

  /// Adagrad: running sum of squared gradients. Adam: second moment.
  std::span<const double> second_moment(BlockId block) const { return second_[block]; }
  /// Adam first moment (empty for other kinds).
  std::span<const double> first_moment(BlockId block) const { return first_[block]; }

 private:
  OptimizerConfig config_;
  std::uint64_t step_ = 0;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
};

/// Rescales every entity row to unit L2 norm; zero rows stay zero.
void normalize_entities(EmbeddingState& state);
void normalize_entities(EmbeddingState& state, std::span<const EntityId> rows);

}  // namespace kge
