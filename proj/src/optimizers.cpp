#include "kge/optimizers.hpp"

#include <cmath>
#include <string>

#include "kge/errors.hpp"

namespace kge {

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::SGD: return "sgd";
    case OptimizerKind::Adagrad: return "adagrad";
    case OptimizerKind::Adam: return "adam";
  }
  return "?";
}

OptimizerKind parse_optimizer(std::string_view text) {
  if (text == "sgd") return OptimizerKind::SGD;
  if (text == "adagrad") return OptimizerKind::Adagrad;
  if (text == "adam") return OptimizerKind::Adam;
  throw ConfigError("optimizer must be sgd, adagrad or adam, got '" + std::string(text) + "'");
}

void validate(const OptimizerConfig& config) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate))
    throw ConfigError("learning rate must be > 0");
  if (!(config.epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (!(config.beta1 > 0.0 && config.beta1 < 1.0) || !(config.beta2 > 0.0 && config.beta2 < 1.0))
    throw ConfigError("adam betas must lie in (0, 1)");
}

Optimizer::Optimizer(OptimizerConfig config) : config_(config) { validate(config_); }

Optimizer::BlockId Optimizer::add_block(std::size_t size) {
  second_.emplace_back(config_.kind == OptimizerKind::SGD ? 0 : size, 0.0);
  first_.emplace_back(config_.kind == OptimizerKind::Adam ? size : 0, 0.0);
  return second_.size() - 1;
}

void Optimizer::apply(BlockId block, std::size_t offset, std::span<double> param, std::span<const double> grad) {
  const double lr = config_.learning_rate;
  switch (config_.kind) {
    case OptimizerKind::SGD:
      for (std::size_t i = 0; i < param.size(); ++i) param[i] -= lr * grad[i];
      return;
    case OptimizerKind::Adagrad: {
      double* acc = second_[block].data() + offset;
      for (std::size_t i = 0; i < param.size(); ++i) {
        const double g = grad[i];
        if (g == 0.0) continue;
        acc[i] += g * g;
        param[i] -= lr * g / (std::sqrt(acc[i]) + config_.epsilon);
      }
      return;
    }
    case OptimizerKind::Adam: {
      double* m = first_[block].data() + offset;
      double* v = second_[block].data() + offset;
      const double t = static_cast<double>(step_ == 0 ? 1 : step_);
      const double c1 = 1.0 - std::pow(config_.beta1, t);
      const double c2 = 1.0 - std::pow(config_.beta2, t);
      for (std::size_t i = 0; i < param.size(); ++i) {
        const double g = grad[i];
        if (g == 0.0) continue;
        m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
        v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
        param[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.epsilon);
      }
      return;
    }
  }
}

void Optimizer::apply(BlockId block, std::size_t offset, double& param, double grad) {
  apply(block, offset, std::span<double>(&param, 1), std::span<const double>(&grad, 1));
}

void normalize_entities(EmbeddingState& state) {
  for (std::size_t i = 0; i < state.num_entities(); ++i) normalize_row(state.entities.row(i));
}

void normalize_entities(EmbeddingState& state, std::span<const EntityId> rows) {
  for (auto e : rows) normalize_row(state.entities.row(e));
}

}  // namespace kge
