#include "kge/losses.hpp"

#include <cmath>
#include <string>

#include "kge/errors.hpp"

namespace kge {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::MarginRanking: return "mrl";
    case LossKind::LimitedScore: return "rs";
    case LossKind::SoftMargin: return "sm";
    case LossKind::AdaptiveContraction: return "aml-con";
    case LossKind::AdaptiveExpansion: return "aml-exp";
  }
  return "?";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "mrl") return LossKind::MarginRanking;
  if (text == "rs") return LossKind::LimitedScore;
  if (text == "sm") return LossKind::SoftMargin;
  if (text == "aml-con") return LossKind::AdaptiveContraction;
  if (text == "aml-exp") return LossKind::AdaptiveExpansion;
  throw ConfigError("unknown loss '" + std::string(text) + "' (expected mrl, rs, sm, aml-con or aml-exp)");
}

void validate(const LossSpec& spec) {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite and >= 0");
  };
  nonneg(spec.gamma, "gamma");
  nonneg(spec.sigma, "sigma");
  nonneg(spec.lambda, "lambda");
  nonneg(spec.lambda_pos, "lambda-pos");
  nonneg(spec.lambda_neg, "lambda-neg");
  if (!std::isfinite(spec.gamma1) || !std::isfinite(spec.gamma2)) throw ConfigError("gamma1/gamma2 must be finite");
  if (spec.kind == LossKind::SoftMargin && spec.gamma2 < spec.gamma1)
    throw ConfigError("soft margin requires gamma2 >= gamma1");
}

LossOut mrl(double f_pos, double f_neg, const LossSpec& spec) {
  const double x = f_pos + spec.gamma - f_neg;
  const double s = hinge_slope(x);
  return {hinge(x), s, -s, 0.0};
}

LossOut rs_loss(double f_pos, double f_neg, const LossSpec& spec) {
  LossOut out = mrl(f_pos, f_neg, spec);
  const double bound = f_pos - spec.gamma1;
  out.value += spec.lambda * hinge(bound);
  out.d_f_pos += spec.lambda * hinge_slope(bound);
  return out;
}

LossOut sm_loss(double f_pos, double f_neg, double xi_i, const LossSpec& spec) {
  const double pos = f_pos - spec.gamma1;
  const double neg = spec.gamma2 - f_neg - xi_i;
  LossOut out;
  out.value = spec.lambda * xi_i * xi_i + spec.lambda_pos * hinge(pos) + spec.lambda_neg * hinge(neg);
  out.d_f_pos = spec.lambda_pos * hinge_slope(pos);
  out.d_f_neg = -spec.lambda_neg * hinge_slope(neg);
  out.d_xi = 2.0 * spec.lambda * xi_i - spec.lambda_neg * hinge_slope(neg);
  return out;
}

namespace {

// Penalty terms shared by both adaptive losses.
LossOut adaptive_hinges(double f_pos, double f_neg, double xi, const LossSpec& spec) {
  const double pos = f_pos - spec.gamma + xi;
  const double neg = -f_neg + spec.gamma + xi;
  const double sp = hinge_slope(pos);
  const double sn = hinge_slope(neg);
  LossOut out;
  out.value = spec.lambda_pos * hinge(pos) + spec.lambda_neg * hinge(neg);
  out.d_f_pos = spec.lambda_pos * sp;
  out.d_f_neg = -spec.lambda_neg * sn;
  out.d_xi = spec.lambda_pos * sp + spec.lambda_neg * sn;
  return out;
}

}  // namespace

LossOut aml_contraction(double f_pos, double f_neg, double xi, const LossSpec& spec) {
  LossOut out = adaptive_hinges(f_pos, f_neg, xi, spec);
  out.value += spec.lambda * xi * xi;
  out.d_xi += 2.0 * spec.lambda * xi;
  return out;
}

LossOut aml_expansion(double f_pos, double f_neg, double xi, const LossSpec& spec) {
  LossOut out = adaptive_hinges(f_pos, f_neg, xi, spec);
  const double kernel = std::exp(-spec.sigma * xi * xi);
  out.value += spec.lambda * kernel;
  out.d_xi += -2.0 * spec.lambda * spec.sigma * xi * kernel;
  return out;
}

LossOut compute_loss(double f_pos, double f_neg, double xi, const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::MarginRanking: return mrl(f_pos, f_neg, spec);
    case LossKind::LimitedScore: return rs_loss(f_pos, f_neg, spec);
    case LossKind::SoftMargin: return sm_loss(f_pos, f_neg, xi, spec);
    case LossKind::AdaptiveContraction: return aml_contraction(f_pos, f_neg, xi, spec);
    case LossKind::AdaptiveExpansion: return aml_expansion(f_pos, f_neg, xi, spec);
  }
  return {};
}

MarginBounds margin_bounds(double gamma, double xi) { return {gamma - xi, gamma + xi}; }

BatchLoss batch_loss(const LossSpec& spec, std::span<const double> pos_scores, std::span<const double> neg_scores,
                     const SlackAccessor& xi_source) {
  if (pos_scores.size() != neg_scores.size())
    throw ConfigError("batch_loss: " + std::to_string(pos_scores.size()) + " positive scores but " +
                      std::to_string(neg_scores.size()) + " negative scores");
  BatchLoss out;
  out.pairs.reserve(pos_scores.size());
  for (std::size_t i = 0; i < pos_scores.size(); ++i) {
    const double xi = xi_source ? xi_source(i) : 0.0;
    out.pairs.push_back(compute_loss(pos_scores[i], neg_scores[i], xi, spec));
    out.total += out.pairs.back().value;
  }
  return out;
}

SlackInit slack_init(const LossSpec& spec, std::size_t num_train) {
  SlackInit init;
  switch (spec.kind) {
    case LossKind::AdaptiveExpansion: init.shared = spec.xi_init.value_or(0.0); break;
    case LossKind::AdaptiveContraction: init.shared = spec.xi_init.value_or(spec.contraction_m()); break;
    case LossKind::SoftMargin:
      init.per_triple_count = num_train;
      init.per_triple_value = spec.xi_init.value_or(0.1);
      break;
    default: init.shared = spec.xi_init.value_or(0.1); break;
  }
  return init;
}

}  // namespace kge
