#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kge/scoring.hpp"

namespace kge {

enum class LossKind {
  MarginRanking,    // [f+ + gamma - f-]_+
  LimitedScore,     // margin ranking plus an upper bound on positive scores
  SoftMargin,       // per-triple slack
  AdaptiveContraction,
  AdaptiveExpansion,
};

std::string_view to_string(LossKind kind);
/// Accepts mrl, rs, sm, aml-con, aml-exp.
LossKind parse_loss_kind(std::string_view text);

/// Loss hyperparameters. Fields a loss kind does not use are ignored.
struct LossSpec {
  LossKind kind = LossKind::AdaptiveExpansion;
  double gamma = 15.0;       // margin (MRL, RS) or margin centre (AML)
  double gamma1 = 14.9;      // positive-score upper bound (RS, SM)
  double gamma2 = 15.1;      // negative-score lower bound (SM)
  double lambda = 1.0;       // slack regularizer weight; bound weight for RS
  double lambda_pos = 1.0;
  double lambda_neg = 1.0;
  double sigma = 1.0;        // Gaussian kernel width (expansion)
  std::optional<double> contraction_start;  // M; defaults to gamma / 2
  std::optional<double> xi_init;            // overrides the per-kind initial slack

  double contraction_m() const { return contraction_start.value_or(gamma / 2.0); }
};

/// Throws ConfigError on negative weights or gamma2 < gamma1 for SM.
void validate(const LossSpec& spec);

/// Loss value and its partial derivatives with respect to the positive
/// score, the negative score and the slack.
struct LossOut {
  double value = 0.0;
  double d_f_pos = 0.0;
  double d_f_neg = 0.0;
  double d_xi = 0.0;
};

/// max(0, x).
inline double hinge(double x) { return x > 0.0 ? x : 0.0; }
/// Derivative of hinge; 0 at the kink.
inline double hinge_slope(double x) { return x > 0.0 ? 1.0 : 0.0; }

LossOut mrl(double f_pos, double f_neg, const LossSpec& spec);
LossOut rs_loss(double f_pos, double f_neg, const LossSpec& spec);
LossOut sm_loss(double f_pos, double f_neg, double xi_i, const LossSpec& spec);
LossOut aml_contraction(double f_pos, double f_neg, double xi, const LossSpec& spec);
LossOut aml_expansion(double f_pos, double f_neg, double xi, const LossSpec& spec);

/// Dispatches on spec.kind. `xi` is the per-triple slack for SM and the
/// shared slack for the adaptive losses; MRL and RS ignore it.
LossOut compute_loss(double f_pos, double f_neg, double xi, const LossSpec& spec);

struct MarginBounds {
  double lower = 0.0;  // gamma - xi
  double upper = 0.0;  // gamma + xi
  double width() const { return upper - lower; }
};

MarginBounds margin_bounds(double gamma, double xi);

struct BatchLoss {
  double total = 0.0;
  std::vector<LossOut> pairs;
};

/// Slack used for pair i of a batch.
using SlackAccessor = std::function<double(std::size_t)>;

/// Sums the loss over aligned (positive, negative) score pairs.
BatchLoss batch_loss(const LossSpec& spec, std::span<const double> pos_scores, std::span<const double> neg_scores,
                     const SlackAccessor& xi_source);

/// Initial slack values for a loss: 0 for expansion, M for contraction,
/// one slot per training triple for SM, xi_init (default 0.1) otherwise.
SlackInit slack_init(const LossSpec& spec, std::size_t num_train);

}  // namespace kge
