#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kge/errors.hpp"
#include "kge/losses.hpp"
#include "oracles.hpp"

using namespace kge;

namespace {

LossSpec spec_of(LossKind kind) {
  LossSpec s;
  s.kind = kind;
  s.gamma = 1.0;
  s.gamma1 = 1.0;
  s.gamma2 = 2.0;
  s.lambda = s.lambda_pos = s.lambda_neg = 1.0;
  s.sigma = 1.0;
  return s;
}

constexpr double kTol = 1e-9;

const LossKind kAllKinds[] = {LossKind::MarginRanking, LossKind::LimitedScore, LossKind::SoftMargin,
                              LossKind::AdaptiveContraction, LossKind::AdaptiveExpansion};

// Hinge arguments of each loss; finite differences are only meaningful
// away from them.
std::vector<double> kinks(const LossSpec& s, double fp, double fn, double xi) {
  switch (s.kind) {
    case LossKind::MarginRanking: return {fp + s.gamma - fn};
    case LossKind::LimitedScore: return {fp + s.gamma - fn, fp - s.gamma1};
    case LossKind::SoftMargin: return {fp - s.gamma1, s.gamma2 - fn - xi};
    default: return {fp - s.gamma + xi, -fn + s.gamma + xi};
  }
}

struct Instance {
  LossSpec spec;
  double f_pos, f_neg, xi;
};

Instance random_instance(LossKind kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    Instance in;
    in.spec.kind = kind;
    in.spec.gamma = 5.0 * u(rng);
    in.spec.gamma1 = 5.0 * u(rng);
    in.spec.gamma2 = in.spec.gamma1 + 3.0 * u(rng);
    in.spec.lambda = 0.1 + 2.0 * u(rng);
    in.spec.lambda_pos = 0.1 + 2.0 * u(rng);
    in.spec.lambda_neg = 0.1 + 2.0 * u(rng);
    in.spec.sigma = 0.1 + 2.0 * u(rng);
    in.f_pos = 8.0 * u(rng);
    in.f_neg = 8.0 * u(rng);
    in.xi = -2.0 + 4.0 * u(rng);
    bool clear = true;
    for (double k : kinks(in.spec, in.f_pos, in.f_neg, in.xi)) clear = clear && std::abs(k) >= 1e-3;
    if (clear) return in;
  }
}

}  // namespace

TEST_CASE("hinge") {
  CHECK(hinge(-3.0) == 0.0);
  CHECK(hinge(0.0) == 0.0);
  CHECK(hinge_slope(0.0) == 0.0);
  CHECK(hinge(2.5) == 2.5);
  CHECK(hinge_slope(2.5) == 1.0);
}

TEST_CASE("margin ranking loss examples") {
  const auto s = spec_of(LossKind::MarginRanking);
  CHECK(mrl(0, 1, s).value == doctest::Approx(0.0).epsilon(kTol));
  // positives can drift arbitrarily far while the loss stays at zero
  CHECK(mrl(10, 11, s).value == 0.0);
  CHECK(mrl(100, 101, s).value == 0.0);
  CHECK(mrl(1000, 1001, s).value == 0.0);
  const auto out = mrl(2, 1, s);
  CHECK(std::abs(out.value - 2.0) < kTol);
  CHECK(out.d_f_pos == 1.0);
  CHECK(out.d_f_neg == -1.0);
  CHECK(out.d_xi == 0.0);
}

TEST_CASE("limited-score loss examples") {
  auto s = spec_of(LossKind::LimitedScore);
  CHECK(std::abs(rs_loss(0, 2, s).value - 0.0) < kTol);
  CHECK(std::abs(rs_loss(3, 5, s).value - 2.0) < kTol);
  s.lambda = 2.0;
  CHECK(std::abs(rs_loss(3, 3, s).value - 5.0) < kTol);
}

TEST_CASE("soft margin loss examples") {
  auto s = spec_of(LossKind::SoftMargin);
  CHECK(std::abs(sm_loss(0, 5, 0, s).value - 0.0) < kTol);
  CHECK(std::abs(sm_loss(0, 1, 0.5, s).value - 0.75) < kTol);
  s.lambda_pos = 2.0;
  CHECK(std::abs(sm_loss(2, 3, 0, s).value - 2.0) < kTol);

  const auto out = sm_loss(0, 1, 0.5, spec_of(LossKind::SoftMargin));
  CHECK(std::abs(out.d_xi - (2.0 * 0.5 - 1.0)) < kTol);
  CHECK(out.d_f_neg == -1.0);
}

TEST_CASE("adaptive contraction loss examples") {
  const auto s = spec_of(LossKind::AdaptiveContraction);
  CHECK(std::abs(aml_contraction(0.2, 2.0, 0.1, s).value - 0.01) < kTol);
  for (double lp : {0.5, 1.0, 3.0}) {
    auto t = s;
    t.lambda_pos = lp;
    t.lambda_neg = 2.0 * lp;
    const auto out = aml_contraction(t.gamma, t.gamma, 0.0, t);
    CHECK(out.value == 0.0);
    CHECK(out.d_f_pos == 0.0);
    CHECK(out.d_f_neg == 0.0);
    CHECK(out.d_xi == 0.0);
  }
  CHECK(std::abs(aml_contraction(1.5, 0.5, 0.5, s).value - 2.25) < kTol);
}

TEST_CASE("adaptive expansion loss examples") {
  const auto s = spec_of(LossKind::AdaptiveExpansion);
  CHECK(std::abs(aml_expansion(0, 2, 0, s).value - 1.0) < kTol);
  const double expected = std::exp(-0.25) + 2.0;
  CHECK(std::abs(aml_expansion(1.5, 0.5, 0.5, s).value - expected) < kTol);
  CHECK(std::abs(expected - 2.77880) < 1e-5);
  // large slack: the kernel term vanishes, only the hinges remain
  for (double xi : {5.0, 10.0, 30.0}) {
    const auto out = aml_expansion(0, 2, xi, s);
    const double hinges = hinge(0 - 1 + xi) + hinge(-2 + 1 + xi);
    CHECK(out.value - hinges < 1e-9);
    CHECK(out.value - hinges >= 0.0);
  }
}

TEST_CASE("margin_bounds") {
  auto b = margin_bounds(15, 0.1);
  CHECK(b.lower == doctest::Approx(14.9).epsilon(1e-14));
  CHECK(b.upper == doctest::Approx(15.1).epsilon(1e-14));
  CHECK(b.width() == doctest::Approx(0.2).epsilon(1e-12));
  b = margin_bounds(30, 0);
  CHECK(b.lower == 30.0);
  CHECK(b.upper == 30.0);
  CHECK(b.width() == 0.0);
  b = margin_bounds(5, 2);
  CHECK(b.lower == 3.0);
  CHECK(b.upper == 7.0);
  CHECK(b.width() == 4.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 200; ++i) {
    const double g = u(rng), xi = u(rng);
    const auto m = margin_bounds(g, xi);
    CHECK((m.lower + m.upper) / 2.0 == doctest::Approx(g).epsilon(1e-12));
    CHECK((m.upper - m.lower) / 2.0 == doctest::Approx(xi).epsilon(1e-12));
  }
}

TEST_CASE("batch_loss sums pairs") {
  const auto s = spec_of(LossKind::AdaptiveExpansion);
  const auto xi = [](std::size_t) { return 0.5; };
  CHECK(batch_loss(s, {}, {}, xi).total == 0.0);

  const std::vector<double> p1{1.5}, n1{0.5};
  const auto one = batch_loss(s, p1, n1, xi);
  CHECK(one.total == aml_expansion(1.5, 0.5, 0.5, s).value);
  REQUIRE(one.pairs.size() == 1);

  const std::vector<double> p2{1.5, 1.5}, n2{0.5, 0.5};
  CHECK(batch_loss(s, p2, n2, xi).total == doctest::Approx(2.0 * one.total).epsilon(1e-15));

  const std::vector<double> p3{1.0, 2.0};
  CHECK_THROWS_AS(batch_loss(s, p3, n1, xi), ConfigError);
}

TEST_CASE("batch_loss reads per-pair slack for soft margin") {
  const auto s = spec_of(LossKind::SoftMargin);
  const std::vector<double> slack{0.0, 0.5};
  const std::vector<double> pos{0.0, 0.0}, neg{1.0, 1.0};
  const auto out = batch_loss(s, pos, neg, [&](std::size_t i) { return slack[i]; });
  CHECK(out.pairs[0].value == sm_loss(0, 1, 0.0, s).value);
  CHECK(out.pairs[1].value == sm_loss(0, 1, 0.5, s).value);
}

TEST_CASE("property: losses are nonnegative with correctly signed score derivatives") {
  std::mt19937_64 rng(21);
  for (auto kind : kAllKinds) {
    for (int i = 0; i < 300; ++i) {
      const auto in = random_instance(kind, rng);
      const auto out = compute_loss(in.f_pos, in.f_neg, in.xi, in.spec);
      CHECK(out.value >= 0.0);
      CHECK(out.d_f_pos >= 0.0);
      CHECK(out.d_f_neg <= 0.0);
      CHECK(std::isfinite(out.d_xi));
    }
  }
}

TEST_CASE("property: loss derivatives match central finite differences") {
  std::mt19937_64 rng(22);
  for (auto kind : kAllKinds) {
    CAPTURE(to_string(kind));
    for (int i = 0; i < 150; ++i) {
      const auto in = random_instance(kind, rng);
      const auto out = compute_loss(in.f_pos, in.f_neg, in.xi, in.spec);
      const double dp = oracle::central_difference(
          [&](double x) { return compute_loss(x, in.f_neg, in.xi, in.spec).value; }, in.f_pos);
      const double dn = oracle::central_difference(
          [&](double x) { return compute_loss(in.f_pos, x, in.xi, in.spec).value; }, in.f_neg);
      const double dx = oracle::central_difference(
          [&](double x) { return compute_loss(in.f_pos, in.f_neg, x, in.spec).value; }, in.xi);
      CHECK(oracle::relative_error(dp, out.d_f_pos) < 1e-5);
      CHECK(oracle::relative_error(dn, out.d_f_neg) < 1e-5);
      CHECK(oracle::relative_error(dx, out.d_xi) < 1e-5);
    }
  }
}

TEST_CASE("property: margin ranking equals limited-score while the bound is inactive") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    LossSpec s;
    s.gamma = u(rng);
    s.gamma1 = u(rng);
    s.lambda = u(rng);
    const double fp = std::min(u(rng), s.gamma1);
    const double fn = u(rng);
    CHECK(mrl(fp, fn, s).value == rs_loss(fp, fn, s).value);
  }
}

TEST_CASE("property: expansion with sigma 0 and contraction differ by lambda (1 - xi^2)") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 200; ++i) {
    auto in = random_instance(LossKind::AdaptiveExpansion, rng);
    in.spec.sigma = 0.0;
    const double e = aml_expansion(in.f_pos, in.f_neg, in.xi, in.spec).value;
    const double c = aml_contraction(in.f_pos, in.f_neg, in.xi, in.spec).value;
    CHECK(e - c == doctest::Approx(in.spec.lambda * (1.0 - in.xi * in.xi)).epsilon(1e-12));
  }
}

TEST_CASE("property: margin ranking ignores a common shift, adaptive expansion does not") {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int flips = 0;
  for (int i = 0; i < 500; ++i) {
    const auto in = random_instance(LossKind::AdaptiveExpansion, rng);
    const double c = -3.0 + 6.0 * u(rng);
    if (in.f_pos + c < 0.0 || in.f_neg + c < 0.0) continue;
    auto m = in.spec;
    m.kind = LossKind::MarginRanking;
    CHECK(mrl(in.f_pos + c, in.f_neg + c, m).value ==
          doctest::Approx(mrl(in.f_pos, in.f_neg, m).value).epsilon(1e-12));

    const auto before = kinks(in.spec, in.f_pos, in.f_neg, in.xi);
    const auto after = kinks(in.spec, in.f_pos + c, in.f_neg + c, in.xi);
    bool flipped = false;
    for (std::size_t k = 0; k < before.size(); ++k) flipped = flipped || ((before[k] > 0) != (after[k] > 0));
    if (!flipped) continue;
    bool clear = true;
    for (double k : after) clear = clear && std::abs(k) >= 1e-3;
    if (!clear) continue;
    ++flips;
    CHECK(aml_expansion(in.f_pos + c, in.f_neg + c, in.xi, in.spec).value !=
          doctest::Approx(aml_expansion(in.f_pos, in.f_neg, in.xi, in.spec).value).epsilon(1e-9));
  }
  CHECK(flips > 50);
}

TEST_CASE("slack initialization per loss kind") {
  auto s = spec_of(LossKind::AdaptiveExpansion);
  CHECK(slack_init(s, 10).shared == 0.0);
  s.kind = LossKind::AdaptiveContraction;
  s.gamma = 4.0;
  CHECK(slack_init(s, 10).shared == 2.0);
  s.contraction_start = 3.0;
  CHECK(slack_init(s, 10).shared == 3.0);
  s.kind = LossKind::SoftMargin;
  const auto sm = slack_init(s, 10);
  CHECK(sm.per_triple_count == 10);
  CHECK(sm.per_triple_value == 0.1);
  s.kind = LossKind::MarginRanking;
  CHECK(slack_init(s, 10).per_triple_count == 0);
}

TEST_CASE("validate rejects negative weights and inverted soft-margin bounds") {
  auto s = spec_of(LossKind::SoftMargin);
  CHECK_NOTHROW(validate(s));
  s.gamma2 = 0.5;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = spec_of(LossKind::AdaptiveExpansion);
  s.sigma = -1.0;
  CHECK_THROWS_AS(validate(s), ConfigError);
  CHECK_THROWS_AS(parse_loss_kind("hinge"), ConfigError);
  CHECK(parse_loss_kind("aml-con") == LossKind::AdaptiveContraction);
}
