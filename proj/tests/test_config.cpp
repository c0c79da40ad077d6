#include <doctest.h>

#include "kge/config.hpp"
#include "kge/errors.hpp"

using namespace kge;

TEST_CASE("training defaults") {
  auto s = default_settings();
  s["gamma"] = "15";
  const auto c = to_train_config(s);
  CHECK(c.loss.kind == LossKind::AdaptiveExpansion);
  CHECK(c.dim == 100);
  CHECK(c.optimizer.kind == OptimizerKind::Adagrad);
  CHECK(c.optimizer.learning_rate == 0.1);
  CHECK(c.loss.sigma == 1.0);
  CHECK(c.loss.lambda == 1.0);
  CHECK(c.loss.lambda_pos == 1.0);
  CHECK(c.loss.lambda_neg == 1.0);
  CHECK(c.loss.gamma == 15.0);
  CHECK(c.batch_size == 1024);
  CHECK(c.sampler == SamplerKind::Uniform);
  CHECK(c.norm == Norm::L1);
  CHECK(c.k == 10);
  CHECK(c.negatives_per_positive == 1);
  CHECK(c.loss.gamma1 == doctest::Approx(14.9));
  CHECK(c.loss.gamma2 == doctest::Approx(15.1));
  CHECK(c.eval_every == 1000);
  CHECK(c.patience == 10);
  CHECK(c.max_iterations == 900000);
}

TEST_CASE("adaptive losses require gamma; other kinds default it") {
  auto s = default_settings();
  for (const char* kind : {"aml-exp", "aml-con"}) {
    s["loss"] = kind;
    try {
      to_train_config(s);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("'gamma'") != std::string::npos);
    }
  }
  s["loss"] = "mrl";
  CHECK(to_train_config(s).loss.gamma == 15.0);
}

TEST_CASE("settings parse, merge and reject bad input") {
  const auto file = parse_settings("# comment\nloss = mrl\n\ngamma=1 # inline\ndim= 16\n");
  CHECK(file.at("loss") == "mrl");
  CHECK(file.at("gamma") == "1");
  CHECK(file.at("dim") == "16");
  CHECK_THROWS_AS(parse_settings("novalue\n"), ConfigError);

  // flags win over file, file wins over defaults
  auto merged = merge(default_settings(), file);
  merged = merge(merged, Settings{{"dim", "32"}});
  const auto c = to_train_config(merged);
  CHECK(c.dim == 32);
  CHECK(c.loss.gamma == 1.0);
  CHECK(c.loss.kind == LossKind::MarginRanking);

  auto bad = merged;
  bad["dimension"] = "3";
  CHECK_THROWS_AS(to_train_config(bad), ConfigError);
  bad = merged;
  bad["dim"] = "abc";
  CHECK_THROWS_AS(to_train_config(bad), ConfigError);
  bad = merged;
  bad["lr"] = "-1";
  CHECK_THROWS_AS(to_train_config(bad), ConfigError);
  bad = merged;
  bad["normalize"] = "maybe";
  CHECK_THROWS_AS(to_train_config(bad), ConfigError);
}

TEST_CASE("resolved settings reproduce the configuration") {
  auto s = default_settings();
  s["loss"] = "aml-con";
  s["gamma"] = "4";
  s["lr"] = "0.3";
  s["optimizer"] = "adam";
  s["norm"] = "l2";
  const auto c = to_train_config(s);
  const auto resolved = to_settings(c);
  CHECK(resolved.at("contraction-m") == "2");
  CHECK(resolved.at("xi-init") == "2");
  const auto again = to_train_config(resolved);
  CHECK(to_settings(again) == resolved);
  CHECK(again.loss.contraction_m() == 2.0);
  CHECK(again.optimizer.kind == OptimizerKind::Adam);
  CHECK(again.norm == Norm::L2);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 123456789.125}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(15.0) == "15");
}
