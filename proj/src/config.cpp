#include "kge/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "kge/errors.hpp"

namespace kge {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

const std::string* find(const Settings& s, const std::string& key) {
  const auto it = s.find(key);
  return it == s.end() ? nullptr : &it->second;
}

const std::string& require(const Settings& s, const std::string& key) {
  const auto* v = find(s, key);
  if (!v || v->empty()) throw ConfigError("missing required key '" + key + "'");
  return *v;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("key '" + key + "': expected a finite number, got '" + text + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + text + "'");
}

double get_double(const Settings& s, const std::string& key) { return to_double(key, require(s, key)); }
std::size_t get_size(const Settings& s, const std::string& key) {
  return static_cast<std::size_t>(to_unsigned(key, require(s, key)));
}

const char* const kKnownKeys[] = {
    "loss",  "gamma",     "gamma1",  "gamma2", "lambda",     "lambda-pos", "lambda-neg", "sigma",
    "xi-init", "contraction-m", "norm", "dim",  "batch",      "max-iter",   "optimizer",  "lr",
    "epsilon", "beta1",   "beta2",   "sampler", "negatives", "normalize",  "eval-every", "patience",
    "k",     "seed",      "workers",
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Settings default_settings() {
  return {
      {"loss", "aml-exp"},   {"lambda", "1"},      {"lambda-pos", "1"}, {"lambda-neg", "1"},
      {"sigma", "1"},        {"norm", "l1"},       {"dim", "100"},      {"batch", "1024"},
      {"max-iter", "900000"}, {"optimizer", "adagrad"}, {"lr", "0.1"}, {"epsilon", "1e-08"},
      {"beta1", "0.9"},      {"beta2", "0.999"},   {"sampler", "unif"}, {"negatives", "1"},
      {"normalize", "true"}, {"eval-every", "1000"}, {"patience", "10"}, {"k", "10"},
      {"seed", "1"},         {"workers", "1"},
  };
}

Settings parse_settings(const std::string& text, const std::string& source) {
  Settings out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value");
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str(), path.string());
}

std::string format_settings(const Settings& settings) {
  std::string out;
  for (const auto& [k, v] : settings) out += k + "=" + v + "\n";
  return out;
}

Settings merge(Settings base, const Settings& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

TrainConfig to_train_config(const Settings& s) {
  for (const auto& [key, value] : s) {
    bool known = false;
    for (const char* k : kKnownKeys) known = known || key == k;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }

  TrainConfig c;
  LossSpec& loss = c.loss;
  loss.kind = parse_loss_kind(require(s, "loss"));
  const bool adaptive = loss.kind == LossKind::AdaptiveContraction || loss.kind == LossKind::AdaptiveExpansion;
  if (adaptive) {
    loss.gamma = get_double(s, "gamma");
  } else {
    const auto* g = find(s, "gamma");
    loss.gamma = g && !g->empty() ? to_double("gamma", *g) : 15.0;
  }
  loss.lambda = get_double(s, "lambda");
  loss.lambda_pos = get_double(s, "lambda-pos");
  loss.lambda_neg = get_double(s, "lambda-neg");
  loss.sigma = get_double(s, "sigma");
  if (const auto* v = find(s, "xi-init"); v && !v->empty()) loss.xi_init = to_double("xi-init", *v);
  if (const auto* v = find(s, "contraction-m"); v && !v->empty()) loss.contraction_start = to_double("contraction-m", *v);
  // Unset bounds default to the margin interval around gamma at the
  // initial slack (0.1 unless overridden).
  const auto bounds = margin_bounds(loss.gamma, loss.xi_init.value_or(0.1));
  const auto* g1 = find(s, "gamma1");
  const auto* g2 = find(s, "gamma2");
  loss.gamma1 = g1 && !g1->empty() ? to_double("gamma1", *g1) : bounds.lower;
  loss.gamma2 = g2 && !g2->empty() ? to_double("gamma2", *g2) : bounds.upper;

  c.norm = parse_norm(require(s, "norm"));
  c.dim = get_size(s, "dim");
  c.batch_size = get_size(s, "batch");
  c.max_iterations = get_size(s, "max-iter");
  c.optimizer.kind = parse_optimizer(require(s, "optimizer"));
  c.optimizer.learning_rate = get_double(s, "lr");
  c.optimizer.epsilon = get_double(s, "epsilon");
  c.optimizer.beta1 = get_double(s, "beta1");
  c.optimizer.beta2 = get_double(s, "beta2");
  c.sampler = parse_sampler(require(s, "sampler"));
  c.negatives_per_positive = get_size(s, "negatives");
  c.normalize_entities = to_bool("normalize", require(s, "normalize"));
  c.eval_every = get_size(s, "eval-every");
  c.patience = get_size(s, "patience");
  c.k = get_size(s, "k");
  c.seed = to_unsigned("seed", require(s, "seed"));
  c.workers = get_size(s, "workers");
  if (c.workers < 1) throw ConfigError("key 'workers' must be >= 1");
  validate(c);
  return c;
}

Settings to_settings(const TrainConfig& c) {
  const auto& l = c.loss;
  const auto init = slack_init(l, 0);
  Settings s{
      {"loss", std::string(to_string(l.kind))},
      {"gamma", format_double(l.gamma)},
      {"gamma1", format_double(l.gamma1)},
      {"gamma2", format_double(l.gamma2)},
      {"lambda", format_double(l.lambda)},
      {"lambda-pos", format_double(l.lambda_pos)},
      {"lambda-neg", format_double(l.lambda_neg)},
      {"sigma", format_double(l.sigma)},
      {"xi-init", format_double(l.kind == LossKind::SoftMargin ? init.per_triple_value : init.shared)},
      {"contraction-m", format_double(l.contraction_m())},
      {"norm", std::string(to_string(c.norm))},
      {"dim", std::to_string(c.dim)},
      {"batch", std::to_string(c.batch_size)},
      {"max-iter", std::to_string(c.max_iterations)},
      {"optimizer", std::string(to_string(c.optimizer.kind))},
      {"lr", format_double(c.optimizer.learning_rate)},
      {"epsilon", format_double(c.optimizer.epsilon)},
      {"beta1", format_double(c.optimizer.beta1)},
      {"beta2", format_double(c.optimizer.beta2)},
      {"sampler", std::string(to_string(c.sampler))},
      {"negatives", std::to_string(c.negatives_per_positive)},
      {"normalize", c.normalize_entities ? "true" : "false"},
      {"eval-every", std::to_string(c.eval_every)},
      {"patience", std::to_string(c.patience)},
      {"k", std::to_string(c.k)},
      {"seed", std::to_string(c.seed)},
      {"workers", std::to_string(c.workers)},
  };
  return s;
}

}  // namespace kge
