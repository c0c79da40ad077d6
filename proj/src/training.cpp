#include "kge/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "kge/errors.hpp"
#include "kge/evaluation.hpp"
#include "kge/rng.hpp"

namespace kge {
namespace {

// Gradient rows for one batch, kept in first-touch order so that the
// accumulation order per row is fixed.
class RowGrads {
 public:
  explicit RowGrads(std::size_t dim) : dim_(dim) {}

  std::span<double> row(std::uint32_t id) {
    const auto [it, inserted] = slot_.try_emplace(id, ids_.size());
    if (inserted) {
      ids_.push_back(id);
      data_.resize(data_.size() + dim_, 0.0);
    }
    return {data_.data() + it->second * dim_, dim_};
  }

  void add(std::uint32_t id, std::span<const double> dir, double scale) {
    if (scale == 0.0) {
      row(id);
      return;
    }
    auto g = row(id);
    for (std::size_t i = 0; i < dim_; ++i) g[i] += scale * dir[i];
  }

  const std::vector<std::uint32_t>& ids() const { return ids_; }
  std::span<const double> at(std::size_t slot) const { return {data_.data() + slot * dim_, dim_}; }

  void clear() {
    slot_.clear();
    ids_.clear();
    data_.clear();
  }

 private:
  std::size_t dim_;
  std::unordered_map<std::uint32_t, std::size_t> slot_;
  std::vector<std::uint32_t> ids_;
  std::vector<double> data_;
};

bool uses_shared_slack(LossKind kind) {
  return kind == LossKind::AdaptiveContraction || kind == LossKind::AdaptiveExpansion;
}

std::string describe(const TrainConfig& c) {
  std::ostringstream s;
  s.precision(17);
  s << "loss=" << to_string(c.loss.kind) << " gamma=" << c.loss.gamma << " gamma1=" << c.loss.gamma1
    << " gamma2=" << c.loss.gamma2 << " lambda=" << c.loss.lambda << " lambda-pos=" << c.loss.lambda_pos
    << " lambda-neg=" << c.loss.lambda_neg << " sigma=" << c.loss.sigma << " lr=" << c.optimizer.learning_rate
    << " optimizer=" << to_string(c.optimizer.kind);
  return s.str();
}

}  // namespace

void validate(const TrainConfig& config) {
  validate(config.loss);
  validate(config.optimizer);
  if (config.dim < 1) throw ConfigError("dim must be >= 1");
  if (config.batch_size < 1) throw ConfigError("batch must be >= 1");
  if (config.max_iterations < 1) throw ConfigError("max-iter must be >= 1");
  if (config.negatives_per_positive < 1) throw ConfigError("negatives must be >= 1");
  if (config.eval_every < 1) throw ConfigError("eval-every must be >= 1");
  if (config.k < 1) throw ConfigError("k must be >= 1");
}

TrainResult train(const Dataset& dataset, const TrainConfig& config, const RecordCallback& on_record) {
  validate(config);
  const auto slack = slack_init(config.loss, dataset.train.size());
  auto state = init_embeddings(dataset.num_entities(), dataset.num_relations(), config.dim, config.seed, slack);
  return train(dataset, config, std::move(state), on_record);
}

TrainResult train(const Dataset& dataset, const TrainConfig& config, EmbeddingState state,
                  const RecordCallback& on_record) {
  validate(config);
  if (dataset.train.empty()) throw DataError("training split is empty");
  if (state.num_entities() != dataset.num_entities() || state.num_relations() != dataset.num_relations() ||
      state.dim() != config.dim)
    throw ConfigError("initial embedding state does not match dataset/config sizes");
  const bool per_triple = config.loss.kind == LossKind::SoftMargin;
  if (per_triple && state.per_triple_slack.size() != dataset.train.size())
    throw ConfigError("soft margin needs one slack per training triple");

  const std::size_t dim = config.dim;
  const std::size_t batch = std::min(config.batch_size, dataset.train.size());
  const NegativeSampler sampler(config.sampler, dataset.train, dataset.num_entities(), dataset.num_relations());
  Rng rng(config.seed ^ 0x5851f42d4c957f2dULL);

  Optimizer opt(config.optimizer);
  const auto entity_block = opt.add_block(state.entities.data().size());
  const auto relation_block = opt.add_block(state.relations.data().size());
  const auto slack_block = opt.add_block(1);
  const auto per_triple_block = opt.add_block(state.per_triple_slack.size());

  std::vector<std::size_t> order(dataset.train.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();

  RowGrads entity_grads(dim), relation_grads(dim);
  std::unordered_map<std::size_t, double> per_triple_grads;
  std::vector<std::size_t> per_triple_touched;
  std::vector<double> dir_pos(dim), dir_neg(dim);

  TrainResult result;
  result.state = state;
  double best_hits = -1.0;
  double best_rank = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  double loss_sum = 0.0;
  std::size_t loss_pairs = 0;
  const bool has_valid = !dataset.valid.empty();

  auto record = [&](std::size_t iteration) {
    TrainRecord rec;
    rec.iteration = iteration;
    rec.mean_loss = loss_pairs ? loss_sum / static_cast<double>(loss_pairs) : 0.0;
    rec.xi = state.slack;
    rec.margin_width = 2.0 * std::abs(state.slack);
    rec.valid_mean_rank = std::numeric_limits<double>::quiet_NaN();
    rec.valid_hits = std::numeric_limits<double>::quiet_NaN();
    if (has_valid) {
      const auto report = evaluate(state, dataset.valid, dataset, config.norm, config.k, config.workers);
      rec.valid_mean_rank = report.mean_rank_filtered;
      rec.valid_hits = report.hits_filtered;
    }
    loss_sum = 0.0;
    loss_pairs = 0;
    result.log.push_back(rec);
    if (on_record) on_record(rec);

    // Hits@k first, filtered MR breaks ties; an exact tie keeps the later,
    // longer-trained state without counting as progress.
    const bool improved = !has_valid || rec.valid_hits > best_hits ||
                          (rec.valid_hits == best_hits && rec.valid_mean_rank < best_rank);
    const bool tied = has_valid && rec.valid_hits == best_hits && rec.valid_mean_rank == best_rank;
    if (improved || tied) {
      best_hits = rec.valid_hits;
      best_rank = rec.valid_mean_rank;
      result.state = state;
      result.best_record = result.log.size() - 1;
    }
    if (improved)
      since_best = 0;
    else
      ++since_best;
    return config.patience > 0 && since_best >= config.patience;
  };

  for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
    entity_grads.clear();
    relation_grads.clear();
    per_triple_grads.clear();
    per_triple_touched.clear();
    double slack_grad = 0.0;
    double batch_total = 0.0;
    std::size_t batch_pairs = 0;

    for (std::size_t b = 0; b < batch; ++b) {
      if (cursor == order.size()) {
        shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      const std::size_t idx = order[cursor++];
      const Triple& pos = dataset.train[idx];
      const double f_pos = score_direction(state.entities.row(pos.head), state.relations.row(pos.relation),
                                           state.entities.row(pos.tail), config.norm, dir_pos);
      const double xi = per_triple ? state.per_triple_slack[idx] : state.slack;

      for (std::size_t j = 0; j < config.negatives_per_positive; ++j) {
        const Triple neg = sampler.corrupt(pos, rng);
        const double f_neg = score_direction(state.entities.row(neg.head), state.relations.row(neg.relation),
                                             state.entities.row(neg.tail), config.norm, dir_neg);
        const LossOut out = compute_loss(f_pos, f_neg, xi, config.loss);
        if (!std::isfinite(out.value) || !std::isfinite(f_pos) || !std::isfinite(f_neg)) {
          std::ostringstream msg;
          msg << "non-finite loss at iteration " << iter << " (batch pair " << batch_pairs << ", f_pos=" << f_pos
              << ", f_neg=" << f_neg << ", xi=" << xi << "; " << describe(config) << ")";
          throw NumericError(msg.str());
        }
        batch_total += out.value;
        ++batch_pairs;

        entity_grads.add(pos.head, dir_pos, out.d_f_pos);
        relation_grads.add(pos.relation, dir_pos, out.d_f_pos);
        entity_grads.add(pos.tail, dir_pos, -out.d_f_pos);
        entity_grads.add(neg.head, dir_neg, out.d_f_neg);
        relation_grads.add(neg.relation, dir_neg, out.d_f_neg);
        entity_grads.add(neg.tail, dir_neg, -out.d_f_neg);

        if (per_triple) {
          const auto [it, inserted] = per_triple_grads.try_emplace(idx, 0.0);
          if (inserted) per_triple_touched.push_back(idx);
          it->second += out.d_xi;
        } else {
          slack_grad += out.d_xi;
        }
      }
    }

    opt.begin_step();
    const auto& eids = entity_grads.ids();
    for (std::size_t s = 0; s < eids.size(); ++s)
      opt.apply(entity_block, eids[s] * dim, state.entities.row(eids[s]), entity_grads.at(s));
    const auto& rids = relation_grads.ids();
    for (std::size_t s = 0; s < rids.size(); ++s)
      opt.apply(relation_block, rids[s] * dim, state.relations.row(rids[s]), relation_grads.at(s));
    if (uses_shared_slack(config.loss.kind)) opt.apply(slack_block, 0, state.slack, slack_grad);
    for (auto idx : per_triple_touched)
      opt.apply(per_triple_block, idx, state.per_triple_slack[idx], per_triple_grads[idx]);
    if (config.normalize_entities) normalize_entities(state, eids);

    if (!std::isfinite(state.slack)) {
      std::ostringstream msg;
      msg << "slack diverged at iteration " << iter << " (" << describe(config) << ")";
      throw NumericError(msg.str());
    }

    loss_sum += batch_total;
    loss_pairs += batch_pairs;
    result.iterations = iter;

    const bool last = iter == config.max_iterations;
    if (iter % config.eval_every == 0 || last) {
      if (record(iter)) break;
    }
  }
  return result;
}

void write_record(std::ostream& out, const TrainRecord& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
  nlohmann::ordered_json j;
  j["iteration"] = r.iteration;
  j["mean_loss"] = num(r.mean_loss);
  j["xi"] = num(r.xi);
  j["margin_width"] = num(r.margin_width);
  j["valid_mean_rank"] = num(r.valid_mean_rank);
  j["valid_hits"] = num(r.valid_hits);
  out << j.dump() << '\n';
}

}  // namespace kge
