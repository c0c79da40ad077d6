#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "kge/kg_data.hpp"
#include "kge/losses.hpp"
#include "kge/optimizers.hpp"
#include "kge/sampling.hpp"
#include "kge/scoring.hpp"

namespace kge {

/// Defaults: Adagrad, lr 0.1, d 100, sigma 1, lambdas 1, gamma 15, batch
/// 1024, unif sampling.
struct TrainConfig {
  LossSpec loss;
  Norm norm = Norm::L1;
  std::size_t dim = 100;
  std::size_t batch_size = 1024;
  std::size_t max_iterations = 900000;  // optimizer steps, one per batch
  OptimizerConfig optimizer;
  SamplerKind sampler = SamplerKind::Uniform;
  std::size_t negatives_per_positive = 1;
  bool normalize_entities = true;
  std::size_t eval_every = 1000;
  std::size_t patience = 10;  // evaluations without improvement; 0 disables early stopping
  std::size_t k = 10;
  std::uint64_t seed = 1;
  std::size_t workers = 1;  // evaluation threads
};

/// Throws ConfigError when a field is out of range.
void validate(const TrainConfig& config);

struct TrainRecord {
  std::size_t iteration = 0;
  double mean_loss = 0.0;  // mean per-pair loss since the previous record
  double xi = 0.0;
  double margin_width = 0.0;  // 2|xi|
  double valid_mean_rank = 0.0;  // filtered; NaN without a validation split
  double valid_hits = 0.0;       // filtered Hits@k in percent; NaN without validation
};

using TrainLog = std::vector<TrainRecord>;

struct TrainResult {
  EmbeddingState state;  // best-validation snapshot
  TrainLog log;
  std::size_t best_record = 0;  // index into log
  std::size_t iterations = 0;   // optimizer steps actually taken
};

using RecordCallback = std::function<void(const TrainRecord&)>;

/// Mini-batch training with periodic filtered validation and early stopping.
TrainResult train(const Dataset& dataset, const TrainConfig& config, const RecordCallback& on_record = {});

/// Same, continuing from an existing state instead of a fresh initialization.
TrainResult train(const Dataset& dataset, const TrainConfig& config, EmbeddingState initial,
                  const RecordCallback& on_record = {});

/// One JSON object per line, fields in a fixed order.
void write_record(std::ostream& out, const TrainRecord& record);

}  // namespace kge
