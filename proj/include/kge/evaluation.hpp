#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "kge/kg_data.hpp"
#include "kge/scoring.hpp"

namespace kge {

/// 1-based ranks of a triple among its head-replacement (left) and
/// tail-replacement (right) candidates.
struct RankResult {
  std::size_t left = 1;
  std::size_t right = 1;

  double mean() const { return (static_cast<double>(left) + static_cast<double>(right)) / 2.0; }
  bool operator==(const RankResult&) const = default;
};

struct TripleRanks {
  Triple triple;
  RankResult raw;
  RankResult filtered;
};

struct EvalReport {
  double mean_rank_raw = 0.0;
  double mean_rank_filtered = 0.0;
  double hits_raw = 0.0;       // percent
  double hits_filtered = 0.0;  // percent
  std::size_t k = 10;
  std::vector<TripleRanks> per_triple;
};

/// Rank = 1 + number of candidates scoring strictly lower than the true
/// triple (lower score is better). In filtered mode, candidates other than
/// `t` that are true in any split are skipped.
RankResult rank_triple(const EmbeddingState& state, const Triple& t, const Dataset& dataset, Norm norm,
                       bool filtered);

/// Raw and filtered ranks from a single scoring pass.
TripleRanks rank_triple_both(const EmbeddingState& state, const Triple& t, const Dataset& dataset, Norm norm);

/// Mean rank and Hits@k over `triples`, both sides counted separately for
/// Hits@k. Work is split across `workers` threads; aggregation order is
/// fixed so the result does not depend on the worker count.
EvalReport evaluate(const EmbeddingState& state, std::span<const Triple> triples, const Dataset& dataset, Norm norm,
                    std::size_t k = 10, std::size_t workers = 1);

/// Summary as `key=value` lines.
void write_report(std::ostream& out, const EvalReport& report);
/// head, relation, tail, raw_left, raw_right, filtered_left, filtered_right.
void write_ranks_tsv(std::ostream& out, const EvalReport& report, const Vocabulary& vocab);

}  // namespace kge
