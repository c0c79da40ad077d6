#include "kge/evaluation.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

#include "kge/errors.hpp"

namespace kge {
namespace {

enum class Side { Head, Tail };

// Counts candidates scoring strictly better than the true triple, raw and
// with known-true candidates skipped.
std::pair<std::size_t, std::size_t> count_better(const EmbeddingState& state, const Triple& t,
                                                 const Dataset& dataset, Norm norm, Side side) {
  const auto rel = state.relations.row(t.relation);
  const double truth = score(state, t, norm);
  std::size_t raw = 0;
  std::size_t filtered = 0;
  Triple candidate = t;
  for (std::size_t e = 0; e < state.num_entities(); ++e) {
    const auto id = static_cast<EntityId>(e);
    double s = 0.0;
    if (side == Side::Head) {
      if (id == t.head) continue;
      candidate.head = id;
      s = distance(state.entities.row(id), rel, state.entities.row(t.tail), norm);
    } else {
      if (id == t.tail) continue;
      candidate.tail = id;
      s = distance(state.entities.row(t.head), rel, state.entities.row(id), norm);
    }
    if (!(s < truth)) continue;
    ++raw;
    if (!dataset.is_true(candidate)) ++filtered;
  }
  return {raw, filtered};
}

}  // namespace

TripleRanks rank_triple_both(const EmbeddingState& state, const Triple& t, const Dataset& dataset, Norm norm) {
  const auto [left_raw, left_filt] = count_better(state, t, dataset, norm, Side::Head);
  const auto [right_raw, right_filt] = count_better(state, t, dataset, norm, Side::Tail);
  return {t, {left_raw + 1, right_raw + 1}, {left_filt + 1, right_filt + 1}};
}

RankResult rank_triple(const EmbeddingState& state, const Triple& t, const Dataset& dataset, Norm norm,
                       bool filtered) {
  const auto both = rank_triple_both(state, t, dataset, norm);
  return filtered ? both.filtered : both.raw;
}

EvalReport evaluate(const EmbeddingState& state, std::span<const Triple> triples, const Dataset& dataset, Norm norm,
                    std::size_t k, std::size_t workers) {
  if (triples.empty()) throw DataError("evaluate: no triples to rank");
  EvalReport report;
  report.k = k;
  report.per_triple.resize(triples.size());

  workers = std::clamp<std::size_t>(workers, 1, triples.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      report.per_triple[i] = rank_triple_both(state, triples[i], dataset, norm);
  };
  if (workers == 1) {
    work(0, triples.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (triples.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < triples.size(); begin += chunk)
      pool.emplace_back(work, begin, std::min(begin + chunk, triples.size()));
  }

  double mr_raw = 0.0, mr_filt = 0.0;
  std::size_t hit_raw = 0, hit_filt = 0;
  for (const auto& r : report.per_triple) {
    mr_raw += r.raw.mean();
    mr_filt += r.filtered.mean();
    hit_raw += (r.raw.left <= k) + (r.raw.right <= k);
    hit_filt += (r.filtered.left <= k) + (r.filtered.right <= k);
  }
  const double n = static_cast<double>(triples.size());
  report.mean_rank_raw = mr_raw / n;
  report.mean_rank_filtered = mr_filt / n;
  report.hits_raw = 100.0 * static_cast<double>(hit_raw) / (2.0 * n);
  report.hits_filtered = 100.0 * static_cast<double>(hit_filt) / (2.0 * n);
  return report;
}

void write_report(std::ostream& out, const EvalReport& report) {
  const auto old = out.precision(17);
  out << "triples=" << report.per_triple.size() << '\n'
      << "k=" << report.k << '\n'
      << "mean_rank_raw=" << report.mean_rank_raw << '\n'
      << "mean_rank_filtered=" << report.mean_rank_filtered << '\n'
      << "hits_raw=" << report.hits_raw << '\n'
      << "hits_filtered=" << report.hits_filtered << '\n';
  out.precision(old);
}

void write_ranks_tsv(std::ostream& out, const EvalReport& report, const Vocabulary& vocab) {
  out << "head\trelation\ttail\traw_left\traw_right\tfiltered_left\tfiltered_right\n";
  for (const auto& r : report.per_triple) {
    const auto raw = vocab.resolve(r.triple);
    out << raw.head << '\t' << raw.relation << '\t' << raw.tail << '\t' << r.raw.left << '\t' << r.raw.right << '\t'
        << r.filtered.left << '\t' << r.filtered.right << '\n';
  }
}

}  // namespace kge
