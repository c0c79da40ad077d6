#pragma once

// Reference computations used by the tests. They deliberately avoid the
// library's scoring and ranking code paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kge/kg_data.hpp"
#include "kge/scoring.hpp"

namespace oracle {

inline double naive_score(const kge::EmbeddingState& s, const kge::Triple& t, kge::Norm norm) {
  std::vector<double> residual(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    residual[i] = s.entities.data()[t.head * s.dim() + i] + s.relations.data()[t.relation * s.dim() + i] -
                  s.entities.data()[t.tail * s.dim() + i];
  if (norm == kge::Norm::L1) {
    double acc = 0.0;
    for (double r : residual) acc += std::fabs(r);
    return acc;
  }
  double acc = 0.0;
  for (double r : residual) acc = std::hypot(acc, r);
  return acc;
}

struct SideRanks {
  std::size_t left = 0;
  std::size_t right = 0;
};

// Materializes every candidate triple for both sides, sorts the scores and
// locates the true triple (ties resolved in its favour).
inline SideRanks brute_force_rank(const kge::EmbeddingState& s, const kge::Triple& t, const kge::Dataset& ds,
                                  kge::Norm norm, bool filtered) {
  auto rank_side = [&](bool head_side) {
    std::vector<kge::Triple> candidates;
    for (std::size_t e = 0; e < s.num_entities(); ++e) {
      kge::Triple c = t;
      (head_side ? c.head : c.tail) = static_cast<kge::EntityId>(e);
      if (filtered && !(c == t) && ds.is_true(c)) continue;
      candidates.push_back(c);
    }
    std::vector<double> scores;
    for (const auto& c : candidates) scores.push_back(naive_score(s, c, norm));
    std::sort(scores.begin(), scores.end());
    const double truth = naive_score(s, t, norm);
    return static_cast<std::size_t>(std::lower_bound(scores.begin(), scores.end(), truth) - scores.begin()) + 1;
  };
  return {rank_side(true), rank_side(false)};
}

inline double central_difference(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-8});
  return std::fabs(a - b) / scale;
}

// Random embedding state with entries in [-1, 1].
inline kge::EmbeddingState random_state(std::size_t ne, std::size_t nr, std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  kge::EmbeddingState s;
  s.entities = kge::Matrix(ne, d);
  s.relations = kge::Matrix(nr, d);
  for (double& v : s.entities.data()) v = u(rng);
  for (double& v : s.relations.data()) v = u(rng);
  return s;
}

// Random dataset over `ne` entities and `nr` relations with `n` distinct triples.
inline kge::Dataset random_dataset(std::size_t ne, std::size_t nr, std::size_t n, std::mt19937_64& rng) {
  std::vector<kge::RawTriple> raw;
  std::uniform_int_distribution<std::size_t> ue(0, ne - 1), ur(0, nr - 1);
  // every entity and relation appears so the vocabulary has full size
  for (std::size_t e = 0; e < ne; ++e)
    raw.push_back({"e" + std::to_string(e), "r" + std::to_string(e % nr), "e" + std::to_string((e + 1) % ne)});
  for (std::size_t i = 0; i < n; ++i)
    raw.push_back({"e" + std::to_string(ue(rng)), "r" + std::to_string(ur(rng)), "e" + std::to_string(ue(rng))});
  std::shuffle(raw.begin(), raw.end(), rng);
  const std::size_t a = raw.size() * 8 / 10, b = raw.size() * 9 / 10;
  return kge::build_dataset({raw.begin(), raw.begin() + static_cast<long>(a)},
                            {raw.begin() + static_cast<long>(a), raw.begin() + static_cast<long>(b)},
                            {raw.begin() + static_cast<long>(b), raw.end()});
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("kge_test_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace oracle
