#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kge {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct RawTriple {
  std::string head;
  std::string relation;
  std::string tail;

  bool operator==(const RawTriple&) const = default;
};

struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  bool operator==(const Triple&) const = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = t.head;
    h = h * 0x9e3779b97f4a7c15ULL ^ t.relation;
    h = h * 0x9e3779b97f4a7c15ULL ^ t.tail;
    return std::hash<std::uint64_t>{}(h);
  }
};

/// Bidirectional label <-> dense index mapping for one symbol kind.
class SymbolTable {
 public:
  /// Returns the index of `label`, assigning the next free one if new.
  std::uint32_t intern(const std::string& label);
  /// Throws DataError when the label is unknown.
  std::uint32_t id(const std::string& label) const;
  bool contains(const std::string& label) const { return to_id_.contains(label); }
  const std::string& label(std::uint32_t id) const { return labels_.at(id); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::unordered_map<std::string, std::uint32_t> to_id_;
  std::vector<std::string> labels_;
};

struct Vocabulary {
  SymbolTable entities;
  SymbolTable relations;

  std::size_t num_entities() const { return entities.size(); }
  std::size_t num_relations() const { return relations.size(); }

  Triple index(const RawTriple& raw) const;
  RawTriple resolve(const Triple& t) const;
};

/// Vocabulary plus indexed splits. Immutable after build_dataset().
class Dataset {
 public:
  Vocabulary vocab;
  std::vector<Triple> train;
  std::vector<Triple> valid;
  std::vector<Triple> test;

  std::size_t num_entities() const { return vocab.num_entities(); }
  std::size_t num_relations() const { return vocab.num_relations(); }

  /// True iff `t` occurs in any split.
  bool is_true(const Triple& t) const { return all_true_.contains(t); }
  std::size_t num_true() const { return all_true_.size(); }

 private:
  friend Dataset build_dataset(const std::vector<RawTriple>&, const std::vector<RawTriple>&,
                               const std::vector<RawTriple>&);
  friend Dataset build_dataset(Vocabulary, std::vector<Triple>, std::vector<Triple>,
                               std::vector<Triple>);
  std::unordered_set<Triple, TripleHash> all_true_;
};

/// Parses a tab-separated head/relation/tail file. Blank lines are skipped;
/// a line with the wrong column count raises DataError naming the line.
std::vector<RawTriple> load_triples(const std::filesystem::path& path);
std::vector<RawTriple> parse_triples(const std::string& text, const std::string& source = "<memory>");

void save_triples(const std::filesystem::path& path, const std::vector<RawTriple>& triples);

/// Builds the vocabulary over the union of all splits, indexes each split
/// (dropping repeated triples, first occurrence kept) and fills the filter set.
Dataset build_dataset(const std::vector<RawTriple>& train, const std::vector<RawTriple>& valid,
                      const std::vector<RawTriple>& test);

/// Same, from already-indexed splits. Indices must resolve in `vocab`.
Dataset build_dataset(Vocabulary vocab, std::vector<Triple> train, std::vector<Triple> valid,
                      std::vector<Triple> test);

Dataset load_dataset(const std::filesystem::path& train, const std::filesystem::path& valid,
                     const std::filesystem::path& test);

/// Two-column (label, index) TSV, one file per symbol kind.
void save_symbols(const std::filesystem::path& path, const SymbolTable& table);
SymbolTable load_symbols(const std::filesystem::path& path);

}  // namespace kge
