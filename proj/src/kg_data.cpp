#include "kge/kg_data.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "kge/errors.hpp"

namespace kge {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cols;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("read failure on " + path.string());
  return buf.str();
}

std::vector<Triple> index_unique(const Vocabulary& vocab, const std::vector<RawTriple>& raw) {
  std::vector<Triple> out;
  out.reserve(raw.size());
  std::unordered_set<Triple, TripleHash> seen;
  for (const auto& r : raw) {
    const Triple t = vocab.index(r);
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

std::vector<Triple> unique(std::vector<Triple> in) {
  std::vector<Triple> out;
  out.reserve(in.size());
  std::unordered_set<Triple, TripleHash> seen;
  for (const auto& t : in)
    if (seen.insert(t).second) out.push_back(t);
  return out;
}

}  // namespace

std::uint32_t SymbolTable::intern(const std::string& label) {
  const auto [it, inserted] = to_id_.try_emplace(label, static_cast<std::uint32_t>(labels_.size()));
  if (inserted) labels_.push_back(label);
  return it->second;
}

std::uint32_t SymbolTable::id(const std::string& label) const {
  const auto it = to_id_.find(label);
  if (it == to_id_.end()) throw DataError("unknown symbol '" + label + "'");
  return it->second;
}

Triple Vocabulary::index(const RawTriple& raw) const {
  return {entities.id(raw.head), relations.id(raw.relation), entities.id(raw.tail)};
}

RawTriple Vocabulary::resolve(const Triple& t) const {
  return {entities.label(t.head), relations.label(t.relation), entities.label(t.tail)};
}

std::vector<RawTriple> parse_triples(const std::string& text, const std::string& source) {
  std::vector<RawTriple> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cols = split_tabs(line);
    if (cols.size() != 3) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected 3 tab-separated columns, got " +
                      std::to_string(cols.size()));
    }
    RawTriple t{trim(cols[0]), trim(cols[1]), trim(cols[2])};
    if (t.head.empty() || t.relation.empty() || t.tail.empty())
      throw DataError(source + ":" + std::to_string(line_no) + ": empty field");
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<RawTriple> load_triples(const std::filesystem::path& path) {
  return parse_triples(read_file(path), path.string());
}

void save_triples(const std::filesystem::path& path, const std::vector<RawTriple>& triples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& t : triples) out << t.head << '\t' << t.relation << '\t' << t.tail << '\n';
  if (!out) throw DataError("write failure on " + path.string());
}

Dataset build_dataset(const std::vector<RawTriple>& train, const std::vector<RawTriple>& valid,
                      const std::vector<RawTriple>& test) {
  if (train.empty()) throw DataError("training split is empty");
  Vocabulary vocab;
  for (const auto* split : {&train, &valid, &test}) {
    for (const auto& t : *split) {
      vocab.entities.intern(t.head);
      vocab.relations.intern(t.relation);
      vocab.entities.intern(t.tail);
    }
  }
  auto tr = index_unique(vocab, train);
  auto va = index_unique(vocab, valid);
  auto te = index_unique(vocab, test);
  return build_dataset(std::move(vocab), std::move(tr), std::move(va), std::move(te));
}

Dataset build_dataset(Vocabulary vocab, std::vector<Triple> train, std::vector<Triple> valid,
                      std::vector<Triple> test) {
  if (train.empty()) throw DataError("training split is empty");
  Dataset ds;
  ds.vocab = std::move(vocab);
  ds.train = unique(std::move(train));
  ds.valid = unique(std::move(valid));
  ds.test = unique(std::move(test));
  const auto ne = ds.vocab.num_entities();
  const auto nr = ds.vocab.num_relations();
  for (const auto* split : {&ds.train, &ds.valid, &ds.test}) {
    for (const auto& t : *split) {
      if (t.head >= ne || t.tail >= ne || t.relation >= nr)
        throw DataError("triple index outside vocabulary");
      ds.all_true_.insert(t);
    }
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& train, const std::filesystem::path& valid,
                     const std::filesystem::path& test) {
  auto tr = load_triples(train);
  auto va = valid.empty() ? std::vector<RawTriple>{} : load_triples(valid);
  auto te = test.empty() ? std::vector<RawTriple>{} : load_triples(test);
  return build_dataset(tr, va, te);
}

void save_symbols(const std::filesystem::path& path, const SymbolTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t i = 0; i < table.size(); ++i) out << table.label(static_cast<std::uint32_t>(i)) << '\t' << i << '\n';
  if (!out) throw DataError("write failure on " + path.string());
}

SymbolTable load_symbols(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::pair<std::uint32_t, std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 2) throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected label<TAB>index");
    std::uint32_t idx = 0;
    try {
      idx = static_cast<std::uint32_t>(std::stoul(std::string(cols[1])));
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad index");
    }
    rows.emplace_back(idx, trim(cols[0]));
  }
  std::sort(rows.begin(), rows.end());
  SymbolTable table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != i) throw DataError(path.string() + ": indices are not dense from 0");
    if (table.intern(rows[i].second) != i) throw DataError(path.string() + ": duplicate label " + rows[i].second);
  }
  return table;
}

}  // namespace kge
