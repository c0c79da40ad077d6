#include "kge/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <zlib.h>

#include "kge/errors.hpp"

namespace kge {
namespace {

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void string32(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  const std::uint8_t* take(std::size_t n) {
    if (n > size_ - pos_) throw FormatError("checkpoint is truncated");
    const auto* p = data_ + pos_;
    pos_ += n;
    return p;
  }
  std::uint32_t u32() {
    const auto* p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string string(std::size_t n) {
    const auto* p = take(n);
    return std::string(reinterpret_cast<const char*>(p), n);
  }
  // Guards allocations against corrupt counts.
  std::size_t count(std::size_t element_size) {
    const auto n = u64();
    if (element_size && n > (size_ - pos_) / element_size) throw FormatError("checkpoint is truncated");
    return static_cast<std::size_t>(n);
  }
  bool done() const { return pos_ == size_; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::uint32_t crc(const std::uint8_t* data, std::size_t n) {
  return static_cast<std::uint32_t>(::crc32(::crc32(0L, Z_NULL, 0), data, static_cast<uInt>(n)));
}

void write_symbols(Writer& w, const SymbolTable& table) {
  w.u64(table.size());
  for (const auto& label : table.labels()) w.string32(label);
}

SymbolTable read_symbols(Reader& r) {
  const auto n = r.count(4);
  SymbolTable table;
  for (std::size_t i = 0; i < n; ++i) {
    const auto len = r.u32();
    if (table.intern(r.string(len)) != i) throw FormatError("checkpoint vocabulary has duplicate labels");
  }
  return table;
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const EmbeddingState& state, const Vocabulary& vocab,
                                            const Settings& config) {
  Writer w;
  w.bytes(kCheckpointMagic, sizeof(kCheckpointMagic));
  w.u32(kCheckpointVersion);
  w.u64(state.dim());
  w.u64(state.num_entities());
  w.u64(state.num_relations());
  for (double v : state.entities.data()) w.f64(v);
  for (double v : state.relations.data()) w.f64(v);
  w.f64(state.slack);
  w.u64(state.per_triple_slack.size());
  for (double v : state.per_triple_slack) w.f64(v);
  write_symbols(w, vocab.entities);
  write_symbols(w, vocab.relations);
  const auto text = format_settings(config);
  w.u64(text.size());
  w.bytes(text.data(), text.size());
  auto& buf = w.buffer();
  w.u32(crc(buf.data(), buf.size()));
  return std::move(buf);
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof(kCheckpointMagic) ||
      std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0)
    throw FormatError("not a checkpoint file (magic bytes missing)");
  if (bytes.size() < sizeof(kCheckpointMagic) + 8) throw FormatError("checkpoint is truncated");

  const std::size_t body = bytes.size() - 4;
  Reader trailer(bytes.data() + body, 4);
  if (trailer.u32() != crc(bytes.data(), body)) throw FormatError("checkpoint checksum mismatch");

  Reader r(bytes.data(), body);
  r.take(sizeof(kCheckpointMagic));
  if (const auto version = r.u32(); version != kCheckpointVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                      std::to_string(kCheckpointVersion) + ")");
  const auto dim = r.u64();
  const auto ne = r.u64();
  const auto nr = r.u64();
  if (dim == 0 || ne > body / 8 || nr > body / 8 || dim > body / 8 || (ne + nr) * dim > body / 8)
    throw FormatError("checkpoint header is inconsistent with its size");

  Checkpoint ck;
  ck.state.entities = Matrix(ne, dim);
  ck.state.relations = Matrix(nr, dim);
  for (double& v : ck.state.entities.data()) v = r.f64();
  for (double& v : ck.state.relations.data()) v = r.f64();
  ck.state.slack = r.f64();
  ck.state.per_triple_slack.resize(r.count(8));
  for (double& v : ck.state.per_triple_slack) v = r.f64();
  ck.vocab.entities = read_symbols(r);
  ck.vocab.relations = read_symbols(r);
  if (ck.vocab.num_entities() != ne || ck.vocab.num_relations() != nr)
    throw FormatError("checkpoint vocabulary size does not match its matrices");
  const auto text_len = r.count(1);
  ck.config = parse_settings(r.string(text_len), "checkpoint config");
  if (!r.done()) throw FormatError("trailing bytes before checkpoint checksum");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const EmbeddingState& state, const Vocabulary& vocab,
                     const Settings& config) {
  const auto bytes = encode_checkpoint(state, vocab, config);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failure on checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace kge
