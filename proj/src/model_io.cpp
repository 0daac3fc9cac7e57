#include "seqrec/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>

#include "seqrec/errors.hpp"

namespace seqrec {

namespace {

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename UInt>
  void uint(UInt v) {
    std::array<char, sizeof(UInt)> buf;
    for (std::size_t i = 0; i < sizeof(UInt); ++i)
      buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out_.write(buf.data(), buf.size());
  }
  void u8(std::uint8_t v) { uint(v); }
  void u32(std::size_t v) {
    if (v > std::numeric_limits<std::uint32_t>::max())
      throw Error("value does not fit the 32-bit model field");
    uint(static_cast<std::uint32_t>(v));
  }
  void u64(std::uint64_t v) { uint(v); }
  void i64(std::int64_t v) { uint(static_cast<std::uint64_t>(v)); }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
  void str(const std::string& s) {
    u32(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void matrix(const Matrix& m) {
    u64(m.rows());
    u32(m.cols());
    for (float v : m.data()) f32(v);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw ModelFormatError("truncated model file");
  }
  template <typename UInt>
  UInt uint() {
    std::array<char, sizeof(UInt)> buf;
    bytes(buf.data(), buf.size());
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i)
      v |= static_cast<UInt>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
  }
  std::uint8_t u8() { return uint<std::uint8_t>(); }
  std::uint32_t u32() { return uint<std::uint32_t>(); }
  std::uint64_t u64() { return uint<std::uint64_t>(); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string str() {
    const auto n = u32();
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  Matrix matrix(std::size_t expected_rows, std::size_t expected_cols) {
    const auto rows = u64();
    const auto cols = u32();
    if (rows != expected_rows || cols != expected_cols)
      throw ModelFormatError("matrix shape does not match the vocabulary");
    Matrix m(rows, cols);
    for (auto& v : m.data()) v = f32();
    return m;
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_model(const EmbeddingModel& model, std::ostream& out) {
  Writer w(out);
  out.write(kModelMagic, sizeof(kModelMagic) - 1);

  const auto& c = model.config;
  w.u8(static_cast<std::uint8_t>(c.mode));
  w.u8(c.use_subwords ? 1 : 0);
  w.u32(c.size);
  w.u32(c.min_n);
  w.u32(c.max_n);
  w.u32(c.window);
  w.u32(c.epochs);
  w.u32(c.negatives);
  w.f64(c.initial_lr);
  w.u64(c.seed);
  w.u32(c.workers);
  w.u32(c.min_count);

  w.u8(model.corpus.non_seq ? 1 : 0);
  w.i64(model.corpus.delta_t.count());

  const auto& vocab = model.vocabulary;
  w.u64(vocab.session_count());
  for (std::size_t i = 0; i < vocab.session_count(); ++i) {
    w.str(vocab.sessions()[i].key.str());
    w.u32(i);
    w.u64(vocab.sessions()[i].frequency);
  }
  w.u64(vocab.ngram_count());
  for (std::size_t i = 0; i < vocab.ngram_count(); ++i) {
    w.str(vocab.ngrams()[i].str());
    w.u32(i);
  }
  w.matrix(model.input);
  w.matrix(model.output);
  if (!out) throw Error("failed to write model");
}

void save_model(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  save_model(model, out);
}

EmbeddingModel load_model(std::istream& in) {
  Reader r(in);
  char magic[sizeof(kModelMagic) - 1];
  r.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kModelMagic, sizeof(magic)) != 0)
    throw ModelFormatError("bad magic: not a SEQV1 model");

  EmbeddingModel model;
  auto& c = model.config;
  const auto mode = r.u8();
  if (mode > 1) throw ModelFormatError("unknown training mode in header");
  c.mode = static_cast<TrainMode>(mode);
  c.use_subwords = r.u8() != 0;
  c.size = r.u32();
  c.min_n = r.u32();
  c.max_n = r.u32();
  c.window = r.u32();
  c.epochs = r.u32();
  c.negatives = r.u32();
  c.initial_lr = r.f64();
  c.seed = r.u64();
  c.workers = r.u32();
  c.min_count = r.u32();
  try {
    c.validate();
  } catch (const ArgumentError& e) {
    throw ModelFormatError(std::string("invalid config block: ") + e.what());
  }

  model.corpus.non_seq = r.u8() != 0;
  model.corpus.delta_t = std::chrono::seconds(r.i64());

  const auto n_sessions = r.u64();
  std::vector<Vocabulary::SessionEntry> sessions;
  for (std::uint64_t i = 0; i < n_sessions; ++i) {
    Vocabulary::SessionEntry e;
    e.key = TokenKey::from_string(r.str());
    if (r.u32() != i) throw ModelFormatError("session indices are not dense");
    e.frequency = r.u64();
    sessions.push_back(std::move(e));
  }
  const auto n_ngrams = r.u64();
  std::vector<TokenKey> ngrams;
  for (std::uint64_t i = 0; i < n_ngrams; ++i) {
    ngrams.push_back(TokenKey::from_string(r.str()));
    if (r.u32() != i) throw ModelFormatError("n-gram indices are not dense");
  }
  try {
    model.vocabulary = Vocabulary(std::move(sessions), std::move(ngrams),
                                  c.min_count, c.min_n, c.max_n, c.use_subwords);
  } catch (const Error& e) {
    throw ModelFormatError(std::string("inconsistent vocabulary: ") + e.what());
  }

  model.input = r.matrix(model.vocabulary.input_row_count(), c.size);
  model.output = r.matrix(model.vocabulary.session_count(), c.size);
  if (in.peek() != std::char_traits<char>::eof())
    throw ModelFormatError("trailing bytes after model");
  return model;
}

EmbeddingModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return load_model(in);
}

void export_text(const EmbeddingModel& model, std::ostream& out) {
  const auto& vocab = model.vocabulary;
  out << vocab.session_count() << ' ' << model.dim() << '\n';
  out << std::setprecision(std::numeric_limits<float>::max_digits10);
  for (std::uint32_t i = 0; i < vocab.session_count(); ++i) {
    out << vocab.sessions()[i].key.str();
    for (float v : composed_input_vector(model, i)) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace seqrec
