#include <gtest/gtest.h>

#include <sstream>

#include "seqrec/errors.hpp"
#include "seqrec/model_io.hpp"

using namespace seqrec;

namespace {

EmbeddingModel tiny_model(bool subwords = true) {
  Corpus c;
  for (int i = 0; i < 5; ++i)
    c.sentences.push_back({TokenKey(std::vector<VenueId>{"x", "y"}),
                           TokenKey(std::vector<VenueId>{"z"}),
                           TokenKey(std::vector<VenueId>{"x", "y", "z"})});
  c.delta_t = std::chrono::seconds(600);
  TrainConfig cfg;
  cfg.size = 8;
  cfg.epochs = 2;
  cfg.use_subwords = subwords;
  return train(c, cfg);
}

std::string bytes_of(const EmbeddingModel& m) {
  std::ostringstream out;
  save_model(m, out);
  return out.str();
}

}  // namespace

TEST(ModelIo, RoundTrip) {
  for (bool subwords : {true, false}) {
    auto m = tiny_model(subwords);
    std::istringstream in(bytes_of(m));
    auto back = load_model(in);
    EXPECT_EQ(back, m);
    EXPECT_EQ(back.corpus.delta_t, std::chrono::seconds(600));
    EXPECT_EQ(bytes_of(back), bytes_of(m));
  }
}

TEST(ModelIo, StartsWithMagic) {
  EXPECT_EQ(bytes_of(tiny_model()).substr(0, 5), "SEQV1");
}

TEST(ModelIo, RejectsBadInput) {
  std::istringstream empty("");
  EXPECT_THROW(load_model(empty), ModelFormatError);

  auto bytes = bytes_of(tiny_model());
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream a(bad_magic);
  EXPECT_THROW(load_model(a), ModelFormatError);

  for (std::size_t cut : {std::size_t{6}, bytes.size() / 2, bytes.size() - 1}) {
    std::istringstream t(bytes.substr(0, cut));
    EXPECT_THROW(load_model(t), ModelFormatError) << cut;
  }

  std::istringstream trailing(bytes + "!");
  EXPECT_THROW(load_model(trailing), ModelFormatError);
}

TEST(ModelIo, MissingFile) {
  EXPECT_THROW(load_model(std::string("/nonexistent/model.bin")), Error);
}

TEST(ModelIo, TextExport) {
  auto m = tiny_model();
  std::ostringstream out;
  export_text(m, out);
  std::istringstream in(out.str());
  std::size_t rows = 0, dim = 0;
  in >> rows >> dim;
  EXPECT_EQ(rows, m.vocabulary.session_count());
  EXPECT_EQ(dim, 8u);
  std::string token;
  in >> token;
  EXPECT_EQ(token, m.vocabulary.sessions()[0].key.str());
  auto v = composed_input_vector(m, 0);
  for (std::size_t d = 0; d < dim; ++d) {
    float x = 0;
    in >> x;
    EXPECT_EQ(x, v[d]);
  }
}
