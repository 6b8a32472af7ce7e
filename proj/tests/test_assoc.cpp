#include "doctest.h"

#include <cmath>

#include "attrdisc/assoc.hpp"
#include "attrdisc/corpus.hpp"
#include "attrdisc/errors.hpp"
#include "attrdisc/text.hpp"

using namespace attrdisc;

namespace {

ClassEmbedding small_embedding() {
  ClassEmbedding emb;
  emb.class_ids = {"c0", "c1"};
  emb.words = {"fur", "scale", "tail", "wing"};
  emb.matrix = {{0.7, 0.0, 0.3, 0.0}, {0.0, 0.5, 0.0, 0.0}};
  return emb;
}

}  // namespace

TEST_CASE("sign rule on the restricted vocabulary") {
  const auto assoc = initial_associations(small_embedding(), {"fur", "scale", "wing"});
  REQUIRE(assoc.mode == AssocMode::SignedBinary);
  REQUIRE(assoc.attribute_words == std::vector<std::string>{"fur", "scale", "wing"});
  CHECK(assoc.values[0] == std::vector<double>{1.0, -1.0, -1.0});
  CHECK(assoc.values[1] == std::vector<double>{-1.0, 1.0, -1.0});
}

TEST_CASE("class without any positive association is reported degenerate") {
  ClassEmbedding emb = small_embedding();
  emb.matrix[1] = {0.0, 0.0, 0.0, 0.0};
  const auto assoc = initial_associations(emb, {"fur", "tail"});
  CHECK(assoc.degenerate_classes() == std::vector<std::size_t>{1});
  const auto healthy = initial_associations(small_embedding(), {"fur", "scale"});
  CHECK(healthy.degenerate_classes().empty());
}

TEST_CASE("unknown vocabulary word is rejected") {
  CHECK_THROWS_AS(initial_associations(small_embedding(), {"fur", "horn"}), Error);
}

TEST_CASE("unseen class association matches the training sign rule") {
  // dictionary built from stemmed tokens of three training classes
  const std::vector<Document> docs = {
      {"c0", preprocess_tokens("furry tails and furry paws", 500)},
      {"c1", preprocess_tokens("shiny scales and fins", 500)},
      {"c2", preprocess_tokens("broad wings and tails", 500)}};
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  const std::vector<std::string> vocab = {dict.words[0], dict.words[1]};

  const auto row = unseen_associations("furry paws, no fins at all", dict, 3, vocab, 500,
                                       AssocMode::SignedBinary);
  REQUIRE(row.size() == 2);
  for (double v : row) CHECK((v == 1.0 || v == -1.0));
  // the sign must agree with presence of the (stemmed) word in the article
  const auto tokens = preprocess_tokens("furry paws, no fins at all", 500);
  for (std::size_t a = 0; a < vocab.size(); ++a) {
    bool present = false;
    for (const auto& t : tokens) present = present || t == vocab[a];
    // df == n_classes words get zero idf, hence -1 even when present
    const std::size_t w = dict.index_of(vocab[a]);
    const bool positive = present && dict.df[w] < 3;
    CHECK(row[a] == (positive ? 1.0 : -1.0));
  }
}

TEST_CASE("continuous mode returns the raw tf-idf weights") {
  const std::vector<Document> docs = {{"c0", {"fur", "fur", "tail"}},
                                      {"c1", {"scale"}},
                                      {"c2", {"tail"}}};
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  const auto row =
      unseen_associations("fur fur tail", dict, 3, {"fur", "scale", "tail"}, 500,
                          AssocMode::Continuous);
  // tf(fur)=2 max-normalized to 1, idf = ln(3/1); tail: tf 0.5, idf ln(3/2)
  CHECK(row[0] == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(row[1] == 0.0);
  CHECK(row[2] == doctest::Approx(0.5 * std::log(1.5)).epsilon(1e-12));
}

TEST_CASE("article sharing no vocabulary word is rejected") {
  const std::vector<Document> docs = {{"c0", {"fur"}}, {"c1", {"scale"}}};
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  CHECK_THROWS_AS(
      unseen_associations("granite boulders", dict, 2, {"fur", "scale"}, 500,
                          AssocMode::SignedBinary),
      Error);
}

TEST_CASE("truncation can flip an association") {
  const std::vector<Document> docs = {{"c0", {"fur"}}, {"c1", {"scale"}}};
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  // "scale" only appears after the first two kept tokens
  const std::string article = "fur fur scale";
  const auto full = unseen_associations(article, dict, 2, {"fur", "scale"}, 500,
                                        AssocMode::SignedBinary);
  const auto cut = unseen_associations(article, dict, 2, {"fur", "scale"}, 2,
                                       AssocMode::SignedBinary);
  CHECK(full[1] == 1.0);
  CHECK(cut[1] == -1.0);
}

TEST_CASE("training class article reproduces its own association row") {
  // one document per class, so the class embedding row equals the document row
  const std::vector<std::string> texts = {"furry tails and whiskers",
                                          "shiny scales and sharp fins",
                                          "feathered wings and beaks"};
  std::vector<Document> docs;
  for (std::size_t c = 0; c < texts.size(); ++c)
    docs.push_back({"c" + std::to_string(c), preprocess_tokens(texts[c], 500)});
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  const ClassEmbedding emb = embed(docs, dict);
  const std::vector<std::string> vocab = dict.words;
  const auto assoc = initial_associations(emb, vocab);
  for (std::size_t c = 0; c < texts.size(); ++c) {
    const auto row = unseen_associations(texts[c], dict, emb.n_classes(), vocab, 500,
                                         AssocMode::SignedBinary);
    CHECK(row == assoc.values[c]);
  }
}
