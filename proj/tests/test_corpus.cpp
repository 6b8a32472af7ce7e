#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "attrdisc/corpus.hpp"
#include "attrdisc/errors.hpp"

using namespace attrdisc;

namespace {

Document doc(std::string class_id, std::vector<std::string> tokens) {
  return Document{std::move(class_id), std::move(tokens)};
}

}  // namespace

TEST_CASE("dictionary df by hand") {
  const std::vector<Document> docs = {doc("c1", {"cat", "dog"}), doc("c2", {"dog", "fish"})};
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  REQUIRE(dict.words == std::vector<std::string>{"cat", "dog", "fish"});
  CHECK(dict.df == std::vector<std::size_t>{1, 2, 1});

  const Dictionary strict = build_dictionary(docs, 2, 1.0);
  CHECK(strict.words == std::vector<std::string>{"dog"});
}

TEST_CASE("dictionary from a single empty document is empty") {
  const Dictionary dict = build_dictionary({doc("c1", {})}, 1, 1.0);
  CHECK(dict.size() == 0);
}

TEST_CASE("dictionary rejects min_df < 1") {
  CHECK_THROWS_AS(build_dictionary({doc("c1", {"cat"})}, 0, 1.0), Error);
}

TEST_CASE("df counts a class once regardless of document count") {
  const std::vector<Document> docs = {doc("c1", {"cat"}), doc("c1", {"cat", "cat"}),
                                      doc("c2", {"dog"})};
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  const auto cat = dict.index_of("cat");
  REQUIRE(cat != Dictionary::npos);
  CHECK(dict.df[cat] == 1);
}

TEST_CASE("tf-idf by hand") {
  const std::vector<Document> docs = {doc("c1", {"cat", "cat", "dog"}), doc("c2", {"dog", "fish"})};
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  const ClassEmbedding emb = embed(docs, dict);
  const auto cat = dict.index_of("cat");
  const auto dog = dict.index_of("dog");
  CHECK(emb.matrix[0][cat] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(emb.matrix[0][dog] == doctest::Approx(0.0));
  CHECK(emb.matrix[1][dict.index_of("fish")] ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("absent word has entry exactly zero") {
  const std::vector<Document> docs = {doc("c1", {"cat"}), doc("c2", {"dog"})};
  const ClassEmbedding emb = embed(docs, build_dictionary(docs, 1, 1.0));
  CHECK(emb.matrix[0][1] == 0.0);
  CHECK(emb.matrix[1][0] == 0.0);
}

TEST_CASE("single-class corpus embeds to all zeros") {
  const std::vector<Document> docs = {doc("c1", {"cat", "dog"})};
  const ClassEmbedding emb = embed(docs, build_dictionary(docs, 1, 1.0));
  for (double v : emb.matrix[0]) CHECK(v == 0.0);
}

TEST_CASE("embedding invariant to document order within a class") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> pool = {"ant", "bee", "cow", "dog", "eel", "fox"};
  std::vector<Document> docs;
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d) {
      Document doc;
      doc.class_id = "c" + std::to_string(c);
      for (int t = 0; t < 8; ++t) doc.tokens.push_back(pool[rng() % pool.size()]);
      docs.push_back(doc);
    }
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  const ClassEmbedding a = embed(docs, dict);
  std::vector<Document> shuffled = docs;
  std::swap(shuffled[0], shuffled[2]);
  std::swap(shuffled[4], shuffled[5]);
  const ClassEmbedding b = embed(shuffled, dict);
  REQUIRE(a.class_ids == b.class_ids);
  for (std::size_t r = 0; r < a.n_classes(); ++r)
    for (std::size_t i = 0; i < a.n_words(); ++i)
      CHECK(a.matrix[r][i] == doctest::Approx(b.matrix[r][i]).epsilon(1e-12));
}

TEST_CASE("positive entry implies word present and df < J") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> pool = {"ant", "bee", "cow", "dog", "eel"};
  std::vector<Document> docs;
  for (int c = 0; c < 4; ++c) {
    Document d;
    d.class_id = "c" + std::to_string(c);
    for (int t = 0; t < 6; ++t) d.tokens.push_back(pool[rng() % pool.size()]);
    docs.push_back(d);
  }
  const Dictionary dict = build_dictionary(docs, 1, 1.0);
  const ClassEmbedding emb = embed(docs, dict);
  for (std::size_t r = 0; r < emb.n_classes(); ++r)
    for (std::size_t i = 0; i < emb.n_words(); ++i) {
      CHECK(emb.matrix[r][i] >= 0.0);
      if (emb.matrix[r][i] > 0.0) {
        CHECK(dict.df[i] < emb.n_classes());
        bool present = false;
        for (const auto& d : docs)
          if (d.class_id == emb.class_ids[r] &&
              std::find(d.tokens.begin(), d.tokens.end(), dict.words[i]) != d.tokens.end())
            present = true;
        CHECK(present);
      }
    }
}
