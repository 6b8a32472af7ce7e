#include "doctest.h"

#include <cmath>

#include "attrdisc/errors.hpp"
#include "attrdisc/lda.hpp"
#include "synthetic.hpp"

using namespace attrdisc;
using attrdisc::testing::make_planted_corpus;
using attrdisc::testing::mean_matched_cosine;

TEST_CASE("phi and theta rows are normalized and strictly positive") {
  const auto corpus = make_planted_corpus(3, 30, 30, 40, 0.0, 42);
  const TopicModel model = fit_lda(corpus.docs, corpus.dict, 3, 0.0, 0.01, 50, 1);
  for (const auto& row : model.phi) {
    double sum = 0.0;
    for (double v : row) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (const auto& row : model.theta) {
    double sum = 0.0;
    for (double v : row) {
      CHECK(v > 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  double prior_sum = 0.0;
  for (double v : model.topic_prior) prior_sum += v;
  CHECK(prior_sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("identical seed gives bit-identical phi") {
  const auto corpus = make_planted_corpus(3, 30, 20, 30, 0.0, 5);
  const TopicModel a = fit_lda(corpus.docs, corpus.dict, 4, 0.0, 0.01, 30, 77);
  const TopicModel b = fit_lda(corpus.docs, corpus.dict, 4, 0.0, 0.01, 30, 77);
  CHECK(a.phi == b.phi);
  CHECK(a.theta == b.theta);
}

TEST_CASE("planted topics are recovered") {
  const auto corpus = make_planted_corpus(3, 100, 200, 60, 0.0, 2024);
  const TopicModel model = fit_lda(corpus.docs, corpus.dict, 3, 0.0, 0.01, 200, 9);
  // planted phi uses word index == dictionary order (padded names sort)
  CHECK(mean_matched_cosine(corpus.planted_phi, model.phi) > 0.8);
}

TEST_CASE("rejects corpus with no in-dictionary tokens") {
  Dictionary empty_dict;
  std::vector<Document> docs = {{"c1", {"cat"}}};
  CHECK_THROWS_AS(fit_lda(docs, empty_dict, 2, 0.0, 0.01, 5, 1), Error);
}

TEST_CASE("word topic posterior by hand") {
  TopicModel model;
  model.n_topics = 2;
  model.phi = {{0.4, 0.6}, {0.1, 0.9}};
  model.topic_prior = {0.5, 0.5};
  const auto post = word_topic_posterior(model, 0);
  CHECK(post[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(post[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("uniform phi column with uniform prior gives uniform posterior") {
  TopicModel model;
  model.n_topics = 3;
  model.phi = {{0.2, 0.8}, {0.2, 0.8}, {0.2, 0.8}};
  model.topic_prior = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (double v : word_topic_posterior(model, 0))
    CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("posterior sums to one for every word") {
  const auto corpus = make_planted_corpus(3, 40, 30, 40, 0.1, 3);
  const TopicModel model = fit_lda(corpus.docs, corpus.dict, 4, 0.0, 0.01, 40, 13);
  for (std::size_t w = 0; w < model.n_words(); ++w) {
    double sum = 0.0;
    for (double v : word_topic_posterior(model, w)) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

namespace {

// hand-built model for ranking checks
TopicModel toy_model(std::vector<std::vector<double>> phi, std::vector<std::vector<double>> theta,
                     std::vector<std::size_t> lengths) {
  TopicModel m;
  m.n_topics = phi.size();
  m.phi = std::move(phi);
  m.theta = std::move(theta);
  m.doc_lengths = std::move(lengths);
  m.topic_prior.assign(m.n_topics, 1.0 / static_cast<double>(m.n_topics));
  return m;
}

}  // namespace

TEST_CASE("exactly uniform topic has significance zero and ranks last") {
  // topic 0 uniform over words and over documents; topic 1 concentrated
  const auto model = toy_model({{0.25, 0.25, 0.25, 0.25}, {0.97, 0.01, 0.01, 0.01}},
                               {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}, {10, 10, 10});
  const TopicRanking ranking = rank_topics(model, 0.5);
  CHECK(ranking.significance[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ranking.significance[1] > 0.0);
  REQUIRE(ranking.insignificant.size() == 1);
  CHECK(ranking.insignificant[0] == 0);
}

TEST_CASE("peaked word distribution maximizes the word KL term") {
  const auto model =
      toy_model({{0.997, 0.001, 0.001, 0.001}, {0.4, 0.3, 0.2, 0.1}, {0.25, 0.25, 0.25, 0.25}},
                {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}}, {10, 10});
  const TopicRanking ranking = rank_topics(model, 0.34);
  CHECK(ranking.significance[0] > ranking.significance[1]);
  CHECK(ranking.significance[1] > ranking.significance[2]);
}

TEST_CASE("significance is invariant to topic permutation") {
  const auto corpus = make_planted_corpus(3, 30, 20, 30, 0.1, 8);
  TopicModel model = fit_lda(corpus.docs, corpus.dict, 3, 0.0, 0.01, 30, 21);
  const TopicRanking before = rank_topics(model, 0.34);
  // swap topics 0 and 2 everywhere
  std::swap(model.phi[0], model.phi[2]);
  std::swap(model.topic_prior[0], model.topic_prior[2]);
  for (auto& row : model.theta) std::swap(row[0], row[2]);
  const TopicRanking after = rank_topics(model, 0.34);
  CHECK(after.significance[0] == doctest::Approx(before.significance[2]).epsilon(1e-12));
  CHECK(after.significance[2] == doctest::Approx(before.significance[0]).epsilon(1e-12));
}

TEST_CASE("background topic of a planted corpus lands in the bottom quarter") {
  const auto corpus = make_planted_corpus(3, 100, 200, 60, 0.25, 99);
  const TopicModel model = fit_lda(corpus.docs, corpus.dict, 4, 0.0, 0.01, 200, 17);
  const TopicRanking ranking = rank_topics(model, 0.25);
  REQUIRE(ranking.insignificant.size() == 1);
  // the flagged topic should be the one closest to uniform over words
  std::size_t most_uniform = 0;
  double best = -1.0;
  std::vector<double> uniform(model.n_words(), 1.0 / static_cast<double>(model.n_words()));
  for (std::size_t k = 0; k < model.n_topics; ++k) {
    const double c = attrdisc::testing::cosine(model.phi[k], uniform);
    if (c > best) {
      best = c;
      most_uniform = k;
    }
  }
  CHECK(ranking.insignificant[0] == most_uniform);
}
