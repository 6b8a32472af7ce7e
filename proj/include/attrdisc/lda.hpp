#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "attrdisc/corpus.hpp"

namespace attrdisc {

// LDA model state after collapsed Gibbs sampling, frozen for downstream use.
struct TopicModel {
  std::vector<std::vector<double>> phi;    // K x V, p(word|topic), rows sum to 1
  std::vector<std::vector<double>> theta;  // D x K, p(topic|doc), rows sum to 1
  std::vector<double> topic_prior;         // K, corpus token share per topic
  std::vector<std::size_t> doc_lengths;    // in-dictionary token count per doc
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_topics = 0;

  std::size_t n_words() const { return phi.empty() ? 0 : phi[0].size(); }
  std::size_t n_docs() const { return theta.size(); }
};

struct TopicRanking {
  std::vector<double> significance;        // per topic
  std::vector<std::size_t> insignificant;  // the ceil(rho*K) lowest, sorted ascending
};

// Collapsed Gibbs sampling for `iters` sweeps; deterministic given seed.
// alpha <= 0 selects the 50/K default.
TopicModel fit_lda(const std::vector<Document>& docs, const Dictionary& dict,
                   std::size_t n_topics, double alpha, double beta, std::size_t iters,
                   std::uint64_t seed);

// p(topic|word) by Bayes inversion of phi with the corpus topic prior.
std::vector<double> word_topic_posterior(const TopicModel& model, std::size_t word);

// Dominant topic of a word: argmax_k p(topic|word), ties to lowest index.
std::size_t dominant_topic(const TopicModel& model, std::size_t word);

// Significance = KL(phi_k || uniform over words) + KL(docdist_k || uniform
// over documents), with docdist_k(d) proportional to theta[d][k]*len(d).
TopicRanking rank_topics(const TopicModel& model, double rho);

}  // namespace attrdisc
