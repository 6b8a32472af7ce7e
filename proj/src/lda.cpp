#include "attrdisc/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "attrdisc/errors.hpp"

namespace attrdisc {

TopicModel fit_lda(const std::vector<Document>& docs, const Dictionary& dict,
                   std::size_t n_topics, double alpha, double beta, std::size_t iters,
                   std::uint64_t seed) {
  if (n_topics < 2) throw config_error("fit_lda: n_topics must be >= 2");
  if (iters < 1) throw config_error("fit_lda: iters must be >= 1");
  const std::size_t K = n_topics;
  const std::size_t V = dict.size();
  if (alpha <= 0.0) alpha = 50.0 / static_cast<double>(K);
  if (beta <= 0.0) beta = 0.01;

  // map tokens to dictionary indices, dropping out-of-dictionary tokens
  std::vector<std::vector<std::size_t>> word_ids(docs.size());
  std::size_t total_tokens = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& t : docs[d].tokens) {
      std::size_t w = dict.index_of(t);
      if (w != Dictionary::npos) word_ids[d].push_back(w);
    }
    total_tokens += word_ids[d].size();
  }
  if (total_tokens == 0) throw config_error("fit_lda: corpus has no in-dictionary tokens");

  std::vector<std::vector<std::size_t>> z(docs.size());  // topic assignments
  std::vector<std::vector<std::size_t>> n_dk(docs.size(), std::vector<std::size_t>(K, 0));
  std::vector<std::vector<std::size_t>> n_kw(K, std::vector<std::size_t>(V, 0));
  std::vector<std::size_t> n_k(K, 0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(word_ids[d].size());
    for (std::size_t i = 0; i < word_ids[d].size(); ++i) {
      std::size_t k = static_cast<std::size_t>(unit(rng) * K);
      if (k == K) k = K - 1;
      z[d][i] = k;
      ++n_dk[d][k];
      ++n_kw[k][word_ids[d][i]];
      ++n_k[k];
    }
  }

  const double v_beta = static_cast<double>(V) * beta;
  std::vector<double> p(K);
  for (std::size_t it = 0; it < iters; ++it) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (std::size_t i = 0; i < word_ids[d].size(); ++i) {
        const std::size_t w = word_ids[d][i];
        const std::size_t old = z[d][i];
        --n_dk[d][old];
        --n_kw[old][w];
        --n_k[old];

        double sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          sum += (static_cast<double>(n_dk[d][k]) + alpha) *
                 (static_cast<double>(n_kw[k][w]) + beta) /
                 (static_cast<double>(n_k[k]) + v_beta);
          p[k] = sum;
        }
        const double u = unit(rng) * sum;
        std::size_t k_new = static_cast<std::size_t>(
            std::lower_bound(p.begin(), p.end(), u) - p.begin());
        if (k_new == K) k_new = K - 1;

        z[d][i] = k_new;
        ++n_dk[d][k_new];
        ++n_kw[k_new][w];
        ++n_k[k_new];
      }
    }
  }

  TopicModel model;
  model.alpha = alpha;
  model.beta = beta;
  model.seed = seed;
  model.n_topics = K;
  model.phi.assign(K, std::vector<double>(V));
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = static_cast<double>(n_k[k]) + v_beta;
    for (std::size_t w = 0; w < V; ++w)
      model.phi[k][w] = (static_cast<double>(n_kw[k][w]) + beta) / denom;
  }
  model.theta.assign(docs.size(), std::vector<double>(K));
  model.doc_lengths.resize(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const double n_d = static_cast<double>(word_ids[d].size());
    model.doc_lengths[d] = word_ids[d].size();
    const double denom = n_d + static_cast<double>(K) * alpha;
    for (std::size_t k = 0; k < K; ++k)
      model.theta[d][k] = (static_cast<double>(n_dk[d][k]) + alpha) / denom;
  }
  model.topic_prior.resize(K);
  const double prior_denom =
      static_cast<double>(total_tokens) + static_cast<double>(K) * alpha;
  for (std::size_t k = 0; k < K; ++k)
    model.topic_prior[k] = (static_cast<double>(n_k[k]) + alpha) / prior_denom;
  return model;
}

std::vector<double> word_topic_posterior(const TopicModel& model, std::size_t word) {
  if (word >= model.n_words()) throw dimension_error("word_topic_posterior: word index out of range");
  std::vector<double> post(model.n_topics);
  double sum = 0.0;
  for (std::size_t k = 0; k < model.n_topics; ++k) {
    post[k] = model.phi[k][word] * model.topic_prior[k];
    sum += post[k];
  }
  for (auto& v : post) v /= sum;
  return post;
}

std::size_t dominant_topic(const TopicModel& model, std::size_t word) {
  const auto post = word_topic_posterior(model, word);
  std::size_t best = 0;
  for (std::size_t k = 1; k < post.size(); ++k)
    if (post[k] > post[best]) best = k;
  return best;
}

namespace {

// KL(p || uniform over n) = log(n) - H(p), computed directly for stability
double kl_to_uniform(const std::vector<double>& p) {
  const double n = static_cast<double>(p.size());
  double kl = 0.0;
  for (double v : p)
    if (v > 0.0) kl += v * std::log(v * n);
  return std::max(kl, 0.0);
}

}  // namespace

TopicRanking rank_topics(const TopicModel& model, double rho) {
  if (rho <= 0.0 || rho >= 1.0) throw config_error("rank_topics: rho must be in (0,1)");
  const std::size_t K = model.n_topics;
  const std::size_t D = model.n_docs();

  TopicRanking ranking;
  ranking.significance.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> docdist(D);
    double sum = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
      docdist[d] = model.theta[d][k] * static_cast<double>(model.doc_lengths[d]);
      sum += docdist[d];
    }
    for (auto& v : docdist) v /= sum;
    ranking.significance[k] = kl_to_uniform(model.phi[k]) + kl_to_uniform(docdist);
  }

  std::vector<std::size_t> idx(K);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (ranking.significance[a] != ranking.significance[b])
      return ranking.significance[a] < ranking.significance[b];
    return a < b;
  });
  const std::size_t n_insig =
      static_cast<std::size_t>(std::ceil(rho * static_cast<double>(K)));
  ranking.insignificant.assign(idx.begin(), idx.begin() + n_insig);
  std::sort(ranking.insignificant.begin(), ranking.insignificant.end());
  return ranking;
}

}  // namespace attrdisc
