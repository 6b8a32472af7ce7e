#pragma once

#include <cstddef>
#include <vector>

#include "attrdisc/corpus.hpp"
#include "attrdisc/lda.hpp"

namespace attrdisc {

// Fully connected class graph with self loops. Edge weights depend on the
// selected word set S; the incident weight g_i of each node does not.
struct DiscriminationGraph {
  std::vector<std::vector<double>> g_all;  // N x N, per-pair sum over all words
  std::vector<std::vector<double>> g_sel;  // N x N, per-pair sum over selected words
  std::vector<double> node_weight;         // g_i = sum_{j != i} g_all[i][j]
  double total_weight = 0.0;               // g_T

  std::size_t n_nodes() const { return node_weight.size(); }
};

// Shared read-only inputs of one selection run.
struct SelectionProblem {
  const ClassEmbedding* embedding = nullptr;
  std::vector<double> cost;                 // per word, >= 1
  std::vector<std::size_t> dominant;        // per word, argmax_k p(topic|word)
  std::vector<double> dominant_weight;      // per word, p(word|dominant topic)
  double lambda = 0.0;
  double budget = 0.0;

  std::size_t n_words() const { return cost.size(); }
};

struct SelectionState {
  std::vector<std::size_t> selected;  // in acceptance order
  std::vector<bool> is_selected;
  DiscriminationGraph graph;
  std::vector<double> topic_sums;     // per topic, sum of s(w,T) over selected
  double spent_cost = 0.0;
  double f_dis = 0.0;
  double f_div = 0.0;
  double objective = 0.0;

  // per-selected-word bookkeeping for the output report
  std::vector<double> gain_at_selection;
};

// Entropy rate of the stationary random walk on `graph` (natural log,
// 0*log 0 = 0). Throws on a node with zero incident weight.
double entropy_rate(const DiscriminationGraph& graph);

// Sum over topics of sqrt(topic_sums[k]).
double diversity(const std::vector<double>& topic_sums);

// 1 + gamma * sum of p(topic|word) over insignificant topics.
double word_cost(std::size_t word, const TopicModel& model, const TopicRanking& ranking,
                 double gamma);

SelectionProblem make_problem(const ClassEmbedding& embedding, const TopicModel& model,
                              const TopicRanking& ranking, double lambda, double gamma,
                              double budget);

SelectionState initial_state(const SelectionProblem& problem, std::size_t n_topics);

// F(S u {w}) - F(S), computed without mutating state.
double marginal_gain(const SelectionProblem& problem, const SelectionState& state,
                     std::size_t word);

void accept_word(const SelectionProblem& problem, SelectionState& state, std::size_t word,
                 double gain);

// Full objective recomputed from scratch (test oracle path).
double objective_from_scratch(const SelectionProblem& problem,
                              const std::vector<std::size_t>& selected,
                              std::size_t n_topics);

// CELF-style lazy greedy under the knapsack constraint: one pass ranks by raw
// gain, one by gain per cost; the better of the two is returned.
SelectionState select_vocabulary(const ClassEmbedding& embedding, const TopicModel& model,
                                 const TopicRanking& ranking, double lambda, double gamma,
                                 double budget);

SelectionState run_greedy(const SelectionProblem& problem, std::size_t n_topics,
                          bool cost_benefit, bool lazy = true);

}  // namespace attrdisc
