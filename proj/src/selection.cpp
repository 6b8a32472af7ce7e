#include "attrdisc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "attrdisc/errors.hpp"

namespace attrdisc {

namespace {

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// -sum_j p_ij log p_ij for row i, including the self loop.
double row_entropy(const DiscriminationGraph& g, std::size_t i) {
  const double gi = g.node_weight[i];
  double off_sum = 0.0;
  double ent = 0.0;
  for (std::size_t j = 0; j < g.n_nodes(); ++j) {
    if (j == i) continue;
    const double p = g.g_sel[i][j] / gi;
    off_sum += p;
    ent -= xlogx(p);
  }
  ent -= xlogx(1.0 - off_sum);
  return ent;
}

// Row entropy with word w's differences added to g_sel (state untouched).
double row_entropy_plus(const SelectionProblem& prob, const DiscriminationGraph& g,
                        std::size_t i, std::size_t w) {
  const auto& V = prob.embedding->matrix;
  const double gi = g.node_weight[i];
  double off_sum = 0.0;
  double ent = 0.0;
  for (std::size_t j = 0; j < g.n_nodes(); ++j) {
    if (j == i) continue;
    const double p = (g.g_sel[i][j] + std::abs(V[i][w] - V[j][w])) / gi;
    off_sum += p;
    ent -= xlogx(p);
  }
  ent -= xlogx(1.0 - off_sum);
  return ent;
}

}  // namespace

double entropy_rate(const DiscriminationGraph& graph) {
  double rate = 0.0;
  for (std::size_t i = 0; i < graph.n_nodes(); ++i) {
    if (graph.node_weight[i] <= 0.0)
      throw numeric_error("entropy_rate: node with zero incident weight");
    const double mu = graph.node_weight[i] / graph.total_weight;
    rate += mu * row_entropy(graph, i);
  }
  return rate;
}

double diversity(const std::vector<double>& topic_sums) {
  double div = 0.0;
  for (double s : topic_sums) div += std::sqrt(s);
  return div;
}

double word_cost(std::size_t word, const TopicModel& model, const TopicRanking& ranking,
                 double gamma) {
  const auto post = word_topic_posterior(model, word);
  double insig_mass = 0.0;
  for (std::size_t k : ranking.insignificant) insig_mass += post[k];
  return 1.0 + gamma * insig_mass;
}

SelectionProblem make_problem(const ClassEmbedding& embedding, const TopicModel& model,
                              const TopicRanking& ranking, double lambda, double gamma,
                              double budget) {
  if (embedding.n_words() != model.n_words())
    throw dimension_error("make_problem: embedding and topic model word counts differ");
  SelectionProblem prob;
  prob.embedding = &embedding;
  prob.lambda = lambda;
  prob.budget = budget;
  const std::size_t W = embedding.n_words();
  prob.cost.resize(W);
  prob.dominant.resize(W);
  prob.dominant_weight.resize(W);
  for (std::size_t w = 0; w < W; ++w) {
    prob.cost[w] = word_cost(w, model, ranking, gamma);
    const std::size_t k = dominant_topic(model, w);
    prob.dominant[w] = k;
    prob.dominant_weight[w] = model.phi[k][w];
  }
  return prob;
}

SelectionState initial_state(const SelectionProblem& problem, std::size_t n_topics) {
  const auto& V = problem.embedding->matrix;
  const std::size_t N = problem.embedding->n_classes();
  const std::size_t W = problem.n_words();

  SelectionState state;
  state.is_selected.assign(W, false);
  state.topic_sums.assign(n_topics, 0.0);
  state.graph.g_all.assign(N, std::vector<double>(N, 0.0));
  state.graph.g_sel.assign(N, std::vector<double>(N, 0.0));
  state.graph.node_weight.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      double sum = 0.0;
      for (std::size_t w = 0; w < W; ++w) sum += std::abs(V[i][w] - V[j][w]);
      state.graph.g_all[i][j] = state.graph.g_all[j][i] = sum;
      state.graph.node_weight[i] += sum;
      state.graph.node_weight[j] += sum;
    }
  }
  for (double gi : state.graph.node_weight) state.graph.total_weight += gi;
  return state;
}

double marginal_gain(const SelectionProblem& problem, const SelectionState& state,
                     std::size_t word) {
  const auto& g = state.graph;
  double d_dis = 0.0;
  for (std::size_t i = 0; i < g.n_nodes(); ++i) {
    const double mu = g.node_weight[i] / g.total_weight;
    d_dis += mu * (row_entropy_plus(problem, g, i, word) - row_entropy(g, i));
  }
  const double old_sum = state.topic_sums[problem.dominant[word]];
  const double d_div =
      std::sqrt(old_sum + problem.dominant_weight[word]) - std::sqrt(old_sum);
  return d_dis + problem.lambda * d_div;
}

void accept_word(const SelectionProblem& problem, SelectionState& state, std::size_t word,
                 double gain) {
  const auto& V = problem.embedding->matrix;
  auto& g = state.graph;
  for (std::size_t i = 0; i < g.n_nodes(); ++i) {
    for (std::size_t j = i + 1; j < g.n_nodes(); ++j) {
      const double d = std::abs(V[i][word] - V[j][word]);
      g.g_sel[i][j] += d;
      g.g_sel[j][i] += d;
    }
  }
  state.topic_sums[problem.dominant[word]] += problem.dominant_weight[word];
  state.selected.push_back(word);
  state.is_selected[word] = true;
  state.spent_cost += problem.cost[word];
  state.f_dis = entropy_rate(g);
  state.f_div = diversity(state.topic_sums);
  state.objective = state.f_dis + problem.lambda * state.f_div;
  state.gain_at_selection.push_back(gain);
}

double objective_from_scratch(const SelectionProblem& problem,
                              const std::vector<std::size_t>& selected,
                              std::size_t n_topics) {
  SelectionState state = initial_state(problem, n_topics);
  const auto& V = problem.embedding->matrix;
  auto& g = state.graph;
  for (std::size_t w : selected) {
    for (std::size_t i = 0; i < g.n_nodes(); ++i)
      for (std::size_t j = i + 1; j < g.n_nodes(); ++j) {
        const double d = std::abs(V[i][w] - V[j][w]);
        g.g_sel[i][j] += d;
        g.g_sel[j][i] += d;
      }
    state.topic_sums[problem.dominant[w]] += problem.dominant_weight[w];
  }
  return entropy_rate(g) + problem.lambda * diversity(state.topic_sums);
}

SelectionState run_greedy(const SelectionProblem& problem, std::size_t n_topics,
                          bool cost_benefit, bool lazy) {
  SelectionState state = initial_state(problem, n_topics);
  const std::size_t W = problem.n_words();

  // max-heap of (key, word); stale entries carry an old stamp
  using Entry = std::tuple<double, std::size_t, std::size_t>;  // key, stamp, word
  auto cmp = [](const Entry& a, const Entry& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<2>(a) > std::get<2>(b);  // lower word index wins ties
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

  auto key_of = [&](double gain, std::size_t w) {
    return cost_benefit ? gain / problem.cost[w] : gain;
  };

  std::size_t stamp = 0;
  for (std::size_t w = 0; w < W; ++w) {
    if (state.spent_cost + problem.cost[w] > problem.budget) continue;
    heap.emplace(key_of(marginal_gain(problem, state, w), w), stamp, w);
  }

  while (!heap.empty()) {
    auto [key, entry_stamp, w] = heap.top();
    heap.pop();
    if (state.is_selected[w]) continue;
    if (state.spent_cost + problem.cost[w] > problem.budget) continue;  // drop
    if (lazy && entry_stamp != stamp) {
      heap.emplace(key_of(marginal_gain(problem, state, w), w), stamp, w);
      continue;
    }
    double gain;
    if (lazy) {
      gain = cost_benefit ? key * problem.cost[w] : key;
    } else {
      gain = marginal_gain(problem, state, w);
    }
    accept_word(problem, state, w, gain);
    ++stamp;
    if (!lazy) {
      // naive mode: rebuild the queue so every entry is fresh
      decltype(heap) fresh(cmp);
      for (std::size_t u = 0; u < W; ++u) {
        if (state.is_selected[u]) continue;
        if (state.spent_cost + problem.cost[u] > problem.budget) continue;
        fresh.emplace(key_of(marginal_gain(problem, state, u), u), stamp, u);
      }
      heap = std::move(fresh);
    }
  }
  return state;
}

SelectionState select_vocabulary(const ClassEmbedding& embedding, const TopicModel& model,
                                 const TopicRanking& ranking, double lambda, double gamma,
                                 double budget) {
  SelectionProblem problem = make_problem(embedding, model, ranking, lambda, gamma, budget);
  SelectionState by_gain = run_greedy(problem, model.n_topics, false);
  SelectionState by_ratio = run_greedy(problem, model.n_topics, true);
  return by_ratio.objective > by_gain.objective ? by_ratio : by_gain;
}

}  // namespace attrdisc
