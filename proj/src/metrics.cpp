#include "attrdisc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "attrdisc/errors.hpp"

namespace attrdisc {

SaliencyLabel saliency_label_from_name(const std::string& name) {
  if (name == "positive") return SaliencyLabel::Positive;
  if (name == "negative") return SaliencyLabel::Negative;
  if (name == "unknown") return SaliencyLabel::Unknown;
  if (name == "junk") return SaliencyLabel::Junk;
  throw config_error("unknown saliency label: " + name);
}

namespace {

double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

double dcg(const std::vector<double>& rels, std::size_t k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < k && i < rels.size(); ++i)
    sum += (std::pow(2.0, rels[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  return sum;
}

}  // namespace

NdcgResult ndcg_at_k(const std::vector<std::vector<double>>& embedding_rows,
                     const RelevanceMatrix& relevance, std::size_t k) {
  const std::size_t n = embedding_rows.size();
  if (k < 1) throw config_error("ndcg_at_k: k must be >= 1");
  if (k > n - 1) throw config_error("ndcg_at_k: k exceeds candidate count");
  if (relevance.grades.size() != n)
    throw dimension_error("ndcg_at_k: relevance matrix size mismatch");

  NdcgResult result;
  result.per_class.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::size_t> others;
    for (std::size_t c = 0; c < n; ++c)
      if (c != q) others.push_back(c);

    std::vector<double> dist(n, 0.0);
    for (std::size_t c : others) dist[c] = cosine_distance(embedding_rows[q], embedding_rows[c]);
    std::vector<std::size_t> produced = others;
    std::stable_sort(produced.begin(), produced.end(), [&](std::size_t a, std::size_t b) {
      if (dist[a] != dist[b]) return dist[a] < dist[b];
      return a < b;
    });

    std::vector<double> produced_rel, ideal_rel;
    for (std::size_t c : produced) produced_rel.push_back(relevance.grades[q][c]);
    ideal_rel = produced_rel;
    std::sort(ideal_rel.begin(), ideal_rel.end(), std::greater<double>());

    const double ideal = dcg(ideal_rel, k);
    result.per_class[q] = ideal > 0.0 ? dcg(produced_rel, k) / ideal : 1.0;
    result.mean += result.per_class[q];
  }
  result.mean /= static_cast<double>(n);
  return result;
}

SaliencyScores saliency_scores(const std::vector<SaliencyAnnotation>& annotations,
                               const std::vector<std::string>& selected) {
  if (annotations.empty()) throw config_error("saliency_scores: no annotations");
  struct Counts {
    std::size_t positive = 0, junk = 0, total = 0;
  };
  std::map<std::string, Counts> counts;
  for (const auto& a : annotations) {
    auto& c = counts[a.word];
    ++c.total;
    if (a.label == SaliencyLabel::Positive) ++c.positive;
    if (a.label == SaliencyLabel::Junk) ++c.junk;
  }

  const std::set<std::string> sel(selected.begin(), selected.end());
  double pos_sel = 0.0, pos_all = 0.0, junk_sel = 0.0, junk_all = 0.0;
  bool any_overlap = false;
  for (const auto& [word, c] : counts) {
    const double p_pos = static_cast<double>(c.positive) / static_cast<double>(c.total);
    const double p_junk = static_cast<double>(c.junk) / static_cast<double>(c.total);
    pos_all += p_pos;
    junk_all += p_junk;
    if (sel.count(word)) {
      any_overlap = true;
      pos_sel += p_pos;
      junk_sel += p_junk;
    }
  }
  if (!any_overlap)
    throw config_error("saliency_scores: selected set does not intersect the annotated vocabulary");

  SaliencyScores s;
  s.relevance = pos_all > 0.0 ? pos_sel / pos_all : 0.0;
  s.junk = junk_all > 0.0 ? junk_sel / junk_all : 0.0;
  s.saliency = 0.5 * (s.relevance + (1.0 - s.junk));
  return s;
}

double accuracy_topk(const std::vector<std::vector<RankedClass>>& rankings,
                     const std::vector<std::size_t>& true_labels, std::size_t k) {
  if (k < 1) throw config_error("accuracy_topk: k must be >= 1");
  if (rankings.size() != true_labels.size())
    throw dimension_error("accuracy_topk: sample count mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    const std::size_t depth = std::min(k, rankings[i].size());
    for (std::size_t r = 0; r < depth; ++r) {
      if (rankings[i][r].class_index == true_labels[i]) {
        ++hits;
        break;
      }
    }
  }
  return rankings.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(rankings.size());
}

std::vector<ApAuc> attribute_ap_auc(const Matrix& scores, const Matrix& labels) {
  if (scores.rows != labels.rows || scores.cols != labels.cols)
    throw dimension_error("attribute_ap_auc: shape mismatch");
  const std::size_t n = scores.rows;
  std::vector<ApAuc> out(scores.cols);
  for (std::size_t j = 0; j < scores.cols; ++j) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (labels.at(i, j) > 0.5) ++n_pos;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) continue;  // flagged invalid

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scores.at(a, j) != scores.at(b, j)) return scores.at(a, j) > scores.at(b, j);
      return a < b;
    });

    // AP: precision at each positive, averaged over positives
    double ap = 0.0;
    std::size_t tp = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (labels.at(order[r], j) > 0.5) {
        ++tp;
        ap += static_cast<double>(tp) / static_cast<double>(r + 1);
      }
    }
    ap /= static_cast<double>(n_pos);

    // AUC via midranks
    std::vector<std::size_t> asc(order.rbegin(), order.rend());  // ascending score
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
      std::size_t jj = i;
      while (jj + 1 < n && scores.at(asc[jj + 1], j) == scores.at(asc[i], j)) ++jj;
      const double midrank = (static_cast<double>(i + 1) + static_cast<double>(jj + 1)) / 2.0;
      for (std::size_t t = i; t <= jj; ++t) rank[asc[t]] = midrank;
      i = jj + 1;
    }
    double rank_sum_pos = 0.0;
    for (std::size_t s = 0; s < n; ++s)
      if (labels.at(s, j) > 0.5) rank_sum_pos += rank[s];
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    out[j] = {ap, u / (static_cast<double>(n_pos) * static_cast<double>(n_neg)), true};
  }
  return out;
}

}  // namespace attrdisc
