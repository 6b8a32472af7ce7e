#include "attrdisc/zeroshot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "attrdisc/errors.hpp"

namespace attrdisc {

ScoreNormalizer fit_normalizer(const Matrix& scores, const std::string& source) {
  if (scores.rows < 2) throw config_error("fit_normalizer: need at least 2 samples");
  ScoreNormalizer norm;
  norm.source = source;
  norm.mean.resize(scores.cols);
  norm.std.resize(scores.cols);
  norm.degenerate.resize(scores.cols, false);
  const double n = static_cast<double>(scores.rows);
  for (std::size_t j = 0; j < scores.cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.rows; ++i) sum += scores.at(i, j);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < scores.rows; ++i) {
      const double d = scores.at(i, j) - mean;
      ss += d * d;
    }
    double sd = std::sqrt(ss / (n - 1.0));
    if (sd <= 0.0) {
      norm.degenerate[j] = true;
      sd = 1.0;
    }
    norm.mean[j] = mean;
    norm.std[j] = sd;
  }
  return norm;
}

Matrix normalize_scores(const ScoreNormalizer& norm, const Matrix& scores) {
  if (scores.cols != norm.mean.size())
    throw dimension_error("normalize_scores: attribute count mismatch");
  Matrix out = scores;
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j)
      out.at(i, j) = (out.at(i, j) - norm.mean[j]) / norm.std[j];
  return out;
}

std::vector<double> dap_score(const std::vector<double>& norm_scores,
                              const AssociationMatrix& assoc) {
  if (norm_scores.size() != assoc.n_attributes())
    throw dimension_error("dap_score: attribute count mismatch");
  std::vector<double> scores(assoc.n_classes());
  for (std::size_t c = 0; c < assoc.n_classes(); ++c) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < assoc.n_attributes(); ++j) {
      const double m = assoc.values[c][j];
      if (assoc.mode == AssocMode::SignedBinary) {
        if (m > 0.0) {
          num += norm_scores[j];
          den += 1.0;
        }
      } else if (m > 0.0) {
        num += m * norm_scores[j];
        den += m;
      }
    }
    scores[c] = den > 0.0 ? num / den : -std::numeric_limits<double>::infinity();
  }
  return scores;
}

std::vector<std::vector<RankedClass>> rank_classes(const Matrix& attr_scores,
                                                   const ScoreNormalizer& normalizer,
                                                   const AssociationMatrix& assoc,
                                                   std::size_t top_k) {
  const Matrix normed = normalize_scores(normalizer, attr_scores);
  std::vector<std::vector<RankedClass>> result(normed.rows);
  for (std::size_t i = 0; i < normed.rows; ++i) {
    std::vector<double> row(normed.cols);
    for (std::size_t j = 0; j < normed.cols; ++j) row[j] = normed.at(i, j);
    const auto scores = dap_score(row, assoc);
    std::vector<RankedClass> ranked(scores.size());
    for (std::size_t c = 0; c < scores.size(); ++c) ranked[c] = {c, scores[c]};
    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedClass& a, const RankedClass& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.class_index < b.class_index;
    });
    if (ranked.size() > top_k) ranked.resize(top_k);
    result[i] = std::move(ranked);
  }
  return result;
}

std::vector<std::vector<RankedClass>> classify(const Matrix& features,
                                               const DenseNetwork& network,
                                               const ScoreNormalizer& normalizer,
                                               const AssociationMatrix& assoc,
                                               std::size_t top_k) {
  return rank_classes(predict_attributes(network, features), normalizer, assoc, top_k);
}

}  // namespace attrdisc
