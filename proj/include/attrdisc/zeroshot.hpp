#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "attrdisc/assoc.hpp"
#include "attrdisc/neural.hpp"

namespace attrdisc {

// Per-attribute score standardization. `batch` fits on the test batch itself
// (BT mode), `reference` on held-out seen-class data.
struct ScoreNormalizer {
  std::vector<double> mean;
  std::vector<double> std;
  std::vector<bool> degenerate;  // zero-variance attributes (std forced to 1)
  std::string source;            // "reference" | "batch"
};

ScoreNormalizer fit_normalizer(const Matrix& scores, const std::string& source);

Matrix normalize_scores(const ScoreNormalizer& norm, const Matrix& scores);

// DAP summation score per class. Binary mode: mean of normalized scores over
// the class's positive attributes; continuous mode: weighted mean. Classes
// with no active attribute score -infinity.
std::vector<double> dap_score(const std::vector<double>& norm_scores,
                              const AssociationMatrix& assoc);

struct RankedClass {
  std::size_t class_index;
  double score;
};

// predict -> normalize -> dap_score -> descending ranking per sample,
// truncated to top_k, ties broken by class index.
std::vector<std::vector<RankedClass>> classify(const Matrix& features,
                                               const DenseNetwork& network,
                                               const ScoreNormalizer& normalizer,
                                               const AssociationMatrix& assoc,
                                               std::size_t top_k);

// Ranking over precomputed attribute scores (oracle predictors, tests).
std::vector<std::vector<RankedClass>> rank_classes(const Matrix& attr_scores,
                                                   const ScoreNormalizer& normalizer,
                                                   const AssociationMatrix& assoc,
                                                   std::size_t top_k);

}  // namespace attrdisc
