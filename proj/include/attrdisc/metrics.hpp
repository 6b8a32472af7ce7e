#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "attrdisc/neural.hpp"
#include "attrdisc/zeroshot.hpp"

namespace attrdisc {

// Externally supplied classes x classes relevance grades (diagonal maximal).
struct RelevanceMatrix {
  std::vector<std::string> class_ids;
  std::vector<std::vector<double>> grades;
};

enum class SaliencyLabel { Positive, Negative, Unknown, Junk };

struct SaliencyAnnotation {
  std::string word;
  std::string class_id;
  std::string annotator_id;
  SaliencyLabel label;
};

SaliencyLabel saliency_label_from_name(const std::string& name);

struct NdcgResult {
  std::vector<double> per_class;
  double mean = 0.0;
};

// Rank other classes by cosine distance between embedding rows; graded gain
// (2^rel - 1) / log2(i + 1) against the relevance-sorted ideal.
NdcgResult ndcg_at_k(const std::vector<std::vector<double>>& embedding_rows,
                     const RelevanceMatrix& relevance, std::size_t k);

struct SaliencyScores {
  double relevance = 0.0;
  double junk = 0.0;
  double saliency = 0.0;
};

// p(+|w) and p(junk|w) by marginalizing counts over annotators and classes;
// relevance/junk of S are ratios against the whole annotated vocabulary.
SaliencyScores saliency_scores(const std::vector<SaliencyAnnotation>& annotations,
                               const std::vector<std::string>& selected);

double accuracy_topk(const std::vector<std::vector<RankedClass>>& rankings,
                     const std::vector<std::size_t>& true_labels, std::size_t k);

struct ApAuc {
  double ap = 0.0;
  double auc = 0.0;
  bool valid = false;  // false when an attribute lacks a positive or negative
};

// AP over the precision-recall step curve (descending score, ties by sample
// index); AUC via rank statistics with midrank tie handling.
std::vector<ApAuc> attribute_ap_auc(const Matrix& scores, const Matrix& labels);

}  // namespace attrdisc
