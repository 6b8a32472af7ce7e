#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "attrdisc/text.hpp"

namespace attrdisc {

// Sorted vocabulary with per-word document frequency counted over classes
// (all documents of one class merged).
struct Dictionary {
  std::vector<std::string> words;   // sorted, unique
  std::vector<std::size_t> df;      // per word, in [1, n_classes]

  std::size_t size() const { return words.size(); }
  // Index of `word` or npos.
  std::size_t index_of(const std::string& word) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// The classes x words matrix of tf-idf scores.
struct ClassEmbedding {
  std::vector<std::string> class_ids;                 // row labels
  std::vector<std::string> words;                     // column labels
  std::vector<std::vector<double>> matrix;            // class_ids.size() x words.size()

  std::size_t n_classes() const { return class_ids.size(); }
  std::size_t n_words() const { return words.size(); }
};

// Words present in >= min_df classes and <= max_df_ratio * n_classes classes.
Dictionary build_dictionary(const std::vector<Document>& docs, std::size_t min_df = 2,
                            double max_df_ratio = 0.8);

// Per class: average over its documents of (max-normalized tf) * ln(J/df).
ClassEmbedding embed(const std::vector<Document>& docs, const Dictionary& dict);

// tf-idf row of a single document against a frozen dictionary (idf uses the
// training class count `n_classes`).
std::vector<double> embed_document(const std::vector<std::string>& tokens,
                                   const Dictionary& dict, std::size_t n_classes);

// Distinct class ids in order of first appearance.
std::vector<std::string> class_order(const std::vector<Document>& docs);

}  // namespace attrdisc
