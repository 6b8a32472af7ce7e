#include "attrdisc/assoc.hpp"

#include <algorithm>

#include "attrdisc/errors.hpp"
#include "attrdisc/text.hpp"

namespace attrdisc {

std::vector<std::size_t> AssociationMatrix::degenerate_classes() const {
  std::vector<std::size_t> degenerate;
  for (std::size_t c = 0; c < n_classes(); ++c) {
    bool any = false;
    for (double v : values[c])
      if (v > 0.0) { any = true; break; }
    if (!any) degenerate.push_back(c);
  }
  return degenerate;
}

namespace {

std::vector<std::size_t> column_indices(const std::vector<std::string>& all_words,
                                        const std::vector<std::string>& vocabulary) {
  std::vector<std::size_t> cols;
  cols.reserve(vocabulary.size());
  for (const auto& w : vocabulary) {
    auto it = std::find(all_words.begin(), all_words.end(), w);
    if (it == all_words.end())
      throw dimension_error("vocabulary word not in embedding: " + w);
    cols.push_back(static_cast<std::size_t>(it - all_words.begin()));
  }
  return cols;
}

}  // namespace

AssociationMatrix initial_associations(const ClassEmbedding& embedding,
                                       const std::vector<std::string>& vocabulary) {
  const auto cols = column_indices(embedding.words, vocabulary);
  AssociationMatrix assoc;
  assoc.class_ids = embedding.class_ids;
  assoc.attribute_words = vocabulary;
  assoc.mode = AssocMode::SignedBinary;
  assoc.values.assign(embedding.n_classes(), std::vector<double>(vocabulary.size()));
  for (std::size_t c = 0; c < embedding.n_classes(); ++c)
    for (std::size_t a = 0; a < cols.size(); ++a)
      assoc.values[c][a] = embedding.matrix[c][cols[a]] > 0.0 ? 1.0 : -1.0;
  return assoc;
}

std::vector<double> unseen_associations(const std::string& article, const Dictionary& dict,
                                        std::size_t n_train_classes,
                                        const std::vector<std::string>& vocabulary,
                                        std::size_t length_limit, AssocMode mode) {
  const auto tokens = preprocess_tokens(article, length_limit);
  if (tokens.empty()) throw config_error("unseen_associations: article empty after preprocessing");
  const auto tfidf = embed_document(tokens, dict, n_train_classes);

  std::vector<double> row(vocabulary.size());
  bool any_overlap = false;
  for (std::size_t a = 0; a < vocabulary.size(); ++a) {
    const std::size_t w = dict.index_of(vocabulary[a]);
    const double v = w == Dictionary::npos ? 0.0 : tfidf[w];
    // overlap means the word occurs in the article, even when idf zeroes it out
    if (w != Dictionary::npos &&
        std::find(tokens.begin(), tokens.end(), vocabulary[a]) != tokens.end())
      any_overlap = true;
    row[a] = mode == AssocMode::SignedBinary ? (v > 0.0 ? 1.0 : -1.0) : v;
  }
  if (!any_overlap)
    throw config_error("unseen_associations: no vocabulary word occurs in the article");
  return row;
}

}  // namespace attrdisc
