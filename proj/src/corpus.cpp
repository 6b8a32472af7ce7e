#include "attrdisc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "attrdisc/errors.hpp"

namespace attrdisc {

std::size_t Dictionary::index_of(const std::string& word) const {
  auto it = std::lower_bound(words.begin(), words.end(), word);
  if (it == words.end() || *it != word) return npos;
  return static_cast<std::size_t>(it - words.begin());
}

std::vector<std::string> class_order(const std::vector<Document>& docs) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& d : docs) {
    if (seen.insert(d.class_id).second) order.push_back(d.class_id);
  }
  return order;
}

Dictionary build_dictionary(const std::vector<Document>& docs, std::size_t min_df,
                            double max_df_ratio) {
  if (docs.empty()) throw config_error("build_dictionary: empty corpus");
  if (min_df < 1) throw config_error("build_dictionary: min_df must be >= 1");

  const std::size_t n_classes = class_order(docs).size();
  // word -> set of classes containing it
  std::map<std::string, std::set<std::string>> classes_of;
  for (const auto& d : docs) {
    for (const auto& t : d.tokens) classes_of[t].insert(d.class_id);
  }

  const double max_df = max_df_ratio * static_cast<double>(n_classes);
  Dictionary dict;
  for (const auto& [word, classes] : classes_of) {
    const std::size_t df = classes.size();
    if (df >= min_df && static_cast<double>(df) <= max_df) {
      dict.words.push_back(word);
      dict.df.push_back(df);
    }
  }
  return dict;  // std::map iteration gives sorted words
}

std::vector<double> embed_document(const std::vector<std::string>& tokens,
                                   const Dictionary& dict, std::size_t n_classes) {
  std::vector<double> counts(dict.size(), 0.0);
  double max_count = 0.0;
  for (const auto& t : tokens) {
    std::size_t i = dict.index_of(t);
    if (i != Dictionary::npos) max_count = std::max(max_count, ++counts[i]);
  }
  std::vector<double> row(dict.size(), 0.0);
  if (max_count == 0.0) return row;
  for (std::size_t i = 0; i < dict.size(); ++i) {
    if (counts[i] == 0.0) continue;
    if (dict.df[i] == 0) throw numeric_error("embed: dictionary word with df = 0");
    row[i] = (counts[i] / max_count) *
             std::log(static_cast<double>(n_classes) / static_cast<double>(dict.df[i]));
  }
  return row;
}

ClassEmbedding embed(const std::vector<Document>& docs, const Dictionary& dict) {
  ClassEmbedding emb;
  emb.class_ids = class_order(docs);
  emb.words = dict.words;
  const std::size_t n_classes = emb.class_ids.size();

  std::map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < n_classes; ++r) row_of[emb.class_ids[r]] = r;

  emb.matrix.assign(n_classes, std::vector<double>(dict.size(), 0.0));
  std::vector<std::size_t> doc_count(n_classes, 0);
  for (const auto& d : docs) {
    const std::size_t r = row_of.at(d.class_id);
    const auto row = embed_document(d.tokens, dict, n_classes);
    for (std::size_t i = 0; i < dict.size(); ++i) emb.matrix[r][i] += row[i];
    ++doc_count[r];
  }
  for (std::size_t r = 0; r < n_classes; ++r) {
    for (auto& v : emb.matrix[r]) v /= static_cast<double>(doc_count[r]);
  }
  return emb;
}

}  // namespace attrdisc
