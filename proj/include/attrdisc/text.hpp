#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

namespace attrdisc {

// One preprocessed text document attached to a class.
struct Document {
  std::string class_id;
  std::vector<std::string> tokens;  // lowercase, stemmed, [a-z]+
};

// Porter's suffix-stripping algorithm. Input must be a lowercase [a-z]+ word.
std::string porter_stem(const std::string& word);

// Default English stop-word list (includes single letters left over from
// contractions such as "wombat's" -> "wombat s").
const std::unordered_set<std::string>& default_stopwords();

std::unordered_set<std::string> load_stopwords(const std::string& path);

// Lowercase, strip non-alphabetic characters, drop stop words, truncate the
// cleaned token stream to `limit` tokens, then stem.
std::vector<std::string> preprocess_tokens(
    const std::string& raw_text, std::size_t limit,
    const std::unordered_set<std::string>& stopwords = default_stopwords());

inline Document preprocess(const std::string& class_id, const std::string& raw_text,
                           std::size_t limit,
                           const std::unordered_set<std::string>& stopwords = default_stopwords()) {
  return Document{class_id, preprocess_tokens(raw_text, limit, stopwords)};
}

}  // namespace attrdisc
