#include "attrdisc/text.hpp"

#include <cctype>
#include <fstream>

#include "attrdisc/errors.hpp"

namespace attrdisc {

namespace {

bool is_vowel(const std::string& w, int i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return true;
    case 'y':
      return i == 0 ? false : !is_vowel(w, i - 1);
    default:
      return false;
  }
}

// Number of VC sequences in w[0..end].
int measure(const std::string& w, int end) {
  int m = 0;
  int i = 0;
  while (i <= end && !is_vowel(w, i)) ++i;
  while (i <= end) {
    while (i <= end && is_vowel(w, i)) ++i;
    if (i > end) break;
    ++m;
    while (i <= end && !is_vowel(w, i)) ++i;
  }
  return m;
}

bool has_vowel(const std::string& w, int end) {
  for (int i = 0; i <= end; ++i)
    if (is_vowel(w, i)) return true;
  return false;
}

bool double_consonant(const std::string& w, int end) {
  return end >= 1 && w[end] == w[end - 1] && !is_vowel(w, end);
}

// consonant-vowel-consonant ending where the final consonant is not w, x or y
bool cvc(const std::string& w, int end) {
  if (end < 2) return false;
  if (is_vowel(w, end) || !is_vowel(w, end - 1) || is_vowel(w, end - 2)) return false;
  char c = w[end];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const char* suffix) {
  std::string s(suffix);
  return w.size() >= s.size() && w.compare(w.size() - s.size(), s.size(), s) == 0;
}

// Replace `suffix` with `repl` when the stem before it has measure > m_min.
bool replace_if_m(std::string& w, const char* suffix, const char* repl, int m_min) {
  if (!ends_with(w, suffix)) return false;
  int stem_end = static_cast<int>(w.size() - std::string(suffix).size()) - 1;
  if (stem_end < 0 || measure(w, stem_end) <= m_min) return true;  // matched, no change
  w = w.substr(0, stem_end + 1) + repl;
  return true;
}

}  // namespace

std::string porter_stem(const std::string& word) {
  if (word.size() <= 2) return word;
  std::string w = word;

  // step 1a
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (!ends_with(w, "ss") && ends_with(w, "s")) {
    w.resize(w.size() - 1);
  }

  // step 1b
  bool extra_1b = false;
  if (ends_with(w, "eed")) {
    int stem_end = static_cast<int>(w.size()) - 4;
    if (stem_end >= 0 && measure(w, stem_end) > 0) w.resize(w.size() - 1);
  } else if (ends_with(w, "ed")) {
    int stem_end = static_cast<int>(w.size()) - 3;
    if (stem_end >= 0 && has_vowel(w, stem_end)) {
      w.resize(w.size() - 2);
      extra_1b = true;
    }
  } else if (ends_with(w, "ing")) {
    int stem_end = static_cast<int>(w.size()) - 4;
    if (stem_end >= 0 && has_vowel(w, stem_end)) {
      w.resize(w.size() - 3);
      extra_1b = true;
    }
  }
  if (extra_1b) {
    int end = static_cast<int>(w.size()) - 1;
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w += 'e';
    } else if (double_consonant(w, end) && w[end] != 'l' && w[end] != 's' && w[end] != 'z') {
      w.resize(w.size() - 1);
    } else if (measure(w, end) == 1 && cvc(w, end)) {
      w += 'e';
    }
  }

  // step 1c
  if (ends_with(w, "y") && has_vowel(w, static_cast<int>(w.size()) - 2)) {
    w[w.size() - 1] = 'i';
  }

  // step 2
  static const std::pair<const char*, const char*> step2[] = {
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
      {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
      {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
      {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"}};
  for (const auto& [suf, rep] : step2) {
    if (replace_if_m(w, suf, rep, 0)) break;
  }

  // step 3
  static const std::pair<const char*, const char*> step3[] = {
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
  for (const auto& [suf, rep] : step3) {
    if (replace_if_m(w, suf, rep, 0)) break;
  }

  // step 4
  static const char* step4[] = {"al",  "ance", "ence", "er",  "ic",  "able", "ible",
                                "ant", "ement", "ment", "ent", "ou",  "ism",  "ate",
                                "iti", "ous",  "ive",  "ize"};
  bool done4 = false;
  for (const char* suf : step4) {
    if (!ends_with(w, suf)) continue;
    int stem_end = static_cast<int>(w.size() - std::string(suf).size()) - 1;
    if (stem_end >= 0 && measure(w, stem_end) > 1) w.resize(stem_end + 1);
    done4 = true;
    break;
  }
  if (!done4 && (ends_with(w, "sion") || ends_with(w, "tion"))) {
    int stem_end = static_cast<int>(w.size()) - 4;  // keep the s/t
    if (stem_end >= 0 && measure(w, stem_end) > 1) w.resize(stem_end + 1);
  }

  // step 5a
  if (ends_with(w, "e")) {
    int stem_end = static_cast<int>(w.size()) - 2;
    int m = measure(w, stem_end);
    if (m > 1 || (m == 1 && !cvc(w, stem_end))) w.resize(w.size() - 1);
  }
  // step 5b
  if (double_consonant(w, static_cast<int>(w.size()) - 1) && w.back() == 'l' &&
      measure(w, static_cast<int>(w.size()) - 1) > 1) {
    w.resize(w.size() - 1);
  }
  return w;
}

const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> s = {
        "the", "a", "an", "and", "or", "but", "if", "then", "else", "when", "while",
        "of", "at", "by", "for", "with", "about", "against", "between", "into",
        "through", "during", "before", "after", "above", "below", "to", "from",
        "up", "down", "in", "out", "on", "off", "over", "under", "again", "further",
        "once", "here", "there", "where", "why", "how", "all", "any", "both",
        "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
        "only", "own", "same", "so", "than", "too", "very", "can", "will", "just",
        "should", "now", "this", "that", "these", "those", "am", "is", "are",
        "was", "were", "be", "been", "being", "have", "has", "had", "having",
        "do", "does", "did", "doing", "would", "could", "ought", "it", "its",
        "itself", "they", "them", "their", "theirs", "themselves", "what",
        "which", "who", "whom", "he", "him", "his", "himself", "she", "her",
        "hers", "herself", "we", "us", "our", "ours", "ourselves", "you", "your",
        "yours", "yourself", "i", "me", "my", "mine", "myself", "as", "also",
        "because", "until", "both"};
    for (char c = 'a'; c <= 'z'; ++c) s.insert(std::string(1, c));
    return s;
  }();
  return words;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open stop-word list: " + path);
  std::unordered_set<std::string> words;
  std::string w;
  while (in >> w) words.insert(w);
  return words;
}

std::vector<std::string> preprocess_tokens(const std::string& raw_text, std::size_t limit,
                                           const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> cleaned;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !stopwords.count(cur) && cleaned.size() < limit) cleaned.push_back(cur);
    cur.clear();
  };
  for (unsigned char c : raw_text) {
    if (std::isalpha(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else {
      flush();
      if (cleaned.size() >= limit) break;
    }
  }
  flush();
  for (auto& t : cleaned) t = porter_stem(t);
  return cleaned;
}

}  // namespace attrdisc
