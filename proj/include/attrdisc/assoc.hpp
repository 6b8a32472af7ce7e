#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "attrdisc/corpus.hpp"

namespace attrdisc {

enum class AssocMode { SignedBinary, Continuous };

// Class x attribute association matrix: {-1,+1} signed or nonnegative
// continuous weights.
struct AssociationMatrix {
  std::vector<std::string> class_ids;
  std::vector<std::string> attribute_words;
  std::vector<std::vector<double>> values;
  AssocMode mode = AssocMode::SignedBinary;

  std::size_t n_classes() const { return class_ids.size(); }
  std::size_t n_attributes() const { return attribute_words.size(); }
  // classes whose row has no positive / nonzero entry
  std::vector<std::size_t> degenerate_classes() const;
};

// Sign rule m_ij = +1 if v > 0 else -1, restricted to `vocabulary` columns.
AssociationMatrix initial_associations(const ClassEmbedding& embedding,
                                       const std::vector<std::string>& vocabulary);

// Association row for a novel class from its raw article, with idf frozen to
// the training dictionary. Throws when no vocabulary word occurs.
std::vector<double> unseen_associations(const std::string& article, const Dictionary& dict,
                                        std::size_t n_train_classes,
                                        const std::vector<std::string>& vocabulary,
                                        std::size_t length_limit, AssocMode mode);

}  // namespace attrdisc
