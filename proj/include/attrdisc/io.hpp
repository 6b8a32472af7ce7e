#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attrdisc/assoc.hpp"
#include "attrdisc/corpus.hpp"
#include "attrdisc/lda.hpp"
#include "attrdisc/metrics.hpp"
#include "attrdisc/selection.hpp"
#include "attrdisc/zeroshot.hpp"

namespace attrdisc {

// 9 significant digits, the repo-wide numeric text format.
std::string format_g9(double v);

std::vector<std::string> split_csv_line(const std::string& line);

// Raw (class_id, text) pairs before preprocessing.
struct RawCorpus {
  std::vector<std::string> class_ids;
  std::vector<std::string> texts;
};

// Directory of <class_id>__<index>.txt files, or a JSON-lines file with
// {"class_id":..., "text":...} objects.
RawCorpus read_corpus(const std::string& path);

void write_dictionary(const Dictionary& dict, const std::string& path);
Dictionary read_dictionary(const std::string& path);

void write_embedding(const ClassEmbedding& emb, const std::string& path);
ClassEmbedding read_embedding(const std::string& path);

// phi.csv + theta.csv + meta.txt under `prefix` (a directory).
void write_topic_model(const TopicModel& model, const std::string& dir,
                       const std::string& dict_checksum);
TopicModel read_topic_model(const std::string& dir);

void write_ranking(const TopicRanking& ranking, const std::string& path);
TopicRanking read_ranking(const std::string& path);

void write_selection(const SelectionState& state, const SelectionProblem& problem,
                     const std::vector<std::string>& words, const std::string& path);
std::vector<std::string> read_selection_words(const std::string& path);

void write_associations(const AssociationMatrix& assoc, const std::string& path);
AssociationMatrix read_associations(const std::string& path);

struct FeatureTable {
  std::vector<std::string> sample_ids;
  std::vector<std::string> class_ids;
  Matrix features;
};

FeatureTable read_features(const std::string& path);
void write_features(const FeatureTable& table, const std::string& path);

RelevanceMatrix read_relevance(const std::string& path);
std::vector<SaliencyAnnotation> read_annotations(const std::string& path);

void write_predictions(const std::vector<std::string>& sample_ids,
                       const std::vector<std::vector<RankedClass>>& rankings,
                       const std::vector<std::string>& class_ids, const std::string& path);

// FNV-1a 64 over the file bytes, hex encoded.
std::string file_checksum(const std::string& path);

}  // namespace attrdisc
