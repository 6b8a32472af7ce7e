#include "attrdisc/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "attrdisc/errors.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace attrdisc {

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write: " + path);
  return out;
}

double parse_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw io_error("malformed number: '" + s + "'");
  }
}

}  // namespace

RawCorpus read_corpus(const std::string& path) {
  RawCorpus corpus;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const std::string stem = f.stem().string();
      const auto sep = stem.find("__");
      if (sep == std::string::npos)
        throw io_error("corpus file name must be <class_id>__<index>.txt: " + f.string());
      std::ifstream in(f);
      std::stringstream ss;
      ss << in.rdbuf();
      corpus.class_ids.push_back(stem.substr(0, sep));
      corpus.texts.push_back(ss.str());
    }
  } else {
    auto in = open_in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto obj = nlohmann::json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.contains("class_id") || !obj.contains("text"))
        throw io_error("bad JSON-lines corpus record: " + line.substr(0, 80));
      corpus.class_ids.push_back(obj["class_id"].get<std::string>());
      corpus.texts.push_back(obj["text"].get<std::string>());
    }
  }
  if (corpus.class_ids.empty()) throw io_error("empty corpus: " + path);
  return corpus;
}

void write_dictionary(const Dictionary& dict, const std::string& path) {
  auto out = open_out(path);
  out << "word,df\n";
  for (std::size_t i = 0; i < dict.size(); ++i)
    out << dict.words[i] << "," << dict.df[i] << "\n";
}

Dictionary read_dictionary(const std::string& path) {
  auto in = open_in(path);
  Dictionary dict;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw io_error("bad dictionary row: " + line);
    dict.words.push_back(fields[0]);
    dict.df.push_back(static_cast<std::size_t>(std::stoul(fields[1])));
  }
  return dict;
}

void write_embedding(const ClassEmbedding& emb, const std::string& path) {
  auto out = open_out(path);
  out << "class_id";
  for (const auto& w : emb.words) out << "," << w;
  out << "\n";
  for (std::size_t r = 0; r < emb.n_classes(); ++r) {
    out << emb.class_ids[r];
    for (double v : emb.matrix[r]) out << "," << format_g9(v);
    out << "\n";
  }
}

ClassEmbedding read_embedding(const std::string& path) {
  auto in = open_in(path);
  ClassEmbedding emb;
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty embedding file: " + path);
  auto header = split_csv_line(line);
  emb.words.assign(header.begin() + 1, header.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != emb.words.size() + 1)
      throw io_error("embedding row width mismatch: " + path);
    emb.class_ids.push_back(fields[0]);
    std::vector<double> row(emb.words.size());
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = parse_double(fields[i + 1]);
    emb.matrix.push_back(std::move(row));
  }
  return emb;
}

void write_topic_model(const TopicModel& model, const std::string& dir,
                       const std::string& dict_checksum) {
  fs::create_directories(dir);
  {
    auto out = open_out(dir + "/phi.csv");
    for (const auto& row : model.phi) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << format_g9(row[i]);
      out << "\n";
    }
  }
  {
    auto out = open_out(dir + "/theta.csv");
    for (std::size_t d = 0; d < model.theta.size(); ++d) {
      out << model.doc_lengths[d];
      for (double v : model.theta[d]) out << "," << format_g9(v);
      out << "\n";
    }
  }
  {
    auto out = open_out(dir + "/meta.txt");
    out << "n_topics " << model.n_topics << "\n";
    out << "alpha " << format_g9(model.alpha) << "\n";
    out << "beta " << format_g9(model.beta) << "\n";
    out << "seed " << model.seed << "\n";
    out << "dictionary_checksum " << dict_checksum << "\n";
    out << "topic_prior";
    for (double v : model.topic_prior) out << " " << format_g9(v);
    out << "\n";
  }
}

TopicModel read_topic_model(const std::string& dir) {
  TopicModel model;
  {
    auto in = open_in(dir + "/phi.csv");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      std::vector<double> row(fields.size());
      for (std::size_t i = 0; i < fields.size(); ++i) row[i] = parse_double(fields[i]);
      model.phi.push_back(std::move(row));
    }
  }
  {
    auto in = open_in(dir + "/theta.csv");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      model.doc_lengths.push_back(static_cast<std::size_t>(std::stoul(fields[0])));
      std::vector<double> row(fields.size() - 1);
      for (std::size_t i = 1; i < fields.size(); ++i) row[i - 1] = parse_double(fields[i]);
      model.theta.push_back(std::move(row));
    }
  }
  {
    auto in = open_in(dir + "/meta.txt");
    std::string key;
    while (in >> key) {
      if (key == "n_topics") in >> model.n_topics;
      else if (key == "alpha") in >> model.alpha;
      else if (key == "beta") in >> model.beta;
      else if (key == "seed") in >> model.seed;
      else if (key == "topic_prior") {
        model.topic_prior.resize(model.n_topics);
        for (auto& v : model.topic_prior) in >> v;
      } else {
        std::string skip;
        in >> skip;
      }
    }
  }
  if (model.phi.size() != model.n_topics)
    throw io_error("topic model inconsistent with meta.txt: " + dir);
  return model;
}

void write_ranking(const TopicRanking& ranking, const std::string& path) {
  auto out = open_out(path);
  out << "topic_id,significance,is_insignificant\n";
  std::vector<bool> insig(ranking.significance.size(), false);
  for (std::size_t k : ranking.insignificant) insig[k] = true;
  for (std::size_t k = 0; k < ranking.significance.size(); ++k)
    out << k << "," << format_g9(ranking.significance[k]) << "," << (insig[k] ? 1 : 0) << "\n";
}

TopicRanking read_ranking(const std::string& path) {
  auto in = open_in(path);
  TopicRanking ranking;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) throw io_error("bad ranking row: " + line);
    ranking.significance.push_back(parse_double(fields[1]));
    if (fields[2] == "1") ranking.insignificant.push_back(std::stoul(fields[0]));
  }
  return ranking;
}

void write_selection(const SelectionState& state, const SelectionProblem& problem,
                     const std::vector<std::string>& words, const std::string& path) {
  auto out = open_out(path);
  out << "rank,word,marginal_gain,cost,cumulative_cost,objective_value\n";
  double cumulative = 0.0;
  SelectionState replay = initial_state(problem, state.topic_sums.size());
  for (std::size_t r = 0; r < state.selected.size(); ++r) {
    const std::size_t w = state.selected[r];
    accept_word(problem, replay, w, state.gain_at_selection[r]);
    cumulative += problem.cost[w];
    out << (r + 1) << "," << words[w] << "," << format_g9(state.gain_at_selection[r]) << ","
        << format_g9(problem.cost[w]) << "," << format_g9(cumulative) << ","
        << format_g9(replay.objective) << "\n";
  }
}

std::vector<std::string> read_selection_words(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::string> words;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 2) throw io_error("bad selection row: " + line);
    words.push_back(fields[1]);
  }
  return words;
}

void write_associations(const AssociationMatrix& assoc, const std::string& path) {
  auto out = open_out(path);
  out << "class_id";
  for (const auto& w : assoc.attribute_words) out << "," << w;
  out << "\n";
  for (std::size_t c = 0; c < assoc.n_classes(); ++c) {
    out << assoc.class_ids[c];
    for (double v : assoc.values[c]) {
      if (assoc.mode == AssocMode::SignedBinary)
        out << "," << static_cast<int>(v);
      else
        out << "," << format_g9(v);
    }
    out << "\n";
  }
}

AssociationMatrix read_associations(const std::string& path) {
  auto in = open_in(path);
  AssociationMatrix assoc;
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty association file: " + path);
  auto header = split_csv_line(line);
  assoc.attribute_words.assign(header.begin() + 1, header.end());
  bool all_signed = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != assoc.attribute_words.size() + 1)
      throw io_error("association row width mismatch: " + path);
    assoc.class_ids.push_back(fields[0]);
    std::vector<double> row(assoc.attribute_words.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      row[i] = parse_double(fields[i + 1]);
      if (row[i] != 1.0 && row[i] != -1.0) all_signed = false;
    }
    assoc.values.push_back(std::move(row));
  }
  assoc.mode = all_signed ? AssocMode::SignedBinary : AssocMode::Continuous;
  return assoc;
}

FeatureTable read_features(const std::string& path) {
  auto in = open_in(path);
  FeatureTable table;
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty feature file: " + path);
  const std::size_t width = split_csv_line(line).size() - 2;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != width + 2) throw io_error("feature row width mismatch: " + path);
    table.sample_ids.push_back(fields[0]);
    table.class_ids.push_back(fields[1]);
    std::vector<double> row(width);
    for (std::size_t i = 0; i < width; ++i) row[i] = parse_double(fields[i + 2]);
    rows.push_back(std::move(row));
  }
  table.features = Matrix(rows.size(), width);
  for (std::size_t r = 0; r < rows.size(); ++r)
    std::copy(rows[r].begin(), rows[r].end(), &table.features.data[r * width]);
  return table;
}

void write_features(const FeatureTable& table, const std::string& path) {
  auto out = open_out(path);
  out << "sample_id,class_id";
  for (std::size_t i = 0; i < table.features.cols; ++i) out << ",f" << (i + 1);
  out << "\n";
  for (std::size_t r = 0; r < table.features.rows; ++r) {
    out << table.sample_ids[r] << "," << table.class_ids[r];
    for (std::size_t i = 0; i < table.features.cols; ++i)
      out << "," << format_g9(table.features.at(r, i));
    out << "\n";
  }
}

RelevanceMatrix read_relevance(const std::string& path) {
  auto in = open_in(path);
  RelevanceMatrix rel;
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty relevance file: " + path);
  auto header = split_csv_line(line);
  rel.class_ids.assign(header.begin() + 1, header.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != rel.class_ids.size() + 1)
      throw io_error("relevance row width mismatch: " + path);
    std::vector<double> row(rel.class_ids.size());
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = parse_double(fields[i + 1]);
    rel.grades.push_back(std::move(row));
  }
  if (rel.grades.size() != rel.class_ids.size())
    throw dimension_error("relevance matrix must be square: " + path);
  return rel;
}

std::vector<SaliencyAnnotation> read_annotations(const std::string& path) {
  auto in = open_in(path);
  std::vector<SaliencyAnnotation> annotations;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) throw io_error("bad annotation row: " + line);
    annotations.push_back(
        {fields[0], fields[1], fields[2], saliency_label_from_name(fields[3])});
  }
  return annotations;
}

void write_predictions(const std::vector<std::string>& sample_ids,
                       const std::vector<std::vector<RankedClass>>& rankings,
                       const std::vector<std::string>& class_ids, const std::string& path) {
  auto out = open_out(path);
  out << "sample_id,rank,class_id,score\n";
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    for (std::size_t r = 0; r < rankings[i].size(); ++r) {
      out << sample_ids[i] << "," << (r + 1) << "," << class_ids[rankings[i][r].class_index]
          << "," << format_g9(rankings[i][r].score) << "\n";
    }
  }
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot checksum: " + path);
  std::uint64_t hash = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
  }
  char hex[20];
  std::snprintf(hex, sizeof(hex), "%016" PRIx64, hash);
  return hex;
}

}  // namespace attrdisc
