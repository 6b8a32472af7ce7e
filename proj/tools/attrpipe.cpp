// attrpipe: pipeline driver for attribute discovery, association learning and
// zero-shot evaluation. Every step is seeded, re-runnable and writes a
// provenance sidecar next to its artifact.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "attrdisc/assoc.hpp"
#include "attrdisc/config.hpp"
#include "attrdisc/corpus.hpp"
#include "attrdisc/errors.hpp"
#include "attrdisc/io.hpp"
#include "attrdisc/lda.hpp"
#include "attrdisc/metrics.hpp"
#include "attrdisc/neural.hpp"
#include "attrdisc/selection.hpp"
#include "attrdisc/text.hpp"
#include "attrdisc/zeroshot.hpp"

namespace fs = std::filesystem;
using namespace attrdisc;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Global {
  std::string config_path;
  std::string out_dir = ".";
  std::string seed;  // overrides run/topics/neural seeds when set
  std::vector<std::string> overrides;
  PipelineConfig config;

  void finalize() {
    if (!config_path.empty()) config = PipelineConfig::from_file(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw config_error("--set expects key=value: " + kv);
      config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!seed.empty()) {
      config.set("run.seed", seed);
      config.set("topics.seed", seed);
      config.set("neural.seed", seed);
    }
    config.set("run.out_dir", out_dir);
  }

  std::string out(const std::string& name) const {
    return (fs::path(out_dir) / name).string();
  }
};

void write_provenance(const std::string& artifact, const std::string& step,
                      const PipelineConfig& config,
                      const std::vector<std::string>& inputs) {
  std::ofstream out(artifact + ".prov");
  if (!out) throw io_error("cannot write provenance sidecar for " + artifact);
  out << "artifact " << fs::path(artifact).filename().string() << "\n";
  out << "step " << step << "\n";
  out << "version " << kVersion << "\n";
  for (const auto& [key, value] : config.values()) out << "config " << key << " = " << value << "\n";
  for (const auto& in_path : inputs)
    out << "input " << in_path << " " << file_checksum(in_path) << "\n";
}

// Fail fast when an upstream artifact changed after `path` was produced.
void verify_provenance(const std::string& path) {
  std::ifstream in(path + ".prov");
  if (!in) return;  // externally supplied input, nothing to verify
  std::string key;
  while (in >> key) {
    if (key == "input") {
      std::string in_path, checksum;
      in >> in_path >> checksum;
      if (fs::exists(in_path) && file_checksum(in_path) != checksum)
        throw io_error("checksum mismatch: " + in_path + " changed after " + path +
                       " was produced; re-run the producing step");
    } else {
      std::string skip;
      std::getline(in, skip);
    }
  }
}

// ---------- documents.jsonl ----------

void write_documents(const std::vector<Document>& docs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write: " + path);
  for (const auto& d : docs) {
    nlohmann::json obj;
    obj["class_id"] = d.class_id;
    std::string joined;
    for (const auto& t : d.tokens) {
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    obj["tokens"] = joined;
    out << obj.dump() << "\n";
  }
}

std::vector<Document> read_documents(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open: " + path);
  std::vector<Document> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded()) throw io_error("bad documents line: " + line.substr(0, 80));
    Document d;
    d.class_id = obj["class_id"].get<std::string>();
    std::istringstream ss(obj["tokens"].get<std::string>());
    std::string tok;
    while (ss >> tok) d.tokens.push_back(tok);
    docs.push_back(std::move(d));
  }
  return docs;
}

// ---------- shared zsl machinery ----------

struct ZslInputs {
  std::string checkpoint;
  std::string features;      // test samples
  std::string ref_features;  // reference split for the normalizer
  std::string assoc;         // seen-class associations
  std::string articles;      // JSON-lines articles for unseen classes
  std::string dictionary;
  std::string selection;
  std::string mode = "binary";
  std::string normalizer = "reference";
  std::string candidates = "unseen";
  std::size_t top_k = 5;
  std::size_t length_limit = 500;
  std::size_t n_train_classes = 0;  // idf reference; defaults to dictionary df max
};

AssociationMatrix build_unseen_assoc(const ZslInputs& in, std::size_t length_limit) {
  const Dictionary dict = read_dictionary(in.dictionary);
  const auto vocabulary = read_selection_words(in.selection);
  std::size_t n_train = in.n_train_classes;
  if (n_train == 0)
    n_train = *std::max_element(dict.df.begin(), dict.df.end());
  const RawCorpus articles = read_corpus(in.articles);

  AssociationMatrix assoc;
  assoc.attribute_words = vocabulary;
  assoc.mode = in.mode == "continuous" ? AssocMode::Continuous : AssocMode::SignedBinary;
  std::map<std::string, std::vector<double>> rows;
  for (std::size_t i = 0; i < articles.class_ids.size(); ++i) {
    auto row = unseen_associations(articles.texts[i], dict, n_train, vocabulary,
                                   length_limit, assoc.mode);
    auto [it, inserted] = rows.try_emplace(articles.class_ids[i], std::move(row));
    if (!inserted) {
      // multiple articles for a class: average (continuous) / or-combine (binary)
      for (std::size_t j = 0; j < vocabulary.size(); ++j) {
        if (assoc.mode == AssocMode::SignedBinary)
          it->second[j] = std::max(it->second[j], row[j]);
        else
          it->second[j] = 0.5 * (it->second[j] + row[j]);
      }
    }
  }
  for (auto& [class_id, row] : rows) {
    assoc.class_ids.push_back(class_id);
    assoc.values.push_back(std::move(row));
  }
  return assoc;
}

AssociationMatrix concat_assoc(const AssociationMatrix& a, const AssociationMatrix& b) {
  if (a.attribute_words != b.attribute_words)
    throw dimension_error("candidate pools have different attribute vocabularies");
  AssociationMatrix out = a;
  out.class_ids.insert(out.class_ids.end(), b.class_ids.begin(), b.class_ids.end());
  out.values.insert(out.values.end(), b.values.begin(), b.values.end());
  if (a.mode != b.mode) out.mode = AssocMode::Continuous;
  return out;
}

struct ZslResult {
  std::vector<std::string> sample_ids;
  std::vector<std::vector<RankedClass>> rankings;
  AssociationMatrix pool;
  double top_k_accuracy = -1.0;  // -1 when true labels are not in the pool
};

ZslResult run_zsl(const ZslInputs& in, std::size_t length_limit) {
  verify_provenance(in.checkpoint);
  verify_provenance(in.features);
  const DenseNetwork net = load_network(in.checkpoint);
  const FeatureTable test = read_features(in.features);

  AssociationMatrix pool;
  if (in.candidates == "seen") {
    pool = read_associations(in.assoc);
  } else if (in.candidates == "unseen") {
    pool = build_unseen_assoc(in, length_limit);
  } else if (in.candidates == "all") {
    pool = concat_assoc(read_associations(in.assoc), build_unseen_assoc(in, length_limit));
  } else {
    throw config_error("candidates must be seen|unseen|all, got " + in.candidates);
  }

  const Matrix test_scores = predict_attributes(net, test.features);
  ScoreNormalizer norm;
  if (in.normalizer == "batch") {
    norm = fit_normalizer(test_scores, "batch");
  } else if (in.normalizer == "reference") {
    const FeatureTable ref = read_features(in.ref_features);
    norm = fit_normalizer(predict_attributes(net, ref.features), "reference");
  } else {
    throw config_error("normalizer must be reference|batch, got " + in.normalizer);
  }

  ZslResult result;
  result.sample_ids = test.sample_ids;
  result.rankings = rank_classes(test_scores, norm, pool, in.top_k);
  result.pool = std::move(pool);

  // top-k accuracy when every test class is in the candidate pool
  std::map<std::string, std::size_t> pool_index;
  for (std::size_t c = 0; c < result.pool.n_classes(); ++c)
    pool_index[result.pool.class_ids[c]] = c;
  bool all_known = true;
  std::vector<std::size_t> truth(test.class_ids.size());
  for (std::size_t i = 0; i < test.class_ids.size(); ++i) {
    auto it = pool_index.find(test.class_ids[i]);
    if (it == pool_index.end()) {
      all_known = false;
      break;
    }
    truth[i] = it->second;
  }
  if (all_known)
    result.top_k_accuracy = accuracy_topk(result.rankings, truth, in.top_k);
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attribute discovery / association learning pipeline"};
  app.require_subcommand(1);

  Global g;
  app.add_option("--config", g.config_path, "pipeline config file");
  app.add_option("--out-dir", g.out_dir, "artifact output directory");
  app.add_option("--seed", g.seed, "override all step seeds");
  app.add_option("--set", g.overrides, "override a config key (key=value)")->take_all();

  // ---- ingest ----
  auto* ingest = app.add_subcommand("ingest", "preprocess a corpus and build the dictionary");
  std::string ingest_corpus;
  ingest->add_option("--corpus", ingest_corpus, "corpus directory or JSON-lines file");

  // ---- embed ----
  auto* embed_cmd = app.add_subcommand("embed", "tf-idf class embedding from documents");

  // ---- lda ----
  auto* lda_cmd = app.add_subcommand("lda", "fit the topic model by collapsed Gibbs sampling");

  // ---- rank-topics ----
  auto* rank_cmd = app.add_subcommand("rank-topics", "rank topics by significance");
  double rank_rho = -1.0;
  rank_cmd->add_option("--rho", rank_rho, "fraction of topics flagged insignificant");

  // ---- select ----
  auto* select_cmd = app.add_subcommand("select", "lazy greedy vocabulary selection");
  double sel_lambda = -1.0, sel_gamma = -1.0, sel_budget = -1.0, sel_rho = -1.0;
  select_cmd->add_option("--lambda", sel_lambda, "diversity weight");
  select_cmd->add_option("--gamma", sel_gamma, "saliency cost weight");
  select_cmd->add_option("--budget", sel_budget, "knapsack budget");
  select_cmd->add_option("--rho", sel_rho, "insignificant-topic fraction");

  // ---- init-assoc ----
  auto* init_assoc_cmd =
      app.add_subcommand("init-assoc", "initial signed class-attribute associations");

  // ---- train-joint ----
  auto* train_joint_cmd =
      app.add_subcommand("train-joint", "joint class+attribute model with linguistic prior");

  // ---- threshold ----
  auto* threshold_cmd = app.add_subcommand("threshold", "threshold the association layer to M*");
  double th_tau = std::numeric_limits<double>::quiet_NaN();
  threshold_cmd->add_option("--tau", th_tau, "threshold value");

  // ---- train-attr ----
  auto* train_attr_cmd = app.add_subcommand("train-attr", "train the attribute predictor");

  // ---- predict ----
  auto* predict_cmd = app.add_subcommand("predict", "per-sample attribute scores");
  std::string predict_out = "attribute_scores.csv";
  predict_cmd->add_option("--output", predict_out, "output CSV name");

  // ---- zsl / sweep-length / eval-zsl ----
  ZslInputs zsl_in;
  auto add_zsl_opts = [&](CLI::App* cmd) {
    cmd->add_option("--checkpoint", zsl_in.checkpoint, "attribute model checkpoint");
    cmd->add_option("--features", zsl_in.features, "test feature CSV");
    cmd->add_option("--ref-features", zsl_in.ref_features, "normalizer reference feature CSV");
    cmd->add_option("--assoc", zsl_in.assoc, "seen-class association CSV");
    cmd->add_option("--articles", zsl_in.articles, "unseen-class articles (JSON-lines or dir)");
    cmd->add_option("--dictionary", zsl_in.dictionary, "training dictionary CSV");
    cmd->add_option("--selection", zsl_in.selection, "selected vocabulary CSV");
    cmd->add_option("--mode", zsl_in.mode, "binary|continuous");
    cmd->add_option("--normalizer", zsl_in.normalizer, "reference|batch");
    cmd->add_option("--candidates", zsl_in.candidates, "seen|unseen|all");
    cmd->add_option("--top-k", zsl_in.top_k, "ranking depth");
    cmd->add_option("--length-limit", zsl_in.length_limit, "article truncation length");
  };
  auto* zsl_cmd = app.add_subcommand("zsl", "zero-shot classification via DAP scoring");
  add_zsl_opts(zsl_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep-length", "zsl accuracy over an article-length grid");
  add_zsl_opts(sweep_cmd);
  std::string sweep_grid;
  sweep_cmd->add_option("--grid", sweep_grid, "comma-separated article lengths");

  auto* eval_zsl_cmd = app.add_subcommand("eval-zsl", "top-k accuracy of a prediction file");
  std::string ez_predictions, ez_features;
  std::size_t ez_k = 5;
  eval_zsl_cmd->add_option("--predictions", ez_predictions, "predictions CSV");
  eval_zsl_cmd->add_option("--features", ez_features, "feature CSV carrying true class ids");
  eval_zsl_cmd->add_option("--top-k", ez_k, "k");

  // ---- eval-ndcg ----
  auto* ndcg_cmd = app.add_subcommand("eval-ndcg", "embedding ranking quality (nDCG)");
  std::string ndcg_embedding, ndcg_relevance;
  std::size_t ndcg_k = 0;
  ndcg_cmd->add_option("--embedding", ndcg_embedding, "class embedding or association CSV");
  ndcg_cmd->add_option("--relevance", ndcg_relevance, "relevance grade CSV");
  ndcg_cmd->add_option("--k", ndcg_k, "ranking depth");

  // ---- eval-saliency ----
  auto* sal_cmd = app.add_subcommand("eval-saliency", "saliency of the selected vocabulary");
  std::string sal_annotations;
  sal_cmd->add_option("--annotations", sal_annotations, "annotation CSV");

  try {
    app.parse(argc, argv);
    g.finalize();
    const auto& cfg = g.config;

    if (*ingest) {
      const std::string corpus_path =
          !ingest_corpus.empty() ? ingest_corpus : cfg.get_string("corpus.path");
      const RawCorpus raw = read_corpus(corpus_path);
      const auto stopwords = cfg.has("corpus.stopwords")
                                 ? load_stopwords(cfg.get_string("corpus.stopwords"))
                                 : default_stopwords();
      const std::size_t limit = static_cast<std::size_t>(cfg.get_int("corpus.limit"));
      std::vector<Document> docs;
      for (std::size_t i = 0; i < raw.class_ids.size(); ++i)
        docs.push_back(preprocess(raw.class_ids[i], raw.texts[i], limit, stopwords));
      const Dictionary dict =
          build_dictionary(docs, static_cast<std::size_t>(cfg.get_int("corpus.min_df")),
                           cfg.get_double("corpus.max_df_ratio"));
      const std::string docs_path = g.out("documents.jsonl");
      const std::string dict_path = g.out("dictionary.csv");
      write_documents(docs, docs_path);
      write_dictionary(dict, dict_path);
      std::vector<std::string> inputs;
      if (!fs::is_directory(corpus_path)) inputs.push_back(corpus_path);
      write_provenance(docs_path, "ingest", cfg, inputs);
      write_provenance(dict_path, "ingest", cfg, inputs);
      std::cout << "ingest: " << docs.size() << " documents, dictionary size " << dict.size()
                << "\n";
    } else if (*embed_cmd) {
      const std::string docs_path = g.out("documents.jsonl");
      const std::string dict_path = g.out("dictionary.csv");
      verify_provenance(docs_path);
      const auto docs = read_documents(docs_path);
      const auto dict = read_dictionary(dict_path);
      const ClassEmbedding emb = embed(docs, dict);
      const std::string emb_path = g.out("embedding.csv");
      write_embedding(emb, emb_path);
      write_provenance(emb_path, "embed", cfg, {docs_path, dict_path});
      std::cout << "embed: " << emb.n_classes() << " classes x " << emb.n_words() << " words\n";
    } else if (*lda_cmd) {
      const std::string docs_path = g.out("documents.jsonl");
      const std::string dict_path = g.out("dictionary.csv");
      verify_provenance(docs_path);
      const auto docs = read_documents(docs_path);
      const auto dict = read_dictionary(dict_path);
      const TopicModel model = fit_lda(
          docs, dict, static_cast<std::size_t>(cfg.get_int("topics.n_topics")),
          cfg.get_double("topics.alpha"), cfg.get_double("topics.beta"),
          static_cast<std::size_t>(cfg.get_int("topics.iters")), cfg.get_seed("topics.seed"));
      const std::string model_dir = g.out("topic_model");
      write_topic_model(model, model_dir, file_checksum(dict_path));
      write_provenance(model_dir + "/meta.txt", "lda", cfg, {docs_path, dict_path});
      std::cout << "lda: " << model.n_topics << " topics over " << model.n_docs() << " documents\n";
    } else if (*rank_cmd) {
      const std::string model_dir = g.out("topic_model");
      verify_provenance(model_dir + "/meta.txt");
      const TopicModel model = read_topic_model(model_dir);
      const double rho = rank_rho > 0 ? rank_rho : cfg.get_double("topics.rho");
      const TopicRanking ranking = rank_topics(model, rho);
      const std::string path = g.out("topic_ranking.csv");
      write_ranking(ranking, path);
      write_provenance(path, "rank-topics", cfg, {model_dir + "/phi.csv", model_dir + "/theta.csv"});
      std::cout << "rank-topics: " << ranking.insignificant.size() << " of "
                << model.n_topics << " topics flagged insignificant\n";
    } else if (*select_cmd) {
      const std::string emb_path = g.out("embedding.csv");
      const std::string model_dir = g.out("topic_model");
      const std::string rank_path = g.out("topic_ranking.csv");
      verify_provenance(emb_path);
      verify_provenance(rank_path);
      const ClassEmbedding emb = read_embedding(emb_path);
      const TopicModel model = read_topic_model(model_dir);
      const TopicRanking ranking = read_ranking(rank_path);
      const double lambda = sel_lambda >= 0 ? sel_lambda : cfg.get_double("selection.lambda");
      const double gamma = sel_gamma >= 0 ? sel_gamma : cfg.get_double("selection.gamma");
      const double budget = sel_budget >= 0 ? sel_budget : cfg.get_double("selection.budget");
      const SelectionProblem problem = make_problem(emb, model, ranking, lambda, gamma, budget);
      SelectionState by_gain = run_greedy(problem, model.n_topics, false);
      SelectionState by_ratio = run_greedy(problem, model.n_topics, true);
      const SelectionState& best = by_ratio.objective > by_gain.objective ? by_ratio : by_gain;
      if (best.selected.empty())
        std::cerr << "warning: budget below the cheapest word cost, empty selection\n";
      const std::string path = g.out("selection.csv");
      write_selection(best, problem, emb.words, path);
      write_provenance(path, "select", cfg,
                       {emb_path, model_dir + "/phi.csv", rank_path});
      std::cout << "select: " << best.selected.size() << " words, F = "
                << format_g9(best.objective) << ", cost " << format_g9(best.spent_cost) << "\n";
    } else if (*init_assoc_cmd) {
      const std::string emb_path = g.out("embedding.csv");
      const std::string sel_path = g.out("selection.csv");
      verify_provenance(sel_path);
      const ClassEmbedding emb = read_embedding(emb_path);
      const auto vocabulary = read_selection_words(sel_path);
      const AssociationMatrix assoc = initial_associations(emb, vocabulary);
      for (std::size_t c : assoc.degenerate_classes())
        std::cerr << "warning: class " << assoc.class_ids[c] << " has no positive attribute\n";
      const std::string path = g.out("associations.csv");
      write_associations(assoc, path);
      write_provenance(path, "init-assoc", cfg, {emb_path, sel_path});
      std::cout << "init-assoc: " << assoc.n_classes() << " classes x " << assoc.n_attributes()
                << " attributes\n";
    } else if (*train_joint_cmd) {
      const std::string feat_path = cfg.get_string("neural.features");
      const std::string assoc_path = g.out("associations.csv");
      verify_provenance(assoc_path);
      const FeatureTable table = read_features(feat_path);
      const AssociationMatrix prior = read_associations(assoc_path);
      std::map<std::string, std::size_t> class_index;
      for (std::size_t c = 0; c < prior.n_classes(); ++c) class_index[prior.class_ids[c]] = c;
      std::vector<std::size_t> labels(table.class_ids.size());
      for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = class_index.find(table.class_ids[i]);
        if (it == class_index.end())
          throw dimension_error("feature class not in association matrix: " + table.class_ids[i]);
        labels[i] = it->second;
      }
      TrainConfig tc;
      tc.learning_rate = cfg.get_double("neural.learning_rate");
      tc.weight_decay = cfg.get_double("neural.weight_decay");
      tc.batch_size = static_cast<std::size_t>(cfg.get_int("neural.batch_size"));
      tc.epochs = static_cast<std::size_t>(cfg.get_int("neural.epochs"));
      tc.seed = cfg.get_seed("neural.seed");
      const std::size_t hidden = static_cast<std::size_t>(cfg.get_int("neural.hidden"));
      JointModel model = make_joint_model(
          {table.features.cols, hidden, prior.n_attributes()}, prior, tc.seed);
      bool calibrate = cfg.get_string("neural.beta1") == "auto" ||
                       cfg.get_string("neural.beta2") == "auto";
      if (!calibrate) {
        model.beta1 = cfg.get_double("neural.beta1");
        model.beta2 = cfg.get_double("neural.beta2");
      }
      const TrainLog log = train_joint(model, table.features, labels, tc, calibrate);
      const std::string joint_dir = g.out("joint_model");
      fs::create_directories(joint_dir);
      save_network(model.backbone, joint_dir + "/backbone.net");
      {
        AssociationMatrix weights;
        weights.class_ids = model.class_ids;
        weights.attribute_words = model.attribute_words;
        weights.mode = AssocMode::Continuous;
        weights.values.assign(model.assoc.rows, std::vector<double>(model.assoc.cols));
        for (std::size_t c = 0; c < model.assoc.rows; ++c)
          for (std::size_t a = 0; a < model.assoc.cols; ++a)
            weights.values[c][a] = model.assoc.at(c, a);
        write_associations(weights, joint_dir + "/assoc_weights.csv");
      }
      {
        std::ofstream meta(joint_dir + "/meta.txt");
        meta << "beta1 " << format_g9(model.beta1) << "\n";
        meta << "beta2 " << format_g9(model.beta2) << "\n";
        meta << "seed " << tc.seed << "\n";
        meta << "epoch_loss";
        for (double l : log.epoch_loss) meta << " " << format_g9(l);
        meta << "\n";
      }
      write_provenance(joint_dir + "/meta.txt", "train-joint", cfg, {feat_path, assoc_path});
      std::cout << "train-joint: final loss " << format_g9(log.epoch_loss.back())
                << " (beta1 " << format_g9(model.beta1) << ", beta2 " << format_g9(model.beta2)
                << ")\n";
    } else if (*threshold_cmd) {
      const std::string joint_dir = g.out("joint_model");
      verify_provenance(joint_dir + "/meta.txt");
      const AssociationMatrix weights = read_associations(joint_dir + "/assoc_weights.csv");
      const double tau = std::isnan(th_tau) ? cfg.get_double("neural.tau") : th_tau;
      AssociationMatrix opt = weights;
      opt.mode = AssocMode::SignedBinary;
      for (auto& row : opt.values)
        for (auto& v : row) v = v > tau ? 1.0 : -1.0;
      const std::string path = g.out("associations_opt.csv");
      write_associations(opt, path);
      write_provenance(path, "threshold", cfg, {joint_dir + "/assoc_weights.csv"});
      std::cout << "threshold: tau = " << format_g9(tau) << "\n";
    } else if (*train_attr_cmd) {
      const std::string feat_path = cfg.get_string("neural.features");
      const std::string assoc_path = g.out("associations_opt.csv");
      verify_provenance(assoc_path);
      const FeatureTable table = read_features(feat_path);
      const AssociationMatrix assoc = read_associations(assoc_path);
      std::map<std::string, std::size_t> class_index;
      for (std::size_t c = 0; c < assoc.n_classes(); ++c) class_index[assoc.class_ids[c]] = c;
      Matrix labels(table.features.rows, assoc.n_attributes());
      for (std::size_t i = 0; i < table.features.rows; ++i) {
        auto it = class_index.find(table.class_ids[i]);
        if (it == class_index.end())
          throw dimension_error("feature class not in association matrix: " + table.class_ids[i]);
        for (std::size_t a = 0; a < assoc.n_attributes(); ++a)
          labels.at(i, a) = assoc.values[it->second][a] > 0.0 ? 1.0 : 0.0;
      }
      TrainConfig tc;
      tc.learning_rate = cfg.get_double("neural.learning_rate");
      tc.weight_decay = cfg.get_double("neural.weight_decay");
      tc.batch_size = static_cast<std::size_t>(cfg.get_int("neural.batch_size"));
      tc.epochs = static_cast<std::size_t>(cfg.get_int("neural.epochs"));
      tc.seed = cfg.get_seed("neural.seed");
      const std::size_t hidden = static_cast<std::size_t>(cfg.get_int("neural.hidden"));
      const std::size_t extra = static_cast<std::size_t>(cfg.get_int("neural.extra_hidden"));
      DenseNetwork net;
      const std::string joint_dir = g.out("joint_model");
      if (cfg.get_bool("neural.warm_start") && fs::exists(joint_dir + "/backbone.net")) {
        JointModel joint;
        joint.backbone = load_network(joint_dir + "/backbone.net");
        net = make_attribute_network(joint, extra, tc.seed, true);
      } else {
        net = make_network({table.features.cols, hidden, extra, assoc.n_attributes()},
                           {Activation::Rectifier, Activation::Rectifier, Activation::Sigmoid},
                           tc.seed);
      }
      const auto losses = train_attribute_model(net, table.features, labels, tc);
      const std::string path = g.out("attribute_model.net");
      save_network(net, path);
      write_provenance(path, "train-attr", cfg, {feat_path, assoc_path});
      std::cout << "train-attr: final loss " << format_g9(losses.back()) << "\n";
    } else if (*predict_cmd) {
      const std::string feat_path = cfg.get_string("neural.features");
      const std::string ckpt = g.out("attribute_model.net");
      verify_provenance(ckpt);
      const FeatureTable table = read_features(feat_path);
      const DenseNetwork net = load_network(ckpt);
      const Matrix scores = predict_attributes(net, table.features);
      const std::string path = g.out(predict_out);
      std::ofstream out(path);
      if (!out) throw io_error("cannot write: " + path);
      out << "sample_id,class_id";
      for (std::size_t a = 0; a < scores.cols; ++a) out << ",a" << (a + 1);
      out << "\n";
      for (std::size_t i = 0; i < scores.rows; ++i) {
        out << table.sample_ids[i] << "," << table.class_ids[i];
        for (std::size_t a = 0; a < scores.cols; ++a) out << "," << format_g9(scores.at(i, a));
        out << "\n";
      }
      out.close();
      write_provenance(path, "predict", cfg, {feat_path, ckpt});
      std::cout << "predict: " << scores.rows << " samples x " << scores.cols << " attributes\n";
    } else if (*zsl_cmd) {
      if (zsl_in.checkpoint.empty()) zsl_in.checkpoint = g.out("attribute_model.net");
      const ZslResult result = run_zsl(zsl_in, zsl_in.length_limit);
      const std::string path = g.out("predictions.csv");
      write_predictions(result.sample_ids, result.rankings, result.pool.class_ids, path);
      std::vector<std::string> inputs = {zsl_in.checkpoint, zsl_in.features};
      write_provenance(path, "zsl", cfg, inputs);
      if (result.top_k_accuracy >= 0)
        std::cout << "zsl: top-" << zsl_in.top_k << " accuracy "
                  << format_g9(result.top_k_accuracy) << "\n";
      else
        std::cout << "zsl: predictions written (true labels not in candidate pool)\n";
    } else if (*sweep_cmd) {
      if (zsl_in.checkpoint.empty()) zsl_in.checkpoint = g.out("attribute_model.net");
      const std::string grid_spec =
          !sweep_grid.empty() ? sweep_grid : cfg.get_string("zeroshot.grid");
      std::vector<std::size_t> grid;
      std::stringstream ss(grid_spec);
      std::string item;
      while (std::getline(ss, item, ',')) grid.push_back(std::stoul(item));
      const std::string path = g.out("length_sweep.csv");
      std::ofstream out(path);
      if (!out) throw io_error("cannot write: " + path);
      out << "length,top_k,accuracy\n";
      for (std::size_t length : grid) {
        const ZslResult result = run_zsl(zsl_in, length);
        if (result.top_k_accuracy < 0)
          throw config_error("sweep-length requires test classes inside the candidate pool");
        out << length << "," << zsl_in.top_k << "," << format_g9(result.top_k_accuracy) << "\n";
      }
      out.close();
      write_provenance(path, "sweep-length", cfg, {zsl_in.checkpoint, zsl_in.features});
      std::cout << "sweep-length: " << grid.size() << " lengths evaluated\n";
    } else if (*eval_zsl_cmd) {
      const std::string pred_path =
          !ez_predictions.empty() ? ez_predictions : g.out("predictions.csv");
      verify_provenance(pred_path);
      const FeatureTable table = read_features(ez_features);
      // reconstruct rankings from the prediction CSV
      std::map<std::string, std::size_t> sample_index;
      for (std::size_t i = 0; i < table.sample_ids.size(); ++i)
        sample_index[table.sample_ids[i]] = i;
      std::ifstream in(pred_path);
      if (!in) throw io_error("cannot open: " + pred_path);
      std::string line;
      std::getline(in, line);
      std::vector<std::vector<std::string>> ranked_ids(table.sample_ids.size());
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        auto it = sample_index.find(fields[0]);
        if (it == sample_index.end()) continue;
        ranked_ids[it->second].push_back(fields[2]);
      }
      std::size_t hits = 0;
      for (std::size_t i = 0; i < ranked_ids.size(); ++i) {
        const auto& ids = ranked_ids[i];
        const std::size_t depth = std::min(ez_k, ids.size());
        for (std::size_t r = 0; r < depth; ++r)
          if (ids[r] == table.class_ids[i]) {
            ++hits;
            break;
          }
      }
      const double acc =
          ranked_ids.empty() ? 0.0 : static_cast<double>(hits) / ranked_ids.size();
      std::cout << "eval-zsl: top-" << ez_k << " accuracy " << format_g9(acc) << "\n";
    } else if (*ndcg_cmd) {
      const std::string emb_path =
          !ndcg_embedding.empty() ? ndcg_embedding : g.out("associations.csv");
      const std::string rel_path =
          !ndcg_relevance.empty() ? ndcg_relevance : cfg.get_string("eval.relevance");
      const std::size_t k =
          ndcg_k > 0 ? ndcg_k : static_cast<std::size_t>(cfg.get_int("eval.ndcg_k"));
      const ClassEmbedding emb = read_embedding(emb_path);
      const RelevanceMatrix rel = read_relevance(rel_path);
      if (rel.class_ids != emb.class_ids)
        throw dimension_error("relevance matrix classes do not match the embedding rows");
      const NdcgResult result = ndcg_at_k(emb.matrix, rel, k);
      const std::string path = g.out("ndcg_report.csv");
      std::ofstream out(path);
      out << "class_id,ndcg\n";
      for (std::size_t c = 0; c < emb.n_classes(); ++c)
        out << emb.class_ids[c] << "," << format_g9(result.per_class[c]) << "\n";
      out.close();
      write_provenance(path, "eval-ndcg", cfg, {emb_path, rel_path});
      std::cout << "eval-ndcg: mean nDCG@" << k << " = " << format_g9(result.mean) << "\n";
    } else if (*sal_cmd) {
      const std::string ann_path =
          !sal_annotations.empty() ? sal_annotations : cfg.get_string("eval.annotations");
      const std::string sel_path = g.out("selection.csv");
      const auto annotations = read_annotations(ann_path);
      const auto selected = read_selection_words(sel_path);
      const SaliencyScores s = saliency_scores(annotations, selected);
      std::cout << "eval-saliency: relevance " << format_g9(s.relevance) << ", junk "
                << format_g9(s.junk) << ", saliency " << format_g9(s.saliency) << "\n";
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: category=config " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    const char* names[] = {"", "", "config", "io", "dimension", "numeric"};
    std::cerr << "error: category=" << names[static_cast<int>(e.category())] << " " << e.what()
              << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: category=io " << e.what() << "\n";
    return 3;
  }
}
