#include "attrdisc/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "attrdisc/errors.hpp"

namespace attrdisc {

namespace {

struct KeySpec {
  const char* name;
  const char* def;        // nullptr = no default
  double min = 0.0, max = 0.0;
  bool numeric_range = false;
};

const std::vector<KeySpec>& known_keys() {
  static const std::vector<KeySpec> keys = {
      // paths (no defaults)
      {"corpus.path", nullptr}, {"corpus.stopwords", nullptr},
      {"corpus.documents", nullptr}, {"corpus.dictionary", nullptr},
      {"corpus.embedding", nullptr},
      {"topics.model_dir", nullptr}, {"topics.ranking", nullptr},
      {"selection.output", nullptr},
      {"assoc.output", nullptr}, {"assoc.articles", nullptr},
      {"neural.features", nullptr}, {"neural.joint_dir", nullptr},
      {"neural.attr_checkpoint", nullptr}, {"neural.associations_opt", nullptr},
      {"zeroshot.predictions", nullptr}, {"zeroshot.ref_features", nullptr},
      {"eval.relevance", nullptr}, {"eval.annotations", nullptr},
      {"eval.report_dir", nullptr},
      // hyperparameters with documented ranges
      {"corpus.limit", "500", 1, 1e9, true},
      {"corpus.min_df", "2", 1, 1e9, true},
      {"corpus.max_df_ratio", "0.8", 0, 1, true},
      {"topics.n_topics", "200", 2, 1e6, true},
      {"topics.alpha", "0", 0, 1e6, true},  // 0 selects 50/K
      {"topics.beta", "0.01", 0, 1e6, true},
      {"topics.iters", "1000", 1, 1e9, true},
      {"topics.rho", "0.10", 0, 1, true},
      {"topics.seed", "12345", 0, 1.8e19, true},
      {"selection.lambda", "0.001", 0, 1e9, true},
      {"selection.gamma", "20", 0, 1e9, true},
      {"selection.budget", "1200", 0, 1e12, true},
      {"neural.tau", "0", -1e9, 1e9, true},
      {"neural.learning_rate", "0.001", 1e-12, 1e3, true},
      {"neural.weight_decay", "5e-4", 0, 1e3, true},
      {"neural.batch_size", "32", 1, 1e9, true},
      {"neural.epochs", "10", 1, 1e9, true},
      {"neural.hidden", "64", 1, 1e9, true},
      {"neural.extra_hidden", "64", 1, 1e9, true},
      {"neural.beta1", "auto"},
      {"neural.beta2", "auto"},
      {"neural.warm_start", "true"},
      {"neural.seed", "12345", 0, 1.8e19, true},
      {"zeroshot.mode", "binary"},
      {"zeroshot.normalizer", "reference"},
      {"zeroshot.top_k", "5", 1, 1e9, true},
      {"zeroshot.candidates", "unseen"},
      {"zeroshot.length_limit", "500", 1, 1e9, true},
      {"zeroshot.grid", "100,200,300,400,500,600,700,800,900,1000"},
      {"eval.ndcg_k", "10", 1, 1e9, true},
      {"run.out_dir", "."},
      {"run.seed", "12345", 0, 1.8e19, true},
  };
  return keys;
}

const KeySpec* find_key(const std::string& key) {
  for (const auto& spec : known_keys())
    if (key == spec.name) return &spec;
  return nullptr;
}

}  // namespace

PipelineConfig::PipelineConfig() {
  for (const auto& spec : known_keys())
    if (spec.def) values_[spec.name] = spec.def;
}

void PipelineConfig::validate(const std::string& key, const std::string& value) const {
  const KeySpec* spec = find_key(key);
  if (!spec) throw config_error("unknown config key: " + key);
  if (spec->numeric_range) {
    double v;
    try {
      v = std::stod(value);
    } catch (const std::exception&) {
      throw config_error("config key " + key + " expects a number, got '" + value + "'");
    }
    if (v < spec->min || v > spec->max)
      throw config_error("config key " + key + " out of range: " + value);
  }
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
  validate(key, value);
  values_[key] = value;
}

bool PipelineConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string PipelineConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw config_error("missing required config key: " + key);
  return it->second;
}

double PipelineConfig::get_double(const std::string& key) const {
  return std::stod(get_string(key));
}

std::int64_t PipelineConfig::get_int(const std::string& key) const {
  return std::stoll(get_string(key));
}

std::uint64_t PipelineConfig::get_seed(const std::string& key) const {
  return std::stoull(get_string(key));
}

bool PipelineConfig::get_bool(const std::string& key) const {
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error("config key " + key + " expects a boolean, got '" + v + "'");
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  PipelineConfig config;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    config.set(key, value);
  }
  return config;
}

}  // namespace attrdisc
