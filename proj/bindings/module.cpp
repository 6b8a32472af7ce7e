#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "attrdisc/assoc.hpp"
#include "attrdisc/corpus.hpp"
#include "attrdisc/errors.hpp"
#include "attrdisc/lda.hpp"
#include "attrdisc/metrics.hpp"
#include "attrdisc/neural.hpp"
#include "attrdisc/selection.hpp"
#include "attrdisc/text.hpp"
#include "attrdisc/zeroshot.hpp"

namespace py = pybind11;
using namespace attrdisc;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols) throw dimension_error("ragged matrix");
    std::copy(rows[r].begin(), rows[r].end(), &m.data[r * m.cols]);
  }
  return m;
}

std::vector<std::vector<double>> from_matrix(const Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows, std::vector<double>(m.cols));
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) rows[r][c] = m.at(r, c);
  return rows;
}

}  // namespace

PYBIND11_MODULE(_attrdisc, m) {
  m.doc() = "attribute discovery and zero-shot learning core";

  py::register_exception<Error>(m, "AttrdiscError");

  py::class_<Document>(m, "Document")
      .def(py::init<>())
      .def_readwrite("class_id", &Document::class_id)
      .def_readwrite("tokens", &Document::tokens);

  m.def("porter_stem", &porter_stem, py::arg("word"));
  m.def(
      "preprocess",
      [](const std::string& class_id, const std::string& text, std::size_t limit) {
        return preprocess(class_id, text, limit);
      },
      py::arg("class_id"), py::arg("text"), py::arg("limit") = 500);

  py::class_<Dictionary>(m, "Dictionary")
      .def_readonly("words", &Dictionary::words)
      .def_readonly("df", &Dictionary::df)
      .def("__len__", &Dictionary::size);

  m.def("build_dictionary", &build_dictionary, py::arg("docs"), py::arg("min_df") = 2,
        py::arg("max_df_ratio") = 0.8);

  py::class_<ClassEmbedding>(m, "ClassEmbedding")
      .def_readonly("class_ids", &ClassEmbedding::class_ids)
      .def_readonly("words", &ClassEmbedding::words)
      .def_readonly("matrix", &ClassEmbedding::matrix);

  m.def("embed", &embed, py::arg("docs"), py::arg("dictionary"));

  py::class_<TopicModel>(m, "TopicModel")
      .def_readonly("phi", &TopicModel::phi)
      .def_readonly("theta", &TopicModel::theta)
      .def_readonly("topic_prior", &TopicModel::topic_prior)
      .def_readonly("alpha", &TopicModel::alpha)
      .def_readonly("beta", &TopicModel::beta)
      .def_readonly("n_topics", &TopicModel::n_topics);

  m.def("fit_lda", &fit_lda, py::arg("docs"), py::arg("dictionary"), py::arg("n_topics"),
        py::arg("alpha") = 0.0, py::arg("beta") = 0.01, py::arg("iters") = 1000,
        py::arg("seed") = 12345);
  m.def("word_topic_posterior", &word_topic_posterior, py::arg("model"), py::arg("word"));

  py::class_<TopicRanking>(m, "TopicRanking")
      .def_readonly("significance", &TopicRanking::significance)
      .def_readonly("insignificant", &TopicRanking::insignificant);

  m.def("rank_topics", &rank_topics, py::arg("model"), py::arg("rho") = 0.10);
  m.def("word_cost", &word_cost, py::arg("word"), py::arg("model"), py::arg("ranking"),
        py::arg("gamma") = 20.0);

  py::class_<SelectionState>(m, "SelectionState")
      .def_readonly("selected", &SelectionState::selected)
      .def_readonly("spent_cost", &SelectionState::spent_cost)
      .def_readonly("objective", &SelectionState::objective)
      .def_readonly("f_dis", &SelectionState::f_dis)
      .def_readonly("f_div", &SelectionState::f_div);

  m.def("select_vocabulary", &select_vocabulary, py::arg("embedding"), py::arg("model"),
        py::arg("ranking"), py::arg("lambda_") = 0.001, py::arg("gamma") = 20.0,
        py::arg("budget") = 1200.0);

  py::enum_<AssocMode>(m, "AssocMode")
      .value("SignedBinary", AssocMode::SignedBinary)
      .value("Continuous", AssocMode::Continuous);

  py::class_<AssociationMatrix>(m, "AssociationMatrix")
      .def_readonly("class_ids", &AssociationMatrix::class_ids)
      .def_readonly("attribute_words", &AssociationMatrix::attribute_words)
      .def_readonly("values", &AssociationMatrix::values)
      .def_readonly("mode", &AssociationMatrix::mode);

  m.def("initial_associations", &initial_associations, py::arg("embedding"),
        py::arg("vocabulary"));
  m.def("unseen_associations", &unseen_associations, py::arg("article"), py::arg("dictionary"),
        py::arg("n_train_classes"), py::arg("vocabulary"), py::arg("length_limit") = 500,
        py::arg("mode") = AssocMode::SignedBinary);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("weight_decay", &TrainConfig::weight_decay)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("seed", &TrainConfig::seed);

  py::class_<DenseNetwork>(m, "DenseNetwork")
      .def_property_readonly("input_width", &DenseNetwork::input_width)
      .def_property_readonly("output_width", &DenseNetwork::output_width);

  py::class_<JointModel>(m, "JointModel")
      .def_readonly("beta1", &JointModel::beta1)
      .def_readonly("beta2", &JointModel::beta2)
      .def_property_readonly("assoc", [](const JointModel& j) { return from_matrix(j.assoc); });

  m.def(
      "make_joint_model",
      [](const std::vector<std::size_t>& dims, const AssociationMatrix& prior,
         std::uint64_t seed) { return make_joint_model(dims, prior, seed); },
      py::arg("backbone_dims"), py::arg("prior"), py::arg("seed") = 12345);
  m.def(
      "train_joint",
      [](JointModel& model, const std::vector<std::vector<double>>& features,
         const std::vector<std::size_t>& labels, const TrainConfig& config, bool calibrate) {
        return train_joint(model, to_matrix(features), labels, config, calibrate).epoch_loss;
      },
      py::arg("model"), py::arg("features"), py::arg("class_labels"), py::arg("config"),
      py::arg("calibrate") = true);
  m.def("threshold_associations", &threshold_associations, py::arg("model"),
        py::arg("tau") = 0.0);
  m.def(
      "make_attribute_network",
      [](const JointModel& joint, std::size_t extra_hidden, std::uint64_t seed,
         bool warm_start) { return make_attribute_network(joint, extra_hidden, seed, warm_start); },
      py::arg("joint"), py::arg("extra_hidden"), py::arg("seed") = 12345,
      py::arg("warm_start") = true);
  m.def(
      "make_network",
      [](const std::vector<std::size_t>& dims, std::uint64_t seed) {
        std::vector<Activation> acts(dims.size() - 1, Activation::Rectifier);
        acts.back() = Activation::Sigmoid;
        return make_network(dims, acts, seed);
      },
      py::arg("dims"), py::arg("seed") = 12345);
  m.def(
      "train_attribute_model",
      [](DenseNetwork& net, const std::vector<std::vector<double>>& features,
         const std::vector<std::vector<double>>& labels, const TrainConfig& config) {
        return train_attribute_model(net, to_matrix(features), to_matrix(labels), config);
      },
      py::arg("network"), py::arg("features"), py::arg("labels"), py::arg("config"));
  m.def(
      "predict_attributes",
      [](const DenseNetwork& net, const std::vector<std::vector<double>>& features) {
        return from_matrix(predict_attributes(net, to_matrix(features)));
      },
      py::arg("network"), py::arg("features"));

  py::class_<ScoreNormalizer>(m, "ScoreNormalizer")
      .def_readonly("mean", &ScoreNormalizer::mean)
      .def_readonly("std", &ScoreNormalizer::std)
      .def_readonly("source", &ScoreNormalizer::source);

  m.def(
      "fit_normalizer",
      [](const std::vector<std::vector<double>>& scores, const std::string& source) {
        return fit_normalizer(to_matrix(scores), source);
      },
      py::arg("scores"), py::arg("source") = "reference");
  m.def("dap_score", &dap_score, py::arg("norm_scores"), py::arg("assoc"));
  m.def(
      "rank_classes",
      [](const std::vector<std::vector<double>>& attr_scores, const ScoreNormalizer& norm,
         const AssociationMatrix& assoc, std::size_t top_k) {
        std::vector<std::vector<std::pair<std::size_t, double>>> out;
        for (const auto& sample : rank_classes(to_matrix(attr_scores), norm, assoc, top_k)) {
          std::vector<std::pair<std::size_t, double>> row;
          for (const auto& rc : sample) row.emplace_back(rc.class_index, rc.score);
          out.push_back(std::move(row));
        }
        return out;
      },
      py::arg("attr_scores"), py::arg("normalizer"), py::arg("assoc"), py::arg("top_k"));

  m.def(
      "ndcg_at_k",
      [](const std::vector<std::vector<double>>& rows,
         const std::vector<std::vector<double>>& grades, std::size_t k) {
        RelevanceMatrix rel;
        rel.grades = grades;
        rel.class_ids.resize(grades.size());
        const NdcgResult r = ndcg_at_k(rows, rel, k);
        return std::make_pair(r.per_class, r.mean);
      },
      py::arg("embedding_rows"), py::arg("relevance"), py::arg("k"));
  m.def(
      "attribute_ap_auc",
      [](const std::vector<std::vector<double>>& scores,
         const std::vector<std::vector<double>>& labels) {
        std::vector<std::tuple<double, double, bool>> out;
        for (const auto& r : attribute_ap_auc(to_matrix(scores), to_matrix(labels)))
          out.emplace_back(r.ap, r.auc, r.valid);
        return out;
      },
      py::arg("scores"), py::arg("labels"));
}
