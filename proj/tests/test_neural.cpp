#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "attrdisc/metrics.hpp"
#include "attrdisc/neural.hpp"
#include "synthetic.hpp"

using namespace attrdisc;
using attrdisc::testing::make_class_features;

namespace {

AssociationMatrix toy_prior(std::size_t n_classes, std::size_t n_attrs, std::uint64_t seed) {
  AssociationMatrix prior;
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < n_classes; ++c) prior.class_ids.push_back("c" + std::to_string(c));
  for (std::size_t a = 0; a < n_attrs; ++a) prior.attribute_words.push_back("a" + std::to_string(a));
  prior.values.assign(n_classes, std::vector<double>(n_attrs));
  for (std::size_t c = 0; c < n_classes; ++c) {
    bool any_pos = false;
    for (std::size_t a = 0; a < n_attrs; ++a) {
      prior.values[c][a] = (rng() % 2) ? 1.0 : -1.0;
      any_pos = any_pos || prior.values[c][a] > 0;
    }
    if (!any_pos) prior.values[c][0] = 1.0;
  }
  return prior;
}

Matrix random_features(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& v : m.data) v = gauss(rng);
  return m;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(a) + std::abs(b));
}

}  // namespace

TEST_CASE("joint loss gradients match central differences") {
  const std::size_t n_classes = 3, n_attrs = 4, dim = 5;
  JointModel model = make_joint_model({dim, 6, n_attrs}, toy_prior(n_classes, n_attrs, 1), 11);
  // move the association layer off the L1 kink before differentiating
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> off(0.1, 0.4);
  for (auto& v : model.assoc.data) v += (rng() % 2 ? off(rng) : -off(rng));
  model.beta1 = 0.7;
  model.beta2 = 0.3;

  const Matrix x = random_features(6, dim, 3);
  const std::vector<std::size_t> y = {0, 1, 2, 0, 1, 2};

  JointGradients grads;
  joint_loss(model, x, y, &grads);
  const double h = 1e-6;

  auto fd = [&](double* p) {
    const double keep = *p;
    *p = keep + h;
    const double up = joint_loss(model, x, y).total;
    *p = keep - h;
    const double down = joint_loss(model, x, y).total;
    *p = keep;
    return (up - down) / (2.0 * h);
  };

  for (std::size_t l = 0; l < model.backbone.layers.size(); ++l) {
    auto& layer = model.backbone.layers[l];
    for (std::size_t i = 0; i < layer.weight.data.size(); i += 3)
      CHECK(rel_err(fd(&layer.weight.data[i]), grads.backbone.d_weight[l].data[i]) < 1e-5);
    for (std::size_t i = 0; i < layer.bias.size(); ++i)
      CHECK(rel_err(fd(&layer.bias[i]), grads.backbone.d_bias[l][i]) < 1e-5);
  }
  for (std::size_t i = 0; i < model.assoc.data.size(); ++i)
    CHECK(rel_err(fd(&model.assoc.data[i]), grads.d_assoc.data[i]) < 1e-5);
}

TEST_CASE("attribute loss gradients match central differences") {
  std::vector<Activation> acts = {Activation::Rectifier, Activation::Sigmoid};
  DenseNetwork net = make_network({4, 5, 3}, acts, 21);
  const Matrix x = random_features(5, 4, 4);
  Matrix labels(5, 3);
  std::mt19937_64 rng(6);
  for (auto& v : labels.data) v = static_cast<double>(rng() % 2);

  Gradients grads;
  attribute_loss(net, x, labels, &grads);
  const double h = 1e-6;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto& layer = net.layers[l];
    for (std::size_t i = 0; i < layer.weight.data.size(); i += 2) {
      const double keep = layer.weight.data[i];
      layer.weight.data[i] = keep + h;
      const double up = attribute_loss(net, x, labels);
      layer.weight.data[i] = keep - h;
      const double down = attribute_loss(net, x, labels);
      layer.weight.data[i] = keep;
      CHECK(rel_err((up - down) / (2 * h), grads.d_weight[l].data[i]) < 1e-5);
    }
  }
}

TEST_CASE("all-zero network outputs one half everywhere") {
  std::vector<Activation> acts = {Activation::Rectifier, Activation::Sigmoid};
  DenseNetwork net = make_network({3, 4, 2}, acts, 5);
  for (auto& layer : net.layers) {
    std::fill(layer.weight.data.begin(), layer.weight.data.end(), 0.0);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
  const Matrix out = predict_attributes(net, random_features(3, 3, 9));
  for (double v : out.data) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("batch loss is the mean of per-sample losses") {
  JointModel model = make_joint_model({4, 5, 3}, toy_prior(2, 3, 8), 31);
  const Matrix x = random_features(4, 4, 10);
  const std::vector<std::size_t> y = {0, 1, 1, 0};
  const double batch = joint_loss(model, x, y).total;
  double sum = 0.0;
  for (std::size_t s = 0; s < x.rows; ++s) {
    Matrix one(1, x.cols);
    std::copy(&x.data[s * x.cols], &x.data[(s + 1) * x.cols], one.data.begin());
    sum += joint_loss(model, one, {y[s]}).total;
  }
  CHECK(batch == doctest::Approx(sum / static_cast<double>(x.rows)).epsilon(1e-12));
}

TEST_CASE("training is deterministic in the seed") {
  const auto data = make_class_features(3, 6, 10, 0.2, 14);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.seed = 99;
  JointModel a = make_joint_model({6, 8, 4}, toy_prior(3, 4, 2), 7);
  JointModel b = make_joint_model({6, 8, 4}, toy_prior(3, 4, 2), 7);
  const auto la = train_joint(a, data.features, data.labels, cfg, true);
  const auto lb = train_joint(b, data.features, data.labels, cfg, true);
  CHECK(la.epoch_loss == lb.epoch_loss);
  CHECK(a.assoc.data == b.assoc.data);
  for (std::size_t l = 0; l < a.backbone.layers.size(); ++l)
    CHECK(a.backbone.layers[l].weight.data == b.backbone.layers[l].weight.data);
}

TEST_CASE("adam step with zero gradient and zero decay is a no-op") {
  AdamOptimizer opt(0.01, 0.9, 0.999, 1e-8);
  std::vector<double> params = {1.0, -2.0, 0.5};
  const auto before = params;
  opt.begin_step();
  opt.step(params, {0.0, 0.0, 0.0}, 0.0);
  CHECK(params == before);
}

TEST_CASE("loss reduces to cross entropy when both weights vanish") {
  JointModel model = make_joint_model({4, 5, 3}, toy_prior(2, 3, 4), 17);
  model.beta1 = 0.0;
  model.beta2 = 0.0;
  const Matrix x = random_features(3, 4, 12);
  const auto terms = joint_loss(model, x, {0, 1, 0});
  CHECK(terms.total == doctest::Approx(terms.class_ce).epsilon(1e-12));
}

TEST_CASE("association layer starts exactly at the prior") {
  const auto prior = toy_prior(3, 5, 77);
  const JointModel model = make_joint_model({4, 6, 5}, prior, 3);
  const auto terms = joint_loss(model, random_features(2, 4, 1), {0, 1});
  CHECK(terms.prior_l1 == 0.0);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t a = 0; a < 5; ++a)
      CHECK(model.assoc.at(c, a) == prior.values[c][a]);
}

TEST_CASE("joint training fits well-separated classes") {
  const auto data = make_class_features(4, 8, 30, 0.1, 2024);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 120;
  cfg.batch_size = 16;
  cfg.seed = 5;
  JointModel model = make_joint_model({8, 16, 6}, toy_prior(4, 6, 9), 13);
  const auto log = train_joint(model, data.features, data.labels, cfg, true);
  CHECK(log.epoch_loss.back() < log.epoch_loss.front());

  const Matrix attrs = predict_attributes(model.backbone, data.features);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < attrs.rows; ++s) {
    std::size_t best = 0;
    double best_score = -1e300;
    for (std::size_t c = 0; c < 4; ++c) {
      double score = 0.0;
      for (std::size_t a = 0; a < 6; ++a) score += model.assoc.at(c, a) * attrs.at(s, a);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    hits += best == data.labels[s];
  }
  CHECK(static_cast<double>(hits) / static_cast<double>(attrs.rows) > 0.9);
}

TEST_CASE("thresholding the association layer") {
  JointModel model = make_joint_model({3, 4, 3}, toy_prior(2, 3, 5), 2);
  model.assoc.data = {0.4, -0.2, 0.0, 1.5, -1.5, 0.1};
  const auto out = threshold_associations(model, 0.0);
  CHECK(out.mode == AssocMode::SignedBinary);
  CHECK(out.values[0] == std::vector<double>{1.0, -1.0, -1.0});
  CHECK(out.values[1] == std::vector<double>{1.0, -1.0, 1.0});
  const auto strict = threshold_associations(model, 0.5);
  CHECK(strict.values[1] == std::vector<double>{1.0, -1.0, -1.0});
}

TEST_CASE("attribute network shape and warm start") {
  const JointModel joint = make_joint_model({5, 7, 4}, toy_prior(3, 4, 6), 19);
  const DenseNetwork warm = make_attribute_network(joint, 6, 42, true);
  CHECK(warm.input_width() == 5);
  CHECK(warm.output_width() == 4);
  REQUIRE(warm.layers.size() == 3);
  CHECK(warm.layers[1].weight.rows == 6);
  // shared hidden layer copied from the backbone
  CHECK(warm.layers[0].weight.data == joint.backbone.layers[0].weight.data);
  const DenseNetwork cold = make_attribute_network(joint, 6, 42, false);
  CHECK(cold.layers[0].weight.data != joint.backbone.layers[0].weight.data);
}

TEST_CASE("attribute training separates clustered labels") {
  const auto data = make_class_features(2, 6, 40, 0.15, 31);
  Matrix labels(data.features.rows, 2);
  for (std::size_t s = 0; s < labels.rows; ++s) {
    labels.at(s, 0) = data.labels[s] == 0 ? 1.0 : 0.0;
    labels.at(s, 1) = data.labels[s] == 1 ? 1.0 : 0.0;
  }
  std::vector<Activation> acts = {Activation::Rectifier, Activation::Sigmoid};
  DenseNetwork net = make_network({6, 10, 2}, acts, 8);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 80;
  cfg.batch_size = 16;
  cfg.seed = 3;
  const auto losses = train_attribute_model(net, data.features, labels, cfg);
  CHECK(losses.back() < losses.front());
  const auto reports = attribute_ap_auc(predict_attributes(net, data.features), labels);
  for (const auto& r : reports) {
    REQUIRE(r.valid);
    CHECK(r.auc > 0.95);
  }
}
