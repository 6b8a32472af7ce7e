#include "attrdisc/neural.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "attrdisc/errors.hpp"

namespace attrdisc {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Rectifier: return "rectifier";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "identity";
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::Identity;
  if (name == "rectifier") return Activation::Rectifier;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw config_error("unknown activation: " + name);
}

namespace {

double apply_act(Activation a, double x) {
  switch (a) {
    case Activation::Identity: return x;
    case Activation::Rectifier: return x > 0.0 ? x : 0.0;
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
  }
  return x;
}

// derivative expressed through the post-activation value
double act_grad(Activation a, double post) {
  switch (a) {
    case Activation::Identity: return 1.0;
    case Activation::Rectifier: return post > 0.0 ? 1.0 : 0.0;
    case Activation::Sigmoid: return post * (1.0 - post);
  }
  return 1.0;
}

// C = A * B^T  (A: n x k, B: m x k) -> n x m
Matrix matmul_bt(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.rows; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += a.at(i, k) * b.at(j, k);
      c.at(i, j) = s;
    }
  return c;
}

// C = A^T * B  (A: k x n, B: k x m) -> n x m
Matrix matmul_at(const Matrix& a, const Matrix& b) {
  Matrix c(a.cols, b.cols);
  for (std::size_t k = 0; k < a.rows; ++k)
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double av = a.at(k, i);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += av * b.at(k, j);
    }
  return c;
}

// C = A * B  (A: n x k, B: k x m)
Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double av = a.at(i, k);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += av * b.at(k, j);
    }
  return c;
}

constexpr double kProbFloor = 1e-12;

}  // namespace

DenseNetwork make_network(const std::vector<std::size_t>& dims,
                          const std::vector<Activation>& acts, std::uint64_t seed) {
  if (dims.size() < 2 || acts.size() != dims.size() - 1)
    throw dimension_error("make_network: dims/activations mismatch");
  DenseNetwork net;
  net.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer layer;
    layer.weight = Matrix(dims[l + 1], dims[l]);
    layer.bias.assign(dims[l + 1], 0.0);
    layer.act = acts[l];
    const double bound = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& w : layer.weight.data) w = dist(rng);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Forward forward(const DenseNetwork& net, const Matrix& input) {
  if (input.cols != net.input_width())
    throw dimension_error("forward: feature width does not match input layer");
  Forward fwd;
  fwd.input = &input;
  const Matrix* cur = &input;
  for (const auto& layer : net.layers) {
    Matrix pre = matmul_bt(*cur, layer.weight);
    for (std::size_t i = 0; i < pre.rows; ++i)
      for (std::size_t j = 0; j < pre.cols; ++j) pre.at(i, j) += layer.bias[j];
    Matrix post = pre;
    for (auto& x : post.data) x = apply_act(layer.act, x);
    fwd.pre.push_back(std::move(pre));
    fwd.post.push_back(std::move(post));
    cur = &fwd.post.back();
  }
  return fwd;
}

Gradients backward(const DenseNetwork& net, const Forward& fwd, Matrix delta_last) {
  Gradients g;
  g.d_weight.resize(net.layers.size());
  g.d_bias.resize(net.layers.size());
  Matrix delta = std::move(delta_last);  // at pre-activation of layer l
  for (std::size_t l = net.layers.size(); l-- > 0;) {
    const Matrix& input_act = l == 0 ? *fwd.input : fwd.post[l - 1];
    g.d_weight[l] = matmul_at(delta, input_act);  // out x in
    g.d_bias[l].assign(net.layers[l].weight.rows, 0.0);
    for (std::size_t i = 0; i < delta.rows; ++i)
      for (std::size_t j = 0; j < delta.cols; ++j) g.d_bias[l][j] += delta.at(i, j);
    if (l > 0) {
      Matrix prev = matmul(delta, net.layers[l].weight);  // batch x in
      for (std::size_t i = 0; i < prev.rows; ++i)
        for (std::size_t j = 0; j < prev.cols; ++j)
          prev.at(i, j) *= act_grad(net.layers[l - 1].act, fwd.post[l - 1].at(i, j));
      delta = std::move(prev);
    }
  }
  return g;
}

Matrix predict_attributes(const DenseNetwork& net, const Matrix& features) {
  return forward(net, features).post.back();
}

AdamOptimizer::AdamOptimizer(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamOptimizer::step(std::vector<double>& params, const std::vector<double>& grads,
                         double weight_decay) {
  if (params.size() != grads.size()) throw dimension_error("AdamOptimizer: size mismatch");
  if (cursor_ == m_.size()) {
    m_.emplace_back(params.size(), 0.0);
    v_.emplace_back(params.size(), 0.0);
    t_.push_back(0);
  }
  auto& m = m_[cursor_];
  auto& v = v_[cursor_];
  const double t = static_cast<double>(++t_[cursor_]);
  ++cursor_;

  const double bc1 = 1.0 - std::pow(beta1_, t);
  const double bc2 = 1.0 - std::pow(beta2_, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (weight_decay > 0.0) params[i] -= lr_ * weight_decay * params[i];
    m[i] = beta1_ * m[i] + (1.0 - beta1_) * grads[i];
    v[i] = beta2_ * v[i] + (1.0 - beta2_) * grads[i] * grads[i];
    params[i] -= lr_ * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps_);
  }
}

JointModel make_joint_model(const std::vector<std::size_t>& backbone_dims,
                            const AssociationMatrix& prior, std::uint64_t seed) {
  const std::size_t n_attrs = prior.n_attributes();
  if (backbone_dims.back() != n_attrs)
    throw dimension_error("make_joint_model: backbone output width must equal attribute count");
  JointModel model;
  std::vector<Activation> acts(backbone_dims.size() - 1, Activation::Rectifier);
  acts.back() = Activation::Sigmoid;
  model.backbone = make_network(backbone_dims, acts, seed);
  model.class_ids = prior.class_ids;
  model.attribute_words = prior.attribute_words;
  model.prior = Matrix(prior.n_classes(), n_attrs);
  for (std::size_t c = 0; c < prior.n_classes(); ++c)
    for (std::size_t a = 0; a < n_attrs; ++a) model.prior.at(c, a) = prior.values[c][a];
  model.assoc = model.prior;  // anchor start, the L1 term is zero at init
  return model;
}

JointLossTerms joint_loss(const JointModel& model, const Matrix& features,
                          const std::vector<std::size_t>& class_labels,
                          JointGradients* grads) {
  const std::size_t B = features.rows;
  const std::size_t A = model.assoc.cols;
  const std::size_t C = model.assoc.rows;
  if (class_labels.size() != B) throw dimension_error("joint_loss: label count mismatch");

  Forward fwd = forward(model.backbone, features);
  const Matrix& attr = fwd.post.back();  // B x A, sigmoid outputs

  Matrix logits = matmul_bt(attr, model.assoc);  // B x C
  JointLossTerms terms;

  // softmax cross entropy, and dz when needed
  Matrix dz(B, C);
  for (std::size_t b = 0; b < B; ++b) {
    double mx = logits.at(b, 0);
    for (std::size_t c = 1; c < C; ++c) mx = std::max(mx, logits.at(b, c));
    double z = 0.0;
    for (std::size_t c = 0; c < C; ++c) z += std::exp(logits.at(b, c) - mx);
    const std::size_t y = class_labels[b];
    if (y >= C) throw dimension_error("joint_loss: class label out of range");
    terms.class_ce += -(logits.at(b, y) - mx - std::log(z));
    for (std::size_t c = 0; c < C; ++c) {
      const double p = std::exp(logits.at(b, c) - mx) / z;
      dz.at(b, c) = (p - (c == y ? 1.0 : 0.0)) / static_cast<double>(B);
    }
  }
  terms.class_ce /= static_cast<double>(B);

  // attribute BCE against the prior row of the sample's class
  Matrix d_attr_pre(B, A);  // delta at the last pre-activation
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t j = 0; j < A; ++j) {
      const double y = model.prior.at(class_labels[b], j) > 0.0 ? 1.0 : 0.0;
      const double a = std::clamp(attr.at(b, j), kProbFloor, 1.0 - kProbFloor);
      terms.attr_bce += -(y * std::log(a) + (1.0 - y) * std::log(1.0 - a));
      d_attr_pre.at(b, j) =
          model.beta1 * (attr.at(b, j) - y) / static_cast<double>(B * A);
    }
  }
  terms.attr_bce /= static_cast<double>(B * A);

  for (std::size_t i = 0; i < model.assoc.data.size(); ++i)
    terms.prior_l1 += std::abs(model.assoc.data[i] - model.prior.data[i]);

  terms.total = terms.class_ce + model.beta1 * terms.attr_bce + model.beta2 * terms.prior_l1;
  if (!std::isfinite(terms.total)) throw numeric_error("joint_loss: non-finite loss");
  if (!grads) return terms;

  // class path into M and the attribute activations
  grads->d_assoc = matmul_at(dz, attr);  // C x A
  for (std::size_t i = 0; i < model.assoc.data.size(); ++i) {
    const double d = model.assoc.data[i] - model.prior.data[i];
    grads->d_assoc.data[i] += model.beta2 * (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0));
  }
  Matrix da = matmul(dz, model.assoc);  // B x A
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t j = 0; j < A; ++j)
      d_attr_pre.at(b, j) += da.at(b, j) * act_grad(Activation::Sigmoid, attr.at(b, j));

  grads->backbone = backward(model.backbone, fwd, std::move(d_attr_pre));
  return terms;
}

namespace {

void check_finite(const DenseNetwork& net) {
  for (const auto& layer : net.layers) {
    for (double w : layer.weight.data)
      if (!std::isfinite(w)) throw numeric_error("training produced non-finite weights");
    for (double b : layer.bias)
      if (!std::isfinite(b)) throw numeric_error("training produced non-finite biases");
  }
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t n, std::size_t batch_size,
                                                   std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(n, start + batch_size);
    batches.emplace_back(idx.begin() + start, idx.begin() + end);
  }
  return batches;
}

Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), m.cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy_n(&m.data[rows[i] * m.cols], m.cols, &out.data[i * m.cols]);
  return out;
}

}  // namespace

TrainLog train_joint(JointModel& model, const Matrix& features,
                     const std::vector<std::size_t>& class_labels, const TrainConfig& config,
                     bool calibrate) {
  TrainLog log;
  std::mt19937_64 rng(config.seed);
  AdamOptimizer opt(config.learning_rate, config.adam_beta1, config.adam_beta2,
                    config.adam_eps);

  bool calibrated = !calibrate;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t n_batches = 0;
    for (const auto& batch : make_batches(features.rows, config.batch_size, rng)) {
      Matrix bx = gather_rows(features, batch);
      std::vector<std::size_t> by(batch.size());
      for (std::size_t i = 0; i < batch.size(); ++i) by[i] = class_labels[batch[i]];

      if (!calibrated) {
        // scale the two auxiliary terms to the classification term
        const JointLossTerms raw = joint_loss(model, bx, by);
        model.beta1 = raw.attr_bce > 0.0 ? raw.class_ce / raw.attr_bce : 1.0;
        model.beta2 = raw.prior_l1 > 0.0 ? raw.class_ce / raw.prior_l1 : model.beta2;
        calibrated = true;
      }

      JointGradients grads;
      const JointLossTerms terms = joint_loss(model, bx, by, &grads);
      epoch_loss += terms.total;
      ++n_batches;

      opt.begin_step();
      for (std::size_t l = 0; l < model.backbone.layers.size(); ++l) {
        opt.step(model.backbone.layers[l].weight.data, grads.backbone.d_weight[l].data,
                 config.weight_decay);
        opt.step(model.backbone.layers[l].bias, grads.backbone.d_bias[l], config.weight_decay);
      }
      opt.step(model.assoc.data, grads.d_assoc.data, 0.0);  // M: L1 prior, no decay
    }
    check_finite(model.backbone);
    log.epoch_loss.push_back(epoch_loss / static_cast<double>(n_batches));
  }
  log.calibrated_beta1 = model.beta1;
  log.calibrated_beta2 = model.beta2;
  return log;
}

AssociationMatrix threshold_associations(const JointModel& model, double tau) {
  AssociationMatrix out;
  out.class_ids = model.class_ids;
  out.attribute_words = model.attribute_words;
  out.mode = AssocMode::SignedBinary;
  out.values.assign(model.assoc.rows, std::vector<double>(model.assoc.cols));
  for (std::size_t c = 0; c < model.assoc.rows; ++c)
    for (std::size_t a = 0; a < model.assoc.cols; ++a)
      out.values[c][a] = model.assoc.at(c, a) > tau ? 1.0 : -1.0;
  return out;
}

double attribute_loss(const DenseNetwork& net, const Matrix& features, const Matrix& labels,
                      Gradients* grads) {
  if (labels.rows != features.rows || labels.cols != net.output_width())
    throw dimension_error("attribute_loss: label shape mismatch");
  Forward fwd = forward(net, features);
  const Matrix& out = fwd.post.back();
  const double n = static_cast<double>(out.rows * out.cols);

  double loss = 0.0;
  Matrix delta(out.rows, out.cols);
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j) {
      const double y = labels.at(i, j);
      const double a = std::clamp(out.at(i, j), kProbFloor, 1.0 - kProbFloor);
      loss += -(y * std::log(a) + (1.0 - y) * std::log(1.0 - a));
      delta.at(i, j) = (out.at(i, j) - y) / n;
    }
  loss /= n;
  if (!std::isfinite(loss)) throw numeric_error("attribute_loss: non-finite loss");
  if (grads) *grads = backward(net, fwd, std::move(delta));
  return loss;
}

std::vector<double> train_attribute_model(DenseNetwork& net, const Matrix& features,
                                          const Matrix& labels, const TrainConfig& config) {
  std::mt19937_64 rng(config.seed);
  AdamOptimizer opt(config.learning_rate, config.adam_beta1, config.adam_beta2,
                    config.adam_eps);
  std::vector<double> epoch_losses;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t n_batches = 0;
    for (const auto& batch : make_batches(features.rows, config.batch_size, rng)) {
      Matrix bx = gather_rows(features, batch);
      Matrix by = gather_rows(labels, batch);
      Gradients grads;
      epoch_loss += attribute_loss(net, bx, by, &grads);
      ++n_batches;
      opt.begin_step();
      for (std::size_t l = 0; l < net.layers.size(); ++l) {
        opt.step(net.layers[l].weight.data, grads.d_weight[l].data, config.weight_decay);
        opt.step(net.layers[l].bias, grads.d_bias[l], config.weight_decay);
      }
    }
    check_finite(net);
    epoch_losses.push_back(epoch_loss / static_cast<double>(n_batches));
  }
  return epoch_losses;
}

DenseNetwork make_attribute_network(const JointModel& joint, std::size_t extra_hidden,
                                    std::uint64_t seed, bool warm_start) {
  const auto& bb = joint.backbone;
  std::vector<std::size_t> dims;
  dims.push_back(bb.input_width());
  for (std::size_t l = 0; l + 1 < bb.layers.size(); ++l) dims.push_back(bb.layers[l].weight.rows);
  dims.push_back(extra_hidden);
  dims.push_back(bb.output_width());
  std::vector<Activation> acts(dims.size() - 1, Activation::Rectifier);
  acts.back() = Activation::Sigmoid;
  DenseNetwork net = make_network(dims, acts, seed);
  if (warm_start) {
    for (std::size_t l = 0; l + 1 < bb.layers.size(); ++l) {
      net.layers[l].weight = bb.layers[l].weight;
      net.layers[l].bias = bb.layers[l].bias;
    }
  }
  return net;
}

void save_network(const DenseNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write checkpoint: " + path);
  out << "attrdisc-network 1\n";
  out << "seed " << net.seed << "\n";
  out << "layers " << net.layers.size() << "\n";
  for (const auto& layer : net.layers)
    out << "layer " << layer.weight.rows << " " << layer.weight.cols << " "
        << activation_name(layer.act) << "\n";
  out << "payload\n";
  for (const auto& layer : net.layers) {
    out.write(reinterpret_cast<const char*>(layer.weight.data.data()),
              static_cast<std::streamsize>(layer.weight.data.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(layer.bias.data()),
              static_cast<std::streamsize>(layer.bias.size() * sizeof(double)));
  }
  if (!out) throw io_error("checkpoint write failed: " + path);
}

DenseNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read checkpoint: " + path);
  std::string line;
  std::getline(in, line);
  if (line != "attrdisc-network 1") throw io_error("bad checkpoint header: " + path);
  DenseNetwork net;
  std::size_t n_layers = 0;
  std::string key;
  in >> key >> net.seed;
  in >> key >> n_layers;
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  for (std::size_t l = 0; l < n_layers; ++l) {
    std::size_t r, c;
    std::string act;
    in >> key >> r >> c >> act;
    Layer layer;
    layer.weight = Matrix(r, c);
    layer.bias.assign(r, 0.0);
    layer.act = activation_from_name(act);
    net.layers.push_back(std::move(layer));
  }
  in >> key;  // "payload"
  in.get();   // newline
  for (auto& layer : net.layers) {
    in.read(reinterpret_cast<char*>(layer.weight.data.data()),
            static_cast<std::streamsize>(layer.weight.data.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(layer.bias.data()),
            static_cast<std::streamsize>(layer.bias.size() * sizeof(double)));
  }
  if (!in) throw io_error("truncated checkpoint: " + path);
  return net;
}

}  // namespace attrdisc
