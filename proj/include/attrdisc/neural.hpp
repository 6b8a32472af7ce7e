#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "attrdisc/assoc.hpp"

namespace attrdisc {

// Row-major dense matrix, the only tensor type the trainer needs.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

enum class Activation { Identity, Rectifier, Sigmoid };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct Layer {
  Matrix weight;  // out x in
  std::vector<double> bias;
  Activation act = Activation::Identity;
};

// Cached per-layer tensors of one forward pass.
struct Forward {
  std::vector<Matrix> pre;   // pre-activation, per layer
  std::vector<Matrix> post;  // post-activation, per layer
  const Matrix* input = nullptr;
};

// Per-layer parameter gradients plus the delta at the input (unused here but
// handy for stacked models).
struct Gradients {
  std::vector<Matrix> d_weight;
  std::vector<std::vector<double>> d_bias;
};

struct DenseNetwork {
  std::vector<Layer> layers;
  std::uint64_t seed = 0;

  std::size_t input_width() const { return layers.front().weight.cols; }
  std::size_t output_width() const { return layers.back().weight.rows; }
};

// Glorot-uniform weights, zero biases, deterministic in `seed`.
DenseNetwork make_network(const std::vector<std::size_t>& dims,
                          const std::vector<Activation>& acts, std::uint64_t seed);

Forward forward(const DenseNetwork& net, const Matrix& input);

// Backpropagate from the delta at the last layer's pre-activation.
// Returns parameter gradients; `delta_last` is batch x out.
Gradients backward(const DenseNetwork& net, const Forward& fwd, Matrix delta_last);

// Forward pass only; returns the final activation.
Matrix predict_attributes(const DenseNetwork& net, const Matrix& features);

struct TrainConfig {
  double learning_rate = 0.001;
  double weight_decay = 5e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
};

// Decoupled-weight-decay Adam over a flat list of parameter tensors.
class AdamOptimizer {
 public:
  AdamOptimizer(double lr, double beta1, double beta2, double eps);
  // In-place update; weight decay applied as direct shrinkage before the step.
  void step(std::vector<double>& params, const std::vector<double>& grads, double weight_decay);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::vector<std::vector<double>> m_, v_;
  std::vector<std::size_t> t_;
  std::size_t cursor_ = 0;

 public:
  // Call once per optimization step, before the per-tensor step() calls.
  void begin_step() { cursor_ = 0; }
};

struct JointModel {
  DenseNetwork backbone;       // last layer sigmoid, width = n attributes
  Matrix assoc;                // classes x attributes, no bias
  Matrix prior;                // M^l, same shape
  std::vector<std::string> class_ids;
  std::vector<std::string> attribute_words;
  double beta1 = 1.0;          // weight of the attribute loss
  double beta2 = 1.0;          // weight of the L1 prior term
};

JointModel make_joint_model(const std::vector<std::size_t>& backbone_dims,
                            const AssociationMatrix& prior, std::uint64_t seed);

struct JointLossTerms {
  double class_ce = 0.0;
  double attr_bce = 0.0;
  double prior_l1 = 0.0;
  double total = 0.0;
};

struct JointGradients {
  Gradients backbone;
  Matrix d_assoc;
};

// L = L_c + beta1 * L_a + beta2 * |M - M^l|_1. Attribute labels come from the
// prior rows of each sample's class. Gradients returned when `grads` != null.
JointLossTerms joint_loss(const JointModel& model, const Matrix& features,
                          const std::vector<std::size_t>& class_labels,
                          JointGradients* grads = nullptr);

struct TrainLog {
  std::vector<double> epoch_loss;
  double calibrated_beta1 = 0.0;
  double calibrated_beta2 = 0.0;
};

// Adam training; when calibrate is true, beta1/beta2 are set from the raw
// first-batch loss magnitudes so the three terms start comparable.
TrainLog train_joint(JointModel& model, const Matrix& features,
                     const std::vector<std::size_t>& class_labels, const TrainConfig& config,
                     bool calibrate = true);

// M* by thresholding the association layer at tau.
AssociationMatrix threshold_associations(const JointModel& model, double tau = 0.0);

// Mean binary cross-entropy of sigmoid outputs against 0/1 labels; fills
// gradients when requested.
double attribute_loss(const DenseNetwork& net, const Matrix& features, const Matrix& labels,
                      Gradients* grads = nullptr);

std::vector<double> train_attribute_model(DenseNetwork& net, const Matrix& features,
                                          const Matrix& labels, const TrainConfig& config);

// Attribute predictor: the joint backbone with one extra hidden layer in
// front of the sigmoid output. warm_start copies the shared layers over.
DenseNetwork make_attribute_network(const JointModel& joint, std::size_t extra_hidden,
                                    std::uint64_t seed, bool warm_start = true);

// Checkpoint: text header (layer shapes, activations, seed) + little-endian
// float64 payload, row-major per layer.
void save_network(const DenseNetwork& net, const std::string& path);
DenseNetwork load_network(const std::string& path);

}  // namespace attrdisc
