#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "morphkit/image.hpp"

namespace morphkit::nn {

/// Dense real array with an optional gradient of the same shape. Activations are stored
/// channel-major (C, H, W) for a single sample.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty or values.size()

  Tensor() = default;
  explicit Tensor(std::vector<int> shape, double fill = 0.0);
  Tensor(std::vector<int> shape, std::vector<double> values);

  std::size_t size() const noexcept { return values.size(); }
  static std::size_t count(const std::vector<int>& shape) noexcept;
  void validate() const;
};

/// Converts an image window (x0, y0, size_x, size_y) to a (C, H, W) tensor of raw intensities.
Tensor image_to_tensor(const ImageBuffer& img, int x0 = 0, int y0 = 0, int size_x = -1, int size_y = -1);
ImageBuffer tensor_to_image(const Tensor& t);

enum class LayerKind { Conv, ReLU, MaxPool, Flatten, FullyConnected, Softmax, SigmoidVector };
std::string_view layer_kind_name(LayerKind k) noexcept;

/// Conv: `kernel`x`kernel`, stride `stride`, zero "same" padding (kernel / 2), `in` -> `out` channels.
/// MaxPool: 2x2, stride 2 (odd trailing rows/columns are dropped). FullyConnected: `in` -> `out`.
struct LayerSpec {
  LayerKind kind;
  int kernel = 0;
  int stride = 1;
  int in = 0;
  int out = 0;

  static LayerSpec conv(int kernel, int stride, int cin, int cout) { return {LayerKind::Conv, kernel, stride, cin, cout}; }
  static LayerSpec relu() { return {LayerKind::ReLU}; }
  static LayerSpec maxpool() { return {LayerKind::MaxPool, 2, 2}; }
  static LayerSpec flatten() { return {LayerKind::Flatten}; }
  static LayerSpec fc(int nin, int nout) { return {LayerKind::FullyConnected, 0, 1, nin, nout}; }
  static LayerSpec softmax() { return {LayerKind::Softmax}; }
  static LayerSpec sigmoid() { return {LayerKind::SigmoidVector}; }
  bool operator==(const LayerSpec&) const = default;
};

enum class Head { Softmax2, Sigmoid4, None };

/// Per-layer parameter vectors (weights then biases); empty for parameter-free layers.
using Gradients = std::vector<std::vector<double>>;

/// Activations of one forward pass: acts[0] is the input, acts[i + 1] the output of layer i.
struct ForwardCache {
  std::vector<Tensor> acts;
  std::vector<std::vector<int>> argmax;  // max-pool winners, input offsets per output
  bool empty() const noexcept { return acts.empty(); }
};

class Network {
 public:
  Network() = default;
  /// Validates adjacent shapes; parameters start at zero.
  Network(std::vector<int> input_shape, std::vector<LayerSpec> layers);

  /// Conv(3x3, c)-ReLU-MaxPool repeated `blocks` times, FC(hidden)-ReLU, FC(head); inputs are
  /// centered with an offset of 0.5.
  static Network desk_scale(int input_size, int channels, Head head, int conv_channels = 8, int hidden = 128,
                            int blocks = 3);

  /// Fan-in scaled uniform weights U(-sqrt(6/fan_in), +sqrt(6/fan_in)), zero biases.
  void init(std::uint64_t seed);
  void init_layer(int layer, std::uint64_t seed);

  const std::vector<int>& input_shape() const noexcept { return input_shape_; }
  /// Subtracted from every input value before the first layer (acts[0] holds the shifted input).
  double input_offset() const noexcept { return input_offset_; }
  void set_input_offset(double offset) noexcept { input_offset_ = offset; }
  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  /// Output shape of layer i (i = -1 gives the input shape).
  const std::vector<int>& shape_after(int i) const;
  std::size_t output_size() const;
  Head head() const;
  /// Index of the layer producing the logits (the layer below the head, or the last layer).
  int logit_layer() const;

  std::vector<double>& params(int layer) { return params_[layer]; }
  const std::vector<double>& params(int layer) const { return params_[layer]; }
  const Gradients& all_params() const noexcept { return params_; }
  Gradients& all_params() noexcept { return params_; }
  Gradients zero_gradients() const;
  std::size_t parameter_count() const;
  /// Indices of the fully connected layers in order.
  std::vector<int> fc_layers() const;

  /// Replaces the layer at `index` (same input size) and the layers after it.
  void replace_tail(int index, std::vector<LayerSpec> tail);

  Tensor forward(const Tensor& input, ForwardCache* cache = nullptr) const;
  /// Backpropagates `grad_out` (gradient at the output of layer top - 1; top = -1 means the last
  /// layer) down to the input of layer `bottom`, which is returned. Parameter gradients are added
  /// into `grads` when non-null.
  std::vector<double> backward(const ForwardCache& cache, std::span<const double> grad_out, Gradients* grads,
                               int top = -1, int bottom = 0) const;

  bool operator==(const Network& o) const {
    return input_shape_ == o.input_shape_ && input_offset_ == o.input_offset_ && layers_ == o.layers_ &&
           params_ == o.params_;
  }

 private:
  void build_shapes();

  std::vector<int> input_shape_;
  double input_offset_ = 0.0;
  std::vector<LayerSpec> layers_;
  std::vector<std::vector<int>> shapes_;
  Gradients params_;
};

enum class Loss { CrossEntropy, MultilabelBce };

/// Loss of one sample from the head output, with the gradient with respect to the logits.
/// Cross-entropy expects a one-hot (or soft) target over the softmax classes; multilabel BCE sums
/// the per-output binary cross-entropies.
double loss_and_logit_grad(const Network& net, const ForwardCache& cache, std::span<const double> target, Loss loss,
                           std::vector<double>& grad_logits);

struct Example {
  ImageBuffer image;  // at least the network input size; larger images are windowed
  std::vector<double> target;
};

struct TrainOptions {
  Loss loss = Loss::CrossEntropy;
  double lr = 0.01;
  double momentum = 0.9;
  int epochs = 10;
  int batch = 16;
  std::uint64_t seed = 0;
  int max_shift = 0;  // random per-epoch window offset around the image center
  int workers = 1;
  /// Per-layer learning rates; when non-empty it replaces `lr`, and layers at 0 stay untouched.
  std::vector<double> layer_lr;
};

struct TrainReport {
  std::vector<double> epoch_loss;
};

/// Centered window of the network input size.
Tensor example_input(const Network& net, const ImageBuffer& img, int dx = 0, int dy = 0);

TrainReport train(Network& net, const std::vector<Example>& samples, const TrainOptions& options);

/// Swaps the last fully connected layer for a fresh two-way softmax head and trains only the
/// last (lr_last) and second-to-last (lr_second_last) fully connected layers.
TrainReport retrain_head(Network& net, const std::vector<Example>& binary_samples, double lr_last,
                         double lr_second_last, TrainOptions options);

/// Head outputs for every example (centered windows).
std::vector<std::vector<double>> predict(const Network& net, const std::vector<Example>& samples, int workers = 1);

struct SweepPoint {
  double threshold;
  double tpr;  // genuine classified genuine
  double tnr;  // morphs classified morph
};

/// Positives are genuine images. A sample is classified as morph when its morph score is at least
/// the threshold.
struct EvalReport {
  double threshold = 0.5;
  double true_positive_rate = 0.0;
  double true_negative_rate = 0.0;
  double eer = 0.0;
  std::vector<SweepPoint> curve;
  std::size_t genuine = 0;
  std::size_t morphs = 0;
};

/// `is_morph[i]` labels score `morph_scores[i]`; the EER interpolates linearly between adjacent
/// sweep points where the false-acceptance and false-rejection rates cross.
EvalReport evaluate_scores(std::span<const double> morph_scores, std::span<const char> is_morph,
                           double threshold = 0.5);
/// Binary nets: the morph score is the softmax output of class 1; targets are one-hot.
EvalReport evaluate(const Network& net, const std::vector<Example>& samples, double threshold = 0.5,
                    int workers = 1);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);
std::vector<unsigned char> serialize_network(const Network& net);
Network deserialize_network(std::span<const unsigned char> bytes);

}  // namespace morphkit::nn
