#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <vector>

#include "morphkit/nn.hpp"

namespace morphkit::attack {

using nn::Network;
using nn::Tensor;

inline constexpr int kGenuine = 0;
inline constexpr int kMorph = 1;

/// Black-box classifier: image -> label (0 genuine, 1 morph). Every call counts as one query.
class Oracle {
 public:
  using Fn = std::function<int(const Tensor&)>;
  Oracle() = default;
  explicit Oracle(Fn fn) : fn_(std::move(fn)) {}

  /// Label of a local binary network (arg max of the softmax head).
  static Oracle from_network(const Network& net);
  /// Toy oracle: morph when the mean intensity exceeds `threshold`.
  static Oracle mean_threshold(double threshold = 0.5);

  int classify(const Tensor& x);
  long queries() const noexcept { return queries_.load(); }
  void reset_queries() noexcept { queries_ = 0; }
  bool available() const noexcept { return static_cast<bool>(fn_); }

 private:
  Fn fn_;
  std::atomic<long> queries_{0};
};

/// Gradient of the cross-entropy loss of `label` with respect to the input.
std::vector<double> input_gradient(const Network& net, const Tensor& x, int label);

/// adv = clamp(x + (epsilon / 255) sign(d loss(label) / dx), 0, 1), with the L-infinity distance
/// to x never exceeding epsilon / 255.
Tensor fgsm(const Network& net, const Tensor& x, int true_label, double epsilon);
/// Same step from a precomputed input gradient.
Tensor fgsm_step(const Tensor& x, const std::vector<double>& grad, double epsilon);

struct SubstituteOptions {
  int rounds = 3;
  double lambda = 0.1;  // Jacobian augmentation step on [0, 1] intensities
  nn::TrainOptions train;
  std::uint64_t seed = 0;
};

struct SubstituteResult {
  Network net;
  std::vector<double> agreement;  // per round, on the set the substitute was trained on
  std::size_t final_set_size = 0;
};

/// Labels the set through the oracle, trains the substitute on the labels and doubles the set with
/// x + lambda sign(d substitute score(label) / dx); repeated rounds + 1 times without the last
/// augmentation. `architecture` supplies the layer layout; its parameters are re-initialized.
SubstituteResult train_substitute(Oracle& oracle, const std::vector<Tensor>& seed_set, const Network& architecture,
                                  const SubstituteOptions& options);

struct CurvePoint {
  double epsilon;
  double detected;
};

struct RobustnessCurve {
  std::vector<CurvePoint> points;
  std::size_t screened = 0;  // inputs checked at epsilon 0
  std::size_t attacked = 0;  // morphs the oracle detected, used for every epsilon
  long queries = 0;          // screened + attacked * |epsilons|
};

inline const std::vector<double> kDefaultEpsilons = {0, 1, 2, 3, 4, 6, 8, 12, 16};

/// Screens `morphs` once through the oracle, then for each epsilon crafts FGSM examples on the
/// substitute (pushing towards the genuine class) and records the fraction still detected.
RobustnessCurve blackbox_attack(Oracle& oracle, const Network& substitute, const std::vector<Tensor>& morphs,
                                const std::vector<double>& epsilons = kDefaultEpsilons);

}  // namespace morphkit::attack
