#pragma once

#include <array>
#include <vector>

#include "morphkit/landmarks.hpp"
#include "morphkit/nn.hpp"
#include "morphkit/regions.hpp"

namespace morphkit::lrp {

using nn::Network;
using nn::Tensor;

enum class Rule { Epsilon, AlphaBeta, Flat, PassThrough };

/// One rule per layer. Parameter-free layers pass relevance through (ReLU, Flatten) or to the
/// forward winner (MaxPool).
struct RuleAssignment {
  std::vector<Rule> per_layer;
  double epsilon = 1e-9;
  double alpha = 2.0;
  double beta = -1.0;

  /// Fully connected layers use the epsilon rule, convolutions before layer `flat_until` the flat
  /// rule and the remaining convolutions alpha-beta. flat_until = -1 picks the first max-pool.
  static RuleAssignment standard(const Network& net, double epsilon = 1e-9, int flat_until = -1);
  void validate(const Network& net) const;
};

/// Per-pixel relevance at input resolution, summed over channels.
struct RelevanceMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double total() const;
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct LrpOptions {
  bool gate = true;
  double gate_threshold = 0.1;  // minimum head output for the explained class
};

struct LrpResult {
  RelevanceMap map;
  double output_relevance = 0.0;  // the class logit
  double head_output = 0.0;
  std::vector<double> layer_totals;  // relevance entering each layer's input, bottom first
};

/// Starts from the class logit and redistributes it layer by layer down to the input.
LrpResult lrp_propagate(const Network& net, const Tensor& x, int class_index, const RuleAssignment& rules,
                        const LrpOptions& options = {});

/// Subtracts the per-pixel mean over the list from every map and clamps negatives to zero.
std::vector<RelevanceMap> mean_adjust(const std::vector<RelevanceMap>& maps);

/// Share of in-region relevance per region (LeftEye, RightEye, Nose, Mouth) using the hard masks.
std::array<double, kRegionCount> region_relevance(const RelevanceMap& map, const LandmarkSet& lm);

/// Diverging color map: white at zero, red for positive, blue for negative, scaled by the largest
/// magnitude.
ImageBuffer relevance_heatmap(const RelevanceMap& map);

}  // namespace morphkit::lrp
