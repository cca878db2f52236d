#include "morphkit/lrp.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/error.hpp"

namespace morphkit::lrp {

using nn::LayerKind;
using nn::LayerSpec;

RuleAssignment RuleAssignment::standard(const Network& net, double epsilon, int flat_until) {
  const auto& layers = net.layers();
  if (flat_until < 0) {
    flat_until = 0;
    for (std::size_t i = 0; i < layers.size(); ++i)
      if (layers[i].kind == LayerKind::MaxPool) {
        flat_until = static_cast<int>(i);
        break;
      }
  }
  RuleAssignment r;
  r.epsilon = epsilon;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    switch (layers[i].kind) {
      case LayerKind::Conv:
        r.per_layer.push_back(static_cast<int>(i) < flat_until ? Rule::Flat : Rule::AlphaBeta);
        break;
      case LayerKind::FullyConnected:
        r.per_layer.push_back(Rule::Epsilon);
        break;
      default:
        r.per_layer.push_back(Rule::PassThrough);
    }
  }
  return r;
}

void RuleAssignment::validate(const Network& net) const {
  require(per_layer.size() == net.layers().size(), Errc::ShapeMismatch, "one relevance rule per layer");
  require(std::abs(alpha + beta - 1.0) <= 1e-12, Errc::InvalidArgument, "alpha + beta must equal 1");
  require(epsilon >= 0.0, Errc::InvalidArgument, "epsilon must be non-negative");
  for (std::size_t i = 0; i < per_layer.size(); ++i) {
    const LayerKind k = net.layers()[i].kind;
    const Rule r = per_layer[i];
    const bool ok = k == LayerKind::Conv             ? (r == Rule::Flat || r == Rule::AlphaBeta)
                    : k == LayerKind::FullyConnected ? r == Rule::Epsilon
                                                     : r == Rule::PassThrough;
    require(ok, Errc::InvalidArgument, "layer " + std::to_string(i) + ": rule does not fit the layer type");
  }
}

double RelevanceMap::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

namespace {

/// Visits every (output, input, weight) triple of a "same"-padded convolution.
template <class Fn>
void for_each_conv_term(const LayerSpec& s, const std::vector<int>& in_shape, const std::vector<int>& out_shape,
                        Fn&& fn) {
  const int C = in_shape[0], H = in_shape[1], W = in_shape[2];
  const int K = s.kernel, pad = K / 2, st = s.stride, Ho = out_shape[1], Wo = out_shape[2];
  for (int co = 0; co < s.out; ++co)
    for (int ci = 0; ci < C; ++ci)
      for (int ky = 0; ky < K; ++ky)
        for (int kx = 0; kx < K; ++kx) {
          const std::size_t widx = ((static_cast<std::size_t>(co) * C + ci) * K + ky) * K + kx;
          for (int yo = 0; yo < Ho; ++yo) {
            const int y = yo * st + ky - pad;
            if (y < 0 || y >= H) continue;
            for (int xo = 0; xo < Wo; ++xo) {
              const int x = xo * st + kx - pad;
              if (x < 0 || x >= W) continue;
              fn((static_cast<std::size_t>(co) * Ho + yo) * Wo + xo, (static_cast<std::size_t>(ci) * H + y) * W + x,
                 widx);
            }
          }
        }
}

std::vector<double> conv_alpha_beta(const LayerSpec& s, const std::vector<double>& w, const Tensor& in,
                                    const Tensor& out, const std::vector<double>& R, double alpha, double beta) {
  std::vector<double> zp(out.size(), 0.0), zn(out.size(), 0.0);
  for_each_conv_term(s, in.shape, out.shape, [&](std::size_t k, std::size_t j, std::size_t wi) {
    const double z = in.values[j] * w[wi];
    (z > 0.0 ? zp[k] : zn[k]) += z;
  });
  std::vector<double> sp(out.size(), 0.0), sn(out.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (R[k] == 0.0) continue;
    if (zp[k] > 0.0 && zn[k] < 0.0) {
      sp[k] = alpha * R[k] / zp[k];
      sn[k] = beta * R[k] / zn[k];
    } else if (zp[k] > 0.0) {
      sp[k] = R[k] / zp[k];  // no negative part: all relevance follows the positive share
    } else if (zn[k] < 0.0) {
      sn[k] = R[k] / zn[k];
    }
  }
  std::vector<double> Rin(in.size(), 0.0);
  for_each_conv_term(s, in.shape, out.shape, [&](std::size_t k, std::size_t j, std::size_t wi) {
    const double z = in.values[j] * w[wi];
    Rin[j] += z > 0.0 ? z * sp[k] : z * sn[k];
  });
  return Rin;
}

std::vector<double> conv_flat(const LayerSpec& s, const Tensor& in, const Tensor& out, const std::vector<double>& R) {
  std::vector<double> count(out.size(), 0.0);
  for_each_conv_term(s, in.shape, out.shape, [&](std::size_t k, std::size_t, std::size_t) { count[k] += 1.0; });
  // every (input, weight) pair counts once; per output this is C * (in-image taps)
  std::vector<double> Rin(in.size(), 0.0);
  for_each_conv_term(s, in.shape, out.shape, [&](std::size_t k, std::size_t j, std::size_t) {
    if (count[k] > 0.0) Rin[j] += R[k] / count[k];
  });
  return Rin;
}

std::vector<double> fc_epsilon(const LayerSpec& s, const std::vector<double>& w, const Tensor& in,
                               const Tensor& out, const std::vector<double>& R, double eps) {
  std::vector<double> sk(s.out, 0.0);
  for (int k = 0; k < s.out; ++k) {
    const double z = out.values[k];
    sk[k] = R[k] / (z + (z >= 0.0 ? eps : -eps));
  }
  std::vector<double> Rin(in.size(), 0.0);
  for (int j = 0; j < s.in; ++j) {
    const double xj = in.values[j];
    if (xj == 0.0) continue;
    double acc = 0.0;
    for (int k = 0; k < s.out; ++k) acc += w[static_cast<std::size_t>(k) * s.in + j] * sk[k];
    Rin[j] = xj * acc;
  }
  return Rin;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

LrpResult lrp_propagate(const Network& net, const Tensor& x, int class_index, const RuleAssignment& rules,
                        const LrpOptions& options) {
  rules.validate(net);
  require(x.shape.size() == 3, Errc::ShapeMismatch, "relevance maps need an image-shaped input");
  nn::ForwardCache cache;
  const Tensor out = net.forward(x, &cache);
  const int top = net.logit_layer();
  const Tensor& logits = cache.acts[top + 1];
  require(class_index >= 0 && class_index < static_cast<int>(logits.size()), Errc::InvalidArgument,
          "class index out of range");
  LrpResult res;
  res.head_output = out.values[class_index];
  if (options.gate)
    require(res.head_output >= options.gate_threshold, Errc::BelowGate,
            "class output " + std::to_string(res.head_output) + " is below the relevance gate");
  res.output_relevance = logits.values[class_index];

  std::vector<double> R(logits.size(), 0.0);
  R[class_index] = res.output_relevance;
  std::vector<double> totals;
  for (int i = top; i >= 0; --i) {
    const LayerSpec& s = net.layers()[i];
    const Tensor& in = cache.acts[i];
    const Tensor& o = cache.acts[i + 1];
    std::vector<double> Rin;
    switch (s.kind) {
      case LayerKind::ReLU:
      case LayerKind::Flatten:
        Rin = R;
        break;
      case LayerKind::MaxPool:
        Rin.assign(in.size(), 0.0);
        for (std::size_t k = 0; k < o.size(); ++k) Rin[cache.argmax[i][k]] += R[k];
        break;
      case LayerKind::Conv:
        if (rules.per_layer[i] == Rule::Flat) Rin = conv_flat(s, in, o, R);
        else Rin = conv_alpha_beta(s, net.params(i), in, o, R, rules.alpha, rules.beta);
        break;
      case LayerKind::FullyConnected:
        Rin = fc_epsilon(s, net.params(i), in, o, R, rules.epsilon);
        break;
      default:
        fail(Errc::ShapeMismatch, "head layers cannot sit below the logits");
    }
    R = std::move(Rin);
    totals.push_back(sum(R));
  }
  std::reverse(totals.begin(), totals.end());
  res.layer_totals = std::move(totals);

  const int C = x.shape[0], H = x.shape[1], W = x.shape[2];
  res.map.width = W;
  res.map.height = H;
  res.map.values.assign(static_cast<std::size_t>(W) * H, 0.0);
  for (int c = 0; c < C; ++c)
    for (std::size_t p = 0; p < res.map.values.size(); ++p)
      res.map.values[p] += R[static_cast<std::size_t>(c) * W * H + p];
  return res;
}

std::vector<RelevanceMap> mean_adjust(const std::vector<RelevanceMap>& maps) {
  require(!maps.empty(), Errc::EmptyList, "mean_adjust needs at least one map");
  const RelevanceMap& first = maps.front();
  for (const auto& m : maps)
    require(m.width == first.width && m.height == first.height && m.values.size() == first.values.size(),
            Errc::ShapeMismatch, "relevance maps differ in shape");
  std::vector<double> mean(first.values.size(), 0.0);
  for (const auto& m : maps)
    for (std::size_t p = 0; p < mean.size(); ++p) mean[p] += m.values[p];
  for (double& v : mean) v /= static_cast<double>(maps.size());
  std::vector<RelevanceMap> out = maps;
  for (auto& m : out)
    for (std::size_t p = 0; p < mean.size(); ++p) m.values[p] = std::max(m.values[p] - mean[p], 0.0);
  return out;
}

std::array<double, kRegionCount> region_relevance(const RelevanceMap& map, const LandmarkSet& lm) {
  require(lm.image_width == map.width && lm.image_height == map.height, Errc::ShapeMismatch,
          "landmarks do not belong to the relevance map's frame");
  const auto masks = hard_region_masks(lm);
  std::array<double, kRegionCount> f{};
  double total = 0.0;
  for (std::size_t p = 0; p < map.values.size(); ++p) {
    require(map.values[p] >= 0.0, Errc::InvalidArgument, "region_relevance expects a non-negative map");
    for (int r = 0; r < kRegionCount; ++r)
      if (masks[r].weight[p] > 0.0) {
        f[r] += map.values[p];
        total += map.values[p];
      }
  }
  require(total > 0.0, Errc::ZeroRegionRelevance, "no relevance inside the facial regions");
  for (double& v : f) v /= total;
  return f;
}

ImageBuffer relevance_heatmap(const RelevanceMap& map) {
  double peak = 0.0;
  for (double v : map.values) peak = std::max(peak, std::abs(v));
  ImageBuffer img(map.width, map.height, 3, 1.0);
  if (peak == 0.0) return img;
  for (int y = 0; y < map.height; ++y)
    for (int x = 0; x < map.width; ++x) {
      const double t = map.at(x, y) / peak;
      if (t > 0.0) {
        img.at(x, y, 1) = 1.0 - t;
        img.at(x, y, 2) = 1.0 - t;
      } else if (t < 0.0) {
        img.at(x, y, 0) = 1.0 + t;
        img.at(x, y, 1) = 1.0 + t;
      }
    }
  return img;
}

}  // namespace morphkit::lrp
