#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "morphkit/nn.hpp"
#include "morphkit/random.hpp"

namespace testing {

struct GradCheck {
  double worst = 0.0;        // largest relative error over parameters and inputs
  std::size_t checked = 0;
  std::string where;         // location of the worst entry
};

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
  return std::abs(a - b) / scale;
}

/// Compares backpropagated gradients of the loss with central differences.
inline GradCheck gradient_check(morphkit::nn::Network net, morphkit::nn::Tensor x, const std::vector<double>& target,
                                morphkit::nn::Loss loss, double h = 1e-4) {
  using namespace morphkit::nn;
  auto value = [&](const Network& n, const Tensor& in) {
    ForwardCache c;
    n.forward(in, &c);
    std::vector<double> g;
    return loss_and_logit_grad(n, c, target, loss, g);
  };
  ForwardCache cache;
  net.forward(x, &cache);
  std::vector<double> gl;
  loss_and_logit_grad(net, cache, target, loss, gl);
  Gradients grads = net.zero_gradients();
  const std::vector<double> gx = net.backward(cache, gl, &grads, net.logit_layer() + 1, 0);

  GradCheck r;
  auto note = [&](double analytic, double numeric, const std::string& where) {
    const double e = relative_error(analytic, numeric);
    ++r.checked;
    if (e > r.worst) {
      r.worst = e;
      r.where = where;
    }
  };
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    auto& p = net.params(static_cast<int>(i));
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double keep = p[j];
      p[j] = keep + h;
      const double up = value(net, x);
      p[j] = keep - h;
      const double down = value(net, x);
      p[j] = keep;
      note(grads[i][j], (up - down) / (2 * h),
           std::string(layer_kind_name(net.layers()[i].kind)) + " layer " + std::to_string(i) + " param " +
               std::to_string(j));
    }
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    Tensor xp = x, xm = x;
    xp.values[j] += h;
    xm.values[j] -= h;
    note(gx[j], (value(net, xp) - value(net, xm)) / (2 * h), "input " + std::to_string(j));
  }
  return r;
}

/// Every parameter and input drawn from U(-scale, scale).
inline void randomize(morphkit::nn::Network& net, morphkit::nn::Tensor& x, std::uint64_t seed, double scale = 0.5) {
  morphkit::Rng rng(seed);
  for (auto& p : net.all_params())
    for (double& v : p) v = rng.uniform(-scale, scale);
  for (double& v : x.values) v = rng.uniform(0.0, 1.0);
}

/// Nets that together contain every layer kind: strided and unit-stride convolutions, ReLU,
/// max pooling, flatten, fully connected layers and both heads.
inline std::vector<std::pair<std::string, morphkit::nn::Network>> gradient_check_nets() {
  using namespace morphkit::nn;
  std::vector<std::pair<std::string, Network>> nets;
  {
    std::vector<LayerSpec> layers{LayerSpec::conv(3, 1, 2, 3), LayerSpec::relu(), LayerSpec::maxpool(),
                                  LayerSpec::conv(3, 2, 3, 2), LayerSpec::flatten()};
    const std::size_t flat = Tensor::count(Network({2, 7, 7}, layers).shape_after(4));
    layers.push_back(LayerSpec::fc(static_cast<int>(flat), 5));
    layers.push_back(LayerSpec::relu());
    layers.push_back(LayerSpec::fc(5, 2));
    layers.push_back(LayerSpec::softmax());
    Network n({2, 7, 7}, layers);
    n.set_input_offset(0.5);
    nets.emplace_back("conv-relu-pool-conv/2-fc-relu-fc-softmax", n);
  }
  {
    std::vector<LayerSpec> layers{LayerSpec::conv(5, 1, 1, 2), LayerSpec::flatten(), LayerSpec::fc(72, 4),
                                  LayerSpec::sigmoid()};
    nets.emplace_back("conv5-fc-sigmoid", Network({1, 6, 6}, layers));
  }
  nets.emplace_back("fc-relu-fc-relu-fc-softmax",
                    Network({6}, {LayerSpec::fc(6, 5), LayerSpec::relu(), LayerSpec::fc(5, 4), LayerSpec::relu(),
                                  LayerSpec::fc(4, 2), LayerSpec::softmax()}));
  return nets;
}

/// Worst relative error over the nets of gradient_check_nets.
inline GradCheck gradient_check_all(std::uint64_t seed = 1) {
  using namespace morphkit::nn;
  GradCheck all;
  for (auto& [name, net] : gradient_check_nets()) {
    Tensor x(net.input_shape());
    randomize(net, x, seed);
    const bool sigmoid = net.layers().back().kind == LayerKind::SigmoidVector;
    const std::vector<double> target =
        sigmoid ? std::vector<double>{1, 0, 1, 0} : std::vector<double>{0.3, 0.7};
    const GradCheck g = gradient_check(net, x, target, sigmoid ? Loss::MultilabelBce : Loss::CrossEntropy);
    all.checked += g.checked;
    if (g.worst >= all.worst) {
      all.worst = g.worst;
      all.where = name + ": " + g.where;
    }
  }
  return all;
}

}  // namespace testing
