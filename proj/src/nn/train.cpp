#include <algorithm>
#include <cmath>
#include <numeric>

#include "morphkit/error.hpp"
#include "morphkit/nn.hpp"
#include "morphkit/random.hpp"
#include "morphkit/parallel.hpp"

namespace morphkit::nn {

double loss_and_logit_grad(const Network& net, const ForwardCache& cache, std::span<const double> target, Loss loss,
                           std::vector<double>& grad_logits) {
  require(!cache.empty() && cache.acts.size() == net.layers().size() + 1, Errc::NoForwardCache,
          "loss needs a forward pass");
  const Tensor& logits = cache.acts[net.logit_layer() + 1];
  const Tensor& out = cache.acts.back();
  require(target.size() == out.size(), Errc::ShapeMismatch, "target size does not match the network output");
  grad_logits.assign(logits.size(), 0.0);
  double l = 0.0;
  if (loss == Loss::CrossEntropy) {
    require(net.layers().back().kind == LayerKind::Softmax, Errc::ShapeMismatch, "cross-entropy needs a softmax head");
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (target[k] != 0.0) l -= target[k] * std::log(std::max(out.values[k], 1e-300));
      grad_logits[k] = out.values[k] - target[k];
    }
  } else {
    require(net.layers().back().kind == LayerKind::SigmoidVector, Errc::ShapeMismatch,
            "multilabel loss needs a sigmoid head");
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double z = logits.values[k], y = target[k];
      l += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
      grad_logits[k] = out.values[k] - y;
    }
  }
  return l;
}

Tensor example_input(const Network& net, const ImageBuffer& img, int dx, int dy) {
  const auto& s = net.input_shape();
  require(s.size() == 3 && s[0] == img.channels(), Errc::ShapeMismatch, "image channels do not match the network input");
  const int x0 = (img.width() - s[2]) / 2 + dx, y0 = (img.height() - s[1]) / 2 + dy;
  return image_to_tensor(img, x0, y0, s[2], s[1]);
}

TrainReport train(Network& net, const std::vector<Example>& samples, const TrainOptions& o) {
  require(!samples.empty(), Errc::EmptyDataset, "train: no samples");
  require(o.batch >= 1 && o.epochs >= 0 && o.max_shift >= 0, Errc::InvalidArgument, "train: bad options");
  const int L = static_cast<int>(net.layers().size());
  std::vector<double> lr(L, o.lr);
  if (!o.layer_lr.empty()) {
    require(static_cast<int>(o.layer_lr.size()) == L, Errc::InvalidArgument, "train: one learning rate per layer");
    lr = o.layer_lr;
  }
  int bottom = L;
  for (int i = 0; i < L; ++i)
    if (lr[i] != 0.0 && !net.params(i).empty()) {
      bottom = i;
      break;
    }
  const int top = net.logit_layer() + 1;
  bottom = std::min(bottom, top);

  Gradients velocity = net.zero_gradients();
  TrainReport report;
  const std::size_t n = samples.size();
  for (int epoch = 0; epoch < o.epochs; ++epoch) {
    Rng rng(derive_seed(o.seed, {0x45504f4348ull, static_cast<std::uint64_t>(epoch)}));  // "EPOCH"
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<std::array<int, 2>> shift(n, {0, 0});
    if (o.max_shift > 0)
      for (auto& s : shift)
        for (int& v : s) v = static_cast<int>(rng.below(2 * o.max_shift + 1)) - o.max_shift;

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += o.batch) {
      const std::size_t m = std::min<std::size_t>(o.batch, n - start);
      std::vector<Gradients> per(m);
      std::vector<double> losses(m);
      parallel_for(m, o.workers, [&](std::size_t k) {
        const Example& ex = samples[order[start + k]];
        Gradients& g = per[k];
        g.resize(L);
        for (int i = bottom; i < L; ++i) g[i].assign(net.params(i).size(), 0.0);
        ForwardCache cache;
        net.forward(example_input(net, ex.image, shift[start + k][0], shift[start + k][1]), &cache);
        std::vector<double> gl;
        losses[k] = loss_and_logit_grad(net, cache, ex.target, o.loss, gl);
        net.backward(cache, gl, &g, top, bottom);
      });
      for (std::size_t k = 0; k < m; ++k) epoch_loss += losses[k];
      // fixed-order reduction keeps the update independent of the worker count
      for (int i = bottom; i < L; ++i) {
        if (lr[i] == 0.0 || net.params(i).empty()) continue;
        std::vector<double>& p = net.params(i);
        std::vector<double>& v = velocity[i];
        for (std::size_t j = 0; j < p.size(); ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k < m; ++k) g += per[k][i][j];
          v[j] = o.momentum * v[j] - lr[i] * (g / static_cast<double>(m));
          p[j] += v[j];
        }
      }
    }
    report.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
  }
  return report;
}

TrainReport retrain_head(Network& net, const std::vector<Example>& binary_samples, double lr_last,
                         double lr_second_last, TrainOptions options) {
  const std::vector<int> fcs = net.fc_layers();
  require(fcs.size() >= 2, Errc::TooFewFCLayers, "retrain_head needs at least two fully connected layers");
  const int last = fcs.back();
  const int nin = net.layers()[last].in;
  net.replace_tail(last, {LayerSpec::fc(nin, 2), LayerSpec::softmax()});
  net.init_layer(last, derive_seed(options.seed, {0x48454144ull}));  // "HEAD"
  options.loss = Loss::CrossEntropy;
  options.layer_lr.assign(net.layers().size(), 0.0);
  options.layer_lr[last] = lr_last;
  options.layer_lr[fcs[fcs.size() - 2]] = lr_second_last;
  return train(net, binary_samples, options);
}

std::vector<std::vector<double>> predict(const Network& net, const std::vector<Example>& samples, int workers) {
  std::vector<std::vector<double>> out(samples.size());
  parallel_for(samples.size(), workers,
                       [&](std::size_t i) { out[i] = net.forward(example_input(net, samples[i].image)).values; });
  return out;
}

}  // namespace morphkit::nn
