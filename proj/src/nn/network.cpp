#include <algorithm>
#include <cmath>
#include <numeric>

#include "morphkit/error.hpp"
#include "morphkit/nn.hpp"
#include "morphkit/random.hpp"
#include "morphkit/simd/kernels.hpp"

namespace morphkit::nn {

std::string_view layer_kind_name(LayerKind k) noexcept {
  switch (k) {
    case LayerKind::Conv: return "conv";
    case LayerKind::ReLU: return "relu";
    case LayerKind::MaxPool: return "maxpool";
    case LayerKind::Flatten: return "flatten";
    case LayerKind::FullyConnected: return "fc";
    case LayerKind::Softmax: return "softmax";
    case LayerKind::SigmoidVector: return "sigmoid";
  }
  return "?";
}

namespace {

int conv_out_dim(int n, int stride) { return (n + stride - 1) / stride; }

std::size_t param_size(const LayerSpec& s) {
  switch (s.kind) {
    case LayerKind::Conv:
      return static_cast<std::size_t>(s.out) * s.in * s.kernel * s.kernel + s.out;
    case LayerKind::FullyConnected:
      return static_cast<std::size_t>(s.out) * s.in + s.out;
    default:
      return 0;
  }
}

// ---- convolution ----

void conv_forward(const LayerSpec& s, const std::vector<double>& p, const Tensor& in, Tensor& out) {
  const int C = in.shape[0], H = in.shape[1], W = in.shape[2];
  const int K = s.kernel, pad = K / 2, st = s.stride;
  const int Ho = out.shape[1], Wo = out.shape[2];
  const double* bias = p.data() + static_cast<std::size_t>(s.out) * C * K * K;
  const auto& kern = simd::active();
  for (int co = 0; co < s.out; ++co) {
    double* o = out.values.data() + static_cast<std::size_t>(co) * Ho * Wo;
    std::fill(o, o + static_cast<std::size_t>(Ho) * Wo, bias[co]);
    for (int ci = 0; ci < C; ++ci) {
      const double* src = in.values.data() + static_cast<std::size_t>(ci) * H * W;
      const double* w = p.data() + (static_cast<std::size_t>(co) * C + ci) * K * K;
      for (int ky = 0; ky < K; ++ky)
        for (int kx = 0; kx < K; ++kx) {
          const double wv = w[ky * K + kx];
          const int dy = ky - pad, dx = kx - pad;
          if (st == 1) {
            const int x0 = std::max(0, -dx), x1 = std::min(W, W - dx);
            if (x1 <= x0) continue;
            for (int y = std::max(0, -dy); y < std::min(H, H - dy); ++y)
              kern.axpy(wv, src + static_cast<std::size_t>(y + dy) * W + x0 + dx, o + static_cast<std::size_t>(y) * Wo + x0,
                        x1 - x0);
          } else {
            for (int yo = 0; yo < Ho; ++yo) {
              const int y = yo * st + dy;
              if (y < 0 || y >= H) continue;
              for (int xo = 0; xo < Wo; ++xo) {
                const int x = xo * st + dx;
                if (x < 0 || x >= W) continue;
                double& acc = o[static_cast<std::size_t>(yo) * Wo + xo];
                acc = std::fma(wv, src[static_cast<std::size_t>(y) * W + x], acc);
              }
            }
          }
        }
    }
  }
}

void conv_backward(const LayerSpec& s, const std::vector<double>& p, const Tensor& in, const Tensor& out,
                   const std::vector<double>& g, std::vector<double>* gin, std::vector<double>* gp) {
  const int C = in.shape[0], H = in.shape[1], W = in.shape[2];
  const int K = s.kernel, pad = K / 2, st = s.stride;
  const int Ho = out.shape[1], Wo = out.shape[2];
  const auto& kern = simd::active();
  const std::size_t wsize = static_cast<std::size_t>(s.out) * C * K * K;
  for (int co = 0; co < s.out; ++co) {
    const double* go = g.data() + static_cast<std::size_t>(co) * Ho * Wo;
    if (gp) {
      double sum = 0.0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(Ho) * Wo; ++i) sum += go[i];
      (*gp)[wsize + co] += sum;
    }
    for (int ci = 0; ci < C; ++ci) {
      const double* src = in.values.data() + static_cast<std::size_t>(ci) * H * W;
      double* gsrc = gin ? gin->data() + static_cast<std::size_t>(ci) * H * W : nullptr;
      const std::size_t wbase = (static_cast<std::size_t>(co) * C + ci) * K * K;
      for (int ky = 0; ky < K; ++ky)
        for (int kx = 0; kx < K; ++kx) {
          const double wv = p[wbase + ky * K + kx];
          const int dy = ky - pad, dx = kx - pad;
          double gw = 0.0;
          if (st == 1) {
            const int x0 = std::max(0, -dx), x1 = std::min(W, W - dx);
            if (x1 <= x0) continue;
            for (int y = std::max(0, -dy); y < std::min(H, H - dy); ++y) {
              const double* grow = go + static_cast<std::size_t>(y) * Wo + x0;
              const std::size_t off = static_cast<std::size_t>(y + dy) * W + x0 + dx;
              if (gp) gw += kern.dot(grow, src + off, x1 - x0);
              if (gsrc) kern.axpy(wv, grow, gsrc + off, x1 - x0);
            }
          } else {
            for (int yo = 0; yo < Ho; ++yo) {
              const int y = yo * st + dy;
              if (y < 0 || y >= H) continue;
              for (int xo = 0; xo < Wo; ++xo) {
                const int x = xo * st + dx;
                if (x < 0 || x >= W) continue;
                const double gv = go[static_cast<std::size_t>(yo) * Wo + xo];
                const std::size_t off = static_cast<std::size_t>(y) * W + x;
                gw += gv * src[off];
                if (gsrc) gsrc[off] += wv * gv;
              }
            }
          }
          if (gp) (*gp)[wbase + ky * K + kx] += gw;
        }
    }
  }
}

// ---- fully connected ----

void fc_forward(const LayerSpec& s, const std::vector<double>& p, const Tensor& in, Tensor& out) {
  const auto& kern = simd::active();
  const double* bias = p.data() + static_cast<std::size_t>(s.out) * s.in;
  for (int k = 0; k < s.out; ++k)
    out.values[k] = bias[k] + kern.dot(p.data() + static_cast<std::size_t>(k) * s.in, in.values.data(), s.in);
}

void fc_backward(const LayerSpec& s, const std::vector<double>& p, const Tensor& in, const std::vector<double>& g,
                 std::vector<double>* gin, std::vector<double>* gp) {
  const auto& kern = simd::active();
  const std::size_t wsize = static_cast<std::size_t>(s.out) * s.in;
  for (int k = 0; k < s.out; ++k) {
    const double gk = g[k];
    if (gk == 0.0) continue;
    if (gin) kern.axpy(gk, p.data() + static_cast<std::size_t>(k) * s.in, gin->data(), s.in);
    if (gp) {
      kern.axpy(gk, in.values.data(), gp->data() + static_cast<std::size_t>(k) * s.in, s.in);
      (*gp)[wsize + k] += gk;
    }
  }
}

}  // namespace

Network::Network(std::vector<int> input_shape, std::vector<LayerSpec> layers)
    : input_shape_(std::move(input_shape)), layers_(std::move(layers)) {
  build_shapes();
  params_.resize(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) params_[i].assign(param_size(layers_[i]), 0.0);
}

void Network::build_shapes() {
  require(!input_shape_.empty() && Tensor::count(input_shape_) > 0, Errc::ShapeMismatch, "empty input shape");
  shapes_.clear();
  std::vector<int> cur = input_shape_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& s = layers_[i];
    const std::string where = "layer " + std::to_string(i) + " (" + std::string(layer_kind_name(s.kind)) + ")";
    switch (s.kind) {
      case LayerKind::Conv:
        require(cur.size() == 3 && cur[0] == s.in, Errc::ShapeMismatch, where + ": input channel mismatch");
        require(s.kernel >= 1 && s.kernel % 2 == 1 && s.stride >= 1 && s.out >= 1, Errc::ShapeMismatch,
                where + ": bad kernel/stride/channels");
        cur = {s.out, conv_out_dim(cur[1], s.stride), conv_out_dim(cur[2], s.stride)};
        break;
      case LayerKind::MaxPool:
        require(cur.size() == 3 && cur[1] >= 2 && cur[2] >= 2, Errc::ShapeMismatch, where + ": input too small");
        cur = {cur[0], cur[1] / 2, cur[2] / 2};
        break;
      case LayerKind::Flatten:
        cur = {static_cast<int>(Tensor::count(cur))};
        break;
      case LayerKind::FullyConnected:
        require(cur.size() == 1 && cur[0] == s.in && s.out >= 1, Errc::ShapeMismatch,
                where + ": expects a flat input of " + std::to_string(s.in));
        cur = {s.out};
        break;
      case LayerKind::Softmax:
      case LayerKind::SigmoidVector:
        require(cur.size() == 1 && i + 1 == layers_.size(), Errc::ShapeMismatch, where + ": heads come last");
        break;
      case LayerKind::ReLU:
        break;
    }
    shapes_.push_back(cur);
  }
}

Network Network::desk_scale(int input_size, int channels, Head head, int conv_channels, int hidden, int blocks) {
  require(input_size >= (1 << blocks) && channels >= 1 && conv_channels >= 1 && hidden >= 1 && blocks >= 1,
          Errc::ShapeMismatch, "desk_scale: bad architecture parameters");
  std::vector<LayerSpec> l;
  int c = channels, s = input_size;
  for (int b = 0; b < blocks; ++b) {
    l.push_back(LayerSpec::conv(3, 1, c, conv_channels));
    l.push_back(LayerSpec::relu());
    l.push_back(LayerSpec::maxpool());
    c = conv_channels;
    s /= 2;
  }
  l.push_back(LayerSpec::flatten());
  l.push_back(LayerSpec::fc(c * s * s, hidden));
  l.push_back(LayerSpec::relu());
  if (head == Head::Sigmoid4) {
    l.push_back(LayerSpec::fc(hidden, 4));
    l.push_back(LayerSpec::sigmoid());
  } else {
    l.push_back(LayerSpec::fc(hidden, 2));
    if (head == Head::Softmax2) l.push_back(LayerSpec::softmax());
  }
  Network net({channels, input_size, input_size}, std::move(l));
  net.set_input_offset(0.5);
  return net;
}

void Network::init_layer(int layer, std::uint64_t seed) {
  const LayerSpec& s = layers_[layer];
  std::vector<double>& p = params_[layer];
  if (p.empty()) return;
  const int fan_in = s.kind == LayerKind::Conv ? s.in * s.kernel * s.kernel : s.in;
  const std::size_t nw = p.size() - static_cast<std::size_t>(s.out);
  const double bound = std::sqrt(6.0 / fan_in);
  Rng rng(seed);
  for (std::size_t i = 0; i < nw; ++i) p[i] = rng.uniform(-bound, bound);
  std::fill(p.begin() + static_cast<std::ptrdiff_t>(nw), p.end(), 0.0);
}

void Network::init(std::uint64_t seed) {
  for (std::size_t i = 0; i < layers_.size(); ++i) init_layer(static_cast<int>(i), derive_seed(seed, {i}));
}

const std::vector<int>& Network::shape_after(int i) const { return i < 0 ? input_shape_ : shapes_.at(i); }

std::size_t Network::output_size() const { return Tensor::count(shapes_.empty() ? input_shape_ : shapes_.back()); }

Head Network::head() const {
  if (layers_.empty()) return Head::None;
  if (layers_.back().kind == LayerKind::Softmax && output_size() == 2) return Head::Softmax2;
  if (layers_.back().kind == LayerKind::SigmoidVector && output_size() == 4) return Head::Sigmoid4;
  return Head::None;
}

int Network::logit_layer() const {
  const int n = static_cast<int>(layers_.size());
  if (n > 0 && (layers_.back().kind == LayerKind::Softmax || layers_.back().kind == LayerKind::SigmoidVector))
    return n - 2;
  return n - 1;
}

Gradients Network::zero_gradients() const {
  Gradients g(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) g[i].assign(params_[i].size(), 0.0);
  return g;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.size();
  return n;
}

std::vector<int> Network::fc_layers() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < layers_.size(); ++i)
    if (layers_[i].kind == LayerKind::FullyConnected) out.push_back(static_cast<int>(i));
  return out;
}

void Network::replace_tail(int index, std::vector<LayerSpec> tail) {
  require(index >= 0 && index <= static_cast<int>(layers_.size()), Errc::ShapeMismatch, "replace_tail: bad index");
  layers_.resize(index);
  params_.resize(index);
  for (LayerSpec& s : tail) {
    params_.emplace_back(param_size(s), 0.0);
    layers_.push_back(s);
  }
  build_shapes();
}

Tensor Network::forward(const Tensor& input, ForwardCache* cache) const {
  require(input.shape == input_shape_, Errc::ShapeMismatch, "input shape does not match the network");
  input.validate();
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.acts.assign(layers_.size() + 1, Tensor());
  c.argmax.assign(layers_.size(), {});
  c.acts[0] = Tensor(input.shape, input.values);
  if (input_offset_ != 0.0)
    for (double& v : c.acts[0].values) v -= input_offset_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& s = layers_[i];
    const Tensor& in = c.acts[i];
    Tensor out(shapes_[i]);
    switch (s.kind) {
      case LayerKind::Conv:
        conv_forward(s, params_[i], in, out);
        break;
      case LayerKind::ReLU:
        for (std::size_t k = 0; k < in.size(); ++k) out.values[k] = in.values[k] > 0.0 ? in.values[k] : 0.0;
        break;
      case LayerKind::MaxPool: {
        const int C = in.shape[0], H = in.shape[1], W = in.shape[2];
        const int Ho = out.shape[1], Wo = out.shape[2];
        std::vector<int>& am = c.argmax[i];
        am.resize(out.size());
        for (int ch = 0; ch < C; ++ch)
          for (int yo = 0; yo < Ho; ++yo)
            for (int xo = 0; xo < Wo; ++xo) {
              int best = (ch * H + 2 * yo) * W + 2 * xo;
              for (int d = 1; d < 4; ++d) {
                const int idx = (ch * H + 2 * yo + d / 2) * W + 2 * xo + d % 2;
                if (in.values[idx] > in.values[best]) best = idx;
              }
              const std::size_t o = (static_cast<std::size_t>(ch) * Ho + yo) * Wo + xo;
              am[o] = best;
              out.values[o] = in.values[best];
            }
        break;
      }
      case LayerKind::Flatten:
        out.values = in.values;
        break;
      case LayerKind::FullyConnected:
        fc_forward(s, params_[i], in, out);
        break;
      case LayerKind::Softmax: {
        const double m = *std::max_element(in.values.begin(), in.values.end());
        double sum = 0.0;
        for (std::size_t k = 0; k < in.size(); ++k) sum += out.values[k] = std::exp(in.values[k] - m);
        for (double& v : out.values) v /= sum;
        break;
      }
      case LayerKind::SigmoidVector:
        for (std::size_t k = 0; k < in.size(); ++k) {
          const double z = in.values[k];
          out.values[k] = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        }
        break;
    }
    c.acts[i + 1] = std::move(out);
  }
  return c.acts.back();
}

std::vector<double> Network::backward(const ForwardCache& cache, std::span<const double> grad_out, Gradients* grads,
                                      int top, int bottom) const {
  const int n = static_cast<int>(layers_.size());
  if (top < 0) top = n;
  require(!cache.empty() && cache.acts.size() == layers_.size() + 1, Errc::NoForwardCache,
          "backward needs the cache of a forward pass through this network");
  require(top >= bottom && bottom >= 0 && top <= n, Errc::ShapeMismatch, "backward: bad layer range");
  require(grad_out.size() == cache.acts[top].size(), Errc::ShapeMismatch, "backward: gradient size mismatch");
  if (grads) require(grads->size() == params_.size(), Errc::ShapeMismatch, "backward: gradient buffer mismatch");
  std::vector<double> g(grad_out.begin(), grad_out.end());
  for (int i = top - 1; i >= bottom; --i) {
    const LayerSpec& s = layers_[i];
    const Tensor& in = cache.acts[i];
    const Tensor& out = cache.acts[i + 1];
    std::vector<double>* gp = grads ? &(*grads)[i] : nullptr;
    const bool need_input = i > bottom || bottom == 0;  // the input gradient of a cut-off stack is unused
    std::vector<double> gin;
    switch (s.kind) {
      case LayerKind::Conv:
        gin.assign(in.size(), 0.0);
        conv_backward(s, params_[i], in, out, g, need_input ? &gin : nullptr, gp);
        break;
      case LayerKind::ReLU:
        gin.resize(in.size());
        for (std::size_t k = 0; k < in.size(); ++k) gin[k] = in.values[k] > 0.0 ? g[k] : 0.0;
        break;
      case LayerKind::MaxPool:
        gin.assign(in.size(), 0.0);
        for (std::size_t o = 0; o < out.size(); ++o) gin[cache.argmax[i][o]] += g[o];
        break;
      case LayerKind::Flatten:
        gin = g;
        break;
      case LayerKind::FullyConnected:
        gin.assign(in.size(), 0.0);
        fc_backward(s, params_[i], in, g, need_input ? &gin : nullptr, gp);
        break;
      case LayerKind::Softmax: {
        double dotp = 0.0;
        for (std::size_t k = 0; k < out.size(); ++k) dotp += g[k] * out.values[k];
        gin.resize(out.size());
        for (std::size_t k = 0; k < out.size(); ++k) gin[k] = out.values[k] * (g[k] - dotp);
        break;
      }
      case LayerKind::SigmoidVector:
        gin.resize(out.size());
        for (std::size_t k = 0; k < out.size(); ++k) gin[k] = g[k] * out.values[k] * (1.0 - out.values[k]);
        break;
    }
    g = std::move(gin);
  }
  return g;
}

}  // namespace morphkit::nn
