#include "morphkit/attack.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/error.hpp"
#include "morphkit/random.hpp"

namespace morphkit::attack {

Oracle Oracle::from_network(const Network& net) {
  require(net.head() == nn::Head::Softmax2, Errc::OracleUnavailable, "oracle network needs a binary softmax head");
  return Oracle([&net](const Tensor& x) {
    const Tensor out = net.forward(x);
    return out.values[1] > out.values[0] ? kMorph : kGenuine;
  });
}

Oracle Oracle::mean_threshold(double threshold) {
  return Oracle([threshold](const Tensor& x) {
    double sum = 0.0;
    for (double v : x.values) sum += v;
    return sum / static_cast<double>(x.size()) > threshold ? kMorph : kGenuine;
  });
}

int Oracle::classify(const Tensor& x) {
  require(available(), Errc::OracleUnavailable, "oracle has no classifier");
  ++queries_;
  const int label = fn_(x);
  require(label == kGenuine || label == kMorph, Errc::OracleUnavailable,
          "oracle returned label " + std::to_string(label));
  return label;
}

std::vector<double> input_gradient(const Network& net, const Tensor& x, int label) {
  nn::ForwardCache cache;
  net.forward(x, &cache);
  std::vector<double> target(net.output_size(), 0.0);
  require(label >= 0 && label < static_cast<int>(target.size()), Errc::InvalidArgument, "label out of range");
  target[label] = 1.0;
  std::vector<double> gl;
  nn::loss_and_logit_grad(net, cache, target, nn::Loss::CrossEntropy, gl);
  return net.backward(cache, gl, nullptr, net.logit_layer() + 1);
}

Tensor fgsm_step(const Tensor& x, const std::vector<double>& grad, double epsilon) {
  require(epsilon >= 0.0 && std::isfinite(epsilon), Errc::InvalidArgument, "epsilon must be non-negative");
  require(grad.size() == x.size(), Errc::ShapeMismatch, "gradient size does not match the input");
  Tensor adv(x.shape, x.values);
  const double step = epsilon / 255.0;
  if (step == 0.0) return adv;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x.values[i];
    double a = v;
    if (grad[i] > 0.0) {
      a = std::min(v + step, 1.0);
      while (a - v > step) a = std::nextafter(a, v);
    } else if (grad[i] < 0.0) {
      a = std::max(v - step, 0.0);
      while (v - a > step) a = std::nextafter(a, v);
    }
    // inputs already outside [0, 1] are never pushed further out
    adv.values[i] = (grad[i] > 0.0 && v > 1.0) || (grad[i] < 0.0 && v < 0.0) ? v : a;
  }
  return adv;
}

Tensor fgsm(const Network& net, const Tensor& x, int true_label, double epsilon) {
  if (epsilon == 0.0) return Tensor(x.shape, x.values);
  return fgsm_step(x, input_gradient(net, x, true_label), epsilon);
}

namespace {

int predicted(const Network& net, const Tensor& x) {
  const Tensor out = net.forward(x);
  return static_cast<int>(std::max_element(out.values.begin(), out.values.end()) - out.values.begin());
}

}  // namespace

SubstituteResult train_substitute(Oracle& oracle, const std::vector<Tensor>& seed_set, const Network& architecture,
                                  const SubstituteOptions& o) {
  require(oracle.available(), Errc::OracleUnavailable, "substitute training needs an oracle");
  require(!seed_set.empty(), Errc::EmptyDataset, "substitute training needs a seed set");
  require(architecture.head() == nn::Head::Softmax2, Errc::ShapeMismatch, "substitute needs a binary softmax head");
  require(o.rounds >= 0 && o.lambda >= 0.0, Errc::InvalidArgument, "bad substitute options");

  SubstituteResult res;
  res.net = architecture;
  res.net.init(derive_seed(o.seed, {0x53554253ull}));  // "SUBS"
  std::vector<Tensor> set = seed_set;
  std::vector<int> labels;
  for (int round = 0; round <= o.rounds; ++round) {
    for (std::size_t i = labels.size(); i < set.size(); ++i) labels.push_back(oracle.classify(set[i]));
    std::vector<nn::Example> examples;
    examples.reserve(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
      std::vector<double> t(2, 0.0);
      t[labels[i]] = 1.0;
      examples.push_back({nn::tensor_to_image(set[i]), std::move(t)});
    }
    nn::TrainOptions to = o.train;
    to.seed = derive_seed(o.seed, {static_cast<std::uint64_t>(round)});
    nn::train(res.net, examples, to);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < set.size(); ++i) agree += predicted(res.net, set[i]) == labels[i];
    res.agreement.push_back(static_cast<double>(agree) / static_cast<double>(set.size()));
    if (round == o.rounds) break;

    const std::size_t n = set.size();
    for (std::size_t i = 0; i < n; ++i) {
      // sign of the substitute's Jacobian row for the oracle label
      nn::ForwardCache cache;
      res.net.forward(set[i], &cache);
      std::vector<double> unit(res.net.output_size(), 0.0);
      unit[labels[i]] = 1.0;
      const std::vector<double> g = res.net.backward(cache, unit, nullptr);
      Tensor x(set[i].shape, set[i].values);
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double s = g[k] > 0.0 ? 1.0 : g[k] < 0.0 ? -1.0 : 0.0;
        x.values[k] = std::clamp(x.values[k] + o.lambda * s, 0.0, 1.0);
      }
      set.push_back(std::move(x));
    }
  }
  res.final_set_size = set.size();
  return res;
}

RobustnessCurve blackbox_attack(Oracle& oracle, const Network& substitute, const std::vector<Tensor>& morphs,
                                const std::vector<double>& epsilons) {
  require(!epsilons.empty(), Errc::InvalidArgument, "epsilon list is empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i)
    require(epsilons[i] >= 0.0 && (i == 0 || epsilons[i] > epsilons[i - 1]), Errc::InvalidArgument,
            "epsilons must be non-negative and strictly increasing");
  const long q0 = oracle.queries();
  RobustnessCurve curve;
  std::vector<const Tensor*> detected;
  for (const Tensor& x : morphs) {
    ++curve.screened;
    if (oracle.classify(x) == kMorph) detected.push_back(&x);
  }
  require(!detected.empty(), Errc::NoCorrectlyDetectedMorphs, "the oracle detects none of the morphs");
  curve.attacked = detected.size();
  std::vector<std::vector<double>> grads;
  grads.reserve(detected.size());
  for (const Tensor* x : detected) grads.push_back(input_gradient(substitute, *x, kMorph));
  for (double eps : epsilons) {
    std::size_t still = 0;
    for (std::size_t i = 0; i < detected.size(); ++i)
      still += oracle.classify(fgsm_step(*detected[i], grads[i], eps)) == kMorph;
    curve.points.push_back({eps, static_cast<double>(still) / static_cast<double>(detected.size())});
  }
  curve.queries = oracle.queries() - q0;
  return curve;
}

}  // namespace morphkit::attack
