#include <algorithm>
#include <limits>

#include "morphkit/error.hpp"
#include "morphkit/nn.hpp"

namespace morphkit::nn {

EvalReport evaluate_scores(std::span<const double> scores, std::span<const char> is_morph, double threshold) {
  require(scores.size() == is_morph.size(), Errc::ShapeMismatch, "evaluate: one label per score");
  EvalReport r;
  r.threshold = threshold;
  for (char m : is_morph) (m ? r.morphs : r.genuine)++;
  require(r.genuine > 0 && r.morphs > 0, Errc::EmptyDataset, "evaluate needs genuine and morph samples");

  auto rates = [&](double t) {
    std::size_t gen_ok = 0, morph_ok = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool says_morph = scores[i] >= t;
      if (is_morph[i]) morph_ok += says_morph;
      else gen_ok += !says_morph;
    }
    return SweepPoint{t, static_cast<double>(gen_ok) / r.genuine, static_cast<double>(morph_ok) / r.morphs};
  };
  const SweepPoint at = rates(threshold);
  r.true_positive_rate = at.tpr;
  r.true_negative_rate = at.tnr;

  std::vector<double> ts(scores.begin(), scores.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  ts.push_back(std::numeric_limits<double>::infinity());
  for (double t : ts) r.curve.push_back(rates(t));

  // false acceptance (morph accepted) rises with the threshold, false rejection falls
  auto far = [](const SweepPoint& p) { return 1.0 - p.tnr; };
  auto frr = [](const SweepPoint& p) { return 1.0 - p.tpr; };
  r.eer = 0.5 * (far(r.curve.back()) + frr(r.curve.back()));
  for (std::size_t k = 0; k < r.curve.size(); ++k) {
    const double dk = far(r.curve[k]) - frr(r.curve[k]);
    if (dk < 0.0) continue;
    if (dk == 0.0 || k == 0) {
      r.eer = 0.5 * (far(r.curve[k]) + frr(r.curve[k]));
      break;
    }
    const double dp = far(r.curve[k - 1]) - frr(r.curve[k - 1]);
    const double lam = -dp / (dk - dp);
    r.eer = far(r.curve[k - 1]) + lam * (far(r.curve[k]) - far(r.curve[k - 1]));
    break;
  }
  return r;
}

EvalReport evaluate(const Network& net, const std::vector<Example>& samples, double threshold, int workers) {
  require(!samples.empty(), Errc::EmptyDataset, "evaluate: no samples");
  require(net.head() == Head::Softmax2, Errc::ShapeMismatch, "evaluate needs a binary softmax head");
  const auto out = predict(net, samples, workers);
  std::vector<double> scores;
  std::vector<char> morph;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(samples[i].target.size() == 2, Errc::ShapeMismatch, "evaluate needs one-hot binary targets");
    scores.push_back(out[i][1]);
    morph.push_back(samples[i].target[1] > 0.5);
  }
  return evaluate_scores(scores, morph, threshold);
}

}  // namespace morphkit::nn
