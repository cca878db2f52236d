#include <cmath>

#include "common/lrp_nets.hpp"
#include "morphkit/lrp.hpp"
#include "morphkit/synth.hpp"
#include "support.hpp"

using namespace morphkit;
using namespace morphkit::nn;
using namespace morphkit::lrp;

namespace {

LrpOptions ungated() {
  LrpOptions o;
  o.gate = false;
  return o;
}

RelevanceMap make_map(int w, int h, std::vector<double> v) { return {w, h, std::move(v)}; }

}  // namespace

TEST_CASE("standard rules follow the layer layout") {
  const Network net = Network::desk_scale(32, 1, Head::Softmax2);
  const RuleAssignment r = RuleAssignment::standard(net);
  REQUIRE(r.per_layer.size() == net.layers().size());
  CHECK(r.per_layer[0] == Rule::Flat);
  CHECK(r.per_layer[1] == Rule::PassThrough);
  CHECK(r.per_layer[3] == Rule::AlphaBeta);
  CHECK(r.per_layer[6] == Rule::AlphaBeta);
  CHECK(r.per_layer[10] == Rule::Epsilon);
  CHECK(r.per_layer[12] == Rule::Epsilon);
  CHECK(r.alpha == 2.0);
  CHECK(r.beta == -1.0);
  CHECK(RuleAssignment::standard(net, 1e-9, 4).per_layer[3] == Rule::Flat);
  r.validate(net);

  RuleAssignment bad = r;
  bad.per_layer.pop_back();
  CHECK_ERRC(bad.validate(net), Errc::ShapeMismatch);
  bad = r;
  bad.beta = -0.5;
  CHECK_ERRC(bad.validate(net), Errc::InvalidArgument);
  bad = r;
  bad.per_layer[10] = Rule::Flat;
  CHECK_ERRC(bad.validate(net), Errc::InvalidArgument);
  bad = r;
  bad.per_layer[1] = Rule::Epsilon;
  CHECK_ERRC(bad.validate(net), Errc::InvalidArgument);
}

TEST_CASE("identity layer puts all relevance on the active input") {
  Network net({1, 1, 3}, {LayerSpec::flatten(), LayerSpec::fc(3, 3), LayerSpec::softmax()});
  net.params(1) = {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0};
  const Tensor x({1, 1, 3}, std::vector<double>{0, 1, 0});
  const LrpResult r = lrp_propagate(net, x, 1, RuleAssignment::standard(net));
  CHECK(r.output_relevance == 1.0);
  CHECK(r.head_output == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 2)));
  CHECK(r.map.width == 3);
  CHECK(r.map.height == 1);
  CHECK(r.map.at(0, 0) == 0.0);
  CHECK(r.map.at(1, 0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.map.at(2, 0) == 0.0);
}

TEST_CASE("relevance gate and argument checks") {
  Network net({1, 1, 2}, {LayerSpec::flatten(), LayerSpec::fc(2, 2), LayerSpec::softmax()});
  net.params(1) = {5, 0, -5, 0, 0, 0};
  const Tensor x({1, 1, 2}, std::vector<double>{1, 0});
  const RuleAssignment rules = RuleAssignment::standard(net);
  CHECK_ERRC(lrp_propagate(net, x, 1, rules), Errc::BelowGate);
  CHECK(lrp_propagate(net, x, 1, rules, ungated()).output_relevance == -5.0);
  CHECK(lrp_propagate(net, x, 0, rules).output_relevance == 5.0);
  CHECK_ERRC(lrp_propagate(net, x, 2, rules), Errc::InvalidArgument);
  Network flat({2}, {LayerSpec::fc(2, 2), LayerSpec::softmax()});
  CHECK_ERRC(lrp_propagate(flat, Tensor({2}), 0, RuleAssignment::standard(flat), ungated()), Errc::ShapeMismatch);
}

TEST_CASE("alpha-beta with only positive contributions keeps the positive share") {
  Network net({1, 3, 3}, {LayerSpec::conv(3, 1, 1, 1), LayerSpec::flatten(), LayerSpec::fc(9, 2),
                          LayerSpec::softmax()});
  Rng rng(1);
  for (int k = 0; k < 9; ++k) net.params(0)[k] = rng.uniform(0.1, 1.0);
  net.params(0)[9] = 0.0;
  for (int k = 0; k < 18; ++k) net.params(2)[k] = k < 9 ? 0.0 : 1.0;
  Tensor x({1, 3, 3});
  for (double& v : x.values) v = rng.uniform(0.1, 1.0);
  RuleAssignment rules = RuleAssignment::standard(net);
  rules.per_layer[0] = Rule::AlphaBeta;
  const LrpResult r = lrp_propagate(net, x, 1, rules);
  CHECK(r.map.total() == doctest::Approx(r.output_relevance).epsilon(1e-9));

  // the same numbers from the alpha = 1, beta = 0 share, computed directly
  ForwardCache c;
  net.forward(x, &c);
  std::vector<double> expect(9, 0.0);
  for (int yo = 0; yo < 3; ++yo)
    for (int xo = 0; xo < 3; ++xo) {
      const double Rk = c.acts[1].values[yo * 3 + xo] * r.output_relevance / c.acts[3].values[1];
      const double zk = c.acts[1].values[yo * 3 + xo];
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx) {
          const int y = yo + ky - 1, xx = xo + kx - 1;
          if (y < 0 || y > 2 || xx < 0 || xx > 2) continue;
          expect[y * 3 + xx] += x.values[y * 3 + xx] * net.params(0)[ky * 3 + kx] / zk * Rk;
        }
    }
  for (int p = 0; p < 9; ++p) CHECK(r.map.values[p] == doctest::Approx(expect[p]).epsilon(1e-6));
}

TEST_CASE("relevance is conserved layer by layer on bias-free nets") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const testing::LrpCase c = testing::random_lrp_case(s);
    for (int cls : {0, 1}) {
      const LrpResult r = lrp_propagate(c.net, c.x, cls, RuleAssignment::standard(c.net, 1e-9), ungated());
      const double scale = std::max(std::abs(r.output_relevance), 1e-12);
      CHECK(std::abs(r.map.total() - r.output_relevance) / scale < 1e-6);
      for (double t : r.layer_totals) CHECK(std::abs(t - r.output_relevance) / scale < 1e-6);
    }
  }
  const testing::LrpCase c = testing::random_lrp_case(3);
  const auto a = lrp_propagate(c.net, c.x, 0, RuleAssignment::standard(c.net), ungated());
  const auto b = lrp_propagate(c.net, c.x, 0, RuleAssignment::standard(c.net), ungated());
  CHECK(a.map.values == b.map.values);
}

TEST_CASE("mean_adjust") {
  const RelevanceMap a = make_map(2, 2, {1, -2, 3, 0.5}), b = make_map(2, 2, {-1, 2, 1, 0.5});
  const auto one = mean_adjust({a});
  for (double v : one[0].values) CHECK(v == 0.0);
  const auto two = mean_adjust({a, b});
  for (int p = 0; p < 4; ++p) {
    CHECK(two[0].values[p] == std::max((a.values[p] - b.values[p]) / 2, 0.0));
    CHECK(two[1].values[p] >= 0.0);
  }
  CHECK_ERRC(mean_adjust({}), Errc::EmptyList);
  CHECK_ERRC(mean_adjust({a, make_map(1, 4, {0, 0, 0, 0})}), Errc::ShapeMismatch);
}

TEST_CASE("region_relevance") {
  Rng rng(4);
  const SyntheticFace f = render_synthetic_face(random_face_params(rng), 64, 64);
  const auto masks = hard_region_masks(f.landmarks);
  RelevanceMap nose = make_map(64, 64, std::vector<double>(64 * 64, 0.0));
  for (std::size_t p = 0; p < nose.values.size(); ++p)
    if (masks[2].weight[p] > 0.0) nose.values[p] = 1.0 + static_cast<double>(p % 5);
  const auto fn = region_relevance(nose, f.landmarks);
  CHECK(fn[0] == 0.0);
  CHECK(fn[1] == 0.0);
  CHECK(fn[2] == 1.0);
  CHECK(fn[3] == 0.0);

  const RelevanceMap flat = make_map(64, 64, std::vector<double>(64 * 64, 0.25));
  const auto fu = region_relevance(flat, f.landmarks);
  std::array<double, 4> area{};
  double all = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (double w : masks[r].weight) area[r] += w > 0.0;
    all += area[r];
  }
  double sum = 0.0;
  for (int r = 0; r < 4; ++r) {
    CHECK(fu[r] == doctest::Approx(area[r] / all).epsilon(1e-12));
    sum += fu[r];
  }
  CHECK(sum == doctest::Approx(1.0));

  CHECK_ERRC(region_relevance(make_map(64, 64, std::vector<double>(64 * 64, 0.0)), f.landmarks),
             Errc::ZeroRegionRelevance);
  RelevanceMap neg = flat;
  neg.values[0] = -1;
  CHECK_ERRC(region_relevance(neg, f.landmarks), Errc::InvalidArgument);
  CHECK_ERRC(region_relevance(make_map(2, 2, {1, 1, 1, 1}), f.landmarks), Errc::ShapeMismatch);
}

TEST_CASE("relevance heatmap colors") {
  const ImageBuffer h = relevance_heatmap(make_map(3, 1, {2, 0, -1}));
  CHECK(h.channels() == 3);
  CHECK(h.at(0, 0, 0) == 1.0);
  CHECK(h.at(0, 0, 1) == 0.0);
  CHECK(h.at(0, 0, 2) == 0.0);
  for (int c = 0; c < 3; ++c) CHECK(h.at(1, 0, c) == 1.0);
  CHECK(h.at(2, 0, 0) == 0.5);
  CHECK(h.at(2, 0, 2) == 1.0);
  const ImageBuffer z = relevance_heatmap(make_map(2, 2, {0, 0, 0, 0}));
  for (double v : z.data()) CHECK(v == 1.0);
}
