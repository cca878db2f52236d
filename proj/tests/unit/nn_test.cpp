#include <cmath>
#include <fstream>

#include "common/gradcheck.hpp"
#include "morphkit/nn.hpp"
#include "support.hpp"

using namespace morphkit;
using namespace morphkit::nn;

namespace {

double conv_direct(const LayerSpec& s, const std::vector<double>& p, const Tensor& in, int co, int yo, int xo) {
  const int C = in.shape[0], H = in.shape[1], W = in.shape[2], K = s.kernel;
  double acc = p[static_cast<std::size_t>(s.out) * C * K * K + co];
  for (int ci = 0; ci < C; ++ci)
    for (int ky = 0; ky < K; ++ky)
      for (int kx = 0; kx < K; ++kx) {
        const int y = yo * s.stride + ky - K / 2, x = xo * s.stride + kx - K / 2;
        if (y < 0 || y >= H || x < 0 || x >= W) continue;
        acc += p[((co * C + ci) * K + ky) * K + kx] * in.values[(ci * H + y) * W + x];
      }
  return acc;
}

// Two Gaussian blobs in the first two channels; the third is constant.
std::vector<Example> toy_points(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Example> out;
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    const double c = label ? 0.75 : 0.25;
    ImageBuffer img(1, 1, 3, 0.5);
    img.at(0, 0, 0) = c + 0.08 * rng.normal();
    img.at(0, 0, 1) = c + 0.08 * rng.normal();
    out.push_back({img, label ? std::vector<double>{0, 1} : std::vector<double>{1, 0}});
  }
  return out;
}

Network toy_net() {
  Network n({3, 1, 1}, {LayerSpec::flatten(), LayerSpec::fc(3, 6), LayerSpec::relu(), LayerSpec::fc(6, 2),
                        LayerSpec::softmax()});
  n.set_input_offset(0.5);
  n.init(3);
  return n;
}

double accuracy(const Network& net, const std::vector<Example>& xs) {
  const auto out = predict(net, xs);
  int ok = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) ok += (out[i][1] > out[i][0]) == (xs[i].target[1] > 0.5);
  return static_cast<double>(ok) / static_cast<double>(xs.size());
}

}  // namespace

TEST_CASE("tensor basics and image windows") {
  CHECK(Tensor::count({2, 3, 4}) == 24);
  Tensor t({2, 2}, std::vector<double>{1, 2, 3, 4});
  t.validate();
  t.grad.assign(3, 0.0);
  CHECK_ERRC(t.validate(), Errc::ShapeMismatch);
  CHECK_ERRC(Tensor({2, 2}, std::vector<double>{1, 2, 3}), Errc::ShapeMismatch);

  const ImageBuffer img = testing::random_image(7, 5, 3, 1);
  const Tensor w = image_to_tensor(img, 2, 1, 4, 3);
  CHECK(w.shape == std::vector<int>{3, 3, 4});
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 4; ++x) CHECK(w.values[(c * 3 + y) * 4 + x] == img.at(x + 2, y + 1, c));
  CHECK(tensor_to_image(image_to_tensor(img)) == img);
  CHECK_ERRC(image_to_tensor(img, 5, 0, 4, 3), Errc::ShapeMismatch);
}

TEST_CASE("network shapes are validated") {
  CHECK_ERRC(Network({1, 4, 4}, {LayerSpec::fc(16, 2)}), Errc::ShapeMismatch);
  CHECK_ERRC(Network({1, 4, 4}, {LayerSpec::conv(3, 1, 2, 4)}), Errc::ShapeMismatch);
  CHECK_ERRC(Network({1, 4, 4}, {LayerSpec::conv(2, 1, 1, 4)}), Errc::ShapeMismatch);
  CHECK_ERRC(Network({4}, {LayerSpec::softmax(), LayerSpec::fc(4, 2)}), Errc::ShapeMismatch);
  const Network d = Network::desk_scale(32, 1, Head::Softmax2);
  CHECK(d.head() == Head::Softmax2);
  CHECK(d.input_offset() == 0.5);
  CHECK(d.fc_layers().size() == 2);
  CHECK(d.shape_after(8) == std::vector<int>{8, 4, 4});
  CHECK(Network::desk_scale(32, 3, Head::Sigmoid4, 4).head() == Head::Sigmoid4);
  CHECK(Network::desk_scale(32, 1, Head::None).head() == Head::None);
  CHECK(Network({3}, {LayerSpec::fc(3, 2)}).input_offset() == 0.0);
  Network e = Network::desk_scale(16, 1, Head::Softmax2);
  CHECK_ERRC(e.forward(Tensor({1, 8, 8})), Errc::ShapeMismatch);
}

TEST_CASE("forward: convolution, pooling, offset and heads by hand") {
  Network net({2, 5, 6}, {LayerSpec::conv(3, 1, 2, 3), LayerSpec::conv(3, 2, 3, 2), LayerSpec::maxpool()});
  Tensor x(net.input_shape());
  testing::randomize(net, x, 4);
  ForwardCache c;
  net.forward(x, &c);
  CHECK(c.acts[2].shape == std::vector<int>{2, 3, 3});
  CHECK(c.acts[3].shape == std::vector<int>{2, 1, 1});
  for (int co = 0; co < 3; ++co)
    for (int y = 0; y < 5; ++y)
      for (int xx = 0; xx < 6; ++xx)
        CHECK(c.acts[1].values[(co * 5 + y) * 6 + xx] ==
              doctest::Approx(conv_direct(net.layers()[0], net.params(0), c.acts[0], co, y, xx)).epsilon(1e-12));
  for (int co = 0; co < 2; ++co)
    for (int y = 0; y < 3; ++y)
      for (int xx = 0; xx < 3; ++xx)
        CHECK(c.acts[2].values[(co * 3 + y) * 3 + xx] ==
              doctest::Approx(conv_direct(net.layers()[1], net.params(1), c.acts[1], co, y, xx)).epsilon(1e-12));
  for (int co = 0; co < 2; ++co) {
    const double* v = c.acts[2].values.data() + co * 9;
    CHECK(c.acts[3].values[co] == std::max({v[0], v[1], v[3], v[4]}));
  }

  Network fc({2}, {LayerSpec::fc(2, 2), LayerSpec::softmax()});
  fc.params(0) = {1, 2, -1, 0.5, 0.25, -0.25};
  fc.set_input_offset(0.5);
  const Tensor y = fc.forward(Tensor({2}, std::vector<double>{1.5, 0.5}));
  const double z0 = 1 * 1.0 + 2 * 0.0 + 0.25, z1 = -1 * 1.0 + 0.5 * 0.0 - 0.25;
  CHECK(y.values[0] == doctest::Approx(std::exp(z0) / (std::exp(z0) + std::exp(z1))).epsilon(1e-14));
  CHECK(y.values[0] + y.values[1] == doctest::Approx(1.0).epsilon(1e-15));

  Network sg({2}, {LayerSpec::fc(2, 4), LayerSpec::sigmoid()});
  sg.params(0) = {800, 0, -800, 0, 0, 0, 1, 0, 0, 0, 0, 0};
  const Tensor s = sg.forward(Tensor({2}, std::vector<double>{1, 0}));
  CHECK(s.values[0] == 1.0);
  CHECK(s.values[1] == 0.0);
  CHECK(s.values[2] == 0.5);
  CHECK(s.values[3] == doctest::Approx(1 / (1 + std::exp(-1.0))));
}

TEST_CASE("gradient check: every layer kind against central differences") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const testing::GradCheck g = testing::gradient_check_all(seed);
    INFO(g.where);
    CHECK(g.checked > 500);
    CHECK(g.worst < 1e-4);
  }
}

TEST_CASE("gradient check: desk-scale nets with both heads") {
  for (Head h : {Head::Softmax2, Head::Sigmoid4}) {
    Network net = Network::desk_scale(8, 1, h, 2, 6, 2);
    Tensor x(net.input_shape());
    testing::randomize(net, x, 9);
    const std::vector<double> target = h == Head::Softmax2 ? std::vector<double>{1, 0} : std::vector<double>{0, 1, 1, 0};
    const auto g = testing::gradient_check(net, x, target, h == Head::Softmax2 ? Loss::CrossEntropy : Loss::MultilabelBce);
    INFO(g.where);
    CHECK(g.worst < 1e-4);
  }
}

TEST_CASE("losses") {
  Network net({2}, {LayerSpec::fc(2, 2), LayerSpec::softmax()});
  net.params(0) = {1, 0, 0, 1, 0, 0};
  ForwardCache c;
  net.forward(Tensor({2}, std::vector<double>{2, 0}), &c);
  std::vector<double> g;
  const double l = loss_and_logit_grad(net, c, std::vector<double>{0, 1}, Loss::CrossEntropy, g);
  CHECK(l == doctest::Approx(std::log(1 + std::exp(2.0))).epsilon(1e-14));
  CHECK(g[0] + g[1] == doctest::Approx(0.0).scale(1.0));
  CHECK_ERRC(loss_and_logit_grad(net, c, std::vector<double>{1, 0}, Loss::MultilabelBce, g), Errc::ShapeMismatch);
  CHECK_ERRC(loss_and_logit_grad(net, c, std::vector<double>{1}, Loss::CrossEntropy, g), Errc::ShapeMismatch);
  CHECK_ERRC(loss_and_logit_grad(net, ForwardCache{}, std::vector<double>{1, 0}, Loss::CrossEntropy, g),
             Errc::NoForwardCache);

  Network sg({1}, {LayerSpec::fc(1, 4), LayerSpec::sigmoid()});
  sg.params(0) = {0, 0, 0, 0, 1000, -1000, 0, 0};
  sg.forward(Tensor({1}, std::vector<double>{0}), &c);
  const double b = loss_and_logit_grad(sg, c, std::vector<double>{0, 0, 1, 1}, Loss::MultilabelBce, g);
  CHECK(std::isfinite(b));
  CHECK(b == doctest::Approx(1000 + 2 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("train: zero learning rate, toy separation, determinism") {
  const auto data = toy_points(80, 5);
  Network frozen = toy_net();
  const Network before = frozen;
  TrainOptions o;
  o.lr = 0.0;
  o.epochs = 3;
  train(frozen, data, o);
  CHECK(frozen == before);

  Network net = toy_net();
  o.lr = 0.05;
  o.epochs = 200;
  o.batch = 8;
  o.seed = 11;
  const TrainReport r = train(net, data, o);
  CHECK(r.epoch_loss.size() == 200);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());
  CHECK(accuracy(net, data) == 1.0);

  Network again = toy_net();
  train(again, data, o);
  CHECK(again == net);
  Network par = toy_net();
  o.workers = 3;
  train(par, data, o);
  CHECK(par == net);

  o.batch = 0;
  CHECK_ERRC(train(net, data, o), Errc::InvalidArgument);
  o.batch = 4;
  CHECK_ERRC(train(net, {}, o), Errc::EmptyDataset);
  o.layer_lr = {0.1};
  CHECK_ERRC(train(net, data, o), Errc::InvalidArgument);
}

TEST_CASE("train: layers at zero learning rate stay untouched") {
  const auto data = toy_points(40, 6);
  Network net = toy_net();
  const Network start = net;
  TrainOptions o;
  o.epochs = 5;
  o.layer_lr = {0, 0.0, 0, 0.05, 0};
  train(net, data, o);
  CHECK(net.params(1) == start.params(1));
  CHECK(net.params(3) != start.params(3));
}

TEST_CASE("retrain_head: new binary head, frozen features") {
  Network net({3, 1, 1}, {LayerSpec::flatten(), LayerSpec::fc(3, 6), LayerSpec::relu(), LayerSpec::fc(6, 5),
                          LayerSpec::relu(), LayerSpec::fc(5, 4), LayerSpec::sigmoid()});
  net.init(2);
  const Network start = net;
  TrainOptions o;
  o.epochs = 10;
  retrain_head(net, toy_points(40, 7), 0.05, 0.005, o);
  CHECK(net.head() == Head::Softmax2);
  CHECK(net.layers().size() == 7);
  CHECK(net.layers()[5] == LayerSpec::fc(5, 2));
  CHECK(net.params(1) == start.params(1));
  CHECK(net.params(3) != start.params(3));

  Network single({3, 1, 1}, {LayerSpec::flatten(), LayerSpec::fc(3, 4), LayerSpec::sigmoid()});
  CHECK_ERRC(retrain_head(single, toy_points(4, 1), 0.1, 0.01, o), Errc::TooFewFCLayers);
}

TEST_CASE("evaluate_scores: perfect, hand-built and coin-flip scorers") {
  const std::vector<double> perfect{0.1, 0.2, 0.3, 0.7, 0.8, 0.9};
  const std::vector<char> lab{0, 0, 0, 1, 1, 1};
  const EvalReport p = evaluate_scores(perfect, lab);
  CHECK(p.true_positive_rate == 1.0);
  CHECK(p.true_negative_rate == 1.0);
  CHECK(p.eer == 0.0);
  CHECK(p.genuine == 3);
  CHECK(p.morphs == 3);

  // genuine 0.1 0.4 0.6, morphs 0.3 0.7 0.9: at t = 0.6 one morph passes and one genuine is rejected
  const EvalReport h = evaluate_scores(std::vector<double>{0.1, 0.4, 0.6, 0.3, 0.7, 0.9}, lab);
  CHECK(h.eer == doctest::Approx(1.0 / 3));
  CHECK(h.true_positive_rate == doctest::Approx(2.0 / 3));
  CHECK(h.true_negative_rate == doctest::Approx(2.0 / 3));

  // genuine 0.3 0.35, morphs 0.1 0.2 0.25 0.9: the rates cross between t = 0.3 and t = 0.35
  const EvalReport q =
      evaluate_scores(std::vector<double>{0.3, 0.35, 0.1, 0.2, 0.25, 0.9}, std::vector<char>{0, 0, 1, 1, 1, 1});
  CHECK(q.eer == doctest::Approx(0.75));
  CHECK(q.curve.size() == 7);
  for (const SweepPoint& s : q.curve) {
    CHECK(s.tpr >= 0.0);
    CHECK(s.tpr <= 1.0);
    CHECK(s.tnr >= 0.0);
    CHECK(s.tnr <= 1.0);
  }

  Rng rng(3);
  std::vector<double> coin(4000);
  std::vector<char> half(4000);
  for (std::size_t i = 0; i < coin.size(); ++i) {
    coin[i] = rng.uniform();
    half[i] = i % 2;
  }
  CHECK(std::abs(evaluate_scores(coin, half).eer - 0.5) < 0.05);

  CHECK_ERRC(evaluate_scores(perfect, std::vector<char>{0, 0, 0, 0, 0, 0}), Errc::EmptyDataset);
  CHECK_ERRC(evaluate_scores(perfect, std::vector<char>{0, 1}), Errc::ShapeMismatch);
}

TEST_CASE("evaluate on a trained toy net") {
  const auto data = toy_points(60, 8);
  Network net = toy_net();
  TrainOptions o;
  o.lr = 0.05;
  o.epochs = 100;
  o.batch = 8;
  train(net, data, o);
  const EvalReport r = evaluate(net, data);
  CHECK(r.true_positive_rate == 1.0);
  CHECK(r.true_negative_rate == 1.0);
  CHECK(r.eer == 0.0);
  Network multi({3, 1, 1}, {LayerSpec::flatten(), LayerSpec::fc(3, 4), LayerSpec::sigmoid()});
  CHECK_ERRC(evaluate(multi, data), Errc::ShapeMismatch);
}

TEST_CASE("serialization: lossless round trip and malformed input") {
  Network net = Network::desk_scale(16, 3, Head::Sigmoid4, 3, 7);
  net.init(21);
  net.params(10)[3] = -0.0;
  net.params(10)[4] = 1e-308;
  const auto bytes = serialize_network(net);
  const Network back = deserialize_network(bytes);
  CHECK(back == net);
  CHECK(back.input_offset() == 0.5);
  CHECK(std::signbit(back.params(10)[3]));
  CHECK(serialize_network(back) == bytes);

  testing::TempDir dir;
  save_network(net, dir / "n.bin");
  CHECK(load_network(dir / "n.bin") == net);
  CHECK_ERRC(load_network(dir / "missing.bin"), Errc::MissingFile);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_ERRC(deserialize_network(bad), Errc::UnsupportedFormat);
  bad = bytes;
  bad[4] = 9;
  CHECK_ERRC(deserialize_network(bad), Errc::UnsupportedFormat);
  bad.assign(bytes.begin(), bytes.end() - 5);
  CHECK_ERRC(deserialize_network(bad), Errc::CorruptData);
  bad = bytes;
  bad.push_back(0);
  CHECK_ERRC(deserialize_network(bad), Errc::CorruptData);
  bad = bytes;
  for (int i = 0; i < 8; ++i) bad[8 + 4 + 12 + i] = 0xFF;  // offset becomes NaN
  CHECK_ERRC(deserialize_network(bad), Errc::CorruptData);
  CHECK_ERRC(deserialize_network(std::vector<unsigned char>{'M', 'K'}), Errc::CorruptData);
}
