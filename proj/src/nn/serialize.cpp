#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "morphkit/error.hpp"
#include "morphkit/nn.hpp"

namespace morphkit::nn {

namespace {

constexpr char kMagic[4] = {'M', 'K', 'N', 'N'};
constexpr std::uint32_t kVersion = 2;

struct Writer {
  std::vector<unsigned char> out;
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
};

struct Reader {
  std::span<const unsigned char> in;
  std::size_t pos = 0;
  void need(std::size_t n) const {
    require(in.size() - pos >= n, Errc::CorruptData, "network file is truncated");
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[pos++]) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[pos++]) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace

std::vector<unsigned char> serialize_network(const Network& net) {
  Writer w;
  w.out.insert(w.out.end(), kMagic, kMagic + 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(net.input_shape().size()));
  for (int d : net.input_shape()) w.i32(d);
  w.f64(net.input_offset());
  w.u32(static_cast<std::uint32_t>(net.layers().size()));
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const LayerSpec& s = net.layers()[i];
    w.u32(static_cast<std::uint32_t>(s.kind));
    w.i32(s.kernel);
    w.i32(s.stride);
    w.i32(s.in);
    w.i32(s.out);
    const auto& p = net.params(static_cast<int>(i));
    w.u64(p.size());
    for (double v : p) w.f64(v);
  }
  return w.out;
}

Network deserialize_network(std::span<const unsigned char> bytes) {
  Reader r{bytes};
  r.need(4);
  require(std::memcmp(bytes.data(), kMagic, 4) == 0, Errc::UnsupportedFormat, "not a network file");
  r.pos = 4;
  const std::uint32_t version = r.u32();
  require(version == kVersion, Errc::UnsupportedFormat, "unsupported network file version " + std::to_string(version));
  const std::uint32_t rank = r.u32();
  require(rank >= 1 && rank <= 3, Errc::CorruptData, "bad input rank");
  std::vector<int> shape(rank);
  for (int& d : shape) d = r.i32();
  const double offset = r.f64();
  require(std::isfinite(offset), Errc::CorruptData, "bad input offset");
  const std::uint32_t n = r.u32();
  require(n <= 4096, Errc::CorruptData, "implausible layer count");
  std::vector<LayerSpec> layers;
  std::vector<std::vector<double>> params;
  for (std::uint32_t i = 0; i < n; ++i) {
    LayerSpec s{};
    const std::uint32_t kind = r.u32();
    require(kind <= static_cast<std::uint32_t>(LayerKind::SigmoidVector), Errc::CorruptData, "unknown layer kind");
    s.kind = static_cast<LayerKind>(kind);
    s.kernel = r.i32();
    s.stride = r.i32();
    s.in = r.i32();
    s.out = r.i32();
    const std::uint64_t count = r.u64();
    r.need(count * 8);
    std::vector<double> p(count);
    for (double& v : p) v = r.f64();
    layers.push_back(s);
    params.push_back(std::move(p));
  }
  require(r.pos == bytes.size(), Errc::CorruptData, "trailing bytes in network file");
  Network net(shape, layers);
  net.set_input_offset(offset);
  for (std::size_t i = 0; i < params.size(); ++i) {
    require(params[i].size() == net.params(static_cast<int>(i)).size(), Errc::CorruptData,
            "parameter count does not match layer " + std::to_string(i));
    net.params(static_cast<int>(i)) = std::move(params[i]);
  }
  return net;
}

void save_network(const Network& net, const std::filesystem::path& path) {
  const auto bytes = serialize_network(net);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::MissingFile, "cannot open network " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_network(bytes);
}

}  // namespace morphkit::nn
