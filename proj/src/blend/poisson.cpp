#include <cmath>
#include <vector>

#include "morphkit/blend.hpp"
#include "morphkit/error.hpp"

namespace morphkit {

namespace {

struct AnnulusSystem {
  int width = 0, height = 0;
  std::vector<int> index;  // pixel -> unknown id or -1
  std::vector<int> pixel;  // unknown id -> pixel
  std::vector<int> degree;
  std::vector<std::array<int, 4>> links;  // unknown neighbors (-1 when absent)
};

AnnulusSystem build_system(const TransitionZone& zone) {
  AnnulusSystem s;
  s.width = zone.width;
  s.height = zone.height;
  const auto mask = zone.mask();
  s.index.assign(mask.size(), -1);
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i] == TransitionZone::Side::Annulus) {
      s.index[i] = static_cast<int>(s.pixel.size());
      s.pixel.push_back(static_cast<int>(i));
    }
  require(!s.pixel.empty(), Errc::EmptyAnnulus, "poisson blend: the annulus contains no pixel");
  s.degree.resize(s.pixel.size());
  s.links.resize(s.pixel.size());
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  for (std::size_t k = 0; k < s.pixel.size(); ++k) {
    const int x = s.pixel[k] % s.width, y = s.pixel[k] / s.width;
    int deg = 0;
    for (int n = 0; n < 4; ++n) {
      const int nx = x + dx[n], ny = y + dy[n];
      s.links[k][n] = -1;
      if (nx < 0 || ny < 0 || nx >= s.width || ny >= s.height) continue;
      ++deg;
      s.links[k][n] = s.index[static_cast<std::size_t>(ny) * s.width + nx];
    }
    s.degree[k] = deg;
  }
  return s;
}

void apply(const AnnulusSystem& s, const std::vector<double>& x, std::vector<double>& out) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    double v = s.degree[k] * x[k];
    for (int n : s.links[k])
      if (n >= 0) v -= x[n];
    out[k] = v;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

ImageBuffer poisson_blend_low(const ImageBuffer& low_inner, const ImageBuffer& low_outer,
                              const TransitionZone& zone, const PoissonOptions& options,
                              PoissonStats* stats) {
  require_same_shape(low_inner, low_outer, "poisson_blend_low");
  require(zone.width == low_inner.width() && zone.height == low_inner.height(), Errc::DimensionMismatch,
          "poisson_blend_low: zone and images differ in size");
  const AnnulusSystem sys = build_system(zone);
  const auto mask = zone.mask();
  const int w = sys.width, ch = low_inner.channels();
  const std::size_t n = sys.pixel.size();
  const int cap = options.iteration_factor * static_cast<int>(n);

  ImageBuffer out(low_inner.width(), low_inner.height(), ch);
  for (std::size_t i = 0; i < mask.size(); ++i)
    for (int c = 0; c < ch; ++c)
      out.data()[i * ch + c] = mask[i] == TransitionZone::Side::Outer ? low_outer.data()[i * ch + c]
                                                                      : low_inner.data()[i * ch + c];

  PoissonStats st;
  st.unknowns = static_cast<int>(n);
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  std::vector<double> b(n), x(n), r(n), p(n), ap(n);
  for (int c = 0; c < ch; ++c) {
    // Solve for the correction to the guidance image: with f = low_inner + x the right-hand side
    // reduces to the boundary mismatch on the outer side.
    for (std::size_t k = 0; k < n; ++k) {
      const int px = sys.pixel[k] % w, py = sys.pixel[k] / w;
      double rhs = 0.0;
      for (int m = 0; m < 4; ++m) {
        const int nx = px + dx[m], ny = py + dy[m];
        if (nx < 0 || ny < 0 || nx >= w || ny >= sys.height) continue;
        const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
        if (mask[q] == TransitionZone::Side::Outer)
          rhs += low_outer.data()[q * ch + c] - low_inner.data()[q * ch + c];
      }
      b[k] = rhs;
    }
    std::fill(x.begin(), x.end(), 0.0);
    r = b;
    p = r;
    double rr = dot(r, r);
    const double target = options.tolerance * options.tolerance * static_cast<double>(n);
    int it = 0;
    while (rr > target && it < cap) {
      apply(sys, p, ap);
      const double step = rr / dot(p, ap);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += step * p[k];
        r[k] -= step * ap[k];
      }
      const double rr_next = dot(r, r);
      const double beta = rr_next / rr;
      for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
      rr = rr_next;
      ++it;
    }
    // true residual of the final iterate
    apply(sys, x, ap);
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) res += (b[k] - ap[k]) * (b[k] - ap[k]);
    const double rms = std::sqrt(res / static_cast<double>(n));
    require(std::isfinite(rms) && (rms <= options.tolerance || rms <= 1e-8), Errc::SolverDiverged,
            "poisson blend: conjugate gradient did not converge (rms residual " + std::to_string(rms) + ")");
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t q = static_cast<std::size_t>(sys.pixel[k]);
      out.data()[q * ch + c] = low_inner.data()[q * ch + c] + x[k];
    }
    st.iterations = std::max(st.iterations, it);
    st.residual_rms = std::max(st.residual_rms, rms);
  }
  if (stats) *stats = st;
  return out;
}

}  // namespace morphkit
