#include <numeric>

#include "morphkit/error.hpp"
#include "morphkit/nn.hpp"

namespace morphkit::nn {

std::size_t Tensor::count(const std::vector<int>& shape) noexcept {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d < 0 ? 0 : d);
  return shape.empty() ? 0 : n;
}

Tensor::Tensor(std::vector<int> s, double fill) : shape(std::move(s)), values(count(shape), fill) {}

Tensor::Tensor(std::vector<int> s, std::vector<double> v) : shape(std::move(s)), values(std::move(v)) { validate(); }

void Tensor::validate() const {
  require(values.size() == count(shape), Errc::ShapeMismatch, "tensor value count does not match its shape");
  require(grad.empty() || grad.size() == values.size(), Errc::ShapeMismatch, "tensor gradient shape mismatch");
}

Tensor image_to_tensor(const ImageBuffer& img, int x0, int y0, int size_x, int size_y) {
  if (size_x < 0) size_x = img.width() - x0;
  if (size_y < 0) size_y = img.height() - y0;
  require(x0 >= 0 && y0 >= 0 && size_x > 0 && size_y > 0 && x0 + size_x <= img.width() &&
              y0 + size_y <= img.height(),
          Errc::ShapeMismatch, "tensor window outside the image");
  const int c = img.channels();
  Tensor t({c, size_y, size_x});
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < size_y; ++y)
      for (int x = 0; x < size_x; ++x)
        t.values[(static_cast<std::size_t>(ch) * size_y + y) * size_x + x] = img.at(x0 + x, y0 + y, ch);
  return t;
}

ImageBuffer tensor_to_image(const Tensor& t) {
  require(t.shape.size() == 3 && (t.shape[0] == 1 || t.shape[0] == 3), Errc::ShapeMismatch,
          "tensor is not a 1- or 3-channel image");
  const int c = t.shape[0], h = t.shape[1], w = t.shape[2];
  ImageBuffer img(w, h, c);
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) img.at(x, y, ch) = t.values[(static_cast<std::size_t>(ch) * h + y) * w + x];
  return img;
}

}  // namespace morphkit::nn
