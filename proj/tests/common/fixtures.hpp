#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "morphkit/image.hpp"
#include "morphkit/random.hpp"

namespace testing {

inline morphkit::ImageBuffer random_image(int w, int h, int c, std::uint64_t seed) {
  morphkit::Rng rng(seed);
  morphkit::ImageBuffer img(w, h, c);
  for (double& v : img.data()) v = rng.uniform();
  return img;
}

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("morphkit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
