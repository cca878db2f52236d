#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <tuple>

#include "morphkit/dataset.hpp"
#include "morphkit/error.hpp"
#include "morphkit/parallel.hpp"
#include "morphkit/png_io.hpp"

namespace morphkit {

RecordIndex::RecordIndex(std::vector<FaceRecord> records) : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) sorted_.emplace_back(records_[i].id, static_cast<int>(i));
  std::sort(sorted_.begin(), sorted_.end());
  for (std::size_t i = 1; i < sorted_.size(); ++i)
    require(sorted_[i].first != sorted_[i - 1].first, Errc::DuplicateId, "duplicate id '" + sorted_[i].first + "'");
}

const FaceRecord& RecordIndex::get(const std::string& id) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::make_pair(id, -1));
  require(it != sorted_.end() && it->first == id, Errc::MissingFile, "unknown record id '" + id + "'");
  return records_[it->second];
}

namespace {

struct LoadedFace {
  ImageBuffer image;
  LandmarkSet landmarks;
};

LoadedFace load_face(const FaceRecord& r) {
  LoadedFace f;
  f.image = load_image(r.image);
  f.landmarks = parse_landmarks(r.landmarks, f.image.width(), f.image.height());
  return f;
}

ImageBuffer with_channels(const ImageBuffer& img, int channels) {
  if (img.channels() == channels) return img;
  if (channels == 1) return to_grayscale(img);
  ImageBuffer out(img.width(), img.height(), 3);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, y, 0);
  return out;
}

std::string image_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "images/%06d.png", index);
  return buf;
}

std::filesystem::path landmark_path(const std::filesystem::path& png) {
  std::filesystem::path p = png;
  p.replace_extension(".lm.txt");
  return p;
}

}  // namespace

namespace {

struct Composed {
  ImageBuffer image;
  LandmarkSet landmarks;
};

struct PairMorph {
  MorphResult result;
};

PairMorph morph_pair(const SampleRecord& s, const RecordIndex& records, const RenderOptions& options) {
  const LoadedFace a = load_face(records.get(s.source_a));
  LoadedFace b = load_face(records.get(s.source_b));
  if (b.image.channels() != a.image.channels()) b.image = with_channels(b.image, a.image.channels());
  MorphOptions mo;
  mo.alpha = options.alpha;
  mo.outer_source = options.outer_source;
  return {compose_morph_detailed(a.image, b.image, a.landmarks, b.landmarks, s.method, mo)};
}

Composed compose_from(const SampleRecord& s, const PairMorph& m, const RenderOptions& options) {
  const MorphResult& r = m.result;
  if (s.kind == SampleKind::CompleteMorph) return {r.image, r.aligned.target};
  const ImageBuffer& carrier = options.outer_source == OuterSource::A ? r.aligned.warped_a : r.aligned.warped_b;
  return {compose_partial(r.image, carrier, r.aligned.target, s.regions), r.aligned.target};
}

RenderedSample finish(const Composed& c, const SampleRecord& s, const RenderOptions& options) {
  ImageBuffer image = with_channels(apply_augment(c.image, s.augment), options.channels);
  const int S = options.crop_size, m = options.margin;
  const CropTransform base = crop_transform(c.landmarks, S);
  CropTransform padded = base;
  padded.size = S + 2 * m;
  padded.shift_x = m;
  padded.shift_y = m;
  RenderedSample out;
  out.crop = apply_crop(image, padded);
  std::vector<Point2> pts = crop_points(c.landmarks.points, base);
  for (Point2& p : pts) {
    p.x = std::clamp(p.x, 0.0, static_cast<double>(S - 1));
    p.y = std::clamp(p.y, 0.0, static_cast<double>(S - 1));
  }
  out.crop_landmarks.points = std::move(pts);
  out.crop_landmarks.image_width = S;
  out.crop_landmarks.image_height = S;
  return out;
}

void check_options(const RenderOptions& options) {
  require(options.crop_size > 0 && options.margin >= 0, Errc::InvalidArgument, "bad crop geometry");
  require(options.channels == 1 || options.channels == 3, Errc::InvalidArgument, "channels must be 1 or 3");
}

}  // namespace

RenderedSample render_sample(const SampleRecord& s, const RecordIndex& records, const RenderOptions& options) {
  check_options(options);
  if (s.kind == SampleKind::Genuine) {
    LoadedFace a = load_face(records.get(s.source_a));
    return finish({std::move(a.image), std::move(a.landmarks)}, s, options);
  }
  return finish(compose_from(s, morph_pair(s, records, options), options), s, options);
}

std::vector<SampleRecord> render_dataset(const std::vector<SampleRecord>& samples, const RecordIndex& records,
                                         const RenderOptions& options, const std::filesystem::path& out_dir,
                                         std::uint64_t seed) {
  check_options(options);
  require(options.versions == 1 || options.versions == 5, Errc::InvalidArgument, "versions must be 1 or 5");
  std::filesystem::create_directories(out_dir / "images");

  std::vector<SampleRecord> expanded;
  expanded.reserve(samples.size() * options.versions);
  for (const SampleRecord& s : samples)
    for (int v = 0; v < options.versions; ++v) {
      SampleRecord e = s;
      e.index = static_cast<int>(expanded.size());
      e.seed = derive_seed(seed, {0x41554721ull, static_cast<std::uint64_t>(s.index), static_cast<std::uint64_t>(v)});
      e.augment.kind = static_cast<AugmentKind>(v);
      e.image = image_name(e.index);
      expanded.push_back(std::move(e));
    }

  // one unit per source image (genuine) or per morph pair, so each morph is composed once
  std::map<std::tuple<int, std::string, std::string, int>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < expanded.size(); ++i) {
    const SampleRecord& e = expanded[i];
    const bool morph = e.kind != SampleKind::Genuine;
    groups[{morph, e.source_a, morph ? e.source_b : std::string(), morph ? static_cast<int>(e.method) : 0}]
        .push_back(i);
  }
  std::vector<const std::vector<std::size_t>*> units;
  for (const auto& [key, members] : groups) units.push_back(&members);

  auto render_unit = [&](const std::vector<std::size_t>& members) {
    const SampleRecord& first = expanded[members.front()];
    std::optional<PairMorph> pair;
    std::optional<LoadedFace> face;
    if (first.kind == SampleKind::Genuine) face = load_face(records.get(first.source_a));
    else pair = morph_pair(first, records, options);
    for (std::size_t i : members) {
      SampleRecord& e = expanded[i];
      const Composed c = face ? Composed{face->image, face->landmarks} : compose_from(e, *pair, options);
      // corruption parameters scale with the source height
      Rng rng(e.seed);
      e.augment = draw_five_specs(c.image.height(), rng)[static_cast<int>(e.augment.kind)];
      const RenderedSample r = finish(c, e, options);
      const std::filesystem::path png = out_dir / e.image;
      save_image(r.crop, png);
      write_landmarks(r.crop_landmarks, landmark_path(png));
    }
  };

  parallel_for(units.size(), options.workers, [&](std::size_t u) { render_unit(*units[u]); });

  write_sample_list(expanded, out_dir / "samples.jsonl");
  return expanded;
}

std::vector<LoadedSample> load_rendered(const std::filesystem::path& dataset_dir) {
  const auto list = read_sample_list(dataset_dir / "samples.jsonl");
  require(!list.empty(), Errc::EmptyDataset, "no samples in " + dataset_dir.string());
  std::vector<LoadedSample> out;
  out.reserve(list.size());
  for (const SampleRecord& s : list) {
    LoadedSample l;
    l.record = s;
    const std::filesystem::path png = dataset_dir / s.image;
    l.crop = load_image(png);
    const std::filesystem::path lmp = landmark_path(png);
    if (std::filesystem::exists(lmp)) {
      std::ifstream in(lmp);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      // points are in unpadded crop coordinates, which lie inside the padded image as well
      l.crop_landmarks = parse_landmarks_text(text, l.crop.width(), l.crop.height());
    }
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace morphkit
