#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morphkit/augment.hpp"
#include "morphkit/blend.hpp"
#include "morphkit/regions.hpp"
#include "morphkit/warp.hpp"

namespace morphkit {

enum class Split { Train, Test, Val, Unassigned };
std::string_view split_name(Split s) noexcept;
Split parse_split(std::string_view s);

struct FaceRecord {
  std::string id;
  std::filesystem::path image;
  std::filesystem::path landmarks;
  std::string gender;
  std::string database;
  Split split = Split::Unassigned;
  std::string subject;  // defaults to id; two records of one subject never form a pair
};

/// Tab-separated table with a header naming at least id, image, landmarks, gender, database;
/// optional columns split and subject. Relative paths resolve against the manifest's directory.
std::vector<FaceRecord> load_manifest(const std::filesystem::path& path, bool check_files = true);
void write_manifest(const std::vector<FaceRecord>& records, const std::filesystem::path& path);

/// Largest-remainder counts for `total` items over `fractions`; ties go to the earlier bucket.
std::vector<int> largest_remainder(int total, const std::vector<double>& fractions);

/// Stratified by database; within each database the counts follow largest_remainder.
std::vector<FaceRecord> split_dataset(std::vector<FaceRecord> records,
                                      std::array<double, 3> ratios = {0.80, 0.15, 0.05},
                                      std::uint64_t seed = 0);

struct MorphPair {
  int a = -1;  // indices into the record list
  int b = -1;
  WarpMethod method = WarpMethod::Triangle;
};

/// Same gender, database and split; distinct subjects; per-image usage balanced to within one
/// inside each stratum; warp methods alternate.
std::vector<MorphPair> select_pairs(const std::vector<FaceRecord>& records, int count, std::uint64_t seed);

enum class Regime { Naive, OneRegion, Complex, Multiclass };
std::string_view regime_name(Regime r) noexcept;
Regime parse_regime(std::string_view s);

enum class SampleKind { Genuine, CompleteMorph, PartialMorph };
std::string_view sample_kind_name(SampleKind k) noexcept;
SampleKind parse_sample_kind(std::string_view s);

/// One row of a regime's composition table.
struct RegimeBucket {
  SampleKind kind;
  int region_count = 0;                 // partial morphs: how many regions are morphed
  std::optional<RegionId> fixed_region;  // one-region regime: the region of this bucket
  double fraction = 0.0;
};

struct RegimeSpec {
  Regime regime;
  std::vector<RegimeBucket> buckets;
  bool multilabel = false;
};

RegimeSpec regime_spec(Regime r);

struct SampleRecord {
  int index = 0;
  SampleKind kind = SampleKind::Genuine;
  std::string source_a;
  std::string source_b;  // empty for genuine samples
  WarpMethod method = WarpMethod::Triangle;
  RegionSet regions;
  int bucket = 0;
  Regime regime = Regime::Naive;
  Split split = Split::Unassigned;
  int label = 0;  // binary regimes: 0 genuine, 1 morph
  AugmentSpec augment;
  std::uint64_t seed = 0;
  std::string image;  // rendered file, relative to the dataset directory

  /// 4-bit multilabel target (LeftEye, RightEye, Nose, Mouth).
  std::array<double, kRegionCount> region_targets() const;
};

/// Builds the sample list of a regime with exact bucket counts. Genuine samples cycle through a
/// shuffled record order; morph samples cycle through `pairs`; partial-morph regions are chosen
/// so that every region is morphed equally often (within one).
std::vector<SampleRecord> build_regime(const std::vector<FaceRecord>& records, const std::vector<MorphPair>& pairs,
                                       Regime regime, int total, std::uint64_t seed);

std::string sample_to_json(const SampleRecord& s);
SampleRecord sample_from_json(std::string_view line);
void write_sample_list(const std::vector<SampleRecord>& samples, const std::filesystem::path& path);
std::vector<SampleRecord> read_sample_list(const std::filesystem::path& path);

struct RenderOptions {
  int crop_size = 64;
  int margin = 3;  // extra border for per-epoch shifts, output pixels
  int versions = 5;  // 5: original plus four corruptions, 1: original only
  int channels = 1;  // rendered crops are converted to this many channels
  double alpha = 0.5;
  OuterSource outer_source = OuterSource::A;
  int workers = 1;
};

/// Renders one sample: morph/partial composition, corruption, then the padded normalized crop.
/// The returned landmarks are in unpadded crop coordinates.
struct RenderedSample {
  ImageBuffer crop;  // (crop_size + 2 margin)^2
  LandmarkSet crop_landmarks;
};

class RecordIndex;

RenderedSample render_sample(const SampleRecord& s, const RecordIndex& records, const RenderOptions& options);

/// Lookup of records (and their decoded images) by id.
class RecordIndex {
 public:
  explicit RecordIndex(std::vector<FaceRecord> records);
  const FaceRecord& get(const std::string& id) const;
  const std::vector<FaceRecord>& records() const { return records_; }

 private:
  std::vector<FaceRecord> records_;
  std::vector<std::pair<std::string, int>> sorted_;
};

/// Expands regime samples into `versions` augmented entries each (seeds derived per sample),
/// renders them under `out_dir/images`, writes samples.jsonl and crop landmarks; returns the list.
std::vector<SampleRecord> render_dataset(const std::vector<SampleRecord>& samples, const RecordIndex& records,
                                         const RenderOptions& options, const std::filesystem::path& out_dir,
                                         std::uint64_t seed);

/// Crops rendered by render_dataset (padded) together with targets.
struct LoadedSample {
  SampleRecord record;
  ImageBuffer crop;
  LandmarkSet crop_landmarks;
};
std::vector<LoadedSample> load_rendered(const std::filesystem::path& dataset_dir);

}  // namespace morphkit
