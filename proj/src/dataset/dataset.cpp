#include "morphkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "morphkit/error.hpp"
#include "morphkit/random.hpp"

namespace morphkit {

using nlohmann::json;

std::string_view split_name(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    case Split::Val: return "val";
    case Split::Unassigned: return "";
  }
  return "";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  if (s == "val" || s == "validation") return Split::Val;
  if (s.empty()) return Split::Unassigned;
  fail(Errc::ParseError, "unknown split '" + std::string(s) + "'");
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::uint64_t text_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::vector<FaceRecord> load_manifest(const std::filesystem::path& path, bool check_files) {
  std::ifstream in(path);
  if (!in) fail(Errc::MissingFile, "cannot open manifest " + path.string());
  const std::filesystem::path base = path.parent_path();
  std::vector<FaceRecord> records;
  std::vector<std::string> header;
  std::map<std::string, int> column;
  std::set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line);
    if (header.empty()) {
      header = fields;
      for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = static_cast<int>(i);
      for (const char* req : {"id", "image", "landmarks", "gender", "database"})
        require(column.count(req) != 0, Errc::ParseError,
                path.string() + ": manifest header lacks column '" + req + "'");
      continue;
    }
    require(fields.size() == header.size(), Errc::ParseError,
            path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                " tab-separated fields, found " + std::to_string(fields.size()));
    auto get = [&](const char* name) -> std::string {
      auto it = column.find(name);
      return it == column.end() ? std::string() : fields[it->second];
    };
    FaceRecord r;
    r.id = get("id");
    require(!r.id.empty(), Errc::ParseError, path.string() + ":" + std::to_string(line_no) + ": empty id");
    require(ids.insert(r.id).second, Errc::DuplicateId, path.string() + ": duplicate id '" + r.id + "'");
    auto resolve = [&](const std::string& p) {
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    r.image = resolve(get("image"));
    r.landmarks = resolve(get("landmarks"));
    r.gender = get("gender");
    r.database = get("database");
    r.split = parse_split(get("split"));
    r.subject = get("subject");
    if (r.subject.empty()) r.subject = r.id;
    if (check_files) {
      require(std::filesystem::exists(r.image), Errc::MissingFile, "missing image " + r.image.string());
      require(std::filesystem::exists(r.landmarks), Errc::MissingFile, "missing landmarks " + r.landmarks.string());
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_manifest(const std::vector<FaceRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << "id\timage\tlandmarks\tgender\tdatabase\tsplit\tsubject\n";
  const std::filesystem::path base = path.parent_path();
  auto rel = [&](const std::filesystem::path& p) {
    return base.empty() ? p.generic_string() : p.lexically_relative(base).generic_string();
  };
  for (const FaceRecord& r : records)
    out << r.id << '\t' << rel(r.image) << '\t' << rel(r.landmarks) << '\t' << r.gender << '\t' << r.database
        << '\t' << split_name(r.split) << '\t' << r.subject << '\n';
  if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

std::vector<int> largest_remainder(int total, const std::vector<double>& fractions) {
  require(total >= 0, Errc::InvalidArgument, "largest_remainder: negative total");
  std::vector<int> counts(fractions.size());
  std::vector<double> rest(fractions.size());
  int used = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] * total;
    counts[i] = static_cast<int>(std::floor(exact + 1e-9));
    rest[i] = exact - counts[i];
    used += counts[i];
  }
  std::vector<std::size_t> order(fractions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rest[a] > rest[b]; });
  for (std::size_t k = 0; used < total && k < order.size(); ++k, ++used) ++counts[order[k]];
  return counts;
}

std::vector<FaceRecord> split_dataset(std::vector<FaceRecord> records, std::array<double, 3> ratios,
                                      std::uint64_t seed) {
  double sum = 0.0;
  for (double r : ratios) {
    require(r >= 0.0 && std::isfinite(r), Errc::BadRatios, "split ratios must be non-negative");
    sum += r;
  }
  require(std::abs(sum - 1.0) <= 1e-9, Errc::BadRatios, "split ratios must sum to 1");
  std::map<std::string, std::vector<int>> by_db;
  for (std::size_t i = 0; i < records.size(); ++i) by_db[records[i].database].push_back(static_cast<int>(i));
  const std::vector<double> fr(ratios.begin(), ratios.end());
  for (auto& [db, idx] : by_db) {
    // order by id first so the result does not depend on manifest row order
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return records[a].id < records[b].id; });
    Rng rng(derive_seed(seed, {text_hash(db)}));
    rng.shuffle(idx);
    const auto counts = largest_remainder(static_cast<int>(idx.size()), fr);
    std::size_t k = 0;
    const Split order[3] = {Split::Train, Split::Test, Split::Val};
    for (int s = 0; s < 3; ++s)
      for (int c = 0; c < counts[s]; ++c) records[idx[k++]].split = order[s];
  }
  return records;
}

std::vector<MorphPair> select_pairs(const std::vector<FaceRecord>& records, int count, std::uint64_t seed) {
  require(count >= 0, Errc::InvalidArgument, "select_pairs: negative count");
  std::vector<MorphPair> out;
  if (count == 0) return out;
  std::map<std::tuple<int, std::string, std::string>, std::vector<int>> strata;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const FaceRecord& r = records[i];
    strata[{static_cast<int>(r.split), r.database, r.gender}].push_back(static_cast<int>(i));
  }
  std::vector<std::vector<int>> eligible;
  std::vector<double> weight;
  double total = 0.0;
  for (auto& [key, idx] : strata) {
    std::set<std::string> subjects;
    for (int i : idx) subjects.insert(records[i].subject);
    if (subjects.size() < 2) continue;
    eligible.push_back(idx);
    total += static_cast<double>(idx.size());
  }
  require(!eligible.empty(), Errc::InfeasibleConstraints,
          "select_pairs: no (split, database, gender) group has two different subjects");
  for (const auto& idx : eligible) weight.push_back(static_cast<double>(idx.size()) / total);
  const auto counts = largest_remainder(count, weight);

  for (std::size_t s = 0; s < eligible.size(); ++s) {
    Rng rng(derive_seed(seed, {0x5041495253ull, s}));  // "PAIRS"
    const std::vector<int>& members = eligible[s];
    std::vector<int> pass = members;
    rng.shuffle(pass);
    std::size_t pos = 0;
    auto refill = [&] {
      pass = members;
      rng.shuffle(pass);
      pos = 0;
    };
    for (int c = 0; c < counts[s]; ++c) {
      if (pos == pass.size()) refill();
      const int a = pass[pos++];
      // partner: the next image of a different subject, preferring the current pass
      auto find_partner = [&]() -> bool {
        for (std::size_t j = pos; j < pass.size(); ++j)
          if (records[pass[j]].subject != records[a].subject) {
            std::swap(pass[pos], pass[j]);
            return true;
          }
        return false;
      };
      if (!find_partner()) {
        refill();
        require(find_partner(), Errc::InfeasibleConstraints, "select_pairs: no partner of a different subject");
      }
      const int b = pass[pos++];
      out.push_back({a, b, WarpMethod::Triangle});
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k].method = k % 2 == 0 ? WarpMethod::Triangle : WarpMethod::Field;
  return out;
}

std::string_view regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::Naive: return "naive";
    case Regime::OneRegion: return "one_region";
    case Regime::Complex: return "complex";
    case Regime::Multiclass: return "multiclass";
  }
  return "?";
}

Regime parse_regime(std::string_view s) {
  for (Regime r : {Regime::Naive, Regime::OneRegion, Regime::Complex, Regime::Multiclass})
    if (regime_name(r) == s) return r;
  fail(Errc::InvalidArgument, "unknown regime '" + std::string(s) + "' (naive|one_region|complex|multiclass)");
}

std::string_view sample_kind_name(SampleKind k) noexcept {
  switch (k) {
    case SampleKind::Genuine: return "genuine";
    case SampleKind::CompleteMorph: return "complete_morph";
    case SampleKind::PartialMorph: return "partial_morph";
  }
  return "?";
}

SampleKind parse_sample_kind(std::string_view s) {
  for (SampleKind k : {SampleKind::Genuine, SampleKind::CompleteMorph, SampleKind::PartialMorph})
    if (sample_kind_name(k) == s) return k;
  fail(Errc::ParseError, "unknown sample kind '" + std::string(s) + "'");
}

RegimeSpec regime_spec(Regime r) {
  RegimeSpec s{r, {}, r == Regime::Multiclass};
  auto add = [&](SampleKind k, int n, std::optional<RegionId> fixed, double f) { s.buckets.push_back({k, n, fixed, f}); };
  switch (r) {
    case Regime::Naive:
      add(SampleKind::Genuine, 0, std::nullopt, 0.5);
      add(SampleKind::CompleteMorph, 0, std::nullopt, 0.5);
      break;
    case Regime::OneRegion:
      add(SampleKind::Genuine, 0, std::nullopt, 0.5);
      add(SampleKind::CompleteMorph, 0, std::nullopt, 0.1);
      for (RegionId id : kAllRegions) add(SampleKind::PartialMorph, 1, id, 0.1);
      break;
    case Regime::Complex:
      add(SampleKind::Genuine, 0, std::nullopt, 0.5);
      add(SampleKind::CompleteMorph, 0, std::nullopt, 0.1);
      for (int k = 1; k <= 4; ++k) add(SampleKind::PartialMorph, k, std::nullopt, 0.1);
      break;
    case Regime::Multiclass:
      for (int k = 0; k <= 4; ++k) add(SampleKind::PartialMorph, k, std::nullopt, 0.2);
      break;
  }
  return s;
}

std::array<double, kRegionCount> SampleRecord::region_targets() const {
  std::array<double, kRegionCount> t{};
  for (int r = 0; r < kRegionCount; ++r) t[r] = regions.contains(static_cast<RegionId>(r)) ? 1.0 : 0.0;
  return t;
}

std::vector<SampleRecord> build_regime(const std::vector<FaceRecord>& records, const std::vector<MorphPair>& pairs,
                                       Regime regime, int total, std::uint64_t seed) {
  require(total >= 0, Errc::InvalidArgument, "build_regime: negative total");
  const RegimeSpec spec = regime_spec(regime);
  std::vector<double> fractions;
  for (const auto& b : spec.buckets) fractions.push_back(b.fraction);
  const auto counts = largest_remainder(total, fractions);

  int genuine_needed = 0, morph_needed = 0;
  for (std::size_t b = 0; b < spec.buckets.size(); ++b)
    (spec.buckets[b].kind == SampleKind::Genuine ? genuine_needed : morph_needed) += counts[b];
  require(genuine_needed == 0 || !records.empty(), Errc::InsufficientPairs, "build_regime: no records for genuine samples");
  require(morph_needed == 0 || !pairs.empty(), Errc::InsufficientPairs, "build_regime: no morph pairs available");
  for (const MorphPair& p : pairs)
    require(p.a >= 0 && p.b >= 0 && static_cast<std::size_t>(std::max(p.a, p.b)) < records.size(),
            Errc::InvalidArgument, "build_regime: pair refers to a missing record");

  Rng rng(derive_seed(seed, {0x5245474dull, static_cast<std::uint64_t>(regime)}));  // "REGM"
  std::vector<int> genuine_order(records.size());
  std::iota(genuine_order.begin(), genuine_order.end(), 0);
  rng.shuffle(genuine_order);
  std::size_t next_genuine = 0, next_pair = 0;
  std::array<int, kRegionCount> usage{};

  std::vector<SampleRecord> out;
  out.reserve(total);
  for (std::size_t b = 0; b < spec.buckets.size(); ++b) {
    const RegimeBucket& bucket = spec.buckets[b];
    for (int c = 0; c < counts[b]; ++c) {
      SampleRecord s;
      s.index = static_cast<int>(out.size());
      s.kind = bucket.kind;
      s.bucket = static_cast<int>(b);
      s.regime = regime;
      s.seed = derive_seed(seed, {static_cast<std::uint64_t>(regime), static_cast<std::uint64_t>(s.index)});
      if (bucket.kind == SampleKind::Genuine) {
        const FaceRecord& r = records[genuine_order[next_genuine++ % genuine_order.size()]];
        s.source_a = r.id;
        s.split = r.split;
      } else {
        const MorphPair& p = pairs[next_pair++ % pairs.size()];
        s.source_a = records[p.a].id;
        s.source_b = records[p.b].id;
        s.method = p.method;
        s.split = records[p.a].split;
        if (bucket.kind == SampleKind::CompleteMorph) s.regions = RegionSet::all();
        if (bucket.kind == SampleKind::PartialMorph) {
          if (bucket.fixed_region) {
            s.regions.insert(*bucket.fixed_region);
          } else {
            // least-used regions first; random priority among equally used ones
            std::array<int, kRegionCount> order{0, 1, 2, 3};
            std::array<std::uint64_t, kRegionCount> prio{};
            for (auto& v : prio) v = rng.next_u64();
            std::sort(order.begin(), order.end(), [&](int x, int y) {
              return usage[x] != usage[y] ? usage[x] < usage[y] : prio[x] < prio[y];
            });
            for (int k = 0; k < bucket.region_count; ++k) s.regions.insert(static_cast<RegionId>(order[k]));
          }
          for (int r = 0; r < kRegionCount; ++r)
            if (s.regions.contains(static_cast<RegionId>(r))) ++usage[r];
        }
      }
      s.label = spec.multilabel ? s.regions.bits() : (bucket.kind == SampleKind::Genuine ? 0 : 1);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string sample_to_json(const SampleRecord& s) {
  json j;
  j["index"] = s.index;
  j["kind"] = sample_kind_name(s.kind);
  j["source_a"] = s.source_a;
  j["source_b"] = s.source_b;
  j["method"] = warp_method_name(s.method);
  j["regions"] = s.regions.flags();
  j["bucket"] = s.bucket;
  j["regime"] = regime_name(s.regime);
  j["split"] = split_name(s.split);
  j["label"] = s.label;
  j["augment"] = {{"kind", augment_kind_name(s.augment.kind)},
                  {"length", s.augment.length},
                  {"angle", s.augment.angle},
                  {"sigma", s.augment.sigma},
                  {"fraction", s.augment.fraction},
                  {"stddev", s.augment.stddev},
                  {"seed", std::to_string(s.augment.seed)}};
  j["seed"] = std::to_string(s.seed);
  j["image"] = s.image;
  return j.dump();
}

SampleRecord sample_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    SampleRecord s;
    s.index = j.at("index").get<int>();
    s.kind = parse_sample_kind(j.at("kind").get<std::string>());
    s.source_a = j.at("source_a").get<std::string>();
    s.source_b = j.at("source_b").get<std::string>();
    s.method = parse_warp_method(j.at("method").get<std::string>());
    s.regions = RegionSet::parse_flags(j.at("regions").get<std::string>());
    s.bucket = j.at("bucket").get<int>();
    s.regime = parse_regime(j.at("regime").get<std::string>());
    s.split = parse_split(j.at("split").get<std::string>());
    s.label = j.at("label").get<int>();
    const json& a = j.at("augment");
    s.augment.kind = parse_augment_kind(a.at("kind").get<std::string>());
    s.augment.length = a.at("length").get<double>();
    s.augment.angle = a.at("angle").get<double>();
    s.augment.sigma = a.at("sigma").get<double>();
    s.augment.fraction = a.at("fraction").get<double>();
    s.augment.stddev = a.at("stddev").get<double>();
    s.augment.seed = std::stoull(a.at("seed").get<std::string>());
    s.seed = std::stoull(j.at("seed").get<std::string>());
    s.image = j.value("image", std::string());
    return s;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(Errc::ParseError, std::string("bad sample record: ") + e.what());
  }
}

void write_sample_list(const std::vector<SampleRecord>& samples, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  for (const SampleRecord& s : samples) out << sample_to_json(s) << '\n';
  if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

std::vector<SampleRecord> read_sample_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::MissingFile, "cannot open sample list " + path.string());
  std::vector<SampleRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(sample_from_json(line));
  return out;
}

}  // namespace morphkit
