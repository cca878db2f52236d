#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "morphkit/attack.hpp"
#include "morphkit/blend.hpp"
#include "morphkit/dataset.hpp"
#include "morphkit/error.hpp"
#include "morphkit/lrp.hpp"
#include "morphkit/nn.hpp"
#include "morphkit/parallel.hpp"
#include "morphkit/png_io.hpp"
#include "morphkit/random.hpp"
#include "morphkit/regions.hpp"
#include "morphkit/synth.hpp"

namespace morphkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path prepare_out(const Global& g) {
  const fs::path out(g.out_dir);
  fs::create_directories(out);
  std::ofstream job(out / "job.ini");
  job << g.job;
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::MissingFile, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    fail(Errc::ParseError, path.string() + ": " + e.what());
  }
}

OuterSource parse_outer(const std::string& s) {
  if (s == "A" || s == "a") return OuterSource::A;
  if (s == "B" || s == "b") return OuterSource::B;
  fail(Errc::InvalidArgument, "outer source must be A or B");
}

// Empty flags mean a complete morph.
RegionSet region_flags(const std::string& flags) { return flags.empty() ? RegionSet{} : RegionSet::parse_flags(flags); }

std::string numbered(const char* pattern, int i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, i);
  return buf;
}

struct DatasetMeta {
  Regime regime = Regime::Naive;
  int crop_size = 64;
  int margin = 0;
};

DatasetMeta read_meta(const fs::path& dir) {
  const json j = read_json(dir / "dataset.json");
  DatasetMeta m;
  m.regime = parse_regime(j.at("regime").get<std::string>());
  m.crop_size = j.at("crop_size").get<int>();
  m.margin = j.at("margin").get<int>();
  return m;
}

std::vector<LoadedSample> load_split(const fs::path& dir, const std::string& split) {
  auto all = load_rendered(dir);
  if (split.empty() || split == "all") return all;
  const Split s = parse_split(split);
  std::vector<LoadedSample> out;
  for (auto& l : all)
    if (l.record.split == s) out.push_back(std::move(l));
  require(!out.empty(), Errc::EmptyDataset, "no samples in split '" + split + "' of " + dir.string());
  return out;
}

std::vector<double> binary_target(const SampleRecord& r) {
  return r.kind == SampleKind::Genuine ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.0, 1.0};
}

std::vector<double> regime_target(const SampleRecord& r, Regime regime) {
  if (regime == Regime::Multiclass) {
    const auto t = r.region_targets();
    return {t.begin(), t.end()};
  }
  return binary_target(r);
}

std::string kind_key(const SampleRecord& r) {
  if (r.kind == SampleKind::Genuine) return "genuine";
  if (r.kind == SampleKind::CompleteMorph) return "complete";
  return "partial:" + r.regions.flags();
}

/// Morph score of a binary or multilabel net: the morph class probability, or the largest region
/// probability.
double morph_score(const nn::Network& net, const ImageBuffer& crop) {
  const nn::Tensor out = net.forward(nn::example_input(net, crop));
  if (net.head() == nn::Head::Softmax2) return out.values[1];
  return *std::max_element(out.values.begin(), out.values.end());
}

}  // namespace

int cmd_synth(const Global& g, const SynthArgs& a) {
  require(a.count >= 1 && a.captures >= 1 && a.size >= 64, Errc::InvalidArgument,
          "synth needs count >= 1, captures >= 1 and size >= 64");
  const fs::path out = prepare_out(g);
  fs::create_directories(out / "images");
  fs::create_directories(out / "landmarks");
  Rng rng(derive_seed(g.seed, {0x53594e54ull}));  // "SYNT"
  struct Job {
    SyntheticFaceParams params;
    FaceRecord record;
  };
  std::vector<Job> jobs;
  for (int i = 0; i < a.count; ++i) {
    const SyntheticFaceParams identity = random_face_params(rng);
    const std::string gender = rng.coin() ? "f" : "m";
    for (int c = 0; c < a.captures; ++c) {
      Job j;
      j.params = c == 0 ? identity : vary_capture(identity, rng);
      j.params.noise_seed = derive_seed(g.seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(c)});
      const std::string id = numbered("s%05d", i) + "_" + std::to_string(c);
      j.record = {id, out / "images" / (id + ".png"), out / "landmarks" / (id + ".txt"), gender, "synth",
                  Split::Unassigned, numbered("s%05d", i)};
      jobs.push_back(std::move(j));
    }
  }
  parallel_for(jobs.size(), g.workers, [&](std::size_t k) {
    const SyntheticFace f = render_synthetic_face(jobs[k].params, a.size, a.size, a.channels);
    save_image(f.image, jobs[k].record.image);
    write_landmarks(f.landmarks, jobs[k].record.landmarks);
  });
  std::vector<FaceRecord> records;
  for (auto& j : jobs) records.push_back(j.record);
  write_manifest(records, out / "manifest.tsv");
  std::cout << "wrote " << records.size() << " images to " << out.string() << "\n";
  return 0;
}

int cmd_morph(const Global& g, const MorphArgs& a) {
  const RecordIndex index(load_manifest(a.manifest));
  struct Job {
    std::string a, b;
    WarpMethod method;
    RegionSet regions;
  };
  std::vector<Job> jobs;
  if (!a.pairs.empty()) {
    std::ifstream in(a.pairs);
    if (!in) fail(Errc::MissingFile, "cannot open pair list " + a.pairs);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::vector<std::string> f;
      for (std::string t; std::getline(ss, t, '\t');) f.push_back(t);
      require(f.size() >= 2, Errc::ParseError, a.pairs + ":" + std::to_string(line_no) + ": expected id_a and id_b");
      jobs.push_back({f[0], f[1], parse_warp_method(f.size() > 2 && !f[2].empty() ? f[2] : a.method),
                      region_flags(f.size() > 3 ? f[3] : a.regions)});
    }
  } else {
    require(!a.a.empty() && !a.b.empty(), Errc::InvalidArgument, "morph needs --pairs or both --a and --b");
    jobs.push_back({a.a, a.b, parse_warp_method(a.method), region_flags(a.regions)});
  }
  require(!jobs.empty(), Errc::EmptyList, "no pairs to morph");
  const fs::path out = prepare_out(g);
  fs::create_directories(out / "morphs");
  MorphOptions mo;
  mo.alpha = a.alpha;
  mo.outer_source = parse_outer(a.outer);
  std::vector<json> prov(jobs.size());
  parallel_for(jobs.size(), g.workers, [&](std::size_t k) {
    const Job& j = jobs[k];
    const FaceRecord& ra = index.get(j.a);
    const FaceRecord& rb = index.get(j.b);
    const ImageBuffer ia = load_image(ra.image), ib = load_image(rb.image);
    const LandmarkSet la = parse_landmarks(ra.landmarks, ia.width(), ia.height());
    const LandmarkSet lb = parse_landmarks(rb.landmarks, ib.width(), ib.height());
    const MorphResult r = compose_morph_detailed(ia, ib, la, lb, j.method, mo);
    ImageBuffer img = r.image;
    if (!j.regions.empty()) {
      const ImageBuffer& carrier = mo.outer_source == OuterSource::A ? r.aligned.warped_a : r.aligned.warped_b;
      img = compose_partial(r.image, carrier, r.aligned.target, j.regions);
    }
    const std::string name = numbered("morphs/%06d", static_cast<int>(k));
    save_image(img, out / (name + ".png"));
    write_landmarks(r.aligned.target, out / (name + ".txt"));
    prov[k] = {{"index", k},
               {"a", j.a},
               {"b", j.b},
               {"method", warp_method_name(j.method)},
               {"regions", j.regions.flags()},
               {"kind", j.regions.empty() ? "complete_morph" : "partial_morph"},
               {"alpha", mo.alpha},
               {"outer", a.outer},
               {"image", name + ".png"},
               {"landmarks", name + ".txt"},
               {"poisson_unknowns", r.poisson.unknowns},
               {"poisson_iterations", r.poisson.iterations},
               {"poisson_residual_rms", r.poisson.residual_rms},
               {"seam_cost", r.seam.cost}};
  });
  std::string lines;
  for (const auto& p : prov) lines += p.dump() + "\n";
  write_text(out / "morphs.jsonl", lines);
  std::cout << "wrote " << jobs.size() << " morphs to " << (out / "morphs").string() << "\n";
  return 0;
}

int cmd_dataset(const Global& g, const DatasetArgs& a) {
  std::vector<FaceRecord> records = load_manifest(a.manifest);
  require(!records.empty(), Errc::EmptyDataset, "manifest has no records");
  const bool any_split = std::any_of(records.begin(), records.end(),
                                     [](const FaceRecord& r) { return r.split != Split::Unassigned; });
  const bool all_split = std::all_of(records.begin(), records.end(),
                                     [](const FaceRecord& r) { return r.split != Split::Unassigned; });
  if (a.resplit || !any_split) {
    std::array<double, 3> ratios{};
    std::istringstream ss(a.ratios);
    std::string tok;
    for (int i = 0; i < 3; ++i) {
      require(static_cast<bool>(std::getline(ss, tok, ',')), Errc::BadRatios, "ratios need three comma-separated values");
      try {
        ratios[i] = std::stod(tok);
      } catch (const std::exception&) {
        fail(Errc::BadRatios, "bad ratio '" + tok + "'");
      }
    }
    records = split_dataset(std::move(records), ratios, derive_seed(g.seed, {0x53504c54ull}));  // "SPLT"
  } else {
    require(all_split, Errc::InvalidArgument, "manifest assigns splits to some records only; use --resplit");
  }
  if (!a.splits.empty()) {
    std::vector<Split> keep;
    for (const auto& s : a.splits) keep.push_back(parse_split(s));
    std::erase_if(records, [&](const FaceRecord& r) { return std::find(keep.begin(), keep.end(), r.split) == keep.end(); });
    require(!records.empty(), Errc::EmptyDataset, "no records left after the split filter");
  }

  const Regime regime = parse_regime(a.regime);
  const RegimeSpec spec = regime_spec(regime);
  std::vector<double> fractions;
  for (const auto& b : spec.buckets) fractions.push_back(b.fraction);
  const auto counts = largest_remainder(a.total, fractions);
  int morphs = 0;
  for (std::size_t b = 0; b < counts.size(); ++b)
    if (spec.buckets[b].kind != SampleKind::Genuine) morphs += counts[b];
  const int pair_count = a.pairs >= 0 ? a.pairs : morphs;
  const auto pairs = select_pairs(records, pair_count, derive_seed(g.seed, {0x50414952ull}));  // "PAIR"
  const auto samples = build_regime(records, pairs, regime, a.total, derive_seed(g.seed, {0x52474d45ull}));

  const fs::path out = prepare_out(g);
  RenderOptions ro;
  ro.crop_size = a.crop_size;
  ro.margin = a.margin;
  ro.versions = a.versions;
  ro.channels = a.channels;
  ro.alpha = a.alpha;
  ro.outer_source = parse_outer(a.outer);
  ro.workers = g.workers;
  const RecordIndex index(records);
  const auto rendered = render_dataset(samples, index, ro, out, derive_seed(g.seed, {0x524e4452ull}));  // "RNDR"
  write_manifest(records, out / "records.tsv");

  json composition = json::array();
  for (std::size_t b = 0; b < spec.buckets.size(); ++b) {
    const auto& bk = spec.buckets[b];
    composition.push_back({{"kind", sample_kind_name(bk.kind)},
                           {"regions", bk.region_count},
                           {"fixed_region", bk.fixed_region ? std::string(region_name(*bk.fixed_region)) : ""},
                           {"fraction", bk.fraction},
                           {"count", counts[b]}});
  }
  std::map<std::string, int> per_split;
  for (const auto& s : samples) per_split[std::string(split_name(s.split))]++;
  write_json(out / "dataset.json", {{"regime", regime_name(regime)},
                                    {"total", a.total},
                                    {"pairs", pairs.size()},
                                    {"rendered", rendered.size()},
                                    {"crop_size", a.crop_size},
                                    {"margin", a.margin},
                                    {"versions", a.versions},
                                    {"channels", a.channels},
                                    {"alpha", a.alpha},
                                    {"outer", a.outer},
                                    {"composition", composition},
                                    {"samples_per_split", per_split}});
  std::cout << "rendered " << rendered.size() << " images (" << samples.size() << " samples) to " << out.string()
            << "\n";
  return 0;
}

int cmd_train(const Global& g, const TrainArgs& a) {
  const DatasetMeta meta = read_meta(a.data);
  const auto loaded = load_split(a.data, a.split);
  const fs::path out = prepare_out(g);
  nn::TrainOptions to;
  to.lr = a.lr;
  to.momentum = a.momentum;
  to.epochs = a.epochs;
  to.batch = a.batch;
  to.seed = derive_seed(g.seed, {0x5452414eull});  // "TRAN"
  to.max_shift = a.max_shift >= 0 ? a.max_shift : meta.margin;
  to.workers = g.workers;
  require(to.max_shift <= meta.margin, Errc::InvalidArgument, "max shift exceeds the dataset margin");

  nn::Network net;
  nn::TrainReport rep;
  std::vector<nn::Example> ex;
  if (!a.retrain_from.empty()) {
    net = nn::load_network(a.retrain_from);
    for (const auto& l : loaded) ex.push_back({l.crop, binary_target(l.record)});
    const double lr2 = a.lr_second_last >= 0.0 ? a.lr_second_last : a.lr_last / 10.0;
    rep = nn::retrain_head(net, ex, a.lr_last, lr2, to);
  } else {
    const int channels = loaded.front().crop.channels();
    const nn::Head head = meta.regime == Regime::Multiclass ? nn::Head::Sigmoid4 : nn::Head::Softmax2;
    net = nn::Network::desk_scale(meta.crop_size, channels, head, a.conv_channels, a.hidden, a.blocks);
    net.init(derive_seed(g.seed, {0x494e4954ull}));  // "INIT"
    to.loss = head == nn::Head::Sigmoid4 ? nn::Loss::MultilabelBce : nn::Loss::CrossEntropy;
    for (const auto& l : loaded) ex.push_back({l.crop, regime_target(l.record, meta.regime)});
    rep = nn::train(net, ex, to);
  }
  const fs::path model = fs::path(a.model).is_absolute() ? fs::path(a.model) : out / a.model;
  nn::save_network(net, model);
  std::string curve = "epoch\tloss\n";
  for (std::size_t e = 0; e < rep.epoch_loss.size(); ++e)
    curve += std::to_string(e + 1) + "\t" + std::to_string(rep.epoch_loss[e]) + "\n";
  write_text(out / "loss.tsv", curve);
  std::cout << "trained on " << ex.size() << " samples; final loss "
            << (rep.epoch_loss.empty() ? 0.0 : rep.epoch_loss.back()) << "; model " << model.string() << "\n";
  return 0;
}

int cmd_eval(const Global& g, const EvalArgs& a) {
  const nn::Network net = nn::load_network(a.model);
  const auto loaded = load_split(a.data, a.split);
  std::vector<double> scores(loaded.size());
  parallel_for(loaded.size(), g.workers, [&](std::size_t i) { scores[i] = morph_score(net, loaded[i].crop); });
  std::vector<char> is_morph;
  std::map<std::string, std::pair<int, int>> per_kind;  // detected as morph, total
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    const bool m = loaded[i].record.kind != SampleKind::Genuine;
    is_morph.push_back(m);
    auto& pk = per_kind[kind_key(loaded[i].record)];
    pk.first += scores[i] >= a.threshold;
    pk.second += 1;
  }
  const nn::EvalReport r = nn::evaluate_scores(scores, is_morph, a.threshold);
  const fs::path out = prepare_out(g);
  std::string curve = "threshold\ttpr\ttnr\n";
  for (const auto& p : r.curve)
    curve += std::to_string(p.threshold) + "\t" + std::to_string(p.tpr) + "\t" + std::to_string(p.tnr) + "\n";
  write_text(out / "curve.tsv", curve);
  json kinds = json::object();
  for (const auto& [k, v] : per_kind)
    kinds[k] = {{"classified_morph", static_cast<double>(v.first) / v.second}, {"count", v.second}};
  const json summary = {{"threshold", r.threshold}, {"tpr", r.true_positive_rate}, {"tnr", r.true_negative_rate},
                        {"eer", r.eer},             {"genuine", r.genuine},          {"morphs", r.morphs},
                        {"per_kind", kinds}};
  write_json(out / "report.json", summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_attack(const Global& g, const AttackArgs& a) {
  const nn::Network oracle_net = nn::load_network(a.model);
  require(oracle_net.head() == nn::Head::Softmax2, Errc::InvalidArgument, "the attacked model needs a binary head");
  attack::Oracle oracle = attack::Oracle::from_network(oracle_net);
  const auto seeds = load_split(a.data, a.seed_split);
  const auto targets = load_split(a.data, a.attack_split);
  std::vector<nn::Tensor> seed_set, morphs;
  for (const auto& l : seeds) seed_set.push_back(nn::example_input(oracle_net, l.crop));
  for (const auto& l : targets)
    if (l.record.kind != SampleKind::Genuine) morphs.push_back(nn::example_input(oracle_net, l.crop));
  require(!morphs.empty(), Errc::NoCorrectlyDetectedMorphs, "no morphs in the attack split");

  const auto& shape = oracle_net.input_shape();
  attack::SubstituteOptions so;
  so.rounds = a.rounds;
  so.lambda = a.lambda;
  so.seed = derive_seed(g.seed, {0x41544b53ull});  // "ATKS"
  so.train.epochs = a.epochs;
  so.train.lr = a.lr;
  so.train.workers = g.workers;
  const nn::Network arch = nn::Network::desk_scale(shape[1], shape[0], nn::Head::Softmax2, a.conv_channels, a.hidden);
  const auto sub = attack::train_substitute(oracle, seed_set, arch, so);
  const long substitute_queries = oracle.queries();
  const auto curve = attack::blackbox_attack(oracle, sub.net, morphs, a.epsilons);

  const fs::path out = prepare_out(g);
  std::string tsv = "epsilon\tdetected\n";
  json pts = json::array();
  for (const auto& p : curve.points) {
    tsv += std::to_string(p.epsilon) + "\t" + std::to_string(p.detected) + "\n";
    pts.push_back({p.epsilon, p.detected});
  }
  write_text(out / "curve.tsv", tsv);
  nn::save_network(sub.net, out / "substitute.mknn");
  if (a.dump > 0) {
    fs::create_directories(out / "adversarial");
    int written = 0;
    for (std::size_t i = 0; i < morphs.size() && written < a.dump; ++i) {
      if (oracle_net.forward(morphs[i]).values[1] <= 0.5) continue;
      for (double eps : a.epsilons) {
        const nn::Tensor adv = attack::fgsm(sub.net, morphs[i], attack::kMorph, eps);
        save_image(nn::tensor_to_image(adv),
                   out / "adversarial" / (numbered("%04d", static_cast<int>(i)) + "_eps" + std::to_string(eps) + ".png"));
      }
      ++written;
    }
  }
  const json summary = {{"agreement", sub.agreement},
                        {"substitute_set", sub.final_set_size},
                        {"substitute_queries", substitute_queries},
                        {"screened", curve.screened},
                        {"attacked", curve.attacked},
                        {"attack_queries", curve.queries},
                        {"curve", pts}};
  write_json(out / "attack.json", summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_lrp(const Global& g, const LrpArgs& a) {
  const nn::Network net = nn::load_network(a.model);
  const DatasetMeta meta = read_meta(a.data);
  const auto loaded = load_split(a.data, a.split);
  lrp::RuleAssignment rules = lrp::RuleAssignment::standard(net, a.epsilon, a.flat_until);
  lrp::LrpOptions lo;
  lo.gate = a.gate;

  struct Item {
    lrp::RelevanceMap map;
    LandmarkSet lm;
    std::size_t sample;
  };
  std::vector<std::optional<Item>> items(loaded.size());
  std::vector<std::string> skipped(loaded.size());
  parallel_for(loaded.size(), g.workers, [&](std::size_t i) {
    try {
      const auto r = lrp::lrp_propagate(net, nn::example_input(net, loaded[i].crop), a.class_index, rules, lo);
      LandmarkSet lm = loaded[i].crop_landmarks;
      lm.image_width = meta.crop_size;
      lm.image_height = meta.crop_size;
      items[i] = Item{r.map, std::move(lm), i};
    } catch (const Error& e) {
      if (e.code() != Errc::BelowGate) throw;
      skipped[i] = "below_gate";
    }
  });

  std::map<std::string, std::vector<const Item*>> groups;
  for (const auto& it : items)
    if (it) groups[kind_key(loaded[it->sample].record)].push_back(&*it);
  const fs::path out = prepare_out(g);
  if (a.heatmaps > 0) fs::create_directories(out / "heatmaps");
  std::string table = "kind\tcount\tleft_eye\tright_eye\tnose\tmouth\n";
  json summary = json::object();
  for (const auto& [key, members] : groups) {
    std::vector<lrp::RelevanceMap> maps;
    for (const Item* it : members) maps.push_back(it->map);
    const auto adjusted = lrp::mean_adjust(maps);
    std::array<double, kRegionCount> mean{};
    int used = 0;
    for (std::size_t k = 0; k < adjusted.size(); ++k) {
      try {
        const auto f = lrp::region_relevance(adjusted[k], members[k]->lm);
        for (int r = 0; r < kRegionCount; ++r) mean[r] += f[r];
        ++used;
      } catch (const Error& e) {
        if (e.code() != Errc::ZeroRegionRelevance) throw;
      }
      if (static_cast<int>(k) < a.heatmaps) {
        std::string name = key;
        std::replace(name.begin(), name.end(), ':', '_');
        save_image(lrp::relevance_heatmap(maps[k]),
                   out / "heatmaps" / (name + "_" + numbered("%04d", static_cast<int>(k)) + ".png"));
      }
    }
    if (used > 0)
      for (double& v : mean) v /= used;
    table += key + "\t" + std::to_string(used);
    for (double v : mean) table += "\t" + std::to_string(v);
    table += "\n";
    summary[key] = {{"count", used}, {"fractions", mean}};
  }
  write_text(out / "relevance.tsv", table);
  int below = 0;
  for (const auto& s : skipped) below += !s.empty();
  summary["below_gate"] = below;
  write_json(out / "relevance.json", summary);
  std::cout << table;
  return 0;
}

int cmd_inspect(const Global&, const InspectArgs& a) {
  json j = json::object();
  if (!a.model.empty()) {
    const nn::Network net = nn::load_network(a.model);
    json layers = json::array();
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
      const auto& s = net.layers()[i];
      layers.push_back({{"kind", nn::layer_kind_name(s.kind)},
                        {"kernel", s.kernel},
                        {"stride", s.stride},
                        {"in", s.in},
                        {"out", s.out},
                        {"output_shape", net.shape_after(static_cast<int>(i))},
                        {"parameters", net.params(static_cast<int>(i)).size()}});
    }
    j["model"] = {{"input_shape", net.input_shape()}, {"input_offset", net.input_offset()}, {"parameters", net.parameter_count()}, {"layers", layers}};
  }
  if (!a.data.empty()) {
    const auto list = read_sample_list(fs::path(a.data) / "samples.jsonl");
    std::map<std::string, int> kinds, splits;
    for (const auto& s : list) {
      kinds[kind_key(s)]++;
      splits[std::string(split_name(s.split))]++;
    }
    j["data"] = {{"samples", list.size()}, {"kinds", kinds}, {"splits", splits}};
  }
  if (!a.manifest.empty()) {
    const auto records = load_manifest(a.manifest);
    std::map<std::string, int> dbs, genders, splits;
    for (const auto& r : records) {
      dbs[r.database]++;
      genders[r.gender]++;
      splits[std::string(split_name(r.split))]++;
    }
    j["manifest"] = {{"records", records.size()}, {"databases", dbs}, {"genders", genders}, {"splits", splits}};
  }
  require(!j.empty(), Errc::InvalidArgument, "inspect needs --model, --data or --manifest");
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace morphkit::cli
