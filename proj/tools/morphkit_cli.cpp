#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "morphkit/error.hpp"
#include "morphkit/simd/kernels.hpp"

namespace {

using morphkit::ErrorCategory;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Numeric: return 4;
  }
  return 4;
}

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::Numeric: return "numeric";
  }
  return "numeric";
}

int report(std::string_view code, ErrorCategory category, const std::string& message) {
  const nlohmann::json j = {{"error", {{"code", code}, {"category", category_name(category)}, {"message", message}}}};
  std::cerr << j.dump() << "\n";
  return exit_code(category);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace morphkit::cli;
  CLI::App app{"morphkit: face morph generation, detection training and robustness audits"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; [command] sections; flags win");
  Global g;
  app.add_option("--seed", g.seed, "base random seed")->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads (results do not depend on it)")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "render procedural face-like images with landmarks and a manifest");
  synth->add_option("--count", sy.count, "subjects")->capture_default_str();
  synth->add_option("--captures", sy.captures, "images per subject")->capture_default_str();
  synth->add_option("--size", sy.size, "image width and height")->capture_default_str();
  synth->add_option("--channels", sy.channels, "1 or 3")->capture_default_str();

  MorphArgs mo;
  auto* morph = app.add_subcommand("morph", "render complete or partial morphs for listed pairs");
  morph->add_option("--manifest", mo.manifest, "face manifest")->required();
  morph->add_option("--pairs", mo.pairs, "tab-separated list: id_a id_b [method] [regions]");
  morph->add_option("--a", mo.a, "first identity");
  morph->add_option("--b", mo.b, "second identity");
  morph->add_option("--method", mo.method, "triangle or field")->capture_default_str();
  morph->add_option("--regions", mo.regions, "partial morph regions as LRNM flags");
  morph->add_option("--alpha", mo.alpha, "blend weight of the first image")->capture_default_str();
  morph->add_option("--outer", mo.outer, "image supplying the outer face: A or B")->capture_default_str();

  DatasetArgs da;
  auto* dataset = app.add_subcommand("dataset", "split, pair, build a regime, render and augment");
  dataset->add_option("--manifest", da.manifest, "face manifest")->required();
  dataset->add_option("--regime", da.regime, "naive, one_region, complex or multiclass")->capture_default_str();
  dataset->add_option("--total", da.total, "samples before augmentation")->capture_default_str();
  dataset->add_option("--pairs", da.pairs, "morph pairs (default: one per morph sample)")->capture_default_str();
  dataset->add_option("--ratios", da.ratios, "train,test,val fractions")->capture_default_str();
  dataset->add_flag("--resplit", da.resplit, "ignore the manifest's split column");
  dataset->add_option("--splits", da.splits, "keep only these splits")->delimiter(',');
  dataset->add_option("--crop-size", da.crop_size, "normalized crop size")->capture_default_str();
  dataset->add_option("--margin", da.margin, "crop border for training shifts")->capture_default_str();
  dataset->add_option("--versions", da.versions, "5 (original plus four corruptions) or 1")->capture_default_str();
  dataset->add_option("--channels", da.channels, "1 or 3")->capture_default_str();
  dataset->add_option("--alpha", da.alpha, "morph blend weight")->capture_default_str();
  dataset->add_option("--outer", da.outer, "A or B")->capture_default_str();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "train the detector on a rendered dataset");
  train->add_option("--data", tr.data, "rendered dataset directory")->required();
  train->add_option("--split", tr.split, "split to train on")->capture_default_str();
  train->add_option("--model", tr.model, "output model file (relative to --out-dir)")->capture_default_str();
  train->add_option("--retrain-from", tr.retrain_from, "multilabel model whose head is retrained for binary output");
  train->add_option("--epochs", tr.epochs)->capture_default_str();
  train->add_option("--lr", tr.lr)->capture_default_str();
  train->add_option("--lr-last", tr.lr_last, "head retraining: last layer")->capture_default_str();
  train->add_option("--lr-second-last", tr.lr_second_last, "head retraining: second-to-last layer (default lr-last/10)");
  train->add_option("--momentum", tr.momentum)->capture_default_str();
  train->add_option("--batch", tr.batch)->capture_default_str();
  train->add_option("--max-shift", tr.max_shift, "per-epoch crop shift (default: dataset margin)");
  train->add_option("--conv-channels", tr.conv_channels)->capture_default_str();
  train->add_option("--hidden", tr.hidden)->capture_default_str();
  train->add_option("--blocks", tr.blocks)->capture_default_str();

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "TPR/TNR/EER of a model on a rendered split");
  eval->add_option("--data", ev.data)->required();
  eval->add_option("--model", ev.model)->required();
  eval->add_option("--split", ev.split)->capture_default_str();
  eval->add_option("--threshold", ev.threshold)->capture_default_str();

  AttackArgs at;
  auto* atk = app.add_subcommand("attack", "black-box substitute attack against a trained model");
  atk->add_option("--data", at.data)->required();
  atk->add_option("--model", at.model, "attacked model (oracle)")->required();
  atk->add_option("--seed-split", at.seed_split)->capture_default_str();
  atk->add_option("--attack-split", at.attack_split)->capture_default_str();
  atk->add_option("--rounds", at.rounds)->capture_default_str();
  atk->add_option("--lambda", at.lambda)->capture_default_str();
  atk->add_option("--epsilons", at.epsilons, "0-255 intensity steps")->delimiter(',')->capture_default_str();
  atk->add_option("--epochs", at.epochs, "substitute epochs per round")->capture_default_str();
  atk->add_option("--lr", at.lr)->capture_default_str();
  atk->add_option("--conv-channels", at.conv_channels)->capture_default_str();
  atk->add_option("--hidden", at.hidden)->capture_default_str();
  atk->add_option("--dump", at.dump, "adversarial examples written per epsilon")->capture_default_str();

  LrpArgs lr;
  auto* lrpc = app.add_subcommand("lrp", "relevance maps and per-region relevance tables");
  lrpc->add_option("--data", lr.data)->required();
  lrpc->add_option("--model", lr.model)->required();
  lrpc->add_option("--split", lr.split)->capture_default_str();
  lrpc->add_option("--class", lr.class_index, "explained output")->capture_default_str();
  lrpc->add_option("--epsilon", lr.epsilon, "stabilizer of the epsilon rule")->capture_default_str();
  lrpc->add_option("--flat-until", lr.flat_until, "layers below this index use the flat rule (-1: first pool)")
      ->capture_default_str();
  lrpc->add_option("--gate", lr.gate, "skip inputs whose class output is below 0.1")->capture_default_str();
  lrpc->add_option("--heatmaps", lr.heatmaps, "heatmaps written per kind")->capture_default_str();

  InspectArgs in;
  auto* inspect = app.add_subcommand("inspect", "describe a model, dataset or manifest");
  inspect->add_option("--model", in.model);
  inspect->add_option("--data", in.data);
  inspect->add_option("--manifest", in.manifest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(e.get_name(), ErrorCategory::Config, e.what());
  }
  g.job = app.config_to_str(true, false);

  try {
    if (*synth) return cmd_synth(g, sy);
    if (*morph) return cmd_morph(g, mo);
    if (*dataset) return cmd_dataset(g, da);
    if (*train) return cmd_train(g, tr);
    if (*eval) return cmd_eval(g, ev);
    if (*atk) return cmd_attack(g, at);
    if (*lrpc) return cmd_lrp(g, lr);
    if (*inspect) return cmd_inspect(g, in);
  } catch (const morphkit::Error& e) {
    return report(e.name(), morphkit::errc_category(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report("IoError", ErrorCategory::Data, e.what());
  } catch (const std::exception& e) {
    return report("InternalError", ErrorCategory::Numeric, e.what());
  }
  return 2;
}
