#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace morphkit::cli {

struct Global {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = ".";
  std::string job;  // resolved configuration text, stored next to the outputs
};

struct SynthArgs {
  int count = 100;
  int captures = 1;  // images per synthetic subject
  int size = 128;
  int channels = 1;
};

struct MorphArgs {
  std::string manifest;
  std::string pairs;  // tab-separated: id_a id_b [method] [regions]
  std::string a, b;
  std::string method = "triangle";
  std::string regions;  // LRNM flags; empty means complete morph
  double alpha = 0.5;
  std::string outer = "A";
};

struct DatasetArgs {
  std::string manifest;
  std::string regime = "naive";
  int total = 100;
  int pairs = -1;  // default: one pair per morph sample
  std::string ratios = "0.8,0.15,0.05";
  bool resplit = false;
  std::vector<std::string> splits;  // keep records of these splits; empty keeps all
  int crop_size = 64;
  int margin = 3;
  int versions = 5;
  int channels = 1;
  double alpha = 0.5;
  std::string outer = "A";
};

struct TrainArgs {
  std::string data;
  std::string split = "train";
  std::string model = "model.mknn";
  std::string retrain_from;
  int epochs = 10;
  double lr = 0.01;
  double lr_last = 0.01;
  double lr_second_last = -1.0;  // default lr_last / 10
  double momentum = 0.9;
  int batch = 16;
  int max_shift = -1;  // default: the dataset margin
  int conv_channels = 8;
  int hidden = 128;
  int blocks = 3;
};

struct EvalArgs {
  std::string data;
  std::string split = "test";
  std::string model;
  double threshold = 0.5;
};

struct AttackArgs {
  std::string data;
  std::string model;
  std::string seed_split = "val";
  std::string attack_split = "test";
  int rounds = 3;
  double lambda = 0.1;
  std::vector<double> epsilons = {0, 1, 2, 3, 4, 6, 8, 12, 16};
  int epochs = 10;
  double lr = 0.01;
  int conv_channels = 8;
  int hidden = 128;
  int dump = 0;  // adversarial images written per epsilon
};

struct LrpArgs {
  std::string data;
  std::string split = "test";
  std::string model;
  int class_index = 1;
  double epsilon = 0.01;
  int flat_until = -1;
  bool gate = true;
  int heatmaps = 0;
};

struct InspectArgs {
  std::string model;
  std::string data;
  std::string manifest;
};

int cmd_synth(const Global& g, const SynthArgs& a);
int cmd_morph(const Global& g, const MorphArgs& a);
int cmd_dataset(const Global& g, const DatasetArgs& a);
int cmd_train(const Global& g, const TrainArgs& a);
int cmd_eval(const Global& g, const EvalArgs& a);
int cmd_attack(const Global& g, const AttackArgs& a);
int cmd_lrp(const Global& g, const LrpArgs& a);
int cmd_inspect(const Global& g, const InspectArgs& a);

}  // namespace morphkit::cli
