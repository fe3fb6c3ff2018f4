#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "aiscell/engine.hpp"
#include "aiscell/synth.hpp"
#include "commands.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace aiscell;

namespace {

int run_cli(std::vector<std::string> args, std::string* log_out = nullptr) {
  args.insert(args.begin(), "aiscell");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream log;
  const int code = cli::run(int(argv.size()), argv.data(), log);
  if (log_out) *log_out = log.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return std::size_t(std::count(s.begin(), s.end(), '\n'));
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// A small synthetic dataset shared by the whole suite.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    // ctest runs every case in its own process, possibly in parallel
    dir_ = aiscell::testing::scratch_dir("cli_" + std::to_string(::getpid()));
    write_text(dir_ / "synth.cfg", "n_ports = 8\nn_train_trips = 80\nn_eval_trips = 10\n");
    write_text(dir_ / "engine.cfg", "eta_granularity = 0.05\n");
    ASSERT_EQ(run_cli({"synth", "--config", (dir_ / "synth.cfg").string(), "--out", (dir_ / "data").string()}), 0);
    ASSERT_EQ(run_cli({"train", (dir_ / "data/train.csv").string(), "--ports", (dir_ / "data/ports.csv").string(),
                       "--config", (dir_ / "engine.cfg").string(), "--model", (dir_ / "model.bin").string()}),
              0);
  }

  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static fs::path dir_;
};
fs::path CliTest::dir_;

}  // namespace

TEST_F(CliTest, TrainWritesSnapshotAndManifest) {
  EXPECT_TRUE(fs::exists(dir_ / "model.bin"));
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "model.bin.manifest.json"));
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_NE(manifest["config"].get<std::string>().find("eta_granularity = 0.05"), std::string::npos);
  ASSERT_EQ(manifest["inputs"].size(), 3u);
  EXPECT_EQ(manifest["inputs"][0]["sha256"], cli::sha256_file((dir_ / "data/train.csv").string()));
  EXPECT_GT(manifest["report"]["dest_trained"].get<int>(), 0);
}

TEST_F(CliTest, TrainEmptyCsvFails) {
  write_text(dir_ / "empty.csv", std::string(kTrainHeader) + "\n");
  std::string log;
  EXPECT_EQ(run_cli({"train", (dir_ / "empty.csv").string(), "--ports", (dir_ / "data/ports.csv").string(), "--model",
                     (dir_ / "empty.bin").string()},
                    &log),
            2);
  EXPECT_NE(log.find("empty"), std::string::npos);
}

TEST_F(CliTest, TrainCountsOutOfBoxRecords) {
  const std::string lines = std::string(kTrainHeader) +
                            "\nV1,70,12,10.0,36.0,90,90,1000,PORT00,7,PORT01,5000"
                            "\nV1,70,12,10.0,50.0,90,90,1000,PORT00,7,PORT01,5000\n";
  write_text(dir_ / "mixed.csv", lines);
  ASSERT_EQ(run_cli({"train", (dir_ / "mixed.csv").string(), "--ports", (dir_ / "data/ports.csv").string(), "--model",
                     (dir_ / "mixed.bin").string()}),
            0);
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "mixed.bin.manifest.json"));
  EXPECT_EQ(manifest["report"]["skipped"], 1);
}

TEST_F(CliTest, PredictOneLinePerRecordAndDeterministic) {
  const auto pred_a = dir_ / "pred_a.csv", pred_b = dir_ / "pred_b.csv";
  ASSERT_EQ(run_cli({"predict", (dir_ / "data/eval.csv").string(), "--model", (dir_ / "model.bin").string(), "--out",
                     pred_a.string()}),
            0);
  ASSERT_EQ(run_cli({"predict", (dir_ / "data/eval.csv").string(), "--model", (dir_ / "model.bin").string(), "--out",
                     pred_b.string()}),
            0);
  EXPECT_EQ(line_count(pred_a), line_count(dir_ / "data/eval.csv"));
  EXPECT_EQ(slurp(pred_a), slurp(pred_b));
  EXPECT_TRUE(fs::exists(dir_ / "pred_a.csv.manifest.json"));
}

TEST_F(CliTest, PredictWithUntrainedModelFails) {
  Engine(EngineConfig{}, load_ports_file((dir_ / "data/ports.csv").string())).save_file((dir_ / "blank.bin").string());
  std::string log;
  EXPECT_EQ(run_cli({"predict", (dir_ / "data/eval.csv").string(), "--model", (dir_ / "blank.bin").string(), "--out",
                     (dir_ / "blank.csv").string()},
                    &log),
            2);
  EXPECT_NE(log.find("no trained records"), std::string::npos) << log;
}

TEST_F(CliTest, PredictRejectsTrainSchema) {
  EXPECT_EQ(run_cli({"predict", (dir_ / "data/train.csv").string(), "--model", (dir_ / "model.bin").string(), "--out",
                     (dir_ / "wrong.csv").string()}),
            2);
}

TEST_F(CliTest, PredictSemiSupervised) {
  write_text(dir_ / "semi.cfg", "eta_granularity = 0.05\nsemi_supervised = true\n");
  std::string log;
  ASSERT_EQ(run_cli({"predict", (dir_ / "data/eval.csv").string(), "--model", (dir_ / "model.bin").string(), "--config",
                     (dir_ / "semi.cfg").string(), "--out", (dir_ / "semi.csv").string()},
                    &log),
            0);
  EXPECT_NE(log.find("committed trips"), std::string::npos);
}

TEST_F(CliTest, EvaluatePerfectShuffledAndMissing) {
  // perfect predictions built from the truth file itself
  const auto truth = [&] {
    std::ifstream in(dir_ / "data/truth.csv");
    return read_truth(in);
  }();
  const auto eval = read_records_file((dir_ / "data/eval.csv").string(), Schema::Eval);
  {
    std::ofstream out(dir_ / "perfect.csv");
    out << kPredictionsHeader << '\n';
    for (const AisRecord& r : eval) {
      const auto t = std::find_if(truth.begin(), truth.end(), [&](const TruthRow& t) { return t.ship_id == r.ship_id; });
      write_prediction_row(out, {r.ship_id, r.timestamp, t->port, t->arrival});
    }
  }
  ASSERT_EQ(run_cli({"evaluate", (dir_ / "perfect.csv").string(), (dir_ / "data/truth.csv").string(), "--out",
                     (dir_ / "perfect.json").string()}),
            0);
  const auto report = nlohmann::json::parse(slurp(dir_ / "perfect.json"));
  EXPECT_EQ(report["route_accuracy"], 1.0);
  EXPECT_EQ(report["eta_mean_abs_error_min"], 0.0);

  // shuffled truth rows give the same report
  std::vector<std::string> rows;
  {
    std::istringstream in(slurp(dir_ / "data/truth.csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) rows.push_back(line);
  }
  std::shuffle(rows.begin(), rows.end(), std::mt19937(5));
  {
    std::ofstream out(dir_ / "shuffled_truth.csv");
    out << kTruthHeader << '\n';
    for (const auto& r : rows) out << r << '\n';
  }
  ASSERT_EQ(run_cli({"predict", (dir_ / "data/eval.csv").string(), "--model", (dir_ / "model.bin").string(), "--out",
                     (dir_ / "real.csv").string()}),
            0);
  ASSERT_EQ(run_cli({"evaluate", (dir_ / "real.csv").string(), (dir_ / "data/truth.csv").string(), "--out",
                     (dir_ / "r1.json").string()}),
            0);
  ASSERT_EQ(run_cli({"evaluate", (dir_ / "real.csv").string(), (dir_ / "shuffled_truth.csv").string(), "--out",
                     (dir_ / "r2.json").string()}),
            0);
  EXPECT_EQ(slurp(dir_ / "r1.json"), slurp(dir_ / "r2.json"));

  // a truth trip nobody predicted
  {
    std::ofstream out(dir_ / "extra_truth.csv");
    out << slurp(dir_ / "data/truth.csv") << "GHOST,GHOST-1,PORT00,99999999999\n";
  }
  EXPECT_EQ(run_cli({"evaluate", (dir_ / "real.csv").string(), (dir_ / "extra_truth.csv").string(), "--out",
                     (dir_ / "r3.json").string()}),
            2);
}

TEST_F(CliTest, SynthDefaultFilesSameSeedAndBadConfig) {
  const auto a = dir_ / "syn_a", b = dir_ / "syn_b";
  ASSERT_EQ(run_cli({"synth", "--seed", "9", "--out", a.string()}), 0);
  ASSERT_EQ(run_cli({"synth", "--seed", "9", "--out", b.string()}), 0);
  for (const char* f : {"train.csv", "eval.csv", "truth.csv", "ports.csv"}) {
    EXPECT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  EXPECT_TRUE(fs::exists(a / "manifest.json"));

  write_text(dir_ / "bad_synth.cfg", "not_a_key = 3\n");
  EXPECT_NE(run_cli({"synth", "--config", (dir_ / "bad_synth.cfg").string(), "--out", (dir_ / "syn_c").string()}), 0);
}

TEST_F(CliTest, DiagnoseDepartureDeterminedAndMissingHeading) {
  // every departure port serves exactly one destination
  SynthConfig sc;
  sc.n_ports = 6;
  const PortRegistry ports = gen_ports(sc);
  {
    std::ofstream out(dir_ / "dep.csv");
    out << kTrainHeader << '\n';
    for (std::size_t i = 0; i < ports.size(); ++i) {
      const Port& from = ports.ports()[i];
      const Port& to = ports.ports()[(i + 1) % ports.size()];
      TripSpec spec{"S" + std::to_string(i), "S" + std::to_string(i) + "-1"};
      spec.noise_seed = i;
      for (AisRecord r : gen_trip(from, to, 10.0 + double(i), sc, spec).records) {
        r.heading.reset();
        out << format_record(r, Schema::Train) << '\n';
      }
    }
  }
  std::string log;
  ASSERT_EQ(run_cli({"diagnose", (dir_ / "dep.csv").string(), "--out", (dir_ / "dep.txt").string()}, &log), 0);
  const std::string table = slurp(dir_ / "dep.txt");
  EXPECT_NE(table.find("departure   0.0%"), std::string::npos) << table;
  EXPECT_NE(table.find("heading     n/a"), std::string::npos) << table;
  EXPECT_TRUE(fs::exists(dir_ / "dep.txt.manifest.json"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}), 1);
  EXPECT_EQ(run_cli({"train"}), 1);
  EXPECT_EQ(run_cli({"frobnicate"}), 1);
}
