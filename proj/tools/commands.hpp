#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aiscell::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

struct TrainArgs {
  std::string train_csv;
  std::string ports_csv;
  std::optional<std::string> config;
  std::string model_out;
};

struct PredictArgs {
  std::string model_in;
  std::string eval_csv;
  std::optional<std::string> config;
  std::string predictions_out;
};

struct EvaluateArgs {
  std::string predictions;
  std::string truth;
  std::string report_out;
};

struct SynthArgs {
  std::optional<std::string> config;
  std::optional<unsigned long long> seed;
  std::string out_dir;
};

struct DiagnoseArgs {
  std::string train_csv;
  std::optional<std::string> ports_csv;
  std::optional<std::string> config;
  std::optional<std::string> out;
};

// Each command reports progress on `log`, writes its outputs plus a
// <output>.manifest.json run manifest, and returns a process exit code.
int cmd_train(const TrainArgs& args, std::ostream& log);
int cmd_predict(const PredictArgs& args, std::ostream& log);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& log);
int cmd_synth(const SynthArgs& args, std::ostream& log);
int cmd_diagnose(const DiagnoseArgs& args, std::ostream& log);

/// Full command line entry point (argv[0] is the program name).
int run(int argc, char** argv, std::ostream& log);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace aiscell::cli
