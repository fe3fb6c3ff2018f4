#include "commands.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aiscell/engine.hpp"
#include "aiscell/error.hpp"
#include "aiscell/evaluation.hpp"
#include "aiscell/synth.hpp"

namespace aiscell::cli {

namespace {

using nlohmann::ordered_json;

struct RunManifest {
  std::string command;
  std::string config;
  std::vector<std::string> inputs;
  ordered_json report = ordered_json::object();

  void write(const std::string& path) const {
    ordered_json j;
    j["command"] = command;
    j["config"] = config;
    ordered_json digests = ordered_json::array();
    for (const auto& in : inputs) digests.push_back({{"path", in}, {"sha256", sha256_file(in)}});
    j["inputs"] = std::move(digests);
    j["report"] = report;
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write " + path);
    out << j.dump(2) << '\n';
  }
};

EngineConfig config_or_default(const std::optional<std::string>& path) {
  return path ? load_config_file(*path) : EngineConfig{};
}

// Maps failures onto exit codes: data problems are 2, anything else 3.
template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), std::streamsize(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), std::size_t(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

int cmd_train(const TrainArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    const EngineConfig cfg = config_or_default(args.config);
    PortRegistry ports = load_ports_file(args.ports_csv);
    if (ports.empty()) throw Error(Errc::NoModel, "port registry " + args.ports_csv + " is empty");
    const auto records = read_records_file(args.train_csv, Schema::Train);
    if (records.empty()) throw Error(Errc::NoModel, "training set " + args.train_csv + " is empty");

    Engine engine(cfg, std::move(ports));
    const TrainSummary s = engine.train_all(records);
    if (s.dest_trained == 0) throw Error(Errc::NoModel, "no training record could be learned");
    engine.save_file(args.model_out);

    log << "records          " << s.records << '\n'
        << "trained (dest)   " << s.dest_trained << '\n'
        << "trained (eta)    " << s.eta_trained << '\n'
        << "skipped          " << s.skipped_out_of_bounds << '\n'
        << "rejected         " << s.rejected << '\n'
        << "dest grid cells  " << engine.dest_model().cells.size() << " of " << cfg.dest_grid().capacity() << '\n'
        << "eta grid cells   " << engine.eta_model().cells.size() << " of " << cfg.eta_grid().capacity() << '\n';

    RunManifest m{"train", format_config(cfg), {args.train_csv, args.ports_csv}};
    if (args.config) m.inputs.push_back(*args.config);
    m.report = {{"records", s.records},
                {"dest_trained", s.dest_trained},
                {"eta_trained", s.eta_trained},
                {"skipped", s.skipped_out_of_bounds},
                {"rejected", s.rejected},
                {"dest_cells", engine.dest_model().cells.size()},
                {"eta_cells", engine.eta_model().cells.size()},
                {"model", args.model_out}};
    m.write(args.model_out + ".manifest.json");
    return int(kOk);
  });
}

int cmd_predict(const PredictArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    Engine engine = Engine::load_file(args.model_in);
    if (args.config) engine.set_config(load_config_file(*args.config));

    std::ifstream in(args.eval_csv);
    if (!in) throw Error(Errc::Io, "cannot open " + args.eval_csv);
    read_header(in, Schema::Eval);
    std::ofstream out(args.predictions_out);
    if (!out) throw Error(Errc::Io, "cannot write " + args.predictions_out);
    out << kPredictionsHeader << '\n';

    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      const AisRecord rec = parse_record(line, Schema::Eval);
      const Prediction p = engine.predict(rec);
      write_prediction_row(out, PredictionRow{rec.ship_id, rec.timestamp, p.destination, p.arrival});
      ++n;
    }
    engine.finish();
    if (!out) throw Error(Errc::Io, "write to " + args.predictions_out + " failed");

    log << "predictions      " << n << '\n';
    if (engine.config().semi_supervised)
      log << "committed trips  " << engine.committed_trips().size() << '\n'
          << "discarded trips  " << engine.discarded_trips() << '\n';

    RunManifest m{"predict", format_config(engine.config()), {args.model_in, args.eval_csv}};
    if (args.config) m.inputs.push_back(*args.config);
    m.report = {{"predictions", n},
                {"committed_trips", engine.committed_trips().size()},
                {"discarded_trips", engine.discarded_trips()},
                {"output", args.predictions_out}};
    m.write(args.predictions_out + ".manifest.json");
    return int(kOk);
  });
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    std::ifstream pin(args.predictions);
    if (!pin) throw Error(Errc::Io, "cannot open " + args.predictions);
    std::ifstream tin(args.truth);
    if (!tin) throw Error(Errc::Io, "cannot open " + args.truth);
    const auto preds = read_predictions(pin);
    const auto truth = read_truth(tin);
    const EvalReport report = evaluate_rows(preds, truth);

    std::ofstream out(args.report_out);
    if (!out) throw Error(Errc::Io, "cannot write " + args.report_out);
    out << to_json(report) << '\n';
    log << to_text(report) << to_json(report) << '\n';

    RunManifest m{"evaluate", "", {args.predictions, args.truth}};
    m.report = ordered_json::parse(to_json(report));
    m.write(args.report_out + ".manifest.json");
    return int(kOk);
  });
}

int cmd_synth(const SynthArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    SynthConfig cfg = args.config ? load_synth_config_file(*args.config) : SynthConfig{};
    if (args.seed) cfg.seed = *args.seed;
    const Dataset data = gen_dataset(cfg);
    const auto files = write_dataset(data, args.out_dir);
    for (const auto& f : files) log << "wrote " << f << '\n';

    RunManifest m{"synth", format_synth_config(cfg), {}};
    if (args.config) m.inputs.push_back(*args.config);
    ordered_json outputs = ordered_json::array();
    for (const auto& f : files) outputs.push_back({{"path", f}, {"sha256", sha256_file(f)}});
    m.report = {{"train_trips", data.train_trips.size()},
                {"eval_trips", data.eval_trips.size()},
                {"ports", data.ports.size()},
                {"outputs", outputs}};
    m.write((std::filesystem::path(args.out_dir) / "manifest.json").string());
    return int(kOk);
  });
}

int cmd_diagnose(const DiagnoseArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    const EngineConfig cfg = config_or_default(args.config);
    const auto records = read_records_file(args.train_csv, Schema::Train);
    if (records.empty()) throw Error(Errc::NoModel, "training set " + args.train_csv + " is empty");
    std::size_t unknown = 0;
    if (args.ports_csv) {
      const PortRegistry ports = load_ports_file(*args.ports_csv);
      for (const auto& r : records) unknown += !ports.contains(*r.label_destination);
    }
    const auto rates = dimension_diagnostic(records, cfg.speed_bucket);

    std::ostringstream table;
    table << std::left << std::setw(12) << "Dimension" << "Error rate percentage\n";
    ordered_json j = ordered_json::object();
    for (const auto& [dim, rate] : rates) {
      table << std::left << std::setw(12) << to_string(dim);
      if (rate) {
        table << std::fixed << std::setprecision(1) << *rate * 100.0 << "%\n";
        j[std::string(to_string(dim))] = *rate;
      } else {
        table << "n/a\n";
        j[std::string(to_string(dim))] = nullptr;
      }
    }
    log << table.str();
    if (unknown) log << unknown << " records name a destination missing from the port registry\n";

    RunManifest m{"diagnose", format_config(cfg), {args.train_csv}};
    if (args.ports_csv) m.inputs.push_back(*args.ports_csv);
    if (args.config) m.inputs.push_back(*args.config);
    m.report = {{"error_rates", j}, {"records", records.size()}, {"unknown_destinations", unknown}};
    if (args.out) {
      std::ofstream out(*args.out);
      if (!out) throw Error(Errc::Io, "cannot write " + *args.out);
      out << table.str();
      m.write(*args.out + ".manifest.json");
    }
    return int(kOk);
  });
}

int run(int argc, char** argv, std::ostream& log) {
  CLI::App app{"Cell-grid destination and arrival-time prediction for AIS streams"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "learn both grid models from a labeled CSV");
  t->add_option("train_csv", train.train_csv, "labeled AIS CSV")->required()->check(CLI::ExistingFile);
  t->add_option("--ports", train.ports_csv, "ports CSV")->required()->check(CLI::ExistingFile);
  t->add_option("--config", train.config, "engine configuration")->check(CLI::ExistingFile);
  t->add_option("--model,--out", train.model_out, "snapshot to write")->required();

  PredictArgs predict;
  auto* p = app.add_subcommand("predict", "predict destination and arrival for every record of a stream");
  p->add_option("eval_csv", predict.eval_csv, "unlabeled AIS CSV")->required()->check(CLI::ExistingFile);
  p->add_option("--model", predict.model_in, "trained snapshot")->required()->check(CLI::ExistingFile);
  p->add_option("--config", predict.config, "prediction-time configuration")->check(CLI::ExistingFile);
  p->add_option("--out", predict.predictions_out, "predictions CSV to write")->required();

  EvaluateArgs evaluate;
  auto* e = app.add_subcommand("evaluate", "score predictions against ground truth");
  e->add_option("predictions", evaluate.predictions, "predictions CSV")->required()->check(CLI::ExistingFile);
  e->add_option("truth", evaluate.truth, "truth CSV")->required()->check(CLI::ExistingFile);
  e->add_option("--out", evaluate.report_out, "JSON report to write")->required();

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "generate a synthetic dataset with known ground truth");
  s->add_option("--config", synth.config, "generator configuration")->check(CLI::ExistingFile);
  s->add_option("--seed", synth.seed, "override the configured seed");
  s->add_option("--out", synth.out_dir, "output directory")->required();

  DiagnoseArgs diagnose;
  auto* d = app.add_subcommand("diagnose", "single-dimension error rates on a labeled CSV");
  d->add_option("train_csv", diagnose.train_csv, "labeled AIS CSV")->required()->check(CLI::ExistingFile);
  d->add_option("--ports", diagnose.ports_csv, "ports CSV")->check(CLI::ExistingFile);
  d->add_option("--config", diagnose.config, "engine configuration")->check(CLI::ExistingFile);
  d->add_option("--out", diagnose.out, "write the table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err, log, log);
    return code == 0 ? int(kOk) : int(kUsage);
  }

  if (*t) return cmd_train(train, log);
  if (*p) return cmd_predict(predict, log);
  if (*e) return cmd_evaluate(evaluate, log);
  if (*s) return cmd_synth(synth, log);
  if (*d) return cmd_diagnose(diagnose, log);
  return int(kUsage);
}

}  // namespace aiscell::cli
