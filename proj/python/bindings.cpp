#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "aiscell/engine.hpp"
#include "aiscell/error.hpp"
#include "aiscell/evaluation.hpp"
#include "aiscell/synth.hpp"

namespace py = pybind11;
using namespace aiscell;

namespace {

std::string config_text(const EngineConfig& c) { return format_config(c); }

std::vector<PredictionRow> predict_stream(Engine& engine, const std::vector<AisRecord>& records) {
  std::vector<PredictionRow> rows;
  rows.reserve(records.size());
  for (const AisRecord& r : records) {
    const Prediction p = engine.predict(r);
    rows.push_back({r.ship_id, r.timestamp, p.destination, p.arrival});
  }
  engine.finish();
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cell-grid destination and arrival-time prediction for AIS streams";

  // raised instances carry the error kind as `.code`, e.g. "OutOfBounds"
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&] { return py::object(py::exception<Error>(m, "AiscellError")); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object exc = type(py::str(e.what()));
      exc.attr("code") = py::str(errc_name(e.code()));
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  // geometry
  py::class_<Coord>(m, "Coord")
      .def(py::init<double, double>(), py::arg("lat"), py::arg("lon"))
      .def_readwrite("lat", &Coord::lat)
      .def_readwrite("lon", &Coord::lon)
      .def("__repr__", [](const Coord& c) { return "Coord(" + format_double(c.lat) + ", " + format_double(c.lon) + ")"; });

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](double lat_min, double lat_max, double lon_min, double lon_max, double g) {
             GridSpec s{lat_min, lat_max, lon_min, lon_max, g};
             s.validate();
             return s;
           }),
           py::arg("lat_min") = 30.0, py::arg("lat_max") = 46.0, py::arg("lon_min") = -6.0, py::arg("lon_max") = 36.5,
           py::arg("granularity") = 1.0)
      .def_property_readonly("rows", &GridSpec::rows)
      .def_property_readonly("cols", &GridSpec::cols)
      .def_property_readonly("capacity", &GridSpec::capacity);

  m.def("cell_of", [](const Coord& pos, const GridSpec& grid) {
        const CellId c = cell_of(pos, grid);
        return std::pair{c.row, c.col};
      }, py::arg("pos"), py::arg("grid"), "(row, col) of the cell holding pos");
  m.def("haversine_nm", &haversine_nm, py::arg("a"), py::arg("b"));
  m.def("bearing_deg", &bearing_deg, py::arg("a"), py::arg("b"));
  m.def("angular_diff", &angular_diff, py::arg("a"), py::arg("b"));

  // records and ports
  py::class_<AisRecord>(m, "AisRecord")
      .def(py::init<>())
      .def_readwrite("ship_id", &AisRecord::ship_id)
      .def_readwrite("ship_type", &AisRecord::ship_type)
      .def_readwrite("speed", &AisRecord::speed)
      .def_readwrite("pos", &AisRecord::pos)
      .def_readwrite("course", &AisRecord::course)
      .def_readwrite("heading", &AisRecord::heading)
      .def_readwrite("timestamp", &AisRecord::timestamp)
      .def_readwrite("departure_port", &AisRecord::departure_port)
      .def_readwrite("draught", &AisRecord::draught)
      .def_readwrite("label_destination", &AisRecord::label_destination)
      .def_readwrite("label_arrival", &AisRecord::label_arrival)
      .def(py::self == py::self);

  m.def("parse_record", [](const std::string& line, bool train) {
        return parse_record(line, train ? Schema::Train : Schema::Eval);
      }, py::arg("line"), py::arg("train") = false);
  m.def("format_record", [](const AisRecord& r, bool train) {
        return format_record(r, train ? Schema::Train : Schema::Eval);
      }, py::arg("record"), py::arg("train") = false);
  m.def("read_records", [](const std::string& path, bool train) {
        return read_records_file(path, train ? Schema::Train : Schema::Eval);
      }, py::arg("path"), py::arg("train") = false);

  py::class_<Port>(m, "Port")
      .def(py::init([](std::string name, double lat, double lon, double radius) {
             return Port{std::move(name), {lat, lon}, radius};
           }),
           py::arg("name"), py::arg("lat"), py::arg("lon"), py::arg("radius_nm") = 2.0)
      .def_readonly("name", &Port::name)
      .def_readonly("pos", &Port::pos)
      .def_readonly("radius_nm", &Port::radius_nm);

  py::class_<PortRegistry>(m, "PortRegistry")
      .def(py::init<>())
      .def(py::init([](const std::vector<Port>& ports) {
        PortRegistry r;
        for (const Port& p : ports) r.add(p);
        return r;
      }))
      .def("add", &PortRegistry::add)
      .def("__len__", &PortRegistry::size)
      .def("__contains__", &PortRegistry::contains)
      .def_property_readonly("ports", &PortRegistry::ports);
  m.def("load_ports", &load_ports_file, py::arg("path"));

  // configuration
  py::class_<EngineConfig>(m, "EngineConfig")
      .def(py::init<>())
      .def_static("parse", [](const std::string& text) { return parse_config(text); })
      .def_static("load", &load_config_file)
      .def("__str__", &config_text)
      .def_readwrite("dest_granularity", &EngineConfig::dest_granularity)
      .def_readwrite("eta_granularity", &EngineConfig::eta_granularity)
      .def_readwrite("course_tolerance", &EngineConfig::course_tolerance)
      .def_readwrite("speed_bucket", &EngineConfig::speed_bucket)
      .def_readwrite("max_ring_radius", &EngineConfig::max_ring_radius)
      .def_readwrite("robustness_k", &EngineConfig::robustness_k)
      .def_readwrite("robustness_window", &EngineConfig::robustness_window)
      .def_readwrite("time_adjustment", &EngineConfig::time_adjustment)
      .def_readwrite("semi_supervised", &EngineConfig::semi_supervised)
      .def_readwrite("quiet_period", &EngineConfig::quiet_period);

  // engine
  py::class_<TrainSummary>(m, "TrainSummary")
      .def_readonly("records", &TrainSummary::records)
      .def_readonly("dest_trained", &TrainSummary::dest_trained)
      .def_readonly("eta_trained", &TrainSummary::eta_trained)
      .def_readonly("skipped_out_of_bounds", &TrainSummary::skipped_out_of_bounds)
      .def_readonly("rejected", &TrainSummary::rejected);

  py::class_<Prediction>(m, "Prediction")
      .def_readonly("raw_destination", &Prediction::raw_destination)
      .def_readonly("destination", &Prediction::destination)
      .def_readonly("arrival", &Prediction::arrival)
      .def_property_readonly("dest_source", [](const Prediction& p) { return std::string(to_string(p.dest_source)); })
      .def_property_readonly("eta_source", [](const Prediction& p) { return std::string(to_string(p.eta_source)); });

  py::class_<Engine>(m, "Engine")
      .def(py::init<EngineConfig, PortRegistry>(), py::arg("config"), py::arg("ports"))
      .def("train", [](Engine& e, const AisRecord& r) { return e.train(r).dest_trained; })
      .def("train_all", [](Engine& e, const std::vector<AisRecord>& rs) { return e.train_all(rs); })
      .def("predict", &Engine::predict)
      .def("predict_stream", &predict_stream, "predict every record in order, then close the stream")
      .def("finish", &Engine::finish)
      .def("save", &Engine::save_file, py::arg("path"))
      .def_static("load", &Engine::load_file, py::arg("path"))
      .def_property_readonly("config", &Engine::config)
      .def_property_readonly("dest_cells", [](const Engine& e) { return e.dest_model().cells.size(); })
      .def_property_readonly("eta_cells", [](const Engine& e) { return e.eta_model().cells.size(); })
      .def_property_readonly("committed_trips", [](const Engine& e) { return e.committed_trips().size(); })
      .def("same_models", &Engine::same_models);

  // synthetic data and evaluation
  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_static("parse", [](const std::string& text) { return parse_synth_config(text); })
      .def_readwrite("seed", &SynthConfig::seed)
      .def_readwrite("n_ports", &SynthConfig::n_ports)
      .def_readwrite("n_train_trips", &SynthConfig::n_train_trips)
      .def_readwrite("n_eval_trips", &SynthConfig::n_eval_trips)
      .def_readwrite("pos_noise_sigma", &SynthConfig::pos_noise_sigma)
      .def_readwrite("course_noise_sigma", &SynthConfig::course_noise_sigma);

  py::class_<TruthRow>(m, "TruthRow")
      .def_readonly("ship_id", &TruthRow::ship_id)
      .def_readonly("trip_id", &TruthRow::trip_id)
      .def_readonly("port", &TruthRow::port)
      .def_readonly("arrival", &TruthRow::arrival);

  py::class_<PredictionRow>(m, "PredictionRow")
      .def(py::init<std::string, EpochSeconds, std::string, EpochSeconds>(), py::arg("ship_id"), py::arg("timestamp"),
           py::arg("port"), py::arg("arrival"))
      .def_readonly("ship_id", &PredictionRow::ship_id)
      .def_readonly("timestamp", &PredictionRow::timestamp)
      .def_readonly("port", &PredictionRow::port)
      .def_readonly("arrival", &PredictionRow::arrival);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("ports", &Dataset::ports)
      .def("train_records", &Dataset::train_records)
      .def("eval_records", &Dataset::eval_records)
      .def("truth_rows", &Dataset::truth_rows)
      .def("write", [](const Dataset& d, const std::string& dir) { return write_dataset(d, dir); }, py::arg("dir"));
  m.def("gen_dataset", &gen_dataset, py::arg("config") = SynthConfig{});

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("route_accuracy", &EvalReport::route_accuracy)
      .def_readonly("tuple_accuracy", &EvalReport::tuple_accuracy)
      .def_readonly("eta_mean_abs_error", &EvalReport::eta_mean_abs_error)
      .def_readonly("eta_median_abs_error", &EvalReport::eta_median_abs_error)
      .def_readonly("trips", &EvalReport::trips)
      .def_readonly("skipped", &EvalReport::skipped)
      .def("to_json", [](const EvalReport& r) { return to_json(r); });
  m.def("evaluate", [](const std::vector<PredictionRow>& p, const std::vector<TruthRow>& t) { return evaluate_rows(p, t); },
        py::arg("predictions"), py::arg("truth"));

  m.def("dimension_diagnostic", [](const std::vector<AisRecord>& records, double speed_bucket) {
        std::map<std::string, std::optional<double>> out;
        for (const auto& [dim, rate] : dimension_diagnostic(records, speed_bucket)) out[std::string(to_string(dim))] = rate;
        return out;
      }, py::arg("records"), py::arg("speed_bucket") = 0.5);
}
