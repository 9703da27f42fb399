// Python bindings for the main operations: library/netlist analysis,
// engine generation and costing, simulation, and the fault studies.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rqlsha/reports.hpp"

namespace py = pybind11;
using namespace rqlsha;

namespace {

EngineConfig make_config(const std::string& adder, const std::string& storage,
                         int spares, bool redundant) {
  EngineConfig cfg;
  cfg.adder = adder_strategy_from_string(adder);
  cfg.storage = storage == "delayline" ? StorageStrategy::DELAY_LINE
                                       : StorageStrategy::REGISTERS;
  if (cfg.adder == AdderStrategy::CSA4_DELAYLINE)
    cfg.storage = StorageStrategy::DELAY_LINE;
  cfg.spare_stages = spares;
  cfg.redundant_mux = redundant;
  cfg.validate();
  return cfg;
}

py::dict report_dict(const CostReport& c) {
  py::dict d;
  d["jj_gate"] = c.jj_gate;
  d["jj_interconnect"] = c.jj_interconnect;
  d["jj_system"] = c.jj_system;
  d["critical_path_depth"] = c.critical_path_depth;
  d["cycle_time_s"] = c.cycle_time;
  d["hashrate_hs"] = c.hashrate;
  d["alpha"] = c.alpha;
  d["p_dynamic_w"] = c.p_dynamic;
  d["p_total_w"] = c.p_total;
  d["efficiency_hj"] = c.efficiency;
  py::dict br;
  for (const auto& [k, v] : c.breakdown) br[py::str(k)] = v;
  d["breakdown"] = br;
  return d;
}

}  // namespace

PYBIND11_MODULE(_rqlsha, m) {
  m.doc() = "Design-space exploration for RQL double-SHA-256 engines";

  py::class_<Session>(m, "Session")
      .def(py::init([](uint64_t seed, const std::string& cells_path) {
             CellLibrary lib = cells_path.empty() ? default_cell_library()
                                                  : load_cell_library_file(cells_path);
             return new Session(std::move(lib), PhysicsConstants{}, seed);
           }),
           py::arg("seed") = 20180315, py::arg("cells_path") = "")
      .def("alpha", &Session::alpha)
      .def(
          "cost_report",
          [](Session& s, const std::string& adder, const std::string& storage,
             int spares, bool redundant) {
            return report_dict(s.report(make_config(adder, storage, spares, redundant)));
          },
          py::arg("adder") = "rca", py::arg("storage") = "reg", py::arg("spares") = 0,
          py::arg("redundant_mux") = false)
      .def(
          "reproduce",
          [](Session& s, const std::string& table) {
            TableReport t = reproduce(s, table);
            py::dict d;
            d["id"] = t.id;
            d["pass"] = t.pass;
            d["text"] = t.to_text();
            d["csv"] = t.to_csv();
            return d;
          },
          py::arg("table"))
      .def(
          "avf",
          [](Session& s, long long trials, bool include_invalid) {
            AvfResult r = measure_avf(s.design(EngineConfig{}), trials, s.seed(),
                                      include_invalid);
            py::dict d;
            d["avf"] = r.avf;
            d["half_width"] = r.half_width;
            d["trials"] = r.trials;
            d["accounting"] = r.accounting;
            return d;
          },
          py::arg("trials") = 10000, py::arg("include_invalid") = false)
      .def(
          "reliability",
          [](Session& s, const std::string& variant, const std::vector<double>& p_grid,
             long long monte_carlo) {
            const EngineDesign& base = s.design(EngineConfig{});
            DesignVariant v = variant_from_string(variant);
            VariantGeometry g = variant_geometry(v, base);
            ReliabilityCurve c = reliability_curve(v, p_grid, g, monte_carlo, s.seed());
            py::list pts;
            for (const ReliabilityPoint& p : c.points)
              pts.append(py::make_tuple(p.p_gate, p.p_fail));
            return pts;
          },
          py::arg("variant"), py::arg("p_grid"), py::arg("monte_carlo") = 0)
      .def(
          "mine",
          [](Session& s, const std::string& job_json, const std::string& adder) {
            MiningJob job = load_job(job_json);
            auto hit = mine(job, s.design(make_config(adder, "reg", 0, false)));
            if (!hit) return py::object(py::none());
            py::dict d;
            d["nonce"] = hit->nonce;
            d["digest"] = to_hex(hit->digest);
            d["cycle"] = hit->cycle;
            return py::object(d);
          },
          py::arg("job_json"), py::arg("adder") = "rca")
      .def(
          "tune_ic",
          [](Session& s, const std::vector<double>& ic_grid_ua, double threshold_ua) {
            EngineConfig cfg = make_config("csa4_delayline", "delayline", 1, false);
            std::vector<double> grid;
            for (double ua : ic_grid_ua) grid.push_back(ua * 1e-6);
            BtwcResult r = tune_ic(s.design(cfg), grid,
                                   step_fault_curve(threshold_ua * 1e-6, 1e-4), s.seed());
            py::dict d;
            d["chosen_ic_ua"] = r.chosen_ic * 1e6;
            d["efficiency_gain"] = r.efficiency_gain;
            return d;
          },
          py::arg("ic_grid_ua"), py::arg("threshold_ua") = 10.0);

  m.def("sha256_hex", [](py::bytes data) {
    std::string s = data;
    return to_hex(sha256(s));
  });
  m.def("double_sha256_hex", [](py::bytes data) {
    std::string s = data;
    std::vector<uint8_t> v(s.begin(), s.end());
    return to_hex(double_sha256(v));
  });
  m.def(
      "analyze_netlist",
      [](const std::string& text) {
        CellLibrary lib = default_cell_library();
        std::istringstream is(text);
        Netlist nl = read_interchange(lib, is, "py");
        JtlAnnotation a = insert_jtls(nl);
        PathResult pr = critical_path(nl, a, 0.20);
        py::dict d;
        d["gates"] = nl.logic_gate_count();
        d["jj_gate"] = nl.gate_jj();
        d["jj_interconnect"] = interconnect_jj_total(nl, a);
        d["jj_system"] = nl.gate_jj() + interconnect_jj_total(nl, a);
        d["depth"] = pr.depth;
        d["cycle_time_s"] = pr.cycle_time;
        d["mean_fanout"] = fanout_histogram(nl).mean();
        return d;
      },
      py::arg("interchange_text"));
  m.def("csa_latency", &csa_latency, py::arg("k"), py::arg("n"));
  m.def("mining_loss_probability", &mining_loss_probability, py::arg("p_transient"));
  m.def("default_cell_library_json", &default_cell_library_json);
  m.def("published_json", &published_json);
}
