// Command-line front end: design generation, analysis, simulation, fault
// studies, and reproduction of the published evaluation tables.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rqlsha/reports.hpp"

using namespace rqlsha;
namespace fs = std::filesystem;

namespace {

constexpr uint64_t kDefaultSeed = 20180315;  // documented default, see README

struct GlobalOpts {
  std::string out_dir;
  std::string cells_path;
  uint64_t seed = kDefaultSeed;
};

CellLibrary load_lib(const GlobalOpts& g) {
  if (!g.cells_path.empty()) return load_cell_library_file(g.cells_path);
  return default_cell_library();
}

fs::path ensure_out(const GlobalOpts& g) {
  fs::path dir = g.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("RQLSHA_OUT");
    dir = env ? env : "out";
  }
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
  std::cout << "wrote " << p.string() << "\n";
}

EngineConfig parse_config(const std::string& adder, const std::string& storage,
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

// Design file: {"adder": "...", "storage": "...", "spares": N,
//               "redundant_mux": bool}
EngineConfig load_design_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open design file " + path);
  nlohmann::json doc = nlohmann::json::parse(f);
  return parse_config(doc.value("adder", std::string("rca")),
                      doc.value("storage", std::string("reg")),
                      doc.value("spares", 0), doc.value("redundant_mux", false));
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> v;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  return v;
}

void print_report(const std::string& name, const CostReport& c) {
  std::cout << "design " << name << "\n";
  std::cout << "  jj_gate          " << c.jj_gate << "\n";
  std::cout << "  jj_interconnect  " << c.jj_interconnect << "\n";
  std::cout << "  jj_system        " << c.jj_system << "\n";
  std::cout << "  path depth       " << c.critical_path_depth << " switching events\n";
  std::cout << "  cycle time       " << format_sig4(c.cycle_time * 1e12) << " ps\n";
  std::cout << "  hashrate         " << format_sig4(c.hashrate / 1e9) << " GH/s\n";
  std::cout << "  alpha            " << format_sig4(c.alpha) << "\n";
  std::cout << "  dynamic power    " << format_sig4(c.p_dynamic * 1e6) << " uW\n";
  std::cout << "  total power      " << format_sig4(c.p_total * 1e3) << " mW\n";
  std::cout << "  efficiency       " << format_sig4(c.efficiency / 1e9) << " GH/J\n";
  for (const auto& [k, v] : c.breakdown)
    std::cout << "  breakdown." << k << "  " << v << " ("
              << format_sig4(double(v) / double(c.jj_system) * 100.0) << "%)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rqlsha: design-space exploration for RQL double-SHA-256 engines"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  app.add_option("--out", g.out_dir, "output directory (or env RQLSHA_OUT)");
  app.add_option("--cells", g.cells_path, "cell library JSON (default: built-in)");
  app.add_option("--seed", g.seed, "random seed (fixed default for reproducibility)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "analyze a structural netlist file");
  std::string netlist_path;
  analyze->add_option("netlist", netlist_path, "interchange netlist file")->required();

  // generate
  auto* gen = app.add_subcommand("generate", "generate and cost an engine design");
  std::string adder = "rca", storage = "reg";
  int spares = 0;
  bool redundant = false, do_export = false;
  std::string design_file;
  gen->add_option("--adder", adder, "rca|ksa|csa3|csa4|csa4_delayline");
  gen->add_option("--storage", storage, "reg|delayline");
  gen->add_option("--spares", spares, "spare pipeline stages");
  gen->add_flag("--redundant-mux", redundant, "redundant 8:1 bypass muxes");
  gen->add_option("--design", design_file, "design file (JSON) instead of flags");
  gen->add_flag("--export", do_export, "write stage netlists and manifest");

  // simulate
  auto* sim = app.add_subcommand("simulate", "mine a job on the simulated pipeline");
  std::string job_path;
  bool trace = false;
  sim->add_option("--job", job_path, "job file (header hex, nonce range, target)")
      ->required();
  sim->add_flag("--trace", trace, "write the activity trace CSV");
  sim->add_option("--adder", adder, "rca|ksa|csa3|csa4|csa4_delayline");

  // avf
  auto* avf = app.add_subcommand("avf", "transient fault injection campaign");
  long long trials = 10000;
  bool include_invalid = false;
  avf->add_option("--trials", trials, "injection count");
  avf->add_flag("--include-invalid", include_invalid,
                "sample dead register slots too");

  // reliability
  auto* rel = app.add_subcommand("reliability", "failure-probability curves");
  std::string variant = "all";
  std::string pgrid = "1e-9,1e-8,1e-7,1e-6,1e-5,1e-4";
  long long mc = 0;
  rel->add_option("--variant", variant, "baseline|spare_bypass|spare_redundant_mux|all");
  rel->add_option("--pgrid", pgrid, "comma-separated gate fault probabilities");
  rel->add_option("--monte-carlo", mc, "Monte Carlo trials (0 = analytic)");

  // btwc
  auto* btwc = app.add_subcommand("btwc", "better-than-worst-case Ic tuning");
  std::string ic_grid = "38,30,25,20,15,12,10";
  double threshold = 10.0;
  btwc->add_option("--ic-grid", ic_grid, "descending Ic grid in uA");
  btwc->add_option("--fault-threshold", threshold,
                   "step curve: faults appear below this Ic (uA)");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "reproduce a published table/figure");
  std::string table;
  rep->add_option("table", table, "T2|T3|T4|T5|FIG10|FIG12")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "cost reports for a list of configs");
  std::string sweep_cfgs = "rca,ksa,csa4,csa4_delayline";
  sweep->add_option("--configs", sweep_cfgs, "comma-separated adder strategies");

  CLI11_PARSE(app, argc, argv);

  try {
    CellLibrary lib = load_lib(g);
    PhysicsConstants phys;
    Session session(lib, phys, g.seed);

    if (*analyze) {
      Netlist nl = read_interchange_file(lib, netlist_path);
      JtlAnnotation ann = insert_jtls(nl);
      PathResult path = critical_path(nl, ann, phys.skew_margin, phys.t_switch);
      std::cout << "netlist " << nl.name << "\n";
      std::cout << "  gates            " << nl.logic_gate_count() << "\n";
      std::cout << "  jj_gate          " << nl.gate_jj() << "\n";
      std::cout << "  jtl rule1/2/3    " << ann.rule1_skew << "/" << ann.rule2_fanout
                << "/" << ann.rule3_phase << "\n";
      std::cout << "  jj_interconnect  " << interconnect_jj_total(nl, ann) << "\n";
      std::cout << "  jj_system        " << nl.gate_jj() + interconnect_jj_total(nl, ann)
                << "\n";
      std::cout << "  path depth       " << path.depth << "\n";
      std::cout << "  cycle time       " << format_sig4(path.cycle_time * 1e12)
                << " ps (with skew margin)\n";
      FanoutDistribution d = fanout_histogram(nl);
      std::cout << "  mean fanout      " << format_sig4(d.mean()) << "\n";
      for (const auto& [f, c] : d.histogram)
        std::cout << "    fanout " << f << ": " << c << "\n";
      for (const std::string& w : nl.warnings) std::cout << "  warning: " << w << "\n";
    } else if (*gen) {
      EngineConfig cfg = design_file.empty()
                             ? parse_config(adder, storage, spares, redundant)
                             : load_design_file(design_file);
      const EngineDesign& d = session.design(cfg);
      print_report(cfg.id(), session.report(cfg));
      std::cout << "  adder count      " << d.total_adder_count << "\n";
      std::cout << "  stage shapes     " << d.shape_costs.size() << "\n";
      if (do_export) {
        fs::path dir = ensure_out(g);
        write_file(dir / (cfg.id() + "_stage_first.net"),
                   write_interchange(*d.rep_first));
        write_file(dir / (cfg.id() + "_stage_second.net"),
                   write_interchange(*d.rep_second));
        std::ostringstream manifest;
        manifest << "{\n  \"design\": \"" << cfg.id() << "\",\n  \"stages\": [\n";
        for (size_t i = 0; i < d.layouts.size(); ++i) {
          const StageLayout& l = d.layouts[i];
          manifest << "    {\"index\": " << l.index << ", \"shape\": " << int(l.shape)
                   << ", \"round\": " << l.round << ", \"half\": " << l.half << "}"
                   << (i + 1 < d.layouts.size() ? "," : "") << "\n";
        }
        manifest << "  ]\n}\n";
        write_file(dir / (cfg.id() + "_manifest.json"), manifest.str());
      }
    } else if (*sim) {
      std::ifstream jf(job_path);
      if (!jf) throw std::runtime_error("cannot open job file " + job_path);
      std::stringstream ss;
      ss << jf.rdbuf();
      MiningJob job = load_job(ss.str());
      EngineConfig cfg = parse_config(adder, storage, 0, false);
      const EngineDesign& d = session.design(cfg);
      auto hit = mine(job, d);
      if (hit) {
        std::cout << "nonce " << hit->nonce << " digest " << to_hex(hit->digest)
                  << " cycle " << hit->cycle << "\n";
      } else {
        std::cout << "exhausted nonce range, no hit\n";
      }
      if (trace) {
        ActivityTrace t = record_activity(d, 256, g.seed);
        write_file(ensure_out(g) / "activity.csv", trace_to_csv(t));
        std::cout << "alpha " << format_sig4(derive_activity_factor(t.ones_per_cycle,
                                                                    t.total_bits))
                  << "\n";
      }
    } else if (*avf) {
      EngineConfig cfg;
      AvfResult r = measure_avf(session.design(cfg), trials, g.seed, include_invalid);
      std::cout << "avf " << format_sig4(r.avf) << " +/- " << format_sig4(r.half_width)
                << " (95% CI), trials " << r.trials << ", corrupted " << r.corrupted
                << ", benign " << r.benign << ", accounting " << r.accounting << "\n";
    } else if (*rel) {
      EngineConfig cfg;
      const EngineDesign& base = session.design(cfg);
      std::vector<double> grid = parse_list(pgrid);
      std::vector<ReliabilityCurve> curves;
      std::vector<DesignVariant> vs;
      if (variant == "all")
        vs = {DesignVariant::BASELINE, DesignVariant::SPARE_BYPASS,
              DesignVariant::SPARE_REDUNDANT_MUX};
      else
        vs = {variant_from_string(variant)};
      for (DesignVariant v : vs) {
        VariantGeometry geom = variant_geometry(v, base);
        curves.push_back(reliability_curve(v, grid, geom, mc, g.seed));
      }
      std::string csv = curves_to_csv(curves);
      std::cout << csv;
      write_file(ensure_out(g) / "reliability.csv", csv);
    } else if (*btwc) {
      EngineConfig cfg;
      cfg.adder = AdderStrategy::CSA4_DELAYLINE;
      cfg.storage = StorageStrategy::DELAY_LINE;
      cfg.spare_stages = 1;
      const EngineDesign& d = session.design(cfg);
      std::vector<double> grid_ua = parse_list(ic_grid);
      std::vector<double> grid;
      for (double ua : grid_ua) grid.push_back(ua * 1e-6);
      BtwcResult r = tune_ic(d, grid, step_fault_curve(threshold * 1e-6, 1e-4), g.seed);
      for (auto& [ic, what] : r.log)
        std::cout << "ic " << format_sig4(ic * 1e6) << " uA: " << what << "\n";
      std::cout << "chosen ic " << format_sig4(r.chosen_ic * 1e6) << " uA\n";
      std::cout << "efficiency gain " << format_sig4(r.efficiency_gain) << "x\n";
    } else if (*rep) {
      TableReport t = reproduce(session, table);
      std::cout << t.to_text();
      write_file(ensure_out(g) / (table + ".csv"), t.to_csv());
      return t.pass ? 0 : 2;
    } else if (*sweep) {
      std::vector<EngineConfig> cfgs;
      std::stringstream ss(sweep_cfgs);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        EngineConfig c = parse_config(tok, "reg", 0, false);
        cfgs.push_back(c);
      }
      std::string csv = sweep_csv(session, cfgs);
      std::cout << csv;
      write_file(ensure_out(g) / "sweep.csv", csv);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
