#pragma once

#include "rqlsha/fault.hpp"

namespace rqlsha {

/// Published reference values (stored with citations in data/published.json;
/// the same document is embedded as the default).
struct Published {
  // Table 2 / Table 4 rows: JJ complexity (millions), hashrate (GH/s),
  // total power (mW), efficiency (GH/J).
  struct EngineRow {
    double jj_m, hashrate, power_mw, eff;
  };
  EngineRow rca{3.38, 0.661, 15.65, 42.26};
  EngineRow ksa_t2{5.54, 0.951, 36.23, 26.24};
  EngineRow ksa_t4{5.45, 0.951, 36.22, 26.24};
  EngineRow csa4{3.57, 1.101, 27.5, 40.05};
  EngineRow csa4dl{2.89, 1.101, 22.26, 49.47};
  // CMOS reference accelerator (constants, never computed).
  double cmos_hashrate = 1.05, cmos_power_mw = 250.0, cmos_eff = 4.0;
  double antminer_eff_x = 3.0;
  // Table 3 breakdown percentages.
  double t3_rca_adders = 50.1, t3_rca_regs = 44.8, t3_rca_other = 5.1;
  double t3_ksa_adders = 67.7, t3_ksa_regs = 27.3, t3_ksa_other = 5.0;
  // Table 5 block validation.
  long long t5_rca_est = 1316, t5_rca_reported = 1410;
  long long t5_ksa_est = 3992, t5_ksa_reported = 4160;
  long long t5_mult_est = 33320, t5_mult_reported = 37782;
  // Figure 12 roll-up (x over CMOS).
  double fig12_basic = 10.6, fig12_techaware = 12.4, fig12_ft = 12.2, fig12_btwc = 46.0;
  double ic_low = 10e-6, ic_high = 38e-6;
};

const Published& published();
std::string published_json();

struct ReportRow {
  std::string name;
  std::string unit;
  bool has_computed = false;
  double computed = 0.0;
  bool has_published = false;
  double published = 0.0;
  std::string note;  // "computed" | "paper constant" | "not computed"
  bool checked = false;
  bool within = true;
  double delta_pct = 0.0;
};

struct TableReport {
  std::string id;
  std::vector<ReportRow> rows;
  std::vector<std::string> lines;  // extra free-form result lines
  bool pass = true;

  std::string to_text() const;
  std::string to_csv() const;
};

/// Caches the designs, measured activity, and physics for one run.
class Session {
 public:
  Session(CellLibrary lib, PhysicsConstants phys, uint64_t seed);

  const CellLibrary& lib() const { return lib_; }
  const PhysicsConstants& phys() const { return phys_; }
  uint64_t seed() const { return seed_; }

  const EngineDesign& design(const EngineConfig& cfg);
  CostReport report(const EngineConfig& cfg);
  double alpha();  // measured on the baseline engine

 private:
  CellLibrary lib_;
  PhysicsConstants phys_;
  uint64_t seed_;
  std::map<std::string, EngineDesign> designs_;
  double alpha_ = -1.0;
};

TableReport reproduce(Session& s, const std::string& table_id);

/// One CostReport row per config; invalid configs become error rows.
std::string sweep_csv(Session& s, const std::vector<EngineConfig>& configs);

std::string format_sig4(double v);

/// CSV with fixed column order for a list of named cost reports.
std::string cost_reports_csv(const std::vector<std::pair<std::string, CostReport>>& rows);

}  // namespace rqlsha
