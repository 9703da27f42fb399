#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rqlsha/adders.hpp"
#include "rqlsha/cost_model.hpp"
#include "rqlsha/netlist.hpp"

namespace rqlsha {

enum class AdderStrategy { RCA, KSA_CRITICAL, CSA3, CSA4, CSA4_DELAYLINE };
enum class StorageStrategy { REGISTERS, DELAY_LINE };

std::string to_string(AdderStrategy s);
std::string to_string(StorageStrategy s);
AdderStrategy adder_strategy_from_string(const std::string& s);

struct EngineConfig {
  AdderStrategy adder = AdderStrategy::RCA;
  StorageStrategy storage = StorageStrategy::REGISTERS;
  int stages = 128;  // double-SHA: 2 x 64 unrolled rounds
  int spare_stages = 0;
  bool redundant_mux = false;

  void validate() const;
  std::string id() const;
};

/// One of the six structural stage shapes the 128-stage pipeline tiles.
enum class StageShape {
  FirstMsu,     // rounds 0..47 of hash 1 (message schedule active)
  FirstTail,    // rounds 48..62 (schedule drained)
  FirstBound,   // round 63 + digest-1 feedforward
  SecondMsu,    // rounds 0..47 of hash 2
  SecondTail,   // rounds 48..62
  SecondBound,  // round 63 + final feedforward
};

struct StageLayout {
  int index = 0;
  int half = 0;
  int round = 0;
  StageShape shape = StageShape::FirstMsu;
  bool msu_active = false;
  int msu_registers = 16;   // 32-bit words
  int cfg_registers = 8;
  int carry_registers = 0;  // midstate riding alongside (first half)
  int adder_count = 0;
  bool bypass = false;
};

struct ShapeCost {
  long long jj = 0;
  long long jj_gate = 0;
  long long jj_interconnect = 0;
  long long cells = 0;  // non-JTL cell instances (fault units)
  std::array<long long, 3> jj_by_cat{};  // Other, Adders, Registers
  long long depth = 0;
  int adders = 0;
};

/// A generated engine: per-stage layouts, per-shape netlist costs, category
/// breakdown, and the timing roll-up. Immutable once generated.
struct EngineDesign {
  EngineConfig config;
  std::vector<StageLayout> layouts;
  std::map<StageShape, ShapeCost> shape_costs;

  long long jj_gate = 0;
  long long jj_interconnect = 0;
  long long jj_system = 0;
  long long cells = 0;
  std::map<std::string, long long> breakdown;  // adders / registers / other
  int total_adder_count = 0;

  long long stage_depth = 0;  // critical path of the slowest stage shape
  int ksa_pad = 0, csa3_pad = 0, csa4_pad = 0;

  // Fault-unit geometry (logic cells, JTLs excluded).
  std::vector<long long> stage_units;
  long long mux_block_units = 0;   // one 32-bit 2:1 mux block
  long long bypass_jj = 0;         // total bypass/redundancy JJ
  long long extras_jj = 0;         // IHC collector + target comparator

  // Representative stage netlists (first- and second-half schedule-active).
  std::shared_ptr<Netlist> rep_first;
  std::shared_ptr<Netlist> rep_second;

  int slots() const { return config.stages + config.spare_stages; }
  int boundaries() const { return slots() + 1; }
  long long units_total() const;
};

/// Deterministic generation of the full pipeline design.
EngineDesign generate_engine(const CellLibrary& lib, const EngineConfig& config);

/// Adds spare stages and bypass (optionally redundant) muxes.
EngineDesign add_fault_tolerance(const CellLibrary& lib, const EngineDesign& base,
                                 int spares, bool redundant);

/// Storage JJ cost of one stage under the given strategy (registers at
/// 12 JJ/bit; delay lines at 4 JJ/cycle/bit plus working/staging registers).
long long storage_cost(const CellLibrary& lib, const StageLayout& layout,
                       StorageStrategy strategy);

std::map<std::string, long long> complexity_breakdown(const EngineDesign& d);

/// The calibrated adder blocks as deployed in the engine (retiming pads
/// applied). Keys: rca32, ksa32, csa3_32, csa4_32.
std::map<std::string, Netlist> calibrated_adder_blocks(const CellLibrary& lib);

/// Full cost roll-up for a design: timing from the stage netlists, power
/// from the activity factor, efficiency from both.
CostReport cost_report(const CellLibrary& lib, const EngineDesign& d,
                       const PhysicsConstants& phys, double alpha);

/// Published calibration anchors (see data/published.json).
struct PerfAnchors {
  double rca_hashrate = 0.661e9;  // H/s for the all-RCA baseline
  double ksa_speedup = 1.44;
  double csa3_speedup = 1.2;
  double csa4_speedup = 1.67;
};
const PerfAnchors& perf_anchors();

}  // namespace rqlsha
