#pragma once

#include <functional>

#include "rqlsha/pipeline.hpp"

namespace rqlsha {

enum class FaultKind { IID_GATE, FLUX_TRAP_REGION, TRANSIENT_BIT };
enum class RegionGranularity { Gate, MuxBlock, Stage };

struct FaultModel {
  FaultKind kind = FaultKind::FLUX_TRAP_REGION;
  double p = 0.0;  // per-unit fault probability
  RegionGranularity granularity = RegionGranularity::Stage;
  uint64_t seed = 0;

  void validate() const;
};

/// Samples a fault map for one cooldown epoch. IID_GATE compounds the
/// per-gate probability into per-stage region faults (1 - (1-p)^gates);
/// FLUX_TRAP_REGION does the same at the configured granularity;
/// TRANSIENT_BIT places one bit flip uniformly over live state and time.
FaultMap sample_fault_map(const FaultModel& model, const EngineDesign& design);

enum class DesignVariant { BASELINE, SPARE_BYPASS, SPARE_REDUNDANT_MUX };
std::string to_string(DesignVariant v);
DesignVariant variant_from_string(const std::string& s);

/// Fault-unit geometry of a variant: stage/spare slot unit counts and the
/// per-boundary mux protection budget.
struct VariantGeometry {
  int stage_slots = 128;     // physical stages including spares
  int spares = 0;            // tolerated faulty stages
  int boundaries = 0;        // bypass boundaries (0 for baseline)
  long long units_per_stage = 0;
  long long units_per_mux_block = 0;
  int mux_blocks_per_boundary = 0;
  int mux_faults_tolerated_per_boundary = 0;
  long long baseline_units = 0;  // total fault units of the plain engine
};

VariantGeometry variant_geometry(DesignVariant v, const EngineDesign& baseline);

/// Closed-form system-failure probability under iid per-gate faults.
/// BASELINE fails on any fault; SPARE_BYPASS tolerates `spares` faulty
/// stages but no mux fault; SPARE_REDUNDANT_MUX additionally tolerates one
/// faulty mux unit per boundary.
double analytic_failure_prob(DesignVariant v, double p_gate, const VariantGeometry& g);

struct MonteCarloResult {
  double estimate = 0.0;
  double half_width = 0.0;  // 3-sigma binomial half width
  long long trials = 0;
  long long failures = 0;
};

MonteCarloResult monte_carlo_failure_prob(DesignVariant v, double p_gate,
                                          const VariantGeometry& g, long long trials,
                                          uint64_t seed);

struct ReliabilityPoint {
  double p_gate;
  double p_fail;
};

struct ReliabilityCurve {
  DesignVariant variant;
  std::string method;  // "analytic" or "monte_carlo"
  long long trials = 0;
  std::vector<ReliabilityPoint> points;
  std::vector<double> half_widths;  // monte carlo only
};

ReliabilityCurve reliability_curve(DesignVariant v, const std::vector<double>& p_grid,
                                   const VariantGeometry& g, long long mc_trials,
                                   uint64_t seed);

std::string curves_to_csv(const std::vector<ReliabilityCurve>& curves);

/// AVF measurement: single-bit transients injected uniformly over occupied
/// pipeline state; reports the fraction that corrupt the digest.
struct AvfResult {
  double avf = 0.0;
  double half_width = 0.0;  // 95% binomial interval
  long long trials = 0;
  long long corrupted = 0;
  long long benign = 0;
  std::string accounting;  // live-bits | include-invalid
};

AvfResult measure_avf(const EngineDesign& design, long long trials, uint64_t seed,
                      bool include_invalid = false);

/// Result of the bypass sweep against a golden input/digest pair.
struct DetectResult {
  enum Status { Healthy, Isolated, NotIsolable } status = Healthy;
  int stage = -1;  // isolated faulty slot
};

DetectResult detect_faulty_stage(const EngineDesign& design, const FaultMap& map,
                                 const std::vector<uint8_t>& golden_header,
                                 uint32_t golden_nonce, const Digest& golden_digest);

/// Better-than-worst-case tuning: walk the Ic grid downward while faults
/// stay isolable; back off one point when isolation fails.
struct BtwcResult {
  double chosen_ic;
  double efficiency_gain;  // vs the top-of-grid Ic
  std::vector<std::pair<double, std::string>> log;  // (ic, outcome)
};

BtwcResult tune_ic(const EngineDesign& design, const std::vector<double>& ic_grid,
                   const std::function<double(double)>& fault_vs_ic, uint64_t seed);

/// Built-in synthetic fault-vs-Ic curves (no published curve exists).
std::function<double(double)> step_fault_curve(double threshold_ic, double p_below);
std::function<double(double)> ramp_fault_curve(double ic_hi, double ic_lo, double p_at_lo);

/// Probability that a transient costs a found block: p / 2^32.
double mining_loss_probability(double p_transient);

}  // namespace rqlsha
