#include "rqlsha/fault.hpp"

#include <cmath>
#include <sstream>

#include "rqlsha/rng.hpp"

namespace rqlsha {

void FaultModel::validate() const {
  if (p < 0.0 || p > 1.0) throw DomainError("fault model: p must be in [0,1]");
}

std::string to_string(DesignVariant v) {
  switch (v) {
    case DesignVariant::BASELINE: return "baseline";
    case DesignVariant::SPARE_BYPASS: return "spare_bypass";
    case DesignVariant::SPARE_REDUNDANT_MUX: return "spare_redundant_mux";
  }
  return "?";
}

DesignVariant variant_from_string(const std::string& s) {
  if (s == "baseline") return DesignVariant::BASELINE;
  if (s == "spare_bypass") return DesignVariant::SPARE_BYPASS;
  if (s == "spare_redundant_mux") return DesignVariant::SPARE_REDUNDANT_MUX;
  throw ValidationError("unknown design variant: " + s);
}

namespace {

double stage_fault_prob(double p_gate, long long units) {
  // 1 - (1-p)^n evaluated stably for tiny p
  return -std::expm1(double(units) * std::log1p(-p_gate));
}

// P(X >= k) for X ~ Binomial(n, p), exact summation in log space for the
// small-k regimes the curves live in.
double binom_tail_ge(int n, double p, int k) {
  if (p <= 0.0) return k <= 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k <= n ? 1.0 : 0.0;
  if (k <= 0) return 1.0;
  // sum the complement P(X <= k-1); k is small (<= 3) in practice
  double log_q = std::log1p(-p);
  double log_p = std::log(p);
  double cdf = 0.0;
  double log_comb = 0.0;  // log C(n, 0)
  for (int i = 0; i <= k - 1; ++i) {
    if (i > 0) log_comb += std::log(double(n - i + 1)) - std::log(double(i));
    cdf += std::exp(log_comb + double(i) * log_p + double(n - i) * log_q);
  }
  return std::min(1.0, std::max(0.0, 1.0 - cdf));
}

}  // namespace

FaultMap sample_fault_map(const FaultModel& model, const EngineDesign& design) {
  model.validate();
  FaultMap map;
  map.seed = model.seed;
  int slots = design.slots();

  if (model.kind == FaultKind::TRANSIENT_BIT) {
    uint64_t h = mix64(model.seed, 0x7b17, 0);
    FaultMap::Transient t;
    t.stage = int(mix64(h, 1, 0) % uint64_t(slots));
    int words = 8 + 16 + 8;
    t.word = int(mix64(h, 2, 0) % uint64_t(words));
    t.bit = int(mix64(h, 3, 0) % 32);
    t.cycle = mix64(h, 4, 0) % uint64_t(slots);
    map.transient = t;
    return map;
  }

  // Region faults: each region independently faulty with the compounded
  // per-gate probability of its unit count.
  for (int s = 0; s < slots; ++s) {
    long long units = design.stage_units[size_t(s)];
    double p_region = model.granularity == RegionGranularity::Gate
                          ? model.p
                          : stage_fault_prob(model.p, units);
    if (model.kind == FaultKind::IID_GATE)
      p_region = stage_fault_prob(model.p, units);
    double u = uniform01(mix64(model.seed, 0x57a6e, uint64_t(s)));
    if (u < p_region) map.faulty_stages.insert(s);
  }
  if (design.config.spare_stages > 0) {
    int blocks = design.config.redundant_mux ? 5 : 4;
    for (int b = 0; b < design.boundaries(); ++b)
      for (int m = 0; m < blocks; ++m) {
        double pm = stage_fault_prob(model.p, design.mux_block_units);
        double u = uniform01(mix64(model.seed, 0x36b0, uint64_t(b) * 8 + m));
        if (u < pm) map.faulty_mux_units.insert({b, m});
      }
  }
  return map;
}

VariantGeometry variant_geometry(DesignVariant v, const EngineDesign& baseline) {
  VariantGeometry g;
  g.units_per_stage = baseline.units_total() / baseline.config.stages;
  g.units_per_mux_block = baseline.mux_block_units;
  g.baseline_units = baseline.units_total();
  switch (v) {
    case DesignVariant::BASELINE:
      g.stage_slots = baseline.config.stages;
      g.spares = 0;
      g.boundaries = 0;
      g.mux_blocks_per_boundary = 0;
      g.mux_faults_tolerated_per_boundary = 0;
      break;
    case DesignVariant::SPARE_BYPASS:
      g.spares = 1;
      g.stage_slots = baseline.config.stages + g.spares;
      g.boundaries = g.stage_slots + 1;
      g.mux_blocks_per_boundary = 4;
      g.mux_faults_tolerated_per_boundary = 0;
      break;
    case DesignVariant::SPARE_REDUNDANT_MUX:
      // Enhanced bypass: redundant 8:1 mux per boundary tolerates one mux
      // fault there, and the two-fault budget is provisioned as two spares.
      g.spares = 2;
      g.stage_slots = baseline.config.stages + g.spares;
      g.boundaries = g.stage_slots + 1;
      g.mux_blocks_per_boundary = 5;
      g.mux_faults_tolerated_per_boundary = 1;
      break;
  }
  return g;
}

double analytic_failure_prob(DesignVariant v, double p_gate, const VariantGeometry& g) {
  if (p_gate < 0.0 || p_gate > 1.0)
    throw DomainError("analytic_failure_prob: p_gate must be in [0,1]");
  if (v == DesignVariant::BASELINE)
    return stage_fault_prob(p_gate, g.baseline_units);

  double p_stage = stage_fault_prob(p_gate, g.units_per_stage);
  double p_mux = stage_fault_prob(p_gate, g.units_per_mux_block);

  // stages survive while at most `spares` slots are faulty
  double p_stages_fail = binom_tail_ge(g.stage_slots, p_stage, g.spares + 1);
  // each boundary survives while its faulty mux units stay within budget
  double p_boundary_fail = binom_tail_ge(g.mux_blocks_per_boundary, p_mux,
                                         g.mux_faults_tolerated_per_boundary + 1);
  double log_all_boundaries_ok = double(g.boundaries) * std::log1p(-p_boundary_fail);
  double p_ok = (1.0 - p_stages_fail) * std::exp(log_all_boundaries_ok);
  return std::min(1.0, std::max(0.0, 1.0 - p_ok));
}

MonteCarloResult monte_carlo_failure_prob(DesignVariant v, double p_gate,
                                          const VariantGeometry& g, long long trials,
                                          uint64_t seed) {
  if (trials < 1000) throw DomainError("monte_carlo_failure_prob: trials must be >= 1e3");
  double p_stage = v == DesignVariant::BASELINE
                       ? 0.0
                       : stage_fault_prob(p_gate, g.units_per_stage);
  double p_mux = stage_fault_prob(p_gate, g.units_per_mux_block);

  long long fails = 0;
  for (long long t = 0; t < trials; ++t) {
    bool fail = false;
    if (v == DesignVariant::BASELINE) {
      // any faulty gate kills the engine; sample the compounded event
      double u = uniform01(mix64(seed, 0xba5e, uint64_t(t)));
      fail = u < stage_fault_prob(p_gate, g.baseline_units);
    } else {
      int faulty_stages = 0;
      for (int s = 0; s < g.stage_slots; ++s)
        if (uniform01(mix64(seed, uint64_t(t) * 4099 + 1, uint64_t(s))) < p_stage)
          ++faulty_stages;
      if (faulty_stages > g.spares) fail = true;
      for (int b = 0; !fail && b < g.boundaries; ++b) {
        int faulty = 0;
        for (int m = 0; m < g.mux_blocks_per_boundary; ++m)
          if (uniform01(mix64(seed, uint64_t(t) * 4099 + 2,
                              uint64_t(b) * 8 + uint64_t(m))) < p_mux)
            ++faulty;
        if (faulty > g.mux_faults_tolerated_per_boundary) fail = true;
      }
    }
    if (fail) ++fails;
  }
  MonteCarloResult r;
  r.trials = trials;
  r.failures = fails;
  r.estimate = double(fails) / double(trials);
  r.half_width = 3.0 * std::sqrt(std::max(r.estimate * (1.0 - r.estimate), 1e-12) /
                                 double(trials));
  return r;
}

ReliabilityCurve reliability_curve(DesignVariant v, const std::vector<double>& p_grid,
                                   const VariantGeometry& g, long long mc_trials,
                                   uint64_t seed) {
  ReliabilityCurve c;
  c.variant = v;
  c.method = mc_trials > 0 ? "monte_carlo" : "analytic";
  c.trials = mc_trials;
  for (double p : p_grid) {
    if (mc_trials > 0) {
      MonteCarloResult r = monte_carlo_failure_prob(v, p, g, mc_trials, seed);
      c.points.push_back({p, r.estimate});
      c.half_widths.push_back(r.half_width);
    } else {
      c.points.push_back({p, analytic_failure_prob(v, p, g)});
    }
  }
  return c;
}

std::string curves_to_csv(const std::vector<ReliabilityCurve>& curves) {
  std::ostringstream os;
  os << "p_gate,p_fail,variant,method,trials\n";
  os.setf(std::ios::scientific);
  os.precision(6);
  for (const ReliabilityCurve& c : curves)
    for (const ReliabilityPoint& pt : c.points)
      os << pt.p_gate << "," << pt.p_fail << "," << to_string(c.variant) << ","
         << c.method << "," << c.trials << "\n";
  return os.str();
}

AvfResult measure_avf(const EngineDesign& design, long long trials, uint64_t seed,
                      bool include_invalid) {
  if (trials < 1) throw DomainError("measure_avf: trials must be >= 1");
  AvfResult res;
  res.trials = trials;
  res.accounting = include_invalid ? "include-invalid" : "live-bits";

  int stages = design.config.stages;
  for (long long t = 0; t < trials; ++t) {
    uint64_t h = mix64(seed, 0xaf, uint64_t(t));
    uint32_t nonce = uint32_t(h);
    std::vector<uint8_t> header(80);
    for (size_t i = 0; i < header.size(); ++i)
      header[i] = uint8_t(mix64(h, 1, i));

    // The flip lands on the state leaving `stage`, i.e. entering round
    // stage+1. Live words there: a..h, the un-consumed schedule window,
    // and the midstate while the first hash is in flight.
    int stage = int(mix64(h, 2, 0) % uint64_t(stages - 1));
    int entering = stage + 1;
    int rh = entering % 64;
    int live_window = std::min(16, 64 - rh);
    if (rh == 0) live_window = 16;
    int live_words = 8 + live_window + (entering < 64 ? 8 : 0);

    int word;
    if (include_invalid) {
      word = int(mix64(h, 3, 0) % uint64_t(8 + 16 + 8));
    } else {
      int idx = int(mix64(h, 3, 0) % uint64_t(live_words));
      if (idx < 8)
        word = idx;
      else if (idx < 8 + live_window)
        word = 8 + (idx - 8);
      else
        word = 24 + (idx - 8 - live_window);
    }
    int bit = int(mix64(h, 4, 0) % 32);

    Digest want = mining_double_sha(header, nonce);
    StageSlot slot = inject_slot(header, nonce);
    for (int r = 0; r < stages; ++r) {
      sha_stage_transform(slot, r);
      if (r == stage) {
        if (word < 8)
          slot.state[size_t(word)] ^= 1u << bit;
        else if (word < 24)
          slot.window[size_t(word - 8)] ^= 1u << bit;
        else
          slot.mid[size_t(word - 24)] ^= 1u << bit;
      }
    }
    if (slot_digest(slot) != want)
      ++res.corrupted;
    else
      ++res.benign;
  }
  res.avf = double(res.corrupted) / double(trials);
  res.half_width =
      1.96 * std::sqrt(std::max(res.avf * (1.0 - res.avf), 1.0 / double(trials)) /
                       double(trials));
  return res;
}

DetectResult detect_faulty_stage(const EngineDesign& design, const FaultMap& map,
                                 const std::vector<uint8_t>& golden_header,
                                 uint32_t golden_nonce, const Digest& golden_digest) {
  if (design.config.spare_stages < 1)
    throw ValidationError("detect_faulty_stage: design has no spare stage");
  int slots = design.slots();
  int spares = design.config.spare_stages;
  std::vector<int> hits;
  for (int b = 0; b < slots; ++b) {
    std::set<int> bypass = {b};
    // with two spares the second bypass position parks on the tail slot
    for (int extra = 1; extra < spares; ++extra) bypass.insert(slots - extra);
    if (int(bypass.size()) < spares) bypass.insert(slots - spares);
    std::vector<CompletedDigest> out =
        run_pipeline(design, golden_header, {golden_nonce}, &map, &bypass);
    if (!out.empty() && out[0].digest == golden_digest) hits.push_back(b);
  }
  DetectResult r;
  if (int(hits.size()) == slots) {
    r.status = DetectResult::Healthy;
    r.stage = 0;
  } else if (!hits.empty()) {
    r.status = DetectResult::Isolated;
    r.stage = hits.front();
  } else {
    r.status = DetectResult::NotIsolable;
  }
  return r;
}

BtwcResult tune_ic(const EngineDesign& design, const std::vector<double>& ic_grid,
                   const std::function<double(double)>& fault_vs_ic, uint64_t seed) {
  if (ic_grid.empty()) throw DomainError("tune_ic: empty grid");
  for (size_t i = 1; i < ic_grid.size(); ++i)
    if (ic_grid[i] >= ic_grid[i - 1])
      throw DomainError("tune_ic: grid must descend");
  if (design.config.spare_stages < 1)
    throw ValidationError("tune_ic: design needs sparing");

  std::vector<uint8_t> header(80, 0x11);
  uint32_t nonce = 0x1234;
  Digest golden = mining_double_sha(header, nonce);

  BtwcResult res;
  res.chosen_ic = ic_grid.front();
  for (size_t i = 0; i < ic_grid.size(); ++i) {
    double ic = ic_grid[i];
    FaultModel m;
    m.kind = FaultKind::FLUX_TRAP_REGION;
    m.p = fault_vs_ic(ic);
    m.seed = mix64(seed, 0xb24c, uint64_t(i));
    FaultMap map = sample_fault_map(m, design);
    if (map.faulty_stages.empty()) {
      res.log.push_back({ic, "clean"});
      res.chosen_ic = ic;
      continue;
    }
    DetectResult det = detect_faulty_stage(design, map, header, nonce, golden);
    if (det.status == DetectResult::NotIsolable) {
      res.log.push_back({ic, "non-isolable"});
      break;  // step back up: chosen_ic stays at the previous grid point
    }
    res.log.push_back({ic, det.status == DetectResult::Isolated
                               ? "isolated stage " + std::to_string(det.stage)
                               : "clean"});
    res.chosen_ic = ic;
  }
  res.efficiency_gain = ic_grid.front() / res.chosen_ic;
  return res;
}

std::function<double(double)> step_fault_curve(double threshold_ic, double p_below) {
  return [=](double ic) { return ic < threshold_ic ? p_below : 0.0; };
}

std::function<double(double)> ramp_fault_curve(double ic_hi, double ic_lo,
                                               double p_at_lo) {
  return [=](double ic) {
    if (ic >= ic_hi) return 0.0;
    if (ic <= ic_lo) return p_at_lo;
    double f = (ic_hi - ic) / (ic_hi - ic_lo);
    return p_at_lo * std::pow(10.0, -6.0 * (1.0 - f));
  };
}

double mining_loss_probability(double p_transient) {
  if (p_transient < 0.0 || p_transient > 1.0)
    throw DomainError("mining_loss_probability: p must be in [0,1]");
  return p_transient / 4294967296.0;
}

}  // namespace rqlsha
