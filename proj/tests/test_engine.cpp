#include <doctest.h>

#include <random>

#include "rqlsha/engine.hpp"
#include "rqlsha/jtl_pass.hpp"
#include "rqlsha/sha256.hpp"

using namespace rqlsha;

namespace {
const CellLibrary& lib() {
  static CellLibrary l = default_cell_library();
  return l;
}

const EngineDesign& rca_design() {
  static EngineDesign d = generate_engine(lib(), EngineConfig{});
  return d;
}
}  // namespace

TEST_CASE("baseline engine deploys exactly 1200 adders") {
  CHECK(rca_design().total_adder_count == 1200);
}

TEST_CASE("baseline engine totals and breakdown match the published envelope") {
  const EngineDesign& d = rca_design();
  CHECK(d.jj_system > 3.38e6 * 0.9);
  CHECK(d.jj_system < 3.38e6 * 1.1);
  double total = double(d.jj_system);
  double adders = double(d.breakdown.at("adders")) / total * 100.0;
  double regs = double(d.breakdown.at("registers")) / total * 100.0;
  double other = double(d.breakdown.at("other")) / total * 100.0;
  CHECK(std::fabs(adders - 50.1) <= 5.0);
  CHECK(std::fabs(regs - 44.8) <= 5.0);
  CHECK(std::fabs(other - 5.1) <= 5.0);
  CHECK(adders + regs + other == doctest::Approx(100.0));
}

TEST_CASE("invalid configurations are rejected") {
  EngineConfig bad;
  bad.stages = 64;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  EngineConfig dl;
  dl.adder = AdderStrategy::CSA4_DELAYLINE;
  dl.storage = StorageStrategy::REGISTERS;
  CHECK_THROWS_AS(dl.validate(), ValidationError);
  EngineConfig rm;
  rm.redundant_mux = true;
  CHECK_THROWS_AS(rm.validate(), ValidationError);
}

TEST_CASE("stage netlist computes one SHA round (gate-level oracle)") {
  const EngineDesign& d = rca_design();
  const Netlist& nl = *d.rep_first;  // first-half stage, round 20
  std::mt19937 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    uint32_t a = rng(), b = rng(), c = rng(), dd = rng();
    uint32_t e = rng(), f = rng(), g = rng(), h = rng();
    uint32_t w[16];
    for (auto& x : w) x = rng();

    std::map<std::string, bool> in;
    auto set_word = [&](const std::string& name, uint32_t v) {
      for (int i = 0; i < 32; ++i) in[name + "/b" + std::to_string(i)] = (v >> i) & 1;
    };
    const char* sn = "abcdefgh";
    uint32_t sv[8] = {a, b, c, dd, e, f, g, h};
    for (int i = 0; i < 8; ++i) set_word(std::string("reg/") + sn[i], sv[i]);
    for (int i = 0; i < 16; ++i) set_word("reg/w" + std::to_string(i), w[i]);
    for (int i = 0; i < 8; ++i) set_word("reg/mid" + std::to_string(i), 0x11111111u * i);
    in["reg/valid_in"] = true;

    auto out = eval_netlist(nl, in);
    auto get_word = [&](const std::string& name) {
      uint32_t v = 0;
      for (int i = 0; i < 32; ++i)
        if (out.at(name + "/b" + std::to_string(i))) v |= 1u << i;
      return v;
    };

    // reference round 20
    uint32_t t1 = h + sha::big_sigma1(e) + sha::ch(e, f, g) + sha::kRoundConstants[20] + w[0];
    uint32_t t2 = sha::big_sigma0(a) + sha::maj(a, b, c);
    CHECK(get_word("reg/na") == t1 + t2);
    CHECK(get_word("reg/ne") == dd + t1);
    CHECK(get_word("reg/nb") == a);
    CHECK(get_word("reg/nh") == g);
    uint32_t w16 = sha::small_sigma1(w[14]) + w[9] + sha::small_sigma0(w[1]) + w[0];
    CHECK(get_word("reg/qw15") == w16);
    CHECK(get_word("reg/qw0") == w[1]);
    CHECK(get_word("reg/qmid3") == 0x11111111u * 3);
  }
}

TEST_CASE("hashrate ratios emerge from the stage critical paths") {
  PhysicsConstants phys;
  CostReport base = cost_report(lib(), rca_design(), phys, 0.44);
  EngineConfig kc;
  kc.adder = AdderStrategy::KSA_CRITICAL;
  CostReport ksa = cost_report(lib(), generate_engine(lib(), kc), phys, 0.44);
  EngineConfig c4;
  c4.adder = AdderStrategy::CSA4;
  CostReport csa = cost_report(lib(), generate_engine(lib(), c4), phys, 0.44);
  CHECK(base.hashrate == doctest::Approx(0.661e9));
  CHECK(ksa.hashrate / base.hashrate == doctest::Approx(1.44).epsilon(0.05 / 1.44));
  CHECK(csa.hashrate / base.hashrate == doctest::Approx(1.67).epsilon(0.05 / 1.67));
  // KSA-based stage runs at about 0.70x the baseline cycle time
  CHECK(base.hashrate / ksa.hashrate == doctest::Approx(0.70).epsilon(0.04));
}

TEST_CASE("adder family ordering holds in generated designs") {
  std::map<std::string, Netlist> blocks = calibrated_adder_blocks(lib());
  JtlAnnotation ra = insert_jtls(blocks.at("rca32"));
  JtlAnnotation ka = insert_jtls(blocks.at("ksa32"));
  long long rca_depth = critical_path(blocks.at("rca32"), ra, 0).depth;
  long long ksa_depth = critical_path(blocks.at("ksa32"), ka, 0).depth;
  long long rca_jj = block_system_jj(blocks.at("rca32"));
  long long ksa_jj = block_system_jj(blocks.at("ksa32"));
  CHECK(ksa_depth < rca_depth);  // latency(KSA) < latency(RCA)
  CHECK(ksa_jj > rca_jj);        // energy(KSA) > energy(RCA), n-proportional
  // CSA4 dominates RCA in energy-delay product
  EngineConfig c4;
  c4.adder = AdderStrategy::CSA4;
  PhysicsConstants phys;
  CostReport r = cost_report(lib(), rca_design(), phys, 0.44);
  CostReport c = cost_report(lib(), generate_engine(lib(), c4), phys, 0.44);
  double edp_rca = (r.p_total / r.hashrate) / r.hashrate;
  double edp_csa = (c.p_total / c.hashrate) / c.hashrate;
  CHECK(edp_csa < edp_rca);
}

TEST_CASE("storage cost: registers vs delay line") {
  StageLayout one;
  one.msu_registers = 1;
  one.cfg_registers = 0;
  CHECK(storage_cost(lib(), one, StorageStrategy::REGISTERS) == 384);
  // a 32-bit value delayed one cycle costs 128 JJs of delay line
  CHECK(lib().delay_line_jj_per_cycle_per_bit * 32 == 128);
  StageLayout l;
  l.msu_registers = 16;
  l.cfg_registers = 8;
  long long reg = storage_cost(lib(), l, StorageStrategy::REGISTERS);
  long long dl = storage_cost(lib(), l, StorageStrategy::DELAY_LINE);
  CHECK(reg == 24 * 384);
  CHECK(dl < reg);
}

TEST_CASE("delay line saves about 20% of per-stage JJ cost") {
  EngineConfig c4;
  c4.adder = AdderStrategy::CSA4;
  EngineConfig dl;
  dl.adder = AdderStrategy::CSA4_DELAYLINE;
  dl.storage = StorageStrategy::DELAY_LINE;
  double save = 1.0 - double(generate_engine(lib(), dl).jj_system) /
                          double(generate_engine(lib(), c4).jj_system);
  CHECK(save >= 0.15);
  CHECK(save <= 0.25);
}

TEST_CASE("CSA4 + delay line engine lands at the published complexity") {
  EngineConfig dl;
  dl.adder = AdderStrategy::CSA4_DELAYLINE;
  dl.storage = StorageStrategy::DELAY_LINE;
  long long jj = generate_engine(lib(), dl).jj_system;
  CHECK(std::fabs(double(jj) / 2.89e6 - 1.0) <= 0.10);
}

TEST_CASE("fault tolerance adds spares and bypass muxes") {
  const EngineDesign& base = rca_design();
  EngineDesign ft = add_fault_tolerance(lib(), base, 1, false);
  CHECK(ft.slots() == 129);
  CHECK(ft.jj_system > base.jj_system);
  // bypass complement: 4 32-bit 2:1 muxes per boundary
  long long bit_muxes = 4LL * 32 * ft.boundaries();
  CHECK(ft.bypass_jj >= bit_muxes * lib().cell(cells::MUX2).jj_count);
  EngineDesign rm = add_fault_tolerance(lib(), base, 1, true);
  CHECK(rm.bypass_jj > ft.bypass_jj);  // each boundary gains an 8:1 mux block
  // spares=0 leaves the design unchanged
  EngineDesign same = add_fault_tolerance(lib(), base, 0, false);
  CHECK(same.jj_system == base.jj_system);
}

TEST_CASE("generation is deterministic") {
  EngineConfig cfg;
  EngineDesign a = generate_engine(lib(), cfg);
  EngineDesign b = generate_engine(lib(), cfg);
  CHECK(a.jj_system == b.jj_system);
  CHECK(a.stage_depth == b.stage_depth);
  CHECK(write_interchange(*a.rep_first) == write_interchange(*b.rep_first));
}

TEST_CASE("baseline stage fanout distribution matches the published shape") {
  FanoutDistribution d = fanout_histogram(*rca_design().rep_first);
  CHECK(d.mean() >= 1.25);
  CHECK(d.mean() <= 1.75);
  CHECK(d.fraction_above(2) < 0.01);
}

TEST_CASE("stage interconnect overhead is about half the gate complexity") {
  const Netlist& nl = *rca_design().rep_first;
  JtlAnnotation a = insert_jtls(nl);
  // fanout (rule 2) JTL complexity against the stage's gate complexity
  double ratio = double(2 * a.rule2_fanout) / double(nl.gate_jj());
  CHECK(ratio >= 0.45);
  CHECK(ratio <= 0.55);
}
