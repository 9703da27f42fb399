#include "rqlsha/jtl_pass.hpp"

namespace rqlsha {

namespace {

int non_jtl_loads(const Netlist& nl, const Net& n) {
  int c = 0;
  for (GateId g : n.loads)
    if (!nl.gates[g].kind->is_jtl) ++c;
  return c;
}

}  // namespace

JtlAnnotation insert_jtls(const Netlist& nl) {
  JtlAnnotation a;
  a.per_net.assign(nl.nets.size(), 0);

  // Rule 2: one JTL per gate load. A JTL driver carries its first gate load
  // itself (a JTL can drive a gate and a JTL).
  for (const Net& n : nl.nets) {
    if (n.tie != TieValue::None) continue;
    bool driver_is_jtl = n.driver && nl.gates[*n.driver].kind->is_jtl;
    int loads = non_jtl_loads(nl, n);
    int inserted = driver_is_jtl ? std::max(0, loads - 1) : loads;
    a.per_net[n.id] += inserted;
    a.rule2_fanout += inserted;
  }

  // Rule 3: phase-boundary cells need one extra JTL on their output.
  for (const Net& n : nl.nets) {
    if (!n.driver) continue;
    const Gate& g = nl.gates[*n.driver];
    if (g.kind->phase_boundary && (!n.loads.empty() || n.is_primary_output)) {
      a.per_net[n.id] += 1;
      a.rule3_phase += 1;
    }
  }

  // Rule 1: walk runs of consecutive logic gates with no JTL in between.
  // Any rule-2 insertion on a net resets the run for its loads.
  std::vector<int> run(nl.gates.size(), 0);
  for (GateId gid : nl.topo_order()) {
    const Gate& g = nl.gates[gid];
    int longest_in = 0;
    for (NetId in : g.inputs) {
      const Net& n = nl.nets[in];
      if (!n.driver) continue;
      const Gate& d = nl.gates[*n.driver];
      if (d.kind->is_jtl || a.per_net[in] > 0) continue;
      longest_in = std::max(longest_in, run[*n.driver]);
    }
    if (g.kind->is_jtl) {
      run[gid] = 0;
      continue;
    }
    run[gid] = longest_in + 1;
    if (run[gid] >= 5) {
      a.per_net[g.output] += 1;
      a.rule1_skew += 1;
      run[gid] = 0;
    }
  }

  a.total_jtl = a.rule1_skew + a.rule2_fanout + a.rule3_phase;
  a.total_interconnect_jj = 2 * a.total_jtl;
  return a;
}

long long interconnect_jj(const JtlAnnotation& a) { return a.total_interconnect_jj; }

long long interconnect_jj_total(const Netlist& nl, const JtlAnnotation& a) {
  return a.total_interconnect_jj + 2 * nl.emitted_jtl_count();
}

long long block_system_jj(const Netlist& nl) {
  JtlAnnotation a = insert_jtls(nl);
  return nl.gate_jj() + interconnect_jj_total(nl, a);
}

}  // namespace rqlsha
