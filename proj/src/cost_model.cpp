#include "rqlsha/cost_model.hpp"

#include <algorithm>
#include <functional>

namespace rqlsha {

double dynamic_power(double n, double f, double ic, double alpha, double phi0) {
  if (alpha < 0.0 || alpha > 1.0)
    throw DomainError("dynamic_power: alpha must be in [0,1]");
  if (n < 0 || f < 0 || ic < 0 || phi0 < 0)
    throw DomainError("dynamic_power: negative argument");
  return (2.0 / 3.0) * n * f * ic * phi0 * alpha;
}

double total_power(double p_dynamic, double cooling_factor) {
  if (p_dynamic < 0 || cooling_factor < 0)
    throw DomainError("total_power: negative argument");
  return cooling_factor * p_dynamic;
}

double energy_efficiency(double hashrate, double p_total) {
  if (p_total <= 0) throw DomainError("energy_efficiency: p_total must be > 0");
  return hashrate / p_total;
}

long long csa_latency(int k, int n) {
  if (k < 1 || n < 2) throw DomainError("csa_latency: need k >= 1 and n >= 2");
  return (long long)k + n - 1;
}

namespace {

// Chain depth seen by a load: position of the load among the net's non-JTL
// loads, offset by one when the driver is a logic gate (its first JTL), plus
// the rule-3 phase JTL when present.
int chain_depth_for_load(const Netlist& nl, const JtlAnnotation& a, const Net& n,
                         GateId load) {
  if (n.tie != TieValue::None) return 0;
  bool driver_is_jtl = n.driver && nl.gates[*n.driver].kind->is_jtl;
  bool phase = false;
  if (n.driver) phase = nl.gates[*n.driver].kind->phase_boundary && a.per_net[n.id] > 0;
  int pos = 0;
  for (GateId g : n.loads) {
    if (g == load) break;
    if (!nl.gates[g].kind->is_jtl) ++pos;
  }
  int depth = driver_is_jtl ? pos : pos + 1;
  if (nl.gates[load].kind->is_jtl) depth = 0;  // emitted chains connect directly
  return depth + (phase ? 1 : 0);
}

}  // namespace

PathResult critical_path(const Netlist& nl, const JtlAnnotation& a, double skew_margin,
                         double t_switch) {
  if (skew_margin < 0) throw DomainError("critical_path: skew_margin must be >= 0");
  std::vector<long long> arrival(nl.gates.size(), 0);
  long long depth = 0;
  for (GateId gid : nl.topo_order()) {
    const Gate& g = nl.gates[gid];
    long long best = 0;
    for (NetId in : g.inputs) {
      const Net& n = nl.nets[in];
      long long at = n.driver ? arrival[*n.driver] : 0;
      at += chain_depth_for_load(nl, a, n, gid);  // JTL delay_depth is 1
      best = std::max(best, at);
    }
    arrival[gid] = best + g.kind->delay_depth;
    depth = std::max(depth, arrival[gid]);
  }
  PathResult r;
  r.depth = depth;
  r.cycle_time = double(depth) * t_switch * (1.0 + skew_margin);
  return r;
}

long long enumerate_longest_path(const Netlist& nl, const JtlAnnotation& a) {
  // Memoized DFS over all source-to-sink paths on the DAG.
  std::vector<long long> memo(nl.gates.size(), -1);
  std::function<long long(GateId)> longest_from = [&](GateId gid) -> long long {
    if (memo[gid] >= 0) return memo[gid];
    const Gate& g = nl.gates[gid];
    long long best = 0;
    const Net& out = nl.nets[g.output];
    for (GateId load : out.loads)
      best = std::max(best, chain_depth_for_load(nl, a, out, load) + longest_from(load));
    memo[gid] = g.kind->delay_depth + best;
    return memo[gid];
  };
  long long depth = 0;
  for (const Net& n : nl.nets) {
    if (n.driver) continue;  // sources are PI and tied nets
    for (GateId load : n.loads)
      depth = std::max(depth, chain_depth_for_load(nl, a, n, load) + longest_from(load));
  }
  for (const Gate& g : nl.gates)
    if (g.inputs.empty()) depth = std::max(depth, longest_from(g.id));
  return depth;
}

double derive_activity_factor(const std::vector<long long>& ones_per_cycle,
                              long long total_net_bits) {
  if (ones_per_cycle.empty()) throw DomainError("derive_activity_factor: empty trace");
  if (total_net_bits <= 0) throw DomainError("derive_activity_factor: no tracked bits");
  double sum = 0;
  for (long long c : ones_per_cycle) sum += double(c) / double(total_net_bits);
  double alpha = sum / double(ones_per_cycle.size());
  if (alpha < 0.0 || alpha > 1.0)
    throw DomainError("derive_activity_factor: trace exceeds tracked bits");
  return alpha;
}

}  // namespace rqlsha
