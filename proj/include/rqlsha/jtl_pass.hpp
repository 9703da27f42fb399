#pragma once

#include <vector>

#include "rqlsha/netlist.hpp"

namespace rqlsha {

/// Result of the three-rule JTL insertion pass. Counts cover JTLs inserted
/// by the pass; JTL cells already present in a netlist (span / retiming
/// chains emitted by generators) are tracked separately by the cost roll-up.
struct JtlAnnotation {
  std::vector<int> per_net;  // inserted JTLs per net id
  long long rule1_skew = 0;
  long long rule2_fanout = 0;
  long long rule3_phase = 0;
  long long total_jtl = 0;              // rule1 + rule2 + rule3
  long long total_interconnect_jj = 0;  // 2 * total_jtl
};

/// Applies the RQL interconnect rules to a netlist:
///   rule 2 — one JTL per gate load on every driven net (a gate can drive a
///            JTL, and a JTL can drive a gate and a JTL, so loads chain);
///   rule 1 — a JTL after any run of five logic gates with no JTL between
///            (with rule 2 applied first this never fires; kept for
///            netlists processed with other conventions);
///   rule 3 — one extra JTL per phase-boundary (XOR-class) gate output.
/// Tied-off constant nets cost nothing. Deterministic given net ordering.
JtlAnnotation insert_jtls(const Netlist& nl);

long long interconnect_jj(const JtlAnnotation& a);

/// Interconnect JJs of the full netlist: pass-inserted plus emitted chains.
long long interconnect_jj_total(const Netlist& nl, const JtlAnnotation& a);

/// jj_gate + jj_interconnect for a standalone block.
long long block_system_jj(const Netlist& nl);

}  // namespace rqlsha
