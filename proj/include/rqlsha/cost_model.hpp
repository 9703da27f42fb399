#pragma once

#include <map>
#include <string>
#include <vector>

#include "rqlsha/jtl_pass.hpp"
#include "rqlsha/netlist.hpp"

namespace rqlsha {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Technology constants for the power and performance models.
struct PhysicsConstants {
  double phi0 = 2.067833848e-15;  // magnetic flux quantum, Wb
  double t_switch = 2e-12;        // JJ switching time, s
  double cooling_factor = 300.0;  // W at 300K per W at 4.2K
  double ic = 38e-6;              // critical current, A
  double skew_margin = 0.20;      // cycle-time guard band
};

struct CostReport {
  long long jj_gate = 0;
  long long jj_interconnect = 0;
  long long jj_system = 0;
  long long critical_path_depth = 0;  // JJ switching events
  double cycle_time = 0.0;            // s
  double hashrate = 0.0;              // H/s
  double alpha = 0.0;
  double p_dynamic = 0.0;  // W
  double p_total = 0.0;    // W
  double efficiency = 0.0; // H/J
  std::map<std::string, long long> breakdown;  // adders / registers / other
};

inline long long system_jj(long long jj_gate, long long jj_interconnect) {
  if (jj_gate < 0 || jj_interconnect < 0)
    throw DomainError("system_jj: negative component");
  return jj_gate + jj_interconnect;
}

/// P_dynamic = (2/3) * n * f * Ic * phi0 * alpha
double dynamic_power(double n, double f, double ic, double alpha, double phi0);

/// P_total = cooling_factor * P_dynamic
double total_power(double p_dynamic, double cooling_factor);

/// Hashes per joule.
double energy_efficiency(double hashrate, double p_total);

/// Latency of an N-operand K-bit carry-save addition in full-adder delays.
long long csa_latency(int k, int n);

struct PathResult {
  long long depth = 0;     // summed delay_depth incl. inserted JTLs
  double cycle_time = 0.0; // depth * t_switch * (1 + skew_margin)
};

/// Longest path through the netlist with pass-inserted JTLs included.
/// Loads on a fanout net sit behind their position in the JTL chain
/// (insertion order; deterministic).
PathResult critical_path(const Netlist& nl, const JtlAnnotation& a,
                         double skew_margin, double t_switch = 2e-12);

/// Brute-force path enumerator used as the oracle for critical_path on
/// small netlists. Exponential; keep under a few thousand gates.
long long enumerate_longest_path(const Netlist& nl, const JtlAnnotation& a);

/// Mean fraction of logic-1 bits per cycle over a trace of ones-counts.
double derive_activity_factor(const std::vector<long long>& ones_per_cycle,
                              long long total_net_bits);

}  // namespace rqlsha
