#pragma once

#include "rqlsha/netlist.hpp"

namespace rqlsha {

enum class AdderKind { RCA, KSA, CSA3, CSA4 };

std::string to_string(AdderKind k);

struct AdderOptions {
  int width = 32;
  int operands = 2;       // 2 for RCA/KSA, 3 or 4 for CSA
  bool tied_b = false;    // second operand tied to a constant word (e.g. W+K)
  uint32_t tie_value = 0;
  // Wave-retiming JTLs appended to the carry spine. Calibrated by the
  // engine generator against the published per-family latencies.
  int retiming_pad = 0;
  // JTLs per bit pitch for cross-bit links (span chains). Kogge-Stone
  // prefix links travel 2^k bit pitches and pay for the distance; one JTL
  // covers two pitches of separation.
  double jtl_per_bit_pitch = 0.5;
  // Per-bit input alignment chains for carry-save compressor outputs
  // feeding the final carry-propagate adder (wave-pipelining alignment).
  bool balance_csa_inputs = true;
};

/// Emits the adder into an existing builder. `operands` holds 2 to 4
/// equal-width operand words (LSB first); returns the sum word (mod 2^w).
std::vector<NetId> emit_adder(NetlistBuilder& b, AdderKind kind,
                              const std::vector<std::vector<NetId>>& operands,
                              const AdderOptions& opt, const std::string& prefix);

/// Functionally correct modular adder netlist of the requested kind.
/// Inputs a0..a{w-1}, b0.., (c0.., d0.. for CSA); outputs s0..s{w-1}.
Netlist adder_block(const CellLibrary& lib, AdderKind kind, const AdderOptions& opt);

/// Single-bit full adder: 2 XOR + 2 AND + 1 OR, inputs a b cin,
/// outputs sum cout.
Netlist full_adder(const CellLibrary& lib);

}  // namespace rqlsha
