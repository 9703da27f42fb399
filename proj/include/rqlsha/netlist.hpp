#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rqlsha/cell_library.hpp"

namespace rqlsha {

using NetId = uint32_t;
using GateId = uint32_t;

inline constexpr NetId kNoNet = 0xffffffff;

/// Nets tied to a constant instead of a gate driver. Tied-off constants are
/// free in hardware (a constant 0 is the absence of pulses) and are not
/// counted as gate loads by the JTL pass.
enum class TieValue : uint8_t { None, Zero, One };

/// Cost-attribution buckets for engine reports (reconstructed hierarchy).
enum class Category : uint8_t { Other = 0, Adders, Registers };

struct Gate {
  GateId id;
  const CellKind* kind;
  std::vector<NetId> inputs;
  NetId output;
  std::string name;  // hierarchical, e.g. "cfg/t1_a3/fa07/xor1"
  Category category = Category::Other;
};

struct Net {
  NetId id;
  std::string name;
  std::optional<GateId> driver;  // none for primary inputs / tied nets
  TieValue tie = TieValue::None;
  std::vector<GateId> loads;     // gate loads in insertion order
  bool is_primary_output = false;
  // Generator hint: bit-pitch distance this net travels. Informational.
  int span = 0;
  Category category = Category::Other;  // attribution for inserted JTLs
};

/// Flat gate-level netlist. Immutable after construction (build through
/// NetlistBuilder); id assignment is deterministic in construction order.
class Netlist {
 public:
  std::string name;
  std::vector<Gate> gates;
  std::vector<Net> nets;
  std::vector<NetId> primary_inputs;
  std::vector<NetId> primary_outputs;
  std::vector<std::string> warnings;

  const Net& net(NetId id) const { return nets.at(id); }
  const Gate& gate(GateId id) const { return gates.at(id); }

  /// Gates in topological order (inputs before loads). Cached on first use
  /// is not done; call once and keep the result.
  std::vector<GateId> topo_order() const;

  /// Sum of jj_count over non-JTL cells.
  long long gate_jj() const;
  /// 2 JJs per JTL cell instance present in the netlist itself
  /// (interconnect emitted by generators, e.g. span chains).
  long long emitted_jtl_count() const;

  size_t logic_gate_count() const;
};

/// Incremental netlist construction with validation. Net and gate ids are
/// assigned in call order, so identical call sequences give bit-identical
/// netlists.
class NetlistBuilder {
 public:
  explicit NetlistBuilder(const CellLibrary& lib, std::string name = "");

  NetId add_input(const std::string& name);
  NetId add_tied(TieValue v, const std::string& name);
  /// Creates the gate and its output net.
  NetId add_gate(const std::string& cell, const std::vector<NetId>& inputs,
                 const std::string& gate_name = "");
  void mark_output(NetId net);

  /// Inserts a chain of `count` JTLs after `net`, returning the tail net.
  /// Used by generators for span (distance) and retiming chains.
  NetId jtl_chain(NetId net, int count, const std::string& prefix);

  void set_span(NetId net, int span);

  /// Attribution bucket applied to gates and nets created from here on.
  void set_category(Category c) { category_ = c; }

  /// Construction-time arrival estimate (one switching event per cell plus
  /// one chain JTL per hop). Used to size alignment chains; the JTL pass
  /// remains the timing authority.
  long long depth_estimate(NetId net) const { return depth_[net]; }

  /// Validates (single driver, arity, acyclicity, no dangling inputs) and
  /// freezes the netlist. Unconnected gate outputs produce warnings only.
  Netlist build();

  const CellLibrary& library() const { return lib_; }

 private:
  const CellLibrary& lib_;
  Netlist nl_;
  bool built_ = false;
  Category category_ = Category::Other;
  std::vector<long long> depth_;
};

/// build_netlist from parsed gate descriptions (the interchange form).
struct GateDesc {
  std::string id;
  std::string cell;
  std::string output;
  std::vector<std::string> inputs;
};
Netlist build_netlist(const CellLibrary& lib, const std::vector<GateDesc>& gates,
                      const std::vector<std::string>& inputs,
                      const std::vector<std::string>& outputs,
                      const std::string& name = "");

/// Evaluates the netlist on a primary-input assignment (topological order).
/// Missing input bits are an error; tied nets take their constant.
std::map<std::string, bool> eval_netlist(const Netlist& nl,
                                         const std::map<std::string, bool>& inputs);

/// Histogram of load counts per driving net (gate-driven nets only) with
/// the mean kept exact as a rational.
struct FanoutDistribution {
  std::map<int, long long> histogram;  // fanout -> net count
  long long mean_num = 0;              // total loads
  long long mean_den = 0;              // driving net count
  double mean() const { return mean_den ? double(mean_num) / double(mean_den) : 0.0; }
  long long total_nets() const;
  double fraction_above(int fanout) const;
};
FanoutDistribution fanout_histogram(const Netlist& nl);

/// Line-oriented structural interchange:
///   .input <net>   .output <net>   <gate-id> <cell> <out> <in1> [<in2> ...]
/// Tied constants appear as nets named $zero / $one.
std::string write_interchange(const Netlist& nl);
Netlist read_interchange(const CellLibrary& lib, std::istream& in,
                         const std::string& name = "");
Netlist read_interchange_file(const CellLibrary& lib, const std::string& path);

}  // namespace rqlsha
