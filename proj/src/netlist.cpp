#include "rqlsha/netlist.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

namespace rqlsha {

std::vector<GateId> Netlist::topo_order() const {
  std::vector<int> pending(gates.size(), 0);
  std::vector<std::vector<GateId>> dependents(gates.size());
  std::vector<GateId> ready;
  for (const Gate& g : gates) {
    int deps = 0;
    for (NetId in : g.inputs) {
      const Net& n = nets[in];
      if (n.driver) {
        ++deps;
        dependents[*n.driver].push_back(g.id);
      }
    }
    pending[g.id] = deps;
    if (deps == 0) ready.push_back(g.id);
  }
  std::vector<GateId> order;
  order.reserve(gates.size());
  for (size_t i = 0; i < ready.size(); ++i) {
    GateId g = ready[i];
    order.push_back(g);
    for (GateId d : dependents[g])
      if (--pending[d] == 0) ready.push_back(d);
  }
  if (order.size() != gates.size())
    throw ValidationError("netlist " + name + ": combinational cycle detected");
  return order;
}

long long Netlist::gate_jj() const {
  long long total = 0;
  for (const Gate& g : gates)
    if (!g.kind->is_jtl) total += g.kind->jj_count;
  return total;
}

long long Netlist::emitted_jtl_count() const {
  long long total = 0;
  for (const Gate& g : gates)
    if (g.kind->is_jtl) ++total;
  return total;
}

size_t Netlist::logic_gate_count() const {
  size_t n = 0;
  for (const Gate& g : gates)
    if (!g.kind->is_jtl) ++n;
  return n;
}

NetlistBuilder::NetlistBuilder(const CellLibrary& lib, std::string name) : lib_(lib) {
  nl_.name = std::move(name);
}

NetId NetlistBuilder::add_input(const std::string& name) {
  Net n;
  n.id = NetId(nl_.nets.size());
  n.name = name.empty() ? "in" + std::to_string(n.id) : name;
  n.category = category_;
  nl_.nets.push_back(std::move(n));
  depth_.push_back(0);
  nl_.primary_inputs.push_back(nl_.nets.back().id);
  return nl_.nets.back().id;
}

NetId NetlistBuilder::add_tied(TieValue v, const std::string& name) {
  Net n;
  n.id = NetId(nl_.nets.size());
  n.name = name.empty() ? "tie" + std::to_string(n.id) : name;
  n.tie = v;
  n.category = category_;
  nl_.nets.push_back(std::move(n));
  depth_.push_back(0);
  return nl_.nets.back().id;
}

NetId NetlistBuilder::add_gate(const std::string& cell, const std::vector<NetId>& inputs,
                               const std::string& gate_name) {
  const CellKind& kind = lib_.cell(cell);
  if (int(inputs.size()) != kind.num_inputs)
    throw ValidationError("gate " + gate_name + ": cell " + cell + " takes " +
                          std::to_string(kind.num_inputs) + " inputs, got " +
                          std::to_string(inputs.size()));
  Gate g;
  g.id = GateId(nl_.gates.size());
  g.kind = &kind;
  g.inputs = inputs;
  g.name = gate_name.empty() ? cell + std::to_string(g.id) : gate_name;
  g.category = category_;

  Net out;
  out.id = NetId(nl_.nets.size());
  out.name = g.name;
  out.driver = g.id;
  out.category = category_;
  g.output = out.id;

  long long arr = 0;
  for (NetId in : inputs) {
    nl_.nets.at(in).loads.push_back(g.id);
    long long hop = kind.is_jtl ? 0 : 1;  // chain JTL per gate-load hop
    if (nl_.nets.at(in).tie != TieValue::None) hop = 0;
    arr = std::max(arr, depth_.at(in) + hop);
  }
  depth_.push_back(arr + kind.delay_depth);
  nl_.nets.push_back(std::move(out));
  nl_.gates.push_back(std::move(g));
  return nl_.gates.back().output;
}

void NetlistBuilder::mark_output(NetId net) {
  nl_.nets.at(net).is_primary_output = true;
  nl_.primary_outputs.push_back(net);
}

NetId NetlistBuilder::jtl_chain(NetId net, int count, const std::string& prefix) {
  NetId cur = net;
  for (int i = 0; i < count; ++i)
    cur = add_gate(cells::JTL, {cur}, prefix + "/jtl" + std::to_string(i));
  return cur;
}

void NetlistBuilder::set_span(NetId net, int span) { nl_.nets.at(net).span = span; }

Netlist NetlistBuilder::build() {
  if (built_) throw ValidationError("NetlistBuilder::build called twice");
  built_ = true;
  // Dangling inputs: a net with loads but neither driver nor tie nor PI status.
  for (const Net& n : nl_.nets) {
    bool is_pi = std::find(nl_.primary_inputs.begin(), nl_.primary_inputs.end(), n.id) !=
                 nl_.primary_inputs.end();
    if (!n.loads.empty() && !n.driver && n.tie == TieValue::None && !is_pi)
      throw ValidationError("netlist " + nl_.name + ": net " + n.name +
                            " has loads but no driver");
    if (n.driver && n.loads.empty() && !n.is_primary_output)
      nl_.warnings.push_back("unconnected output net " + n.name);
  }
  nl_.topo_order();  // throws on cycles
  return std::move(nl_);
}

Netlist build_netlist(const CellLibrary& lib, const std::vector<GateDesc>& gates,
                      const std::vector<std::string>& inputs,
                      const std::vector<std::string>& outputs, const std::string& name) {
  NetlistBuilder b(lib, name);
  std::unordered_map<std::string, NetId> by_name;
  by_name["$zero"] = b.add_tied(TieValue::Zero, "$zero");
  by_name["$one"] = b.add_tied(TieValue::One, "$one");
  for (const std::string& in : inputs) {
    if (by_name.count(in)) throw ValidationError("duplicate input net " + in);
    by_name[in] = b.add_input(in);
  }
  // Two passes so gate order in the description does not matter, but ids stay
  // deterministic: nets are created in description order.
  struct Pending {
    const GateDesc* desc;
    NetId out;
  };
  std::vector<Pending> pending;
  for (const GateDesc& g : gates) {
    if (by_name.count(g.output))
      throw ValidationError("net " + g.output + " driven more than once");
    by_name[g.output] = kNoNet;  // reserve
    pending.push_back({&g, kNoNet});
  }
  // Kahn-style resolution over the name graph.
  std::unordered_map<std::string, std::vector<size_t>> waiters;
  std::vector<int> missing(pending.size(), 0);
  std::vector<size_t> ready;
  for (size_t i = 0; i < pending.size(); ++i) {
    for (const std::string& in : pending[i].desc->inputs) {
      auto it = by_name.find(in);
      if (it == by_name.end())
        throw ValidationError("gate " + pending[i].desc->id + ": dangling input " + in);
      if (it->second == kNoNet) {
        ++missing[i];
        waiters[in].push_back(i);
      }
    }
    if (missing[i] == 0) ready.push_back(i);
  }
  size_t done = 0;
  for (size_t k = 0; k < ready.size(); ++k) {
    size_t i = ready[k];
    const GateDesc& g = *pending[i].desc;
    std::vector<NetId> ins;
    for (const std::string& in : g.inputs) ins.push_back(by_name.at(in));
    NetId out = b.add_gate(g.cell, ins, g.id);
    by_name[g.output] = out;
    ++done;
    auto it = waiters.find(g.output);
    if (it != waiters.end())
      for (size_t w : it->second)
        if (--missing[w] == 0) ready.push_back(w);
  }
  if (done != pending.size())
    throw ValidationError("netlist " + name + ": combinational cycle detected");
  for (const std::string& out : outputs) {
    auto it = by_name.find(out);
    if (it == by_name.end() || it->second == kNoNet)
      throw ValidationError("primary output " + out + " is not driven");
    b.mark_output(it->second);
  }
  Netlist nl = b.build();
  // Restore user-facing net names for outputs of gates.
  for (const GateDesc& g : gates) nl.nets[by_name.at(g.output)].name = g.output;
  return nl;
}

std::map<std::string, bool> eval_netlist(const Netlist& nl,
                                         const std::map<std::string, bool>& inputs) {
  std::vector<char> value(nl.nets.size(), 0);
  for (NetId pi : nl.primary_inputs) {
    auto it = inputs.find(nl.nets[pi].name);
    if (it == inputs.end())
      throw ValidationError("eval: missing input bit " + nl.nets[pi].name);
    value[pi] = it->second;
  }
  for (const Net& n : nl.nets)
    if (n.tie != TieValue::None) value[n.id] = (n.tie == TieValue::One);
  std::vector<bool> args;
  for (GateId gid : nl.topo_order()) {
    const Gate& g = nl.gates[gid];
    args.clear();
    for (NetId in : g.inputs) args.push_back(value[in] != 0);
    value[g.output] = g.kind->logic_fn(args);
  }
  std::map<std::string, bool> out;
  for (NetId po : nl.primary_outputs) out[nl.nets[po].name] = value[po] != 0;
  return out;
}

FanoutDistribution fanout_histogram(const Netlist& nl) {
  // Loads per net over combinational logic drivers. JTLs are interconnect
  // (never drivers of record) and register outputs belong to the next rank.
  FanoutDistribution d;
  for (const Net& n : nl.nets) {
    if (!n.driver) continue;  // PIs and tied nets are not gate drivers
    const Gate& g = nl.gates[*n.driver];
    if (g.kind->is_jtl || g.kind->is_state) continue;
    int f = int(n.loads.size());
    d.histogram[f] += 1;
    d.mean_num += f;
    d.mean_den += 1;
  }
  return d;
}

long long FanoutDistribution::total_nets() const {
  long long t = 0;
  for (auto& [f, c] : histogram) t += c;
  return t;
}

double FanoutDistribution::fraction_above(int fanout) const {
  long long above = 0, total = 0;
  for (auto& [f, c] : histogram) {
    total += c;
    if (f > fanout) above += c;
  }
  return total ? double(above) / double(total) : 0.0;
}

std::string write_interchange(const Netlist& nl) {
  std::ostringstream os;
  os << "# netlist " << nl.name << "\n";
  for (NetId pi : nl.primary_inputs) os << ".input " << nl.nets[pi].name << "\n";
  for (NetId po : nl.primary_outputs) os << ".output " << nl.nets[po].name << "\n";
  auto net_token = [&](NetId id) -> std::string {
    const Net& n = nl.nets[id];
    if (n.tie == TieValue::Zero) return "$zero";
    if (n.tie == TieValue::One) return "$one";
    return n.name;
  };
  for (const Gate& g : nl.gates) {
    os << g.name << " " << g.kind->name << " " << net_token(g.output);
    for (NetId in : g.inputs) os << " " << net_token(in);
    os << "\n";
  }
  return os.str();
}

Netlist read_interchange(const CellLibrary& lib, std::istream& in, const std::string& name) {
  std::vector<GateDesc> gates;
  std::vector<std::string> pis, pos;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == ".input") {
      std::string n;
      if (!(ls >> n)) throw ParseError("line " + std::to_string(lineno) + ": .input needs a net");
      pis.push_back(n);
      continue;
    }
    if (tok == ".output") {
      std::string n;
      if (!(ls >> n)) throw ParseError("line " + std::to_string(lineno) + ": .output needs a net");
      pos.push_back(n);
      continue;
    }
    GateDesc g;
    g.id = tok;
    if (!(ls >> g.cell >> g.output))
      throw ParseError("line " + std::to_string(lineno) + ": expected '<id> <cell> <out> <in...>'");
    std::string inet;
    while (ls >> inet) g.inputs.push_back(inet);
    gates.push_back(std::move(g));
  }
  return build_netlist(lib, gates, pis, pos, name);
}

Netlist read_interchange_file(const CellLibrary& lib, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open netlist file: " + path);
  return read_interchange(lib, in, path);
}

}  // namespace rqlsha
