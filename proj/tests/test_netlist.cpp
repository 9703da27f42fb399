#include <doctest.h>

#include <random>
#include <sstream>

#include "rqlsha/adders.hpp"
#include "rqlsha/netlist.hpp"

using namespace rqlsha;

namespace {
const CellLibrary& lib() {
  static CellLibrary l = default_cell_library();
  return l;
}

// Arithmetic oracle harness: drive an adder block and read back the sum.
uint32_t eval_adder(const Netlist& nl, const std::vector<std::pair<char, uint32_t>>& ops,
                    int width = 32) {
  std::map<std::string, bool> in;
  for (auto [name, val] : ops)
    for (int i = 0; i < width; ++i)
      in[std::string(1, name) + std::to_string(i)] = (val >> i) & 1;
  auto out = eval_netlist(nl, in);
  uint32_t s = 0;
  for (int i = 0; i < width; ++i) {
    auto it = out.find(nl.nets[nl.primary_outputs[i]].name);
    REQUIRE(it != out.end());
    if (it->second) s |= 1u << i;
  }
  return s;
}
}  // namespace

TEST_CASE("full adder is the textbook 5-gate structure") {
  Netlist fa = full_adder(lib());
  CHECK(fa.gates.size() == 5);
  CHECK(fa.primary_inputs.size() == 3);
  CHECK(fa.primary_outputs.size() == 2);
  int n_xor = 0, n_and = 0, n_or = 0;
  for (const Gate& g : fa.gates) {
    if (g.kind->name == cells::XOR) ++n_xor;
    if (g.kind->name == cells::AND) ++n_and;
    if (g.kind->name == cells::OR) ++n_or;
  }
  CHECK(n_xor == 2);
  CHECK(n_and == 2);
  CHECK(n_or == 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        auto out = eval_netlist(fa, {{"a", a != 0}, {"b", b != 0}, {"cin", c != 0}});
        int total = a + b + c;
        CHECK(out.at("fa/sum") == ((total & 1) != 0));
        CHECK(out.at("fa/cout") == ((total >> 1) != 0));
      }
}

TEST_CASE("A-AND-NOT-B passes A only when B stays quiet") {
  NetlistBuilder b(lib());
  NetId a = b.add_input("a");
  NetId bb = b.add_input("b");
  NetId o = b.add_gate(cells::ANOTB, {a, bb}, "o");
  b.mark_output(o);
  Netlist nl = b.build();
  CHECK(eval_netlist(nl, {{"a", true}, {"b", false}}).at("o") == true);
  CHECK(eval_netlist(nl, {{"a", true}, {"b", true}}).at("o") == false);
}

TEST_CASE("multiple drivers on a net are rejected") {
  std::vector<GateDesc> gates = {
      {"g1", "AND", "n1", {"a", "b"}},
      {"g2", "OR", "n1", {"a", "b"}},
  };
  CHECK_THROWS_WITH_AS(build_netlist(lib(), gates, {"a", "b"}, {"n1"}),
                       doctest::Contains("driven more than once"), ValidationError);
}

TEST_CASE("combinational cycles are rejected") {
  std::vector<GateDesc> gates = {
      {"g1", "AND", "x", {"a", "y"}},
      {"g2", "OR", "y", {"x", "a"}},
  };
  CHECK_THROWS_WITH_AS(build_netlist(lib(), gates, {"a"}, {"y"}),
                       doctest::Contains("cycle"), ValidationError);
}

TEST_CASE("dangling inputs and unknown cells are rejected") {
  CHECK_THROWS_AS(build_netlist(lib(), {{"g", "AND", "o", {"a", "nope"}}}, {"a"}, {"o"}),
                  ValidationError);
  CHECK_THROWS_AS(build_netlist(lib(), {{"g", "NAND", "o", {"a", "a"}}}, {"a"}, {"o"}),
                  ValidationError);
}

TEST_CASE("missing input bit fails evaluation") {
  Netlist fa = full_adder(lib());
  CHECK_THROWS_AS(eval_netlist(fa, {{"a", true}}), ValidationError);
}

TEST_CASE("32-bit RCA: 160 gates, acyclic, matches integer addition") {
  AdderOptions opt;
  Netlist rca = adder_block(lib(), AdderKind::RCA, opt);
  size_t logic = 0;
  for (const Gate& g : rca.gates)
    if (!g.kind->is_jtl) ++logic;
  CHECK(logic == 160);
  CHECK(rca.topo_order().size() == rca.gates.size());

  std::mt19937 rng(7);
  for (int t = 0; t < 10000; ++t) {
    uint32_t a = rng(), b = rng();
    CHECK(eval_adder(rca, {{'a', a}, {'b', b}}) == a + b);
  }
  CHECK(eval_adder(rca, {{'a', 0u}, {'b', 0u}}) == 0u);
  CHECK(eval_adder(rca, {{'a', 0xffffffffu}, {'b', 0xffffffffu}}) == 0xfffffffeu);
  CHECK(eval_adder(rca, {{'a', 0xffffffffu}, {'b', 1u}}) == 0u);
}

TEST_CASE("fanout histogram basics") {
  // chain of five buffers-as-AND gates, all fanout 1
  NetlistBuilder b(lib());
  NetId one = b.add_tied(TieValue::One, "one");
  NetId x = b.add_input("x");
  for (int i = 0; i < 5; ++i) x = b.add_gate(cells::AND, {x, one}, "g" + std::to_string(i));
  b.mark_output(x);
  Netlist nl = b.build();
  FanoutDistribution d = fanout_histogram(nl);
  CHECK(d.histogram.at(1) == 4);
  CHECK(d.histogram.at(0) == 1);  // the output net
  CHECK(d.mean() == doctest::Approx(4.0 / 5.0));
}

TEST_CASE("one gate driving three loads shows up as fanout 3") {
  NetlistBuilder b(lib());
  NetId a = b.add_input("a");
  NetId bb = b.add_input("b");
  NetId g = b.add_gate(cells::AND, {a, bb}, "g");
  for (int i = 0; i < 3; ++i) b.mark_output(b.add_gate(cells::AND, {g, bb}, "l" + std::to_string(i)));
  Netlist nl = b.build();
  FanoutDistribution d = fanout_histogram(nl);
  CHECK(d.histogram.at(3) == 1);
}

TEST_CASE("histogram mass equals driving nets; removing a gate removes its loads") {
  AdderOptions opt;
  opt.width = 8;
  Netlist rca = adder_block(lib(), AdderKind::RCA, opt);
  FanoutDistribution d = fanout_histogram(rca);
  long long driving = 0;
  for (const Net& n : rca.nets)
    if (n.driver) ++driving;
  CHECK(d.total_nets() == driving);
  CHECK(d.mean_den == driving);
}

TEST_CASE("interchange round-trips through text") {
  Netlist fa = full_adder(lib());
  std::string text = write_interchange(fa);
  std::istringstream is(text);
  Netlist back = read_interchange(lib(), is, "fa2");
  CHECK(back.gates.size() == fa.gates.size());
  CHECK(back.primary_inputs.size() == 3);
  auto out = eval_netlist(back, {{"a", true}, {"b", false}, {"cin", true}});
  CHECK(out.at("fa/sum") == false);
  CHECK(out.at("fa/cout") == true);
}

TEST_CASE("interchange reader accepts out-of-order gates from external flows") {
  std::string text =
      ".input a\n.input b\n.output s\n"
      "# y defined after use\n"
      "g2 OR s y a\n"
      "g1 AND y a b\n";
  std::istringstream is(text);
  Netlist nl = read_interchange(lib(), is, "ext");
  auto out = eval_netlist(nl, {{"a", true}, {"b", false}});
  CHECK(out.at("s") == true);
}

TEST_CASE("determinism: identical construction gives identical interchange text") {
  AdderOptions opt;
  opt.width = 16;
  Netlist a = adder_block(lib(), AdderKind::KSA, opt);
  Netlist b = adder_block(lib(), AdderKind::KSA, opt);
  CHECK(write_interchange(a) == write_interchange(b));
}
