#include "rqlsha/adders.hpp"

#include <cmath>

namespace rqlsha {

std::string to_string(AdderKind k) {
  switch (k) {
    case AdderKind::RCA: return "rca";
    case AdderKind::KSA: return "ksa";
    case AdderKind::CSA3: return "csa3";
    case AdderKind::CSA4: return "csa4";
  }
  return "?";
}

namespace {

struct FaNets {
  NetId sum;
  NetId cout;
};

// sum = a^b^c, cout = ab | c(a^b). The carry-side AND is wired before the
// sum XOR so the ripple path takes the head of each fanout chain.
FaNets make_fa(NetlistBuilder& b, NetId a, NetId bb, NetId c, const std::string& p) {
  NetId x1 = b.add_gate(cells::XOR, {a, bb}, p + "/x1");
  NetId g = b.add_gate(cells::AND, {a, bb}, p + "/g");
  NetId t = b.add_gate(cells::AND, {x1, c}, p + "/t");
  NetId cout = b.add_gate(cells::OR, {g, t}, p + "/cout");
  NetId sum = b.add_gate(cells::XOR, {x1, c}, p + "/sum");
  return {sum, cout};
}

int span_chain_len(double pitch, int span) {
  if (span <= 1) return 0;  // neighbour links are covered by the fanout JTL
  return std::max(1, int(std::ceil(pitch * span)));
}

// w chained full adders; the carry in is tied off for plain 2-operand
// addition and the final carry out is dropped (mod 2^w).
std::vector<NetId> rca_core(NetlistBuilder& b, const std::vector<NetId>& a,
                            const std::vector<NetId>& bb, const std::string& prefix) {
  int w = int(a.size());
  std::vector<NetId> sums;
  sums.reserve(w);
  NetId carry = b.add_tied(TieValue::Zero, prefix + "/cin");
  for (int i = 0; i < w; ++i) {
    FaNets fa = make_fa(b, a[i], bb[i], carry, prefix + "/fa" + std::to_string(i));
    sums.push_back(fa.sum);
    carry = fa.cout;
  }
  return sums;
}

// Radix-2 Kogge-Stone over (g, p). Cross-bit prefix links pay span JTLs;
// the carry spine carries the calibrated retiming pad.
std::vector<NetId> ksa_core(NetlistBuilder& b, const std::vector<NetId>& a,
                            const std::vector<NetId>& bb, const AdderOptions& opt,
                            const std::string& prefix) {
  int w = int(a.size());
  std::vector<NetId> gen(w), prop(w);
  for (int i = 0; i < w; ++i) {
    std::string p = prefix + "/pre" + std::to_string(i);
    prop[i] = b.add_gate(cells::XOR, {a[i], bb[i]}, p + "/p");
    gen[i] = b.add_gate(cells::AND, {a[i], bb[i]}, p + "/g");
  }
  std::vector<NetId> sum_p = prop;

  // Only carries into bits 1..w-1 are consumed (mod 2^w), so the prefix
  // stops at position w-2, and the last level skips group-propagate.
  for (int level = 0, d = 1; d < w - 1; ++level, d <<= 1) {
    bool last = (2 * d >= w - 1);
    std::vector<NetId> ng = gen, np = prop;
    for (int i = d; i <= w - 2; ++i) {
      std::string p = prefix + "/l" + std::to_string(level) + "/n" + std::to_string(i);
      int chain = span_chain_len(opt.jtl_per_bit_pitch, d);
      NetId g_lo = gen[i - d];
      NetId p_lo = prop[i - d];
      if (chain > 0) {
        g_lo = b.jtl_chain(g_lo, chain, p + "/gspan");
        if (!last) p_lo = b.jtl_chain(p_lo, chain, p + "/pspan");
      }
      NetId t = b.add_gate(cells::AND, {prop[i], g_lo}, p + "/t");
      ng[i] = b.add_gate(cells::OR, {gen[i], t}, p + "/g");
      if (!last) np[i] = b.add_gate(cells::AND, {prop[i], p_lo}, p + "/p");
    }
    // inter-level phase alignment on the carry spine
    if (w - 2 >= d)
      ng[w - 2] = b.jtl_chain(ng[w - 2], 3,
                              prefix + "/l" + std::to_string(level) + "/align");
    gen = ng;
    prop = np;
  }

  if (opt.retiming_pad > 0 && w >= 2)
    gen[w - 2] = b.jtl_chain(gen[w - 2], opt.retiming_pad, prefix + "/retime");

  std::vector<NetId> sums(w);
  sums[0] = b.jtl_chain(sum_p[0], 1, prefix + "/s0stage");
  for (int i = 1; i < w; ++i)
    sums[i] =
        b.add_gate(cells::XOR, {sum_p[i], gen[i - 1]}, prefix + "/sum" + std::to_string(i));
  return sums;
}

// n-operand carry-save: 3:2 compressor layers down to two rows, then a
// final ripple carry-propagate add. Compressor outputs feeding the CPA
// hold on per-bit alignment chains (wave-pipelining input alignment).
std::vector<NetId> csa_core(NetlistBuilder& b, std::vector<std::vector<NetId>> rows,
                            const AdderOptions& opt, const std::string& prefix) {
  int w = int(rows[0].size());
  int layer = 0;
  while (rows.size() > 2) {
    std::vector<NetId> x = rows[rows.size() - 3];
    std::vector<NetId> y = rows[rows.size() - 2];
    std::vector<NetId> z = rows[rows.size() - 1];
    rows.resize(rows.size() - 3);
    std::string lp = prefix + "/l" + std::to_string(layer);
    NetId zero = b.add_tied(TieValue::Zero, lp + "/zero");
    std::vector<NetId> srow(w), crow(w);
    for (int i = 0; i < w; ++i) {
      FaNets fa = make_fa(b, x[i], y[i], z[i], lp + "/fa" + std::to_string(i));
      srow[i] = fa.sum;
      crow[i] = fa.cout;
    }
    std::vector<NetId> shifted(w);
    shifted[0] = zero;
    for (int i = 1; i < w; ++i) shifted[i] = crow[i - 1];
    rows.push_back(srow);
    rows.push_back(shifted);
    ++layer;
  }

  if (opt.balance_csa_inputs) {
    for (int i = 1; i < w; ++i) {
      std::string p = prefix + "/hold" + std::to_string(i);
      rows[0][i] = b.jtl_chain(rows[0][i], i / 4, p + "/s");
      rows[1][i] = b.jtl_chain(rows[1][i], (i + 1) / 4, p + "/c");
    }
  }

  std::vector<NetId> sums = rca_core(b, rows[0], rows[1], prefix + "/cpa");
  if (opt.retiming_pad > 0)
    sums.back() = b.jtl_chain(sums.back(), opt.retiming_pad, prefix + "/retime");
  return sums;
}

std::vector<NetId> pi_operand(NetlistBuilder& b, const std::string& name, int w) {
  std::vector<NetId> v(w);
  for (int i = 0; i < w; ++i) v[i] = b.add_input(name + std::to_string(i));
  return v;
}

}  // namespace

std::vector<NetId> emit_adder(NetlistBuilder& b, AdderKind kind,
                              const std::vector<std::vector<NetId>>& operands,
                              const AdderOptions& opt, const std::string& prefix) {
  size_t want = kind == AdderKind::CSA4 ? 4 : kind == AdderKind::CSA3 ? 3 : 2;
  if (operands.size() != want)
    throw ValidationError(prefix + ": " + to_string(kind) + " takes " +
                          std::to_string(want) + " operands");
  switch (kind) {
    case AdderKind::RCA: {
      std::vector<NetId> s = rca_core(b, operands[0], operands[1], prefix);
      if (opt.retiming_pad > 0)
        s.back() = b.jtl_chain(s.back(), opt.retiming_pad, prefix + "/retime");
      return s;
    }
    case AdderKind::KSA:
      return ksa_core(b, operands[0], operands[1], opt, prefix);
    case AdderKind::CSA3:
    case AdderKind::CSA4:
      return csa_core(b, operands, opt, prefix);
  }
  throw ValidationError("emit_adder: unsupported kind");
}

Netlist adder_block(const CellLibrary& lib, AdderKind kind, const AdderOptions& opt) {
  if (opt.width < 1) throw ValidationError("adder_block: width must be >= 1");
  int want = kind == AdderKind::CSA4 ? 4 : kind == AdderKind::CSA3 ? 3 : 2;
  if (opt.operands != want)
    throw ValidationError("adder_block: " + to_string(kind) + " takes " +
                          std::to_string(want) + " operands, got " +
                          std::to_string(opt.operands));

  NetlistBuilder b(lib, to_string(kind) + std::to_string(opt.width));
  b.set_category(Category::Adders);
  std::vector<std::vector<NetId>> ops;
  ops.push_back(pi_operand(b, "a", opt.width));
  if (opt.tied_b) {
    std::vector<NetId> t(opt.width);
    for (int i = 0; i < opt.width; ++i)
      t[i] = b.add_tied((opt.tie_value >> i) & 1 ? TieValue::One : TieValue::Zero,
                        "k" + std::to_string(i));
    ops.push_back(std::move(t));
  } else {
    ops.push_back(pi_operand(b, "b", opt.width));
  }
  if (want >= 3) ops.push_back(pi_operand(b, "c", opt.width));
  if (want >= 4) ops.push_back(pi_operand(b, "d", opt.width));

  std::vector<NetId> sums = emit_adder(b, kind, ops, opt, to_string(kind));
  for (NetId s : sums) b.mark_output(s);
  return b.build();
}

Netlist full_adder(const CellLibrary& lib) {
  NetlistBuilder b(lib, "full_adder");
  NetId a = b.add_input("a");
  NetId x = b.add_input("b");
  NetId c = b.add_input("cin");
  FaNets fa = make_fa(b, a, x, c, "fa");
  b.mark_output(fa.sum);
  b.mark_output(fa.cout);
  return b.build();
}

}  // namespace rqlsha
