#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqlsha {

/// Thrown when a cell library or netlist fails validation.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One RQL standard cell: JJ cost, switching-delay contribution, and the
/// boolean function it computes. max_drive is 1 for every logic cell; a
/// gate drives more than one load only through JTLs.
struct CellKind {
  std::string name;
  int jj_count = 0;
  int delay_depth = 1;     // JJ switching events added to a traversing path
  int num_inputs = 0;
  bool phase_boundary = false;  // XOR-class cells sit on the RQL phase boundary
  int max_drive = 1;
  bool is_jtl = false;
  bool is_state = false;   // D-register bit

  // Evaluates the cell on its inputs. Total over all input combinations.
  std::function<bool(const std::vector<bool>&)> logic_fn;

  bool is_logic() const { return !is_jtl; }
};

/// The RQL cell set plus library-level scalars (delay-line cost).
class CellLibrary {
 public:
  std::string version = "1";
  int delay_line_jj_per_cycle_per_bit = 4;

  const CellKind& cell(const std::string& name) const;
  bool has(const std::string& name) const { return cells_.count(name) != 0; }
  void add(CellKind kind);
  const std::map<std::string, CellKind>& cells() const { return cells_; }

  /// Checks the library invariants: required cells present, JTL costs 2 JJs
  /// exactly, D-register bit costs 12, max_drive 1 everywhere.
  void validate() const;

 private:
  std::map<std::string, CellKind> cells_;
};

// Canonical cell names used by the generators.
namespace cells {
inline constexpr const char* AND = "AND";
inline constexpr const char* OR = "OR";
inline constexpr const char* XOR = "XOR";
inline constexpr const char* ANOTB = "ANOTB";  // A-AND-NOT-B
inline constexpr const char* JTL = "JTL";
inline constexpr const char* DREG = "DREG";    // D-register bit
inline constexpr const char* MUX2 = "MUX2";    // 2:1 mux bit, inputs (a, b, sel)
inline constexpr const char* MUX8 = "MUX8";    // 8:1 mux bit, inputs (d0..d7, s0..s2)
}  // namespace cells

/// The default library shipped with the tool. Per-gate JJ counts for
/// AND/OR/XOR/mux cells are calibration values (see data/rql_cells.json);
/// JTL = 2 JJ and DREG = 12 JJ are fixed by the technology.
CellLibrary default_cell_library();

/// Parses a JSON cell-library document (schema in data/rql_cells.json).
/// Missing optional fields take the documented defaults.
CellLibrary load_cell_library(const std::string& json_text);
CellLibrary load_cell_library_file(const std::string& path);

std::string default_cell_library_json();

}  // namespace rqlsha
