#pragma once

#include <optional>
#include <set>

#include "rqlsha/engine.hpp"
#include "rqlsha/sha256.hpp"

namespace rqlsha {

/// Whole-stage faults sampled for one cooldown epoch plus optional
/// single-bit transients. Stage indices refer to physical slots.
struct FaultMap {
  std::set<int> faulty_stages;
  std::set<std::pair<int, int>> faulty_mux_units;  // (boundary, unit)
  struct Transient {
    uint64_t cycle;
    int stage;
    int word;  // index into the tracked state words of that stage
    int bit;
  };
  std::optional<Transient> transient;
  uint64_t seed = 0;
  bool empty() const {
    return faulty_stages.empty() && faulty_mux_units.empty() && !transient;
  }
};

struct MiningJob {
  std::vector<uint8_t> header;  // 80-byte block header template
  uint32_t nonce_start = 0;
  uint32_t nonce_end = 0;       // inclusive
  std::array<uint8_t, 32> target{};  // big-endian 256-bit threshold

  void validate() const;
};

MiningJob load_job(const std::string& json_text);
std::string job_to_json(const MiningJob& job);

/// Digest interpreted per the bitcoin convention (byte-reversed) compared
/// against the big-endian target.
bool meets_target(const Digest& d, const std::array<uint8_t, 32>& target);

/// Word-level state of one in-flight nonce.
struct StageSlot {
  bool valid = false;
  uint32_t nonce = 0;
  Words8 state{};   // working variables a..h
  Words16 window{}; // message schedule window
  Words8 mid{};     // carried midstate (first half)
};

struct CompletedDigest {
  uint32_t nonce;
  Digest digest;
  uint64_t cycle;
};

/// Cycle-level pipeline: slot i holds the nonce injected (cycle - i)
/// cycles ago; one digest completes per cycle once the pipe is full.
class Pipeline {
 public:
  Pipeline(const EngineDesign& design, const FaultMap* faults = nullptr);

  /// Sets the physical slot to skip (spare routing). Bypassed slots pass
  /// state through unchanged; the logical 128 rounds map to the remaining
  /// slots.
  void set_bypass(const std::set<int>& slots);

  /// Feeds one nonce (or a bubble) and advances one cycle.
  std::vector<CompletedDigest> step(std::optional<uint32_t> nonce,
                                    const std::vector<uint8_t>& header);

  uint64_t cycle() const { return cycle_; }
  int slot_count() const { return int(slots_.size()); }
  const StageSlot& slot(int i) const { return slots_[size_t(i)]; }

  /// Ones-count over the tracked architectural bits this cycle.
  long long ones_count() const;
  long long tracked_bits() const;

 private:
  const EngineDesign& design_;
  const FaultMap* faults_;
  std::vector<StageSlot> slots_;
  std::vector<int> logical_round_;  // -1 for bypassed slots
  std::set<int> bypass_;
  uint64_t cycle_ = 0;

  void relabel();
};

/// Midstate of the first header block (host-side precompute).
Words8 header_midstate(const std::vector<uint8_t>& header);

/// One stage transform (round logic + window shift + boundary feedforward).
void sha_stage_transform(StageSlot& slot, int logical_round);

/// Entry staging: schedule window, midstate, and nonce loaded for round 0.
StageSlot inject_slot(const std::vector<uint8_t>& header, uint32_t nonce);

/// Digest parked in the state words after the final round.
Digest slot_digest(const StageSlot& slot);

/// Reference oracle: double SHA-256 of the 80-byte header with the nonce
/// patched into bytes 76..79 (little-endian).
Digest mining_double_sha(const std::vector<uint8_t>& header, uint32_t nonce);

/// Runs nonces through the pipeline and returns their digests in feed order.
std::vector<CompletedDigest> run_pipeline(const EngineDesign& design,
                                          const std::vector<uint8_t>& header,
                                          const std::vector<uint32_t>& nonces,
                                          const FaultMap* faults = nullptr,
                                          const std::set<int>* bypass = nullptr);

/// First nonce in the job range whose double-SHA digest meets the target.
std::optional<CompletedDigest> mine(const MiningJob& job, const EngineDesign& design);

struct ActivityTrace {
  std::vector<long long> ones_per_cycle;
  long long total_bits = 0;
};

/// Steady-state activity over `cycles` cycles with a seeded random nonce
/// stream (tracing spans the full pipe).
ActivityTrace record_activity(const EngineDesign& design, int cycles, uint64_t seed);

std::string trace_to_csv(const ActivityTrace& t);

}  // namespace rqlsha
