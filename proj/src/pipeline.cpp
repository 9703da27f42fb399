#include "rqlsha/pipeline.hpp"

#include <bit>
#include <sstream>

#include <json.hpp>

#include "rqlsha/rng.hpp"

namespace rqlsha {

using nlohmann::json;

void MiningJob::validate() const {
  if (header.size() != 80) throw ValidationError("job: header must be 80 bytes");
  if (nonce_end < nonce_start) throw ValidationError("job: empty nonce range");
  bool nonzero = false;
  for (uint8_t b : target) nonzero |= b != 0;
  if (!nonzero) throw ValidationError("job: target must be > 0");
}

MiningJob load_job(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("job parse error: ") + e.what());
  }
  MiningJob job;
  job.header = from_hex(doc.at("header_hex").get<std::string>());
  job.nonce_start = doc.value("nonce_start", 0u);
  job.nonce_end = doc.value("nonce_end", 0xffffffffu);
  std::vector<uint8_t> t = from_hex(doc.at("target_hex").get<std::string>());
  if (t.size() != 32) throw ParseError("job: target must be 32 bytes of hex");
  std::copy(t.begin(), t.end(), job.target.begin());
  job.validate();
  return job;
}

std::string job_to_json(const MiningJob& job) {
  json doc;
  std::string hh;
  static const char* digits = "0123456789abcdef";
  for (uint8_t b : job.header) {
    hh.push_back(digits[b >> 4]);
    hh.push_back(digits[b & 0xf]);
  }
  doc["header_hex"] = hh;
  doc["nonce_start"] = job.nonce_start;
  doc["nonce_end"] = job.nonce_end;
  std::string th;
  for (uint8_t b : job.target) {
    th.push_back(digits[b >> 4]);
    th.push_back(digits[b & 0xf]);
  }
  doc["target_hex"] = th;
  return doc.dump(2);
}

bool meets_target(const Digest& d, const std::array<uint8_t, 32>& target) {
  // Bitcoin hashes compare as little-endian 256-bit integers; reversing the
  // digest gives the big-endian form matching the stored target.
  for (int i = 0; i < 32; ++i) {
    uint8_t hv = d[size_t(31 - i)];
    if (hv != target[size_t(i)]) return hv < target[size_t(i)];
  }
  return false;  // equal is not below
}

Words8 header_midstate(const std::vector<uint8_t>& header) {
  if (header.size() != 80) throw ValidationError("header must be 80 bytes");
  Words16 blk;
  for (int i = 0; i < 16; ++i)
    blk[i] = (uint32_t(header[4 * i]) << 24) | (uint32_t(header[4 * i + 1]) << 16) |
             (uint32_t(header[4 * i + 2]) << 8) | uint32_t(header[4 * i + 3]);
  return sha::compress(sha::kIv, blk);
}

Digest mining_double_sha(const std::vector<uint8_t>& header, uint32_t nonce) {
  std::vector<uint8_t> h = header;
  h[76] = uint8_t(nonce);
  h[77] = uint8_t(nonce >> 8);
  h[78] = uint8_t(nonce >> 16);
  h[79] = uint8_t(nonce >> 24);
  return double_sha256(h);
}

namespace {

// Second header block: 16 header-tail bytes, nonce, then SHA padding for
// the 80-byte message.
Words16 second_block(const std::vector<uint8_t>& header, uint32_t nonce) {
  Words16 w{};
  for (int i = 0; i < 3; ++i)
    w[i] = (uint32_t(header[64 + 4 * i]) << 24) | (uint32_t(header[64 + 4 * i + 1]) << 16) |
           (uint32_t(header[64 + 4 * i + 2]) << 8) | uint32_t(header[64 + 4 * i + 3]);
  // nonce occupies bytes 76..79 little-endian; the block word is big-endian
  w[3] = (uint32_t(uint8_t(nonce)) << 24) | (uint32_t(uint8_t(nonce >> 8)) << 16) |
         (uint32_t(uint8_t(nonce >> 16)) << 8) | uint32_t(uint8_t(nonce >> 24));
  w[4] = 0x80000000u;
  w[15] = 640u;  // 80 bytes
  return w;
}

Words16 hash2_block(const Words8& digest1) {
  Words16 w{};
  for (int i = 0; i < 8; ++i) w[i] = digest1[i];
  w[8] = 0x80000000u;
  w[15] = 256u;  // 32 bytes
  return w;
}

}  // namespace

// One SHA round plus window shift; boundary rounds fold in the feedforward
// and relaunch for the second hash.
void sha_stage_transform(StageSlot& s, int logical_round) {
  int half = logical_round / 64;
  int r = logical_round % 64;
  uint32_t a = s.state[0], b = s.state[1], c = s.state[2], d = s.state[3];
  uint32_t e = s.state[4], f = s.state[5], g = s.state[6], h = s.state[7];
  uint32_t w0 = s.window[0];
  uint32_t t1 = h + sha::big_sigma1(e) + sha::ch(e, f, g) + sha::kRoundConstants[r] + w0;
  uint32_t t2 = sha::big_sigma0(a) + sha::maj(a, b, c);

  Words8 ns = {t1 + t2, a, b, c, d + t1, e, f, g};
  uint32_t w16 = 0;
  if (r < 48)
    w16 = sha::small_sigma1(s.window[14]) + s.window[9] + sha::small_sigma0(s.window[1]) +
          s.window[0];
  for (int i = 0; i < 15; ++i) s.window[i] = s.window[i + 1];
  s.window[15] = w16;

  if (r == 63) {
    Words8 base = half == 0 ? s.mid : sha::kIv;
    Words8 digest;
    for (int i = 0; i < 8; ++i) digest[i] = base[i] + ns[i];
    if (half == 0) {
      s.window = hash2_block(digest);
      s.state = sha::kIv;
      s.mid = {};  // hash-2 feedforward base is the IV constant
    } else {
      s.state = digest;  // final digest parked in the state words
    }
  } else {
    s.state = ns;
  }
}

StageSlot inject_slot(const std::vector<uint8_t>& header, uint32_t nonce) {
  StageSlot s;
  s.valid = true;
  s.nonce = nonce;
  s.window = second_block(header, nonce);
  s.state = header_midstate(header);
  s.mid = s.state;
  return s;
}

Digest slot_digest(const StageSlot& slot) {
  Digest d;
  for (int i = 0; i < 8; ++i) {
    d[4 * i] = uint8_t(slot.state[i] >> 24);
    d[4 * i + 1] = uint8_t(slot.state[i] >> 16);
    d[4 * i + 2] = uint8_t(slot.state[i] >> 8);
    d[4 * i + 3] = uint8_t(slot.state[i]);
  }
  return d;
}

Pipeline::Pipeline(const EngineDesign& design, const FaultMap* faults)
    : design_(design), faults_(faults) {
  slots_.resize(size_t(design.slots()));
  logical_round_.assign(slots_.size(), 0);
  relabel();
}

void Pipeline::set_bypass(const std::set<int>& slots) {
  bypass_ = slots;
  relabel();
}

void Pipeline::relabel() {
  int logical = 0;
  for (size_t i = 0; i < slots_.size(); ++i) {
    if (bypass_.count(int(i))) {
      logical_round_[i] = -1;
    } else {
      logical_round_[i] = logical < design_.config.stages ? logical : -1;
      ++logical;
    }
  }
}

std::vector<CompletedDigest> Pipeline::step(std::optional<uint32_t> nonce,
                                            const std::vector<uint8_t>& header) {
  std::vector<CompletedDigest> done;
  // shift from the back; each occupied slot applies its stage transform
  for (int i = int(slots_.size()) - 1; i >= 0; --i) {
    StageSlot cur = slots_[size_t(i)];
    if (cur.valid) {
      int lr = logical_round_[size_t(i)];
      if (lr >= 0) {
        sha_stage_transform(cur, lr);
        if (faults_ && faults_->faulty_stages.count(i)) {
          // whole-stage corruption for this cooldown epoch
          uint64_t m = mix64(faults_->seed, uint64_t(i), cycle_);
          for (int wi = 0; wi < 8; ++wi)
            cur.state[size_t(wi)] ^= uint32_t(mix64(m, uint64_t(wi), 0x5741) | 1u);
          for (int wi = 0; wi < 16; ++wi)
            cur.window[size_t(wi)] ^= uint32_t(mix64(m, uint64_t(wi), 0x57f2) | 1u);
        }
        if (faults_ && faults_->transient &&
            (faults_->transient->cycle == cycle_ ||
             faults_->transient->cycle == UINT64_MAX) &&
            faults_->transient->stage == i) {
          int word = faults_->transient->word;
          int bit = faults_->transient->bit;
          if (word < 8)
            cur.state[size_t(word)] ^= 1u << bit;
          else if (word < 24)
            cur.window[size_t(word - 8)] ^= 1u << bit;
          else
            cur.mid[size_t(word - 24)] ^= 1u << bit;
        }
        if (lr == design_.config.stages - 1) {
          if (cur.valid) done.push_back({cur.nonce, slot_digest(cur), cycle_});
          cur.valid = false;
        }
      }
      // bypassed slots pass state through unchanged (one cycle of latency)
    }
    if (i + 1 < int(slots_.size())) slots_[size_t(i + 1)] = cur;
  }
  // inject
  StageSlot fresh{};
  if (nonce) fresh = inject_slot(header, *nonce);
  slots_[0] = fresh;
  ++cycle_;
  return done;
}

long long Pipeline::ones_count() const {
  long long ones = 0;
  for (size_t i = 0; i < slots_.size(); ++i) {
    const StageSlot& s = slots_[i];
    if (!s.valid) continue;
    int lr = logical_round_[i];
    if (lr < 0) continue;
    for (uint32_t w : s.window) ones += std::popcount(w);
    for (uint32_t w : s.state) ones += std::popcount(w);
    if (lr < 64)
      for (uint32_t w : s.mid) ones += std::popcount(w);
    ones += std::popcount(sha::kRoundConstants[lr % 64]);
  }
  return ones;
}

long long Pipeline::tracked_bits() const {
  long long bits = 0;
  for (size_t i = 0; i < slots_.size(); ++i) {
    int lr = logical_round_[i];
    if (lr < 0) continue;
    bits += (16 + 8) * 32 + 32;       // window + state + tied round constant
    if (lr < 64) bits += 8 * 32;      // midstate rides the first half
  }
  return bits;
}

std::vector<CompletedDigest> run_pipeline(const EngineDesign& design,
                                          const std::vector<uint8_t>& header,
                                          const std::vector<uint32_t>& nonces,
                                          const FaultMap* faults,
                                          const std::set<int>* bypass) {
  Pipeline pipe(design, faults);
  if (bypass) pipe.set_bypass(*bypass);
  std::vector<CompletedDigest> all;
  size_t fed = 0;
  uint64_t idle = 0;
  while (all.size() < nonces.size() && idle < uint64_t(design.slots()) + 4) {
    std::optional<uint32_t> n;
    if (fed < nonces.size()) {
      n = nonces[fed++];
      idle = 0;
    } else {
      ++idle;
    }
    for (CompletedDigest& d : pipe.step(n, header)) all.push_back(d);
  }
  return all;
}

std::optional<CompletedDigest> mine(const MiningJob& job, const EngineDesign& design) {
  job.validate();
  Pipeline pipe(design);
  uint64_t next = job.nonce_start;
  uint64_t idle = 0;
  while (idle < uint64_t(design.slots()) + 4) {
    std::optional<uint32_t> n;
    if (next <= job.nonce_end) {
      n = uint32_t(next++);
      idle = 0;
    } else {
      ++idle;
    }
    for (CompletedDigest& d : pipe.step(n, job.header)) {
      if (meets_target(d.digest, job.target)) return d;
    }
  }
  return std::nullopt;
}

ActivityTrace record_activity(const EngineDesign& design, int cycles, uint64_t seed) {
  if (cycles < 1) throw DomainError("record_activity: need at least one cycle");
  std::vector<uint8_t> header(80);
  for (size_t i = 0; i < header.size(); ++i)
    header[i] = uint8_t(mix64(seed, 0x43ad, i));
  Pipeline pipe(design);
  ActivityTrace t;
  // warm the pipe, then trace steady state
  int warm = design.slots();
  for (int c = 0; c < warm + cycles; ++c) {
    uint32_t nonce = uint32_t(mix64(seed, 0x170c, uint64_t(c)));
    pipe.step(nonce, header);
    if (c >= warm) {
      if (t.total_bits == 0) t.total_bits = pipe.tracked_bits();
      t.ones_per_cycle.push_back(pipe.ones_count());
    }
  }
  return t;
}

std::string trace_to_csv(const ActivityTrace& t) {
  std::ostringstream os;
  os << "cycle,ones_count,total_bits\n";
  for (size_t i = 0; i < t.ones_per_cycle.size(); ++i)
    os << i << "," << t.ones_per_cycle[i] << "," << t.total_bits << "\n";
  return os.str();
}

}  // namespace rqlsha
