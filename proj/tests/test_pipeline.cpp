#include <doctest.h>

#include <random>

#include "rqlsha/pipeline.hpp"

using namespace rqlsha;

namespace {
const CellLibrary& lib() {
  static CellLibrary l = default_cell_library();
  return l;
}

const EngineDesign& rca_design() {
  static EngineDesign d = generate_engine(lib(), EngineConfig{});
  return d;
}

std::vector<uint8_t> random_header(std::mt19937& rng) {
  std::vector<uint8_t> h(80);
  for (auto& b : h) b = uint8_t(rng());
  return h;
}
}  // namespace

TEST_CASE("pipeline digest equals the reference double SHA-256") {
  std::mt19937 rng(42);
  std::vector<uint8_t> header = random_header(rng);
  std::vector<uint32_t> nonces;
  for (int i = 0; i < 50; ++i) nonces.push_back(rng());
  auto out = run_pipeline(rca_design(), header, nonces);
  REQUIRE(out.size() == nonces.size());
  for (size_t i = 0; i < nonces.size(); ++i) {
    CHECK(out[i].nonce == nonces[i]);
    CHECK(out[i].digest == mining_double_sha(header, nonces[i]));
  }
}

TEST_CASE("throughput: one digest per cycle once the pipe is full") {
  std::mt19937 rng(7);
  std::vector<uint8_t> header = random_header(rng);
  Pipeline pipe(rca_design());
  uint64_t first_cycle = 0;
  int completed = 0;
  for (int c = 0; c < 200; ++c) {
    auto done = pipe.step(uint32_t(c), header);
    if (!done.empty()) {
      if (completed == 0) first_cycle = done[0].cycle;
      completed += int(done.size());
    }
  }
  // latency equals the stage count; afterwards every cycle completes one
  CHECK(first_cycle == 128);  // injected at cycle 0, done after exactly 128 cycles
  CHECK(completed == 200 - 128);
}

TEST_CASE("bypassed spare slot adds latency but not corruption") {
  EngineDesign ft = add_fault_tolerance(lib(), rca_design(), 1, false);
  std::mt19937 rng(9);
  std::vector<uint8_t> header = random_header(rng);
  std::set<int> bypass = {64};
  auto out = run_pipeline(ft, header, {123u, 456u}, nullptr, &bypass);
  REQUIRE(out.size() == 2);
  CHECK(out[0].digest == mining_double_sha(header, 123u));
  CHECK(out[1].digest == mining_double_sha(header, 456u));
  // first digest completes after stages + spare bypass latency cycles
  CHECK(out[0].cycle == 129);
}

TEST_CASE("a faulty active stage corrupts digests; bypassing it heals them") {
  EngineDesign ft = add_fault_tolerance(lib(), rca_design(), 1, false);
  std::mt19937 rng(11);
  std::vector<uint8_t> header = random_header(rng);
  FaultMap fm;
  fm.faulty_stages = {17};
  fm.seed = 99;
  std::set<int> park_spare = {ft.slots() - 1};
  auto bad = run_pipeline(ft, header, {77u}, &fm, &park_spare);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].digest != mining_double_sha(header, 77u));

  std::set<int> bypass = {17};
  auto good = run_pipeline(ft, header, {77u}, &fm, &bypass);
  REQUIRE(good.size() == 1);
  CHECK(good[0].digest == mining_double_sha(header, 77u));
}

TEST_CASE("mining finds the first qualifying nonce") {
  std::mt19937 rng(13);
  MiningJob job;
  job.header = random_header(rng);
  job.nonce_start = 0;
  job.nonce_end = 600;
  // max target: every nonce qualifies
  job.target.fill(0xff);
  auto hit = mine(job, rca_design());
  REQUIRE(hit.has_value());
  CHECK(hit->nonce == 0);

  // 8 leading zero bits: brute-force oracle finds the same winner
  job.target.fill(0);
  job.target[0] = 0x00;
  job.target[1] = 0xff;
  job.nonce_end = 2000;
  std::optional<uint32_t> expect;
  for (uint32_t n = job.nonce_start; n <= job.nonce_end && !expect; ++n) {
    Digest d = mining_double_sha(job.header, n);
    if (meets_target(d, job.target)) expect = n;
  }
  auto found = mine(job, rca_design());
  REQUIRE(found.has_value() == expect.has_value());
  if (expect) CHECK(found->nonce == *expect);
}

TEST_CASE("zero target never matches") {
  std::mt19937 rng(17);
  MiningJob job;
  job.header = random_header(rng);
  job.nonce_start = 0;
  job.nonce_end = 64;
  job.target.fill(0);
  CHECK_THROWS_AS(job.validate(), ValidationError);  // target must be > 0
}

TEST_CASE("job files round trip") {
  MiningJob job;
  job.header.assign(80, 0xab);
  job.nonce_start = 5;
  job.nonce_end = 99;
  job.target.fill(0x01);
  MiningJob back = load_job(job_to_json(job));
  CHECK(back.header == job.header);
  CHECK(back.nonce_start == 5);
  CHECK(back.nonce_end == 99);
  CHECK(back.target == job.target);
}

TEST_CASE("activity factor lands in the published band and converges") {
  // canonical protocol seed (see README); the band comes from inverting the
  // published power rows through the dynamic-power equation
  ActivityTrace t = record_activity(rca_design(), 256, 20180315);
  double alpha = derive_activity_factor(t.ones_per_cycle, t.total_bits);
  CHECK(alpha >= 0.437);
  CHECK(alpha <= 0.446);
  ActivityTrace t2 = record_activity(rca_design(), 512, 20180315);
  double alpha2 = derive_activity_factor(t2.ones_per_cycle, t2.total_bits);
  CHECK(std::fabs(alpha2 - alpha) / alpha < 0.02);
}

TEST_CASE("trace CSV is well formed") {
  ActivityTrace t = record_activity(rca_design(), 4, 2);
  std::string csv = trace_to_csv(t);
  CHECK(csv.rfind("cycle,ones_count,total_bits\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("midstate matches the reference first-block compression") {
  std::vector<uint8_t> header(80, 0x5c);
  Words8 mid = header_midstate(header);
  // oracle: hashing the header equals compressing block 2 on the midstate
  Digest full = sha256(header);
  StageSlot slot = inject_slot(header, 0x5c5c5c5cu);
  (void)mid;
  for (int r = 0; r < 64; ++r) sha_stage_transform(slot, r);
  // after round 63 the window holds digest-1 = sha256(header with nonce)
  std::vector<uint8_t> patched = header;
  patched[76] = patched[77] = patched[78] = patched[79] = 0x5c;
  Digest d1 = sha256(patched);
  for (int i = 0; i < 8; ++i) {
    uint32_t w = (uint32_t(d1[4 * i]) << 24) | (uint32_t(d1[4 * i + 1]) << 16) |
                 (uint32_t(d1[4 * i + 2]) << 8) | uint32_t(d1[4 * i + 3]);
    CHECK(slot.window[i] == w);
  }
  (void)full;
}
