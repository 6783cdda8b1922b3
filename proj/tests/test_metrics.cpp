#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dqnn/metrics.hpp"
#include "dqnn/rng.hpp"

using namespace dqnn;

namespace {

Channel identity_channel(int d = 2) {
  return Channel::from_kraus({Mat::Identity(d, d)});
}

Channel unitary_channel(const Mat& u) { return Channel::from_kraus({u}); }

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat rz(double phi) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::exp(Cx(0.0, phi));
  return m;
}

Channel depolarizing_channel() {
  return Channel::from_choi(Mat::Identity(4, 4) / 4.0, 2, 2);
}

DiamondConfig cfg(int samples, int refine, std::uint64_t seed) {
  DiamondConfig c;
  c.samples = samples;
  c.refine_steps = refine;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("identical channels sit at exactly zero") {
  const Channel id = identity_channel();
  CHECK(diamond_distance(id, id, cfg(50, 20, 1)) == 0.0);
  // two different representations of the same map also cancel
  const Channel id_choi = Channel::from_choi(id.choi(), 2, 2);
  CHECK(diamond_distance(id, id_choi, cfg(50, 20, 1)) == 0.0);
  CHECK(choi_trace_distance(id, id_choi) < 1e-14);
}

TEST_CASE("the estimate is symmetric under argument exchange, bit for bit") {
  Rng rng(91);
  const Channel a = random_channel(2, 2, rng);
  const Channel b = random_channel(2, 2, rng);
  const DiamondConfig c = cfg(100, 30, 7);
  const double ab = diamond_distance(a, b, c);
  const double ba = diamond_distance(b, a, c);
  CHECK(ab == ba);
}

TEST_CASE("more samples never lower the seeded estimate") {
  Rng rng(92);
  const Channel a = random_channel(2, 2, rng);
  const Channel b = random_channel(2, 2, rng);
  DiamondConfig c = cfg(0, 0, 11);
  double prev = 0.0;
  for (int s : {10, 50, 200, 500}) {
    c.samples = s;
    const double v = diamond_distance(a, b, c);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("refinement only improves the bound") {
  Rng rng(93);
  const Channel a = random_channel(2, 2, rng);
  const Channel b = random_channel(2, 2, rng);
  const double raw = diamond_distance(a, b, cfg(100, 0, 13));
  const double refined = diamond_distance(a, b, cfg(100, 150, 13));
  CHECK(refined >= raw);
}

TEST_CASE("identity vs bit flip reaches the maximal distance two") {
  const double est = diamond_distance(identity_channel(),
                                      unitary_channel(pauli_x()),
                                      cfg(500, 500, 17));
  CHECK(est > 1.98);
  CHECK(est <= 2.0 + 1e-9);
}

TEST_CASE("identity vs depolarizing: choi distance 3/4, diamond near 3/2") {
  const Channel id = identity_channel();
  const Channel dep = depolarizing_channel();
  CHECK(choi_trace_distance(id, dep) == doctest::Approx(0.75).epsilon(1e-12));
  const double est = diamond_distance(id, dep, cfg(800, 300, 19));
  CHECK(est <= 1.5 + 1e-9);
  CHECK(est > 1.45);
  // the estimator upper-bounds twice the choi distance once refined
  CHECK(choi_trace_distance(id, dep) <= est / 2.0 + 1e-6);
}

TEST_CASE("qubit phase rotations match the closed-form diamond distance") {
  // distance between id and rz(phi) is 2 sin(phi/2)
  const double phi = 3.141592653589793 / 2.0;
  const double want = 2.0 * std::sin(phi / 2.0);
  const double est = diamond_distance(identity_channel(), unitary_channel(rz(phi)),
                                      cfg(2000, 200, 23));
  CHECK(std::abs(est - want) / want < 0.05);
  CHECK(est <= want + 1e-9);
}

TEST_CASE("choi distance lower-bounds half the refined diamond estimate") {
  Rng rng(94);
  for (int t = 0; t < 5; ++t) {
    const Channel a = random_channel(2, 2, rng);
    const Channel b = random_channel(2, 2, rng);
    const double est = diamond_distance(a, b, cfg(600, 300, 100 + t));
    CHECK(choi_trace_distance(a, b) <= est / 2.0 + 1e-6);
    CHECK(est <= 2.0 + 1e-9);
  }
}

TEST_CASE("estimates are deterministic in the seed") {
  Rng rng(95);
  const Channel a = random_channel(2, 2, rng);
  const Channel b = random_channel(2, 2, rng);
  const double v1 = diamond_distance(a, b, cfg(120, 40, 31));
  const double v2 = diamond_distance(a, b, cfg(120, 40, 31));
  const double v3 = diamond_distance(a, b, cfg(120, 40, 32));
  CHECK(v1 == v2);
  CHECK(v1 != v3);
}

TEST_CASE("dimension mismatches are rejected") {
  Rng rng(96);
  const Channel a = random_channel(2, 2, rng);
  const Channel b = random_channel(3, 3, rng);
  CHECK_THROWS(diamond_distance(a, b, cfg(10, 0, 1)));
  CHECK_THROWS(choi_trace_distance(a, b));
}

TEST_CASE("steepest_drop_index finds the largest consecutive fall") {
  CHECK(steepest_drop_index({}) == 0);
  CHECK(steepest_drop_index({1.0}) == 0);
  CHECK(steepest_drop_index({1.0, 0.9, 0.2, 0.15}) == 2);
  CHECK(steepest_drop_index({5.0, 4.0, 3.9, 1.0, 0.9}) == 3);
  // rising series: the least-negative drop wins, ties go to the earliest
  CHECK(steepest_drop_index({1.0, 2.0, 3.0}) == 1);
}
