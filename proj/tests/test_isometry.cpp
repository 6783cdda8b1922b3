#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "dqnn/isometry.hpp"
#include "dqnn/rng.hpp"

using namespace dqnn;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

ParamMatrix random_params(int d_in, int d_out, Rng& rng, double lo = -kPi,
                          double hi = kPi) {
  ParamMatrix p = ParamMatrix::zero(d_in, d_out);
  for (auto [m, n] : active_entries(d_in, d_out))
    p.lambda(m, n) = rng.uniform(lo, hi);
  return p;
}

const std::vector<std::pair<int, int>> kShapes = {
    {2, 2}, {2, 4}, {2, 8}, {4, 8}, {3, 9}};

}  // namespace

TEST_CASE("active mask covers exactly the rows and columns below d_in") {
  const int d_in = 2, d_out = 4;
  for (int m = 0; m < d_out; ++m)
    for (int n = 0; n < d_out; ++n)
      CHECK(is_active_entry(m, n, d_in) == (m < d_in || n < d_in));
}

TEST_CASE("active parameter count follows 2*d1*d2 - d1^2") {
  CHECK(active_param_count(2, 2) == 4);
  CHECK(active_param_count(2, 4) == 12);
  CHECK(active_param_count(2, 8) == 28);
  CHECK(active_param_count(4, 8) == 48);
  CHECK(active_param_count(3, 9) == 45);
  for (auto [d1, d2] : kShapes)
    CHECK(static_cast<int>(active_entries(d1, d2).size()) ==
          active_param_count(d1, d2));
}

TEST_CASE("a width-4 perceptron needs 112 parameters, not the 256 of a full unitary") {
  const int d_in = 4;
  const int d_out = 16;  // source qudit times one added width-4 neuron
  CHECK(d_out * d_out == 256);
  CHECK(active_param_count(d_in, d_out) == 112);
}

TEST_CASE("active_entries is row-major and flatten/unflatten round-trips") {
  const auto entries = active_entries(2, 4);
  for (size_t k = 1; k < entries.size(); ++k) {
    const auto [pm, pn] = entries[k - 1];
    const auto [m, n] = entries[k];
    CHECK(std::make_pair(pm, pn) < std::make_pair(m, n));
  }
  Rng rng(21);
  ParamMatrix p = random_params(2, 4, rng);
  const Eigen::VectorXd v = flatten_active(p);
  REQUIRE(v.size() == 12);
  ParamMatrix q = ParamMatrix::zero(2, 4);
  unflatten_active(v, q);
  CHECK((p.lambda - q.lambda).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd wrong(5);
  wrong.setZero();
  CHECK_THROWS(unflatten_active(wrong, q));
}

TEST_CASE("validate_params rejects nonzero inactive entries") {
  ParamMatrix p = ParamMatrix::zero(2, 4);
  validate_params(p);
  p.lambda(3, 2) = 0.1;  // both indices >= d_in
  CHECK_THROWS(validate_params(p));
}

TEST_CASE("gate_factor matches its 2x2 block closed form") {
  const double a = 0.7, ph = 1.3;
  const Mat g = gate_factor(0, 2, a, ph, 3);
  const double c = std::cos(a), s = std::sin(a);
  const Cx e = std::exp(Cx(0.0, ph));
  CHECK(std::abs(g(0, 0) - Cx(c)) < 1e-15);
  CHECK(std::abs(g(0, 2) - Cx(s)) < 1e-15);
  CHECK(std::abs(g(2, 0) + e * s) < 1e-15);
  CHECK(std::abs(g(2, 2) - e * c) < 1e-15);
  CHECK(std::abs(g(1, 1) - Cx(1.0)) < 1e-15);
  CHECK(std::abs(g(0, 1)) == 0.0);
  // unitary for any angles
  CHECK(max_abs(g * g.adjoint() - Mat::Identity(3, 3)) < 1e-14);
}

TEST_CASE("zero parameters build the identity embedding") {
  const ParamMatrix p = ParamMatrix::zero(2, 4);
  CHECK(max_abs(perceptron_unitary(p) - Mat::Identity(4, 4)) == 0.0);
  const Mat v = build_isometry(p);
  REQUIRE(v.rows() == 4);
  REQUIRE(v.cols() == 2);
  CHECK(max_abs(v - Mat::Identity(4, 2)) == 0.0);
}

TEST_CASE("gate product runs lexicographically with the (0,1) factor leftmost") {
  // d_in = 2, d_out = 3: active gates (0,1), (0,2), (1,2) then the phases.
  ParamMatrix p = ParamMatrix::zero(2, 3);
  p.lambda(0, 1) = 0.4;
  p.lambda(1, 0) = 0.9;   // phase inside gate (0,1)
  p.lambda(0, 2) = -0.3;
  p.lambda(2, 0) = 0.2;   // phase inside gate (0,2)
  p.lambda(1, 2) = 1.1;
  p.lambda(2, 1) = -0.8;  // phase inside gate (1,2)
  p.lambda(0, 0) = 0.5;
  p.lambda(1, 1) = -0.6;
  Mat phi = Mat::Identity(3, 3);
  phi(0, 0) = std::exp(Cx(0.0, 0.5));
  phi(1, 1) = std::exp(Cx(0.0, -0.6));
  const Mat want = gate_factor(0, 1, 0.4, 0.9, 3) *
                   gate_factor(0, 2, -0.3, 0.2, 3) *
                   gate_factor(1, 2, 1.1, -0.8, 3) * phi;
  CHECK(max_abs(perceptron_unitary(p) - want) < 1e-14);
}

TEST_CASE("entries outside the active mask are rejected outright") {
  ParamMatrix p = ParamMatrix::zero(2, 4);
  p.lambda(0, 1) = 0.3;
  (void)perceptron_unitary(p);  // fine: only active entries set
  ParamMatrix q = p;
  q.lambda(2, 3) = 1.0;  // both indices >= d_in
  CHECK_THROWS(perceptron_unitary(q));
}

TEST_CASE("perceptron unitaries are unitary and isometries are isometric") {
  Rng rng(31);
  for (auto [d1, d2] : kShapes) {
    for (int t = 0; t < 20; ++t) {
      const ParamMatrix p = random_params(d1, d2, rng);
      const Mat u = perceptron_unitary(p);
      CHECK(max_abs(u * u.adjoint() - Mat::Identity(d2, d2)) < 1e-12);
      const Mat v = build_isometry(p);
      REQUIRE(v.rows() == d2);
      REQUIRE(v.cols() == d1);
      CHECK(max_abs(v.adjoint() * v - Mat::Identity(d1, d1)) < 1e-12);
      CHECK(max_abs(v - u.leftCols(d1)) == 0.0);
    }
  }
}

TEST_CASE("build_unitary is the square all-active case") {
  Rng rng(32);
  const ParamMatrix p = random_params(3, 3, rng);
  const Mat u = build_unitary(p);
  CHECK(max_abs(u * u.adjoint() - Mat::Identity(3, 3)) < 1e-12);
  CHECK(max_abs(u - perceptron_unitary(p)) == 0.0);
}

TEST_CASE("right generators reproduce finite-difference derivatives") {
  Rng rng(33);
  const double h = 1e-5;
  for (auto [d1, d2] : kShapes) {
    const ParamMatrix p = random_params(d1, d2, rng);
    const Mat u = perceptron_unitary(p);
    const GateSuffixes s = gate_suffixes(p);
    for (auto [x, y] : active_entries(d1, d2)) {
      ParamMatrix pp = p, pm = p;
      pp.lambda(x, y) += h;
      pm.lambda(x, y) -= h;
      const Mat fd = (perceptron_unitary(pp) - perceptron_unitary(pm)) / (2 * h);
      const Mat g = generator(s, p, x, y);
      CHECK(is_hermitian(g, 1e-10));
      CHECK(max_abs(fd - Cx(0.0, 1.0) * u * g) < 5e-9);
    }
  }
}

TEST_CASE("conjugating by the full unitary is not a valid generator recipe") {
  // the literal tilde form only happens to work for gates adjacent to the
  // phase block; a generic rotation entry exposes the difference
  Rng rng(34);
  const ParamMatrix p = random_params(2, 4, rng);
  const Mat u = perceptron_unitary(p);
  const double h = 1e-5;
  const int x = 1, y = 2;  // rotation of gate (1,2): mid-product
  ParamMatrix pp = p, pm = p;
  pp.lambda(x, y) += h;
  pm.lambda(x, y) -= h;
  const Mat fd = (perceptron_unitary(pp) - perceptron_unitary(pm)) / (2 * h);
  const Mat bad = tilde_generator(u, x, y);
  CHECK(max_abs(fd - Cx(0.0, 1.0) * u * bad) > 1e-3);
}

TEST_CASE("gate_suffixes ends with the diagonal phase factor") {
  Rng rng(35);
  const ParamMatrix p = random_params(2, 3, rng);
  const GateSuffixes s = gate_suffixes(p);
  REQUIRE(s.suffix.size() == s.gates.size() + 1);
  Mat phi = Mat::Identity(3, 3);
  for (int l = 0; l < 2; ++l) phi(l, l) = std::exp(Cx(0.0, p.lambda(l, l)));
  CHECK(max_abs(s.suffix.back() - phi) < 1e-14);
  CHECK(max_abs(s.suffix.front() - perceptron_unitary(p)) < 1e-13);
}

TEST_CASE("decompose_isometry inverts build_isometry") {
  Rng rng(36);
  for (auto [d1, d2] : kShapes) {
    const ParamMatrix p = random_params(d1, d2, rng);
    const Mat v = build_isometry(p);
    const ParamMatrix q = decompose_isometry(v, d1);
    CHECK(max_abs(build_isometry(q) - v) < 1e-10);
    validate_params(q);
    for (auto [m, n] : active_entries(d1, d2)) {
      const double val = q.lambda(m, n);
      if (m < n) {
        CHECK(val >= -1e-12);
        CHECK(val <= kPi / 2 + 1e-12);
      } else {
        CHECK(val >= -1e-12);
        CHECK(val <= 2 * kPi + 1e-12);
      }
    }
  }
}

TEST_CASE("decompose_isometry rejects non-isometric input") {
  Mat v = Mat::Identity(4, 2);
  v(0, 0) = 2.0;
  CHECK_THROWS(decompose_isometry(v, 2));
}

TEST_CASE("canonicalize mod 2pi preserves the unitary exactly") {
  Rng rng(37);
  ParamMatrix p = random_params(2, 4, rng);
  p.lambda(0, 1) += 6 * kPi;   // three full turns
  p.lambda(1, 0) -= 4 * kPi;
  const Mat u = perceptron_unitary(p);
  const ParamMatrix c = canonicalize(p, false);
  for (auto [m, n] : active_entries(2, 4)) {
    CHECK(c.lambda(m, n) >= 0.0);
    CHECK(c.lambda(m, n) < 2 * kPi);
  }
  CHECK(max_abs(perceptron_unitary(c) - u) < 1e-12);
}

TEST_CASE("canonicalize with folding preserves the isometry") {
  Rng rng(38);
  const ParamMatrix p = random_params(2, 4, rng, -3 * kPi, 3 * kPi);
  const Mat v = build_isometry(p);
  const ParamMatrix c = canonicalize(p, true);
  CHECK(max_abs(build_isometry(c) - v) < 1e-10);
  for (auto [m, n] : active_entries(2, 4)) {
    if (m < n) CHECK(c.lambda(m, n) <= kPi / 2 + 1e-12);
  }
}
