#include "dqnn/isometry.hpp"

#include <cmath>
#include <stdexcept>

namespace dqnn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

ParamMatrix ParamMatrix::zero(int d_in, int d_out) {
  if (d_in < 1 || d_out < d_in)
    throw std::invalid_argument("ParamMatrix: need d_out >= d_in >= 1");
  ParamMatrix p;
  p.d_in = d_in;
  p.d_out = d_out;
  p.lambda = Eigen::MatrixXd::Zero(d_out, d_out);
  return p;
}

bool is_active_entry(int m, int n, int d_in) { return m < d_in || n < d_in; }

int active_param_count(int d_in, int d_out) {
  if (d_in < 1 || d_out < d_in)
    throw std::invalid_argument("active_param_count: need d_out >= d_in >= 1");
  return 2 * d_in * d_out - d_in * d_in;
}

std::vector<std::pair<int, int>> active_entries(int d_in, int d_out) {
  std::vector<std::pair<int, int>> out;
  out.reserve(active_param_count(d_in, d_out));
  for (int m = 0; m < d_out; ++m)
    for (int n = 0; n < d_out; ++n)
      if (is_active_entry(m, n, d_in)) out.emplace_back(m, n);
  return out;
}

void validate_params(const ParamMatrix& p) {
  if (p.d_in < 1 || p.d_out < p.d_in)
    throw std::invalid_argument("ParamMatrix: need d_out >= d_in >= 1");
  if (p.lambda.rows() != p.d_out || p.lambda.cols() != p.d_out)
    throw std::invalid_argument("ParamMatrix: lambda must be d_out x d_out");
  for (int m = 0; m < p.d_out; ++m)
    for (int n = 0; n < p.d_out; ++n)
      if (!is_active_entry(m, n, p.d_in) && p.lambda(m, n) != 0.0)
        throw std::invalid_argument("ParamMatrix: inactive lambda entry is nonzero");
}

Eigen::VectorXd flatten_active(const ParamMatrix& p) {
  const auto entries = active_entries(p.d_in, p.d_out);
  Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
  for (size_t k = 0; k < entries.size(); ++k)
    v[static_cast<Eigen::Index>(k)] = p.lambda(entries[k].first, entries[k].second);
  return v;
}

void unflatten_active(const Eigen::VectorXd& v, ParamMatrix& p) {
  const auto entries = active_entries(p.d_in, p.d_out);
  if (v.size() != static_cast<Eigen::Index>(entries.size()))
    throw std::invalid_argument("unflatten_active: size mismatch");
  for (size_t k = 0; k < entries.size(); ++k)
    p.lambda(entries[k].first, entries[k].second) = v[static_cast<Eigen::Index>(k)];
}

Mat rotation_generator(int m, int n, int D) {
  Mat y = Mat::Zero(D, D);
  y(m, n) = Cx(0.0, -1.0);
  y(n, m) = Cx(0.0, 1.0);
  return y;
}

Mat projector(int x, int D) {
  Mat p = Mat::Zero(D, D);
  p(x, x) = 1.0;
  return p;
}

Mat gate_factor(int m, int n, double lam_mn, double lam_nm, int D) {
  if (!(0 <= m && m < n && n < D))
    throw std::invalid_argument("gate_factor: need 0 <= m < n < D");
  const double c = std::cos(lam_mn);
  const double s = std::sin(lam_mn);
  const Cx e = std::exp(Cx(0.0, lam_nm));
  Mat g = Mat::Identity(D, D);
  g(m, m) = c;
  g(m, n) = s;
  g(n, m) = -e * s;
  g(n, n) = e * c;
  return g;
}

namespace {

// left-multiply rows {m, n} of a by the gate block — a ← Λ_{m,n} · a
void gate_rows_inplace(Mat& a, int m, int n, double lam_mn, double lam_nm) {
  const double c = std::cos(lam_mn);
  const double s = std::sin(lam_mn);
  const Cx e = std::exp(Cx(0.0, lam_nm));
  const Eigen::RowVectorXcd rm = a.row(m);
  const Eigen::RowVectorXcd rn = a.row(n);
  a.row(m) = c * rm + s * rn;
  a.row(n) = -e * s * rm + e * c * rn;
}

std::vector<std::pair<int, int>> gate_list(int d_in, int d_out) {
  std::vector<std::pair<int, int>> g;
  for (int m = 0; m < d_in; ++m)
    for (int n = m + 1; n < d_out; ++n) g.emplace_back(m, n);
  return g;
}

Mat phase_factor(const ParamMatrix& p) {
  Mat f = Mat::Identity(p.d_out, p.d_out);
  for (int l = 0; l < p.d_in; ++l) f(l, l) = std::exp(Cx(0.0, p.lambda(l, l)));
  return f;
}

}  // namespace

Mat perceptron_unitary(const ParamMatrix& p) {
  validate_params(p);
  Mat u = phase_factor(p);
  const auto gates = gate_list(p.d_in, p.d_out);
  // right-to-left accumulation leaves Λ_{0,1} leftmost
  for (auto it = gates.rbegin(); it != gates.rend(); ++it)
    gate_rows_inplace(u, it->first, it->second, p.lambda(it->first, it->second),
                      p.lambda(it->second, it->first));
  return u;
}

Mat build_isometry(const ParamMatrix& p) {
  return perceptron_unitary(p).leftCols(p.d_in);
}

Mat build_unitary(const ParamMatrix& p) {
  if (p.d_in != p.d_out)
    throw std::invalid_argument("build_unitary: requires d_in = d_out");
  return perceptron_unitary(p);
}

Mat tilde_generator(const Mat& u, int x, int y) {
  const int D = static_cast<int>(u.rows());
  if (x == y) return projector(x, D);
  if (x < y) return u.adjoint() * rotation_generator(x, y, D) * u;
  return u.adjoint() * projector(x, D) * u;
}

GateSuffixes gate_suffixes(const ParamMatrix& p) {
  GateSuffixes s;
  s.gates = gate_list(p.d_in, p.d_out);
  s.suffix.resize(s.gates.size() + 1);
  s.suffix[s.gates.size()] = phase_factor(p);
  for (int k = static_cast<int>(s.gates.size()) - 1; k >= 0; --k) {
    s.suffix[k] = s.suffix[k + 1];
    gate_rows_inplace(s.suffix[k], s.gates[k].first, s.gates[k].second,
                      p.lambda(s.gates[k].first, s.gates[k].second),
                      p.lambda(s.gates[k].second, s.gates[k].first));
  }
  return s;
}

Mat generator(const GateSuffixes& s, const ParamMatrix& p, int x, int y) {
  if (!is_active_entry(x, y, p.d_in))
    throw std::invalid_argument("generator: inactive parameter entry");
  const int D = p.d_out;
  if (x == y) return projector(x, D);
  const int gm = std::min(x, y);
  const int gn = std::max(x, y);
  size_t idx = 0;
  while (idx < s.gates.size() && s.gates[idx] != std::make_pair(gm, gn)) ++idx;
  if (idx == s.gates.size()) throw std::logic_error("generator: gate not found");
  if (x < y) return tilde_generator(s.suffix[idx + 1], x, y);
  return tilde_generator(s.suffix[idx], x, y);
}

ParamMatrix decompose_isometry(const Mat& v, int d_in) {
  const int D = static_cast<int>(v.rows());
  if (v.cols() != d_in || D < d_in)
    throw std::invalid_argument("decompose_isometry: bad shape");
  if (max_abs(v.adjoint() * v - Mat::Identity(d_in, d_in)) > 1e-8)
    throw std::invalid_argument("decompose_isometry: input is not an isometry");

  ParamMatrix p = ParamMatrix::zero(d_in, D);
  Mat m = v;
  // peel gates in product order: Λ_{m,n}† zeroes entry (n, m) of the remainder
  for (int mm = 0; mm < d_in; ++mm) {
    for (int nn = mm + 1; nn < D; ++nn) {
      const Cx a = m(mm, mm);
      const Cx b = m(nn, mm);
      double theta = 0.0, phi = 0.0;
      if (std::abs(b) > 1e-14) {
        theta = std::atan2(std::abs(b), std::abs(a));
        const double alpha = std::abs(a) > 1e-14 ? std::arg(a) : 0.0;
        phi = std::fmod(std::arg(b) - alpha + kTwoPi + 3.141592653589793238462643, kTwoPi);
        if (phi < 0.0) phi += kTwoPi;
      }
      p.lambda(mm, nn) = theta;
      p.lambda(nn, mm) = phi;
      // m ← Λ† m
      const double c = std::cos(theta), s = std::sin(theta);
      const Cx ec = std::exp(Cx(0.0, -phi));
      const Eigen::RowVectorXcd rm = m.row(mm);
      const Eigen::RowVectorXcd rn = m.row(nn);
      m.row(mm) = c * rm - s * ec * rn;
      m.row(nn) = s * rm + c * ec * rn;
    }
    double diag = std::arg(m(mm, mm));
    if (diag < 0.0) diag += kTwoPi;
    p.lambda(mm, mm) = diag;
  }
  return p;
}

ParamMatrix canonicalize(const ParamMatrix& p, bool fold_rotations) {
  validate_params(p);
  if (fold_rotations) return decompose_isometry(build_isometry(p), p.d_in);
  ParamMatrix q = p;
  for (auto [m, n] : active_entries(p.d_in, p.d_out)) {
    double x = std::fmod(p.lambda(m, n), kTwoPi);
    if (x < 0.0) x += kTwoPi;
    q.lambda(m, n) = x;
  }
  return q;
}

}  // namespace dqnn
