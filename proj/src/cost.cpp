#include "dqnn/cost.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dqnn {

Direction cost_direction(CostKind kind) {
  switch (kind) {
    case CostKind::f1:
    case CostKind::f2:
    case CostKind::qcb:
      return Direction::maximize;
    default:
      return Direction::minimize;
  }
}

std::string cost_tag(CostKind kind) {
  switch (kind) {
    case CostKind::hs: return "hs";
    case CostKind::trace: return "trace";
    case CostKind::f1: return "f1";
    case CostKind::d1: return "d1";
    case CostKind::f2: return "f2";
    case CostKind::d2: return "d2";
    case CostKind::qcb: return "qcb";
    case CostKind::qre: return "qre";
  }
  throw std::logic_error("cost_tag: bad kind");
}

CostKind cost_from_tag(const std::string& tag) {
  for (CostKind k : all_cost_kinds())
    if (cost_tag(k) == tag) return k;
  throw std::invalid_argument("unknown cost tag: " + tag);
}

std::vector<CostKind> all_cost_kinds() {
  return {CostKind::hs,  CostKind::trace, CostKind::f1,  CostKind::d1,
          CostKind::f2,  CostKind::d2,    CostKind::qcb, CostKind::qre};
}

bool has_analytic_gradient(CostKind kind) {
  switch (kind) {
    case CostKind::qcb:
    case CostKind::qre:
      return false;
    default:
      return true;
  }
}

namespace {

double re_trace(const Mat& a) { return a.trace().real(); }

// (tr √(√σ ρ √σ))²  — Uhlmann fidelity
double fidelity_f1(const Mat& sigma, const Mat& rho) {
  const Mat rs = herm_sqrt(sigma);
  const double t = herm_sqrt(rs * rho * rs).trace().real();
  return t * t;
}

// tr(ρσ) / max(tr ρ², tr σ²)
double fidelity_f2(const Mat& sigma, const Mat& rho) {
  const double num = re_trace(rho * sigma);
  const double den = std::max(re_trace(rho * rho), re_trace(sigma * sigma));
  return num / den;
}

struct EigSys {
  Eigen::VectorXd w;
  Mat q;
};

EigSys eig_clamped(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(a));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  EigSys s{es.eigenvalues(), es.eigenvectors()};
  for (Eigen::Index i = 0; i < s.w.size(); ++i) s.w[i] = std::max(s.w[i], 0.0);
  return s;
}

// x^p with 0^p := 0 — the support convention, so s = 0 picks up only the
// support of the state
double pow_support(double x, double p) {
  if (x <= 0.0) return 0.0;
  return std::pow(x, p);
}

// min over s ∈ [0,1] of tr(ρ_tar^s ρ_out^{1−s}), via precomputed spectra and a
// coarse grid refined by golden-section search
double chernoff_bound(const Mat& rho_tar, const Mat& rho_out) {
  const EigSys a = eig_clamped(rho_tar);
  const EigSys b = eig_clamped(rho_out);
  const Eigen::Index n = a.w.size();

  Eigen::MatrixXd overlap(n, n);
  const Mat cross = a.q.adjoint() * b.q;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) overlap(i, j) = std::norm(cross(i, j));

  auto g = [&](double s) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double wa = pow_support(a.w[i], s);
      if (wa == 0.0) continue;
      for (Eigen::Index j = 0; j < n; ++j)
        acc += wa * pow_support(b.w[j], 1.0 - s) * overlap(i, j);
    }
    return acc;
  };

  constexpr int kGrid = 21;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double v = g(static_cast<double>(i) / (kGrid - 1));
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(kGrid - 1);
  double hi = std::min(kGrid - 1, best + 1) / static_cast<double>(kGrid - 1);

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1v = g(x1);
  double f2v = g(x2);
  while (hi - lo > 1e-8) {
    if (f1v < f2v) {
      hi = x2;
      x2 = x1;
      f2v = f1v;
      x1 = hi - gr * (hi - lo);
      f1v = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1v = f2v;
      x2 = lo + gr * (hi - lo);
      f2v = g(x2);
    }
  }
  return std::min({best_val, f1v, f2v});
}

// tr(ρ_tar (log ρ_tar − log ρ_out)); +inf when ρ_out lacks support where
// ρ_tar has weight (unless regularized by flooring ρ_out's spectrum)
double relative_entropy(const Mat& rho_tar, const Mat& rho_out,
                        const EvalOptions& opts) {
  const double own = re_trace(rho_tar * herm_log_support(rho_tar));
  if (opts.qre_regularize)
    return own - re_trace(rho_tar * herm_log_floored(rho_out, opts.qre_floor));

  constexpr double kTol = 1e-12;
  const EigSys out = eig_clamped(rho_out);
  Mat kernel = Mat::Zero(rho_out.rows(), rho_out.cols());
  Mat log_out = Mat::Zero(rho_out.rows(), rho_out.cols());
  for (Eigen::Index i = 0; i < out.w.size(); ++i) {
    const Mat proj = out.q.col(i) * out.q.col(i).adjoint();
    if (out.w[i] < kTol)
      kernel += proj;
    else
      log_out += std::log(out.w[i]) * proj;
  }
  if (re_trace(kernel * rho_tar * kernel) > kTol)
    return std::numeric_limits<double>::infinity();
  return own - re_trace(rho_tar * log_out);
}

}  // namespace

double evaluate(CostKind kind, const Mat& rho_tar, const Mat& rho_out,
                const EvalOptions& opts) {
  if (rho_tar.rows() != rho_tar.cols() || rho_out.rows() != rho_out.cols() ||
      rho_tar.rows() != rho_out.rows())
    throw std::invalid_argument("cost: dimension mismatch");
  switch (kind) {
    case CostKind::hs: {
      const Mat d = rho_out - rho_tar;
      return std::sqrt(std::max(0.0, re_trace(d * d)));
    }
    case CostKind::trace:
      return trace_distance(rho_tar, rho_out);
    case CostKind::f1:
      return fidelity_f1(rho_tar, rho_out);
    case CostKind::d1:
      return std::sqrt(std::max(
          0.0, 2.0 * (1.0 - std::sqrt(fidelity_f1(rho_tar, rho_out)))));
    case CostKind::f2:
      return fidelity_f2(rho_tar, rho_out);
    case CostKind::d2:
      return std::sqrt(
          std::max(0.0, 2.0 * (1.0 - fidelity_f2(rho_tar, rho_out))));
    case CostKind::qcb:
      return chernoff_bound(rho_tar, rho_out);
    case CostKind::qre:
      return relative_entropy(rho_tar, rho_out, opts);
  }
  throw std::logic_error("evaluate: bad kind");
}

namespace {

double analytic_term(CostKind kind, const Mat& rho_tar, const Mat& rho_out,
                     const Mat& drho) {
  switch (kind) {
    case CostKind::hs: {
      const Mat d = rho_out - rho_tar;
      const double c = std::sqrt(std::max(0.0, (d * d).trace().real()));
      if (c == 0.0) return 0.0;
      return (d * drho).trace().real() / c;
    }
    case CostKind::trace: {
      const Mat d = rho_out - rho_tar;
      const Mat sgn = herm_fn(d, [](double x) {
        return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
      });
      return 0.5 * (sgn * drho).trace().real();
    }
    case CostKind::f1:
    case CostKind::d1: {
      const Mat rs = herm_sqrt(rho_tar);
      const Mat msqrt = herm_sqrt(rs * rho_out * rs);
      const double root_f = msqrt.trace().real();
      // d tr√M = ½ tr(M^{-1/2} dM) with dM = √σ drho √σ
      const double dtr_sqrt = 0.5 * (pinv(msqrt) * rs * drho * rs).trace().real();
      if (kind == CostKind::f1) return 2.0 * root_f * dtr_sqrt;
      const double d1 = std::sqrt(std::max(0.0, 2.0 * (1.0 - root_f)));
      if (d1 == 0.0) return 0.0;
      return -dtr_sqrt / d1;
    }
    case CostKind::f2:
    case CostKind::d2: {
      const double p_out = (rho_out * rho_out).trace().real();
      const double p_tar = (rho_tar * rho_tar).trace().real();
      const double den = std::max(p_out, p_tar);
      const double num = (rho_out * rho_tar).trace().real();
      const double f2 = num / den;
      double dden = 0.0;
      if (p_out > p_tar)
        dden = 2.0 * (rho_out * drho).trace().real();
      else if (p_out == p_tar)
        dden = (rho_out * drho).trace().real();
      const double df2 = ((rho_tar * drho).trace().real() - f2 * dden) / den;
      if (kind == CostKind::f2) return df2;
      const double d2 = std::sqrt(std::max(0.0, 2.0 * (1.0 - f2)));
      if (d2 == 0.0) return 0.0;
      return -df2 / d2;
    }
    default:
      throw std::invalid_argument(
          "gradient_term: no analytic form for this cost");
  }
}

}  // namespace

std::optional<double> gradient_term(const GradRequest& req, const Mat& rho_tar,
                                    const Mat& rho_out, const Mat& drho) {
  if (trace_distance(rho_tar, rho_out) < 1e-12) return std::nullopt;
  if (req.mode == GradMode::analytic)
    return analytic_term(req.kind, rho_tar, rho_out, drho);
  const double e = req.epsilon;
  const double plus = evaluate(req.kind, rho_tar, rho_out + e * drho, req.opts);
  const double minus = evaluate(req.kind, rho_tar, rho_out - e * drho, req.opts);
  return (plus - minus) / (2.0 * e);
}

double total_cost(CostKind kind, const std::vector<Mat>& targets,
                  const std::vector<Mat>& outputs, const EvalOptions& opts) {
  if (targets.size() != outputs.size() || targets.empty())
    throw std::invalid_argument("total_cost: size mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < targets.size(); ++i)
    acc += evaluate(kind, targets[i], outputs[i], opts);
  return acc / static_cast<double>(targets.size());
}

}  // namespace dqnn
