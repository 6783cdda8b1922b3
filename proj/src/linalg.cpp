#include "dqnn/linalg.hpp"

#include <stdexcept>

namespace dqnn {

double max_abs(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

// digit decomposition of a composite index, leftmost factor = most significant
void to_digits(Eigen::Index idx, const Dims& dims, std::vector<int>& digits) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(idx % dims[k]);
    idx /= dims[k];
  }
}

Eigen::Index from_digits(const std::vector<int>& digits, const Dims& dims) {
  Eigen::Index idx = 0;
  for (size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

}  // namespace

Mat partial_trace(const Mat& a, const Dims& dims, const std::vector<int>& keep) {
  const Eigen::Index D = dims_product(dims);
  if (a.rows() != a.cols() || a.rows() != D)
    throw std::invalid_argument("partial_trace: dims do not match matrix");
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw std::invalid_argument("partial_trace: keep index out of range");
    kept[k] = true;
  }
  std::vector<int> keep_sorted, traced;
  for (size_t k = 0; k < dims.size(); ++k)
    (kept[k] ? keep_sorted : traced).push_back(static_cast<int>(k));

  Dims kd, td;
  for (int k : keep_sorted) kd.push_back(dims[k]);
  for (int t : traced) td.push_back(dims[t]);
  const Eigen::Index dk = dims_product(kd);
  const Eigen::Index dt = dims_product(td);

  Mat out = Mat::Zero(dk, dk);
  std::vector<int> row(dims.size()), col(dims.size());
  std::vector<int> kr(kd.size()), kc(kd.size()), tr(td.size());
  for (Eigen::Index i = 0; i < dk; ++i) {
    to_digits(i, kd, kr);
    for (Eigen::Index j = 0; j < dk; ++j) {
      to_digits(j, kd, kc);
      Cx acc(0.0, 0.0);
      for (Eigen::Index t = 0; t < dt; ++t) {
        to_digits(t, td, tr);
        for (size_t k = 0; k < kd.size(); ++k) {
          row[keep_sorted[k]] = kr[k];
          col[keep_sorted[k]] = kc[k];
        }
        for (size_t k = 0; k < td.size(); ++k) {
          row[traced[k]] = tr[k];
          col[traced[k]] = tr[k];
        }
        acc += a(from_digits(row, dims), from_digits(col, dims));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Mat embed_operator(const Mat& op, const Dims& dims, const std::vector<int>& targets) {
  const Eigen::Index D = dims_product(dims);
  Dims tdims;
  for (int t : targets) {
    if (t < 0 || t >= static_cast<int>(dims.size()))
      throw std::invalid_argument("embed_operator: target out of range");
    tdims.push_back(dims[t]);
  }
  const Eigen::Index T = dims_product(tdims);
  if (op.rows() != T || op.cols() != T)
    throw std::invalid_argument("embed_operator: op does not match target dims");

  Mat out = Mat::Zero(D, D);
  std::vector<int> digits(dims.size()), tdig(targets.size());
  for (Eigen::Index i = 0; i < D; ++i) {
    to_digits(i, dims, digits);
    for (size_t k = 0; k < targets.size(); ++k) tdig[k] = digits[targets[k]];
    const Eigen::Index r = from_digits(tdig, tdims);
    for (Eigen::Index c = 0; c < T; ++c) {
      to_digits(c, tdims, tdig);
      std::vector<int> cdig = digits;
      for (size_t k = 0; k < targets.size(); ++k) cdig[targets[k]] = tdig[k];
      out(i, from_digits(cdig, dims)) = op(r, c);
    }
  }
  return out;
}

Mat permute_factors(const Mat& a, const Dims& dims, const std::vector<int>& order) {
  const Eigen::Index D = dims_product(dims);
  if (a.rows() != D || a.cols() != D)
    throw std::invalid_argument("permute_factors: dims do not match matrix");
  if (order.size() != dims.size())
    throw std::invalid_argument("permute_factors: order size mismatch");
  Dims ndims(dims.size());
  for (size_t k = 0; k < order.size(); ++k) ndims[k] = dims[order[k]];

  std::vector<Eigen::Index> map(D);
  std::vector<int> digits(dims.size()), ndigits(dims.size());
  for (Eigen::Index i = 0; i < D; ++i) {
    to_digits(i, dims, digits);
    for (size_t k = 0; k < order.size(); ++k) ndigits[k] = digits[order[k]];
    map[i] = from_digits(ndigits, ndims);
  }
  Mat out(D, D);
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < D; ++j) out(map[i], map[j]) = a(i, j);
  return out;
}

namespace {

struct HermEig {
  Eigen::VectorXd w;
  Mat q;
};

HermEig eig(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(a));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat rebuild(const HermEig& e, const Eigen::VectorXd& fw) {
  return e.q * fw.asDiagonal() * e.q.adjoint();
}

}  // namespace

Mat herm_fn(const Mat& a, const std::function<double(double)>& f, double clamp_tol) {
  HermEig e = eig(a);
  Eigen::VectorXd fw(e.w.size());
  for (Eigen::Index i = 0; i < e.w.size(); ++i) {
    const double w = std::abs(e.w[i]) < clamp_tol ? 0.0 : e.w[i];
    fw[i] = f(w);
  }
  return rebuild(e, fw);
}

Mat herm_sqrt(const Mat& a, double clamp_tol) {
  HermEig e = eig(a);
  Eigen::VectorXd fw(e.w.size());
  for (Eigen::Index i = 0; i < e.w.size(); ++i) {
    if (e.w[i] < -clamp_tol)
      throw std::domain_error("herm_sqrt: negative eigenvalue");
    fw[i] = std::abs(e.w[i]) < clamp_tol ? 0.0 : std::sqrt(e.w[i]);
  }
  return rebuild(e, fw);
}

Mat herm_pow(const Mat& a, double s, double clamp_tol) {
  HermEig e = eig(a);
  Eigen::VectorXd fw(e.w.size());
  for (Eigen::Index i = 0; i < e.w.size(); ++i) {
    if (e.w[i] < -clamp_tol)
      throw std::domain_error("herm_pow: negative eigenvalue");
    // 0^s := 0, including s = 0 (support projector semantics)
    fw[i] = std::abs(e.w[i]) < clamp_tol ? 0.0 : std::pow(e.w[i], s);
  }
  return rebuild(e, fw);
}

Mat herm_log_support(const Mat& a, double clamp_tol) {
  HermEig e = eig(a);
  Eigen::VectorXd fw(e.w.size());
  for (Eigen::Index i = 0; i < e.w.size(); ++i) {
    if (e.w[i] < -clamp_tol)
      throw std::domain_error("herm_log_support: negative eigenvalue");
    fw[i] = std::abs(e.w[i]) < clamp_tol ? 0.0 : std::log(e.w[i]);
  }
  return rebuild(e, fw);
}

Mat herm_log_floored(const Mat& a, double floor) {
  HermEig e = eig(a);
  Eigen::VectorXd fw(e.w.size());
  for (Eigen::Index i = 0; i < e.w.size(); ++i)
    fw[i] = std::log(std::max(e.w[i], floor));
  return rebuild(e, fw);
}

Mat pinv(const Mat& a, double tol) {
  HermEig e = eig(a);
  const double mx = e.w.size() ? std::max(e.w.maxCoeff(), 0.0) : 0.0;
  const double cutoff = tol < 0.0 ? 1e-10 * mx : tol;
  Eigen::VectorXd fw(e.w.size());
  for (Eigen::Index i = 0; i < e.w.size(); ++i)
    fw[i] = e.w[i] > cutoff ? 1.0 / e.w[i] : 0.0;
  return rebuild(e, fw);
}

double trace_norm(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().sum();
}

double trace_norm_herm(const Mat& a) {
  return eig(a).w.cwiseAbs().sum();
}

Eigen::VectorXd herm_eigenvalues(const Mat& a) { return eig(a).w; }

}  // namespace dqnn
