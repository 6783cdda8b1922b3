#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dqnn/rng.hpp"

namespace dqnn {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Ordered subsystem dimensions, leftmost entry = first (leftmost) tensor factor.
using Dims = std::vector<int>;

inline Eigen::Index dims_product(const Dims& dims) {
  Eigen::Index p = 1;
  for (int d : dims) p *= d;
  return p;
}

double max_abs(const Mat& a);
bool is_hermitian(const Mat& a, double tol = 1e-10);

// (A + A†)/2 — suppresses Hermiticity drift before eigendecompositions
inline Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

Mat kron(const Mat& a, const Mat& b);

// tr over the complement of `keep`; kept factors stay in their relative order
Mat partial_trace(const Mat& a, const Dims& dims, const std::vector<int>& keep);

// Embed `op` acting on the subsystems listed in `targets` (in that order —
// targets[0] is op's leftmost factor), identity on the rest.
Mat embed_operator(const Mat& op, const Dims& dims, const std::vector<int>& targets);

// Reorder tensor factors: new factor k is old factor order[k].
Mat permute_factors(const Mat& a, const Dims& dims, const std::vector<int>& order);

// Hermitian matrix function via eigendecomposition: Q f(Λ) Q†.
// Eigenvalues with |λ| < clamp_tol are zeroed before f is applied.
Mat herm_fn(const Mat& a, const std::function<double(double)>& f,
            double clamp_tol = 1e-12);

// √A for PSD A: clamped-negative eigenvalues below −clamp_tol are a domain error
Mat herm_sqrt(const Mat& a, double clamp_tol = 1e-12);

// A^s with 0^s := 0 (s = 0 gives the support projector); domain error below −clamp_tol
Mat herm_pow(const Mat& a, double s, double clamp_tol = 1e-12);

// log A on the support of A: eigenvalues < −clamp_tol → domain error,
// |λ| < clamp_tol excluded from the log-domain (contribute 0)
Mat herm_log_support(const Mat& a, double clamp_tol = 1e-12);

// log max(A, floor·I) eigenvalue-wise — regularized logarithm for training
Mat herm_log_floored(const Mat& a, double floor);

// Moore-Penrose inverse of a Hermitian PSD matrix; tol < 0 → 1e-10 · max eigenvalue
Mat pinv(const Mat& a, double tol = -1.0);

// Σ singular values (general matrices)
double trace_norm(const Mat& a);

// Σ |eigenvalues| — trace norm restricted to Hermitian input (cheaper, bit-stable)
double trace_norm_herm(const Mat& a);

// ½‖ρ − σ‖₁ for Hermitian arguments
inline double trace_distance(const Mat& rho, const Mat& sigma) {
  return 0.5 * trace_norm_herm(rho - sigma);
}

// eigenvalues of a Hermitian matrix, ascending
Eigen::VectorXd herm_eigenvalues(const Mat& a);

}  // namespace dqnn
