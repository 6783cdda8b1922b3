#pragma once

#include <utility>
#include <vector>

#include "dqnn/linalg.hpp"

namespace dqnn {

// Parameter matrix λ of one perceptron isometry V: C^{d_in} -> C^{d_out}.
// Layout (d_out × d_out, radians):
//   λ_{m,n}, m < n : rotation angle of the two-level gate Λ_{m,n}
//   λ_{n,m}, m < n : relative phase inside Λ_{m,n}
//   λ_{l,l}        : diagonal phase e^{iP_l λ_ll}, l < d_in
// Only entries with m < d_in or n < d_in affect V (the active mask);
// inactive entries are kept identically zero.
struct ParamMatrix {
  int d_in = 0;
  int d_out = 0;
  Eigen::MatrixXd lambda;  // d_out × d_out

  static ParamMatrix zero(int d_in, int d_out);
};

bool is_active_entry(int m, int n, int d_in);

// 2·d_in·d_out − d_in²
int active_param_count(int d_in, int d_out);

// active (m, n) pairs in row-major order — the canonical flattening used by
// gradients, optimizers, and serialization
std::vector<std::pair<int, int>> active_entries(int d_in, int d_out);

void validate_params(const ParamMatrix& p);

Eigen::VectorXd flatten_active(const ParamMatrix& p);
void unflatten_active(const Eigen::VectorXd& v, ParamMatrix& p);

// Y_{m,n} = -i|m⟩⟨n| + i|n⟩⟨m|  and the projector P_x = |x⟩⟨x|
Mat rotation_generator(int m, int n, int D);
Mat projector(int x, int D);

// Λ_{m,n} = e^{iP_n λ_{n,m}} · e^{iY_{m,n} λ_{m,n}}: identity outside the
// {m,n} block; block entries (c = cos λ_mn, s = sin λ_mn, e = e^{iλ_nm}):
//   (m,m) = c   (m,n) = s
//   (n,m) = -e·s   (n,n) = e·c
Mat gate_factor(int m, int n, double lam_mn, double lam_nm, int D);

// Full perceptron unitary
//   U = [∏_{m=0}^{d_in-1} ∏_{n=m+1}^{d_out-1} Λ_{m,n}] · ∏_{l<d_in} e^{iP_l λ_ll}
// with ∏ A_i = A₁·A₂·…·A_n (the (0,1) factor leftmost). Gates with m ≥ d_in
// act trivially on the embedded input block and are omitted.
Mat perceptron_unitary(const ParamMatrix& p);

// V = U · 1_{d_out × d_in} (first d_in columns of the perceptron unitary)
Mat build_isometry(const ParamMatrix& p);

// d_in = d_out case of the same product (all entries active)
Mat build_unitary(const ParamMatrix& p);

// Conjugated derivative generators. The literal branch form:
//   x < y → U† Y_{x,y} U;  x = y → P_x;  x > y → U† P_x U
// The caller chooses the conjugating matrix; see generator() for the choice
// that makes ∂U/∂λ_{x,y} = i·U·G hold.
Mat tilde_generator(const Mat& u, int x, int y);

// Gate-product suffixes of perceptron_unitary: suffix[k] = Λ_k · Λ_{k+1} · … · Φ
// where Λ_k is the k-th gate in lexicographic order and Φ the diagonal phase
// factor; suffix[n_gates] = Φ. Shared input of all of one perceptron's
// generators, so computed once.
struct GateSuffixes {
  std::vector<std::pair<int, int>> gates;  // lexicographic (m, n) list
  std::vector<Mat> suffix;                 // size gates.size() + 1
};
GateSuffixes gate_suffixes(const ParamMatrix& p);

// Right generator of the active parameter (x, y): ∂U/∂λ_{x,y} = i·U·G with
//   rotation (x < y):  G = S† Y_{x,y} S,  S the suffix *after* gate (x, y)
//   phase (x > y):     G = R† P_x R,      R the suffix *from* gate (y, x)
//   diagonal (x = y):  G = P_x
// (conjugating by the full U instead of the suffix does not reproduce the
// derivative — checked against finite differences in the tests).
Mat generator(const GateSuffixes& s, const ParamMatrix& p, int x, int y);

// Inverse of build_isometry by Givens-style elimination: returns parameters in
// the canonical ranges (rotations in [0, π/2], phases in [0, 2π)) with
// build_isometry(result) = V. V must satisfy V†V = I.
ParamMatrix decompose_isometry(const Mat& v, int d_in);

// fold_rotations = false: every active entry reduced mod 2π (exactly preserves
// both U and V — each parameter enters through sin/cos/e^{iλ} only).
// fold_rotations = true: re-derives the parameters from V via
// decompose_isometry, landing rotations in [0, π/2]; preserves V, not U's
// inactive directions.
ParamMatrix canonicalize(const ParamMatrix& p, bool fold_rotations = false);

}  // namespace dqnn
