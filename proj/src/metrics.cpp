#include "dqnn/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "dqnn/rng.hpp"

namespace dqnn {

namespace {

// fix the overall sign of a Hermitian matrix by its first nonzero entry so
// that A and −A canonicalize to the same matrix (bitwise); IEEE negation is
// exact, which makes the estimator exactly symmetric in its arguments
Mat sign_canonical(Mat a) {
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const Cx v = a(r, c);
      if (v == Cx(0.0, 0.0)) continue;
      const bool flip = v.real() < 0.0 || (v.real() == 0.0 && v.imag() < 0.0);
      return flip ? Mat(-a) : a;
    }
  return a;  // exactly zero
}

// (id ⊗ Δ)(|ψ⟩⟨ψ|) for |ψ⟩ on H_ref ⊗ H_in, Δ given as a superoperator on
// row-major vec: out[(r,o),(r',o')] = Σ_{i,i'} S[(o,o'),(i,i')] ψ(r,i) ψ*(r',i')
Mat apply_delta_one_sided(const Mat& superop, const Vec& psi, int d_in,
                          int d_out) {
  Mat p(d_in, d_in);
  for (int r = 0; r < d_in; ++r)
    for (int i = 0; i < d_in; ++i)
      p(r, i) = psi[static_cast<Eigen::Index>(r) * d_in + i];

  // Q[(o,o'),(r,r')] = S · V with V[(i,i'),(r,r')] = ψ(r,i)·ψ*(r',i')
  const Mat q = superop * kron(p.transpose(), p.adjoint());

  Mat out(static_cast<Eigen::Index>(d_in) * d_out,
          static_cast<Eigen::Index>(d_in) * d_out);
  for (int r = 0; r < d_in; ++r)
    for (int o = 0; o < d_out; ++o)
      for (int rp = 0; rp < d_in; ++rp)
        for (int op = 0; op < d_out; ++op)
          out(static_cast<Eigen::Index>(r) * d_out + o,
              static_cast<Eigen::Index>(rp) * d_out + op) =
              q(static_cast<Eigen::Index>(o) * d_out + op,
                static_cast<Eigen::Index>(r) * d_in + rp);
  return out;
}

}  // namespace

double diamond_distance(const Channel& e1, const Channel& e2,
                        const DiamondConfig& cfg) {
  if (e1.d_in() != e2.d_in() || e1.d_out() != e2.d_out())
    throw std::invalid_argument("diamond_distance: dimension mismatch");
  if (cfg.samples < 1)
    throw std::invalid_argument("diamond_distance: samples < 1");

  const int d_in = e1.d_in();
  const int d_out = e1.d_out();
  const Mat delta_choi = sign_canonical(e1.choi() - e2.choi());
  if (max_abs(delta_choi) == 0.0) return 0.0;
  const Mat superop = choi_to_superop(delta_choi, d_in);

  const int dd = d_in * d_in;
  auto value = [&](const Vec& psi) {
    return trace_norm_herm(apply_delta_one_sided(superop, psi, d_in, d_out));
  };

  double best = -1.0;
  Vec best_psi;
  for (int i = 0; i < cfg.samples; ++i) {
    Rng rng(derive_seed(cfg.seed, 1, static_cast<std::uint64_t>(i)));
    const Vec psi = haar_vector(dd, rng);
    const double v = value(psi);
    if (v > best) {
      best = v;
      best_psi = psi;
    }
  }

  Rng refine_rng(derive_seed(cfg.seed, 2));
  double scale = cfg.perturb_scale;
  for (int s = 0; s < cfg.refine_steps; ++s) {
    Vec cand = best_psi;
    for (Eigen::Index k = 0; k < cand.size(); ++k)
      cand[k] += scale * refine_rng.normal_complex();
    cand /= cand.norm();
    const double v = value(cand);
    if (v >= best) {
      best = v;
      best_psi = cand;
    }
    scale *= cfg.decay;
  }
  return best;
}

double choi_trace_distance(const Channel& e1, const Channel& e2) {
  if (e1.d_in() != e2.d_in() || e1.d_out() != e2.d_out())
    throw std::invalid_argument("choi_trace_distance: dimension mismatch");
  return trace_distance(e1.choi(), e2.choi());
}

std::size_t steepest_drop_index(const std::vector<double>& series) {
  if (series.size() < 2) return 0;
  std::size_t at = 1;
  double drop = series[0] - series[1];
  for (std::size_t i = 2; i < series.size(); ++i) {
    const double d = series[i - 1] - series[i];
    if (d > drop) {
      drop = d;
      at = i;
    }
  }
  return at;
}

}  // namespace dqnn
