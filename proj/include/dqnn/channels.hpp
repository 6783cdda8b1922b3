#pragma once

#include <vector>

#include "dqnn/linalg.hpp"
#include "dqnn/rng.hpp"

namespace dqnn {

// Choi matrices live on (output ⊗ reference) with the reference dimension
// equal to d_in; normalized to unit trace, so J = (E ⊗ id)(|Ω⟩⟨Ω|) with
// |Ω⟩ = Σ_i |ii⟩/√d_in.

// J from a Kraus list: Σ_e vec(K_e) vec(K_e)† / d_in (row-major vec)
Mat kraus_to_choi(const std::vector<Mat>& ks);

// Kraus operators from a Choi matrix; eigenvalues ≤ tol are dropped
std::vector<Mat> choi_to_kraus(const Mat& choi, int d_in, int d_out,
                               double tol = 1e-12);

// superoperator S acting on row-major vec(ρ): S[(o,o'),(i,i')] = d_in·J[(o,i),(o',i')]
Mat choi_to_superop(const Mat& choi, int d_in);

// Choi PSD (eigenvalues ≥ −tol) and tr_out(J)·d_in = I within tol
bool is_cptp(const Mat& choi, int d_in, double tol = 1e-9);

enum class ChannelRep { kraus, choi, isometry };

class Channel {
 public:
  static Channel from_choi(Mat choi, int d_in, int d_out);
  static Channel from_kraus(std::vector<Mat> ks);
  // v: (d_out·d_env) × d_in isometry, output factor leftmost
  static Channel from_isometry(Mat v, int d_out);

  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  ChannelRep rep() const { return rep_; }

  Mat choi() const;
  std::vector<Mat> kraus() const;
  Mat apply(const Mat& rho) const;  // via the stored representation

 private:
  Channel() = default;
  ChannelRep rep_ = ChannelRep::choi;
  int d_in_ = 0;
  int d_out_ = 0;
  Mat choi_;
  std::vector<Mat> kraus_;
  Mat isometry_;
};

inline Mat apply_channel(const Channel& ch, const Mat& rho) {
  return ch.apply(rho);
}

// E(ρ) = (tr(ρ)·I + α·ρᵀ)/(α + d), transpose in the computational basis
Channel werner_channel(double alpha, int d);

// Ginibre route: W = GG†, Y = tr_out(W), J = (I ⊗ Y^{−1/2}) W (I ⊗ Y^{−1/2})/d_in
Channel random_channel(int d_in, int d_out, Rng& rng);

// ρ = GG†/tr(GG†), square complex Ginibre G
Mat random_density_hs(int d, Rng& rng);

// normalized complex-Gaussian vector (Haar direction)
Vec haar_vector(int d, Rng& rng);

// |ψ⟩⟨ψ| with Haar-distributed |ψ⟩
Mat random_pure(int d, Rng& rng);

}  // namespace dqnn
