#include "dqnn/channels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace dqnn {

namespace {

Vec vec_rm(const Mat& k) {
  Vec v(k.size());
  Eigen::Index at = 0;
  for (Eigen::Index r = 0; r < k.rows(); ++r)
    for (Eigen::Index c = 0; c < k.cols(); ++c) v[at++] = k(r, c);
  return v;
}

}  // namespace

Mat kraus_to_choi(const std::vector<Mat>& ks) {
  if (ks.empty()) throw std::invalid_argument("kraus_to_choi: empty list");
  const Eigen::Index d_in = ks.front().cols();
  const Eigen::Index d_out = ks.front().rows();
  Mat j = Mat::Zero(d_out * d_in, d_out * d_in);
  for (const Mat& k : ks) {
    if (k.rows() != d_out || k.cols() != d_in)
      throw std::invalid_argument("kraus_to_choi: inconsistent shapes");
    const Vec v = vec_rm(k);
    j += v * v.adjoint();
  }
  return j / static_cast<double>(d_in);
}

std::vector<Mat> choi_to_kraus(const Mat& choi, int d_in, int d_out,
                               double tol) {
  if (choi.rows() != choi.cols() ||
      choi.rows() != static_cast<Eigen::Index>(d_in) * d_out)
    throw std::invalid_argument("choi_to_kraus: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(choi));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("choi_to_kraus: eigendecomposition failed");
  std::vector<Mat> ks;
  for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
    const double w = es.eigenvalues()[e];
    if (w <= tol) continue;
    const double scale = std::sqrt(w * d_in);
    Mat k(d_out, d_in);
    for (int o = 0; o < d_out; ++o)
      for (int i = 0; i < d_in; ++i)
        k(o, i) = scale * es.eigenvectors()(static_cast<Eigen::Index>(o) * d_in + i, e);
    ks.push_back(std::move(k));
  }
  return ks;
}

Mat choi_to_superop(const Mat& choi, int d_in) {
  const int d_out = static_cast<int>(choi.rows()) / d_in;
  if (static_cast<Eigen::Index>(d_out) * d_in != choi.rows())
    throw std::invalid_argument("choi_to_superop: dimension mismatch");
  Mat s(static_cast<Eigen::Index>(d_out) * d_out,
        static_cast<Eigen::Index>(d_in) * d_in);
  for (int o = 0; o < d_out; ++o)
    for (int op = 0; op < d_out; ++op)
      for (int i = 0; i < d_in; ++i)
        for (int ip = 0; ip < d_in; ++ip)
          s(static_cast<Eigen::Index>(o) * d_out + op,
            static_cast<Eigen::Index>(i) * d_in + ip) =
              static_cast<double>(d_in) *
              choi(static_cast<Eigen::Index>(o) * d_in + i,
                   static_cast<Eigen::Index>(op) * d_in + ip);
  return s;
}

bool is_cptp(const Mat& choi, int d_in, double tol) {
  if (choi.rows() != choi.cols() || choi.rows() % d_in != 0) return false;
  const int d_out = static_cast<int>(choi.rows()) / d_in;
  if (max_abs(choi - choi.adjoint()) > tol) return false;
  const Eigen::VectorXd w = herm_eigenvalues(choi);
  if (w.minCoeff() < -tol) return false;
  const Mat marginal =
      static_cast<double>(d_in) * partial_trace(choi, {d_out, d_in}, {1});
  return max_abs(marginal - Mat::Identity(d_in, d_in)) <= tol;
}

Channel Channel::from_choi(Mat choi, int d_in, int d_out) {
  if (choi.rows() != choi.cols() ||
      choi.rows() != static_cast<Eigen::Index>(d_in) * d_out)
    throw std::invalid_argument("Channel: Choi dimension mismatch");
  Channel ch;
  ch.rep_ = ChannelRep::choi;
  ch.d_in_ = d_in;
  ch.d_out_ = d_out;
  ch.choi_ = std::move(choi);
  return ch;
}

Channel Channel::from_kraus(std::vector<Mat> ks) {
  if (ks.empty()) throw std::invalid_argument("Channel: empty Kraus list");
  Channel ch;
  ch.rep_ = ChannelRep::kraus;
  ch.d_in_ = static_cast<int>(ks.front().cols());
  ch.d_out_ = static_cast<int>(ks.front().rows());
  for (const Mat& k : ks)
    if (k.rows() != ch.d_out_ || k.cols() != ch.d_in_)
      throw std::invalid_argument("Channel: inconsistent Kraus shapes");
  ch.kraus_ = std::move(ks);
  return ch;
}

Channel Channel::from_isometry(Mat v, int d_out) {
  if (v.rows() % d_out != 0)
    throw std::invalid_argument("Channel: isometry rows not divisible by d_out");
  Channel ch;
  ch.rep_ = ChannelRep::isometry;
  ch.d_in_ = static_cast<int>(v.cols());
  ch.d_out_ = d_out;
  ch.isometry_ = std::move(v);
  return ch;
}

Mat Channel::choi() const {
  if (rep_ == ChannelRep::choi) return choi_;
  return kraus_to_choi(kraus());
}

std::vector<Mat> Channel::kraus() const {
  switch (rep_) {
    case ChannelRep::kraus:
      return kraus_;
    case ChannelRep::choi:
      return choi_to_kraus(choi_, d_in_, d_out_);
    case ChannelRep::isometry: {
      const int d_env = static_cast<int>(isometry_.rows()) / d_out_;
      std::vector<Mat> ks;
      ks.reserve(d_env);
      for (int e = 0; e < d_env; ++e) {
        Mat k(d_out_, d_in_);
        for (int o = 0; o < d_out_; ++o)
          k.row(o) = isometry_.row(static_cast<Eigen::Index>(o) * d_env + e);
        ks.push_back(std::move(k));
      }
      return ks;
    }
  }
  throw std::logic_error("Channel: bad representation tag");
}

Mat Channel::apply(const Mat& rho) const {
  if (rho.rows() != rho.cols() || rho.rows() != d_in_)
    throw std::invalid_argument("Channel: input dimension mismatch");
  switch (rep_) {
    case ChannelRep::kraus: {
      Mat out = Mat::Zero(d_out_, d_out_);
      for (const Mat& k : kraus_) out += k * rho * k.adjoint();
      return out;
    }
    case ChannelRep::choi: {
      const Mat op = kron(Mat::Identity(d_out_, d_out_), rho.transpose());
      return static_cast<double>(d_in_) *
             partial_trace(choi_ * op, {d_out_, d_in_}, {0});
    }
    case ChannelRep::isometry: {
      const int d_env = static_cast<int>(isometry_.rows()) / d_out_;
      const Mat big = isometry_ * rho * isometry_.adjoint();
      return partial_trace(big, {d_out_, d_env}, {0});
    }
  }
  throw std::logic_error("Channel: bad representation tag");
}

Channel werner_channel(double alpha, int d) {
  if (alpha < -1.0 || alpha > 1.0)
    throw std::invalid_argument("werner_channel: alpha outside [-1, 1]");
  if (d < 2) throw std::invalid_argument("werner_channel: d < 2");
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  Mat j = Mat::Identity(dd, dd);
  // J = (I⊗I + α·SWAP) / (d(d + α))
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      j(static_cast<Eigen::Index>(i) * d + k,
        static_cast<Eigen::Index>(k) * d + i) += alpha;
  j /= static_cast<double>(d) * (d + alpha);
  return Channel::from_choi(std::move(j), d, d);
}

Channel random_channel(int d_in, int d_out, Rng& rng) {
  if (d_in < 1 || d_out < 1)
    throw std::invalid_argument("random_channel: dims < 1");
  const int n = d_in * d_out;
  for (;;) {
    const Mat g = rng.ginibre(n, n);
    const Mat w = g * g.adjoint();
    const Mat y = partial_trace(w, {d_out, d_in}, {1});
    if (herm_eigenvalues(y).minCoeff() < 1e-12) continue;  // measure-zero
    const Mat fix = kron(Mat::Identity(d_out, d_out), herm_pow(y, -0.5));
    const Mat j = fix * w * fix.adjoint() / static_cast<double>(d_in);
    return Channel::from_choi(hermitize(j), d_in, d_out);
  }
}

Mat random_density_hs(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("random_density_hs: d < 1");
  const Mat g = rng.ginibre(d, d);
  const Mat w = g * g.adjoint();
  return w / w.trace().real();
}

Vec haar_vector(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("haar_vector: d < 1");
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal_complex();
  const double n = v.norm();
  if (n == 0.0) return haar_vector(d, rng);  // probability zero
  return v / n;
}

Mat random_pure(int d, Rng& rng) {
  const Vec v = haar_vector(d, rng);
  return v * v.adjoint();
}

}  // namespace dqnn
