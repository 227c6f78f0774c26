#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <vector>

#include "claeo/types.hpp"

namespace claeo {

/// Recorded data pair store (Z, Lambda) for concurrent learning.  Columns
/// fill in order; once full, a candidate replaces the column whose
/// substitution maximizes the minimum singular value of Z', and only if that
/// maximum strictly beats the current value.  Ties go to the lowest index.
class HistoryStack {
 public:
  HistoryStack() = default;
  HistoryStack(int m, int p)
      : regressors_(Mat::Zero(m, p)), targets_(Vec::Zero(p)), fill_(0) {
    if (m <= 0 || p <= 0) throw ConfigError("HistoryStack: m and p must be positive");
  }

  int regressor_dim() const { return static_cast<int>(regressors_.rows()); }
  int capacity() const { return static_cast<int>(regressors_.cols()); }
  int fill_count() const { return fill_; }
  bool full() const { return fill_ == capacity(); }
  const Mat& regressors() const { return regressors_; }
  const Vec& targets() const { return targets_; }

  double min_singular_value() const {
    if (fill_ == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(regressors_.transpose());
    return svd.singularValues().minCoeff();
  }

  /// Sum of outer products of the stored regressors.
  Mat excitation_matrix() const {
    Mat psi = Mat::Zero(regressor_dim(), regressor_dim());
    for (int j = 0; j < fill_; ++j)
      psi += regressors_.col(j) * regressors_.col(j).transpose();
    return psi;
  }

  bool rank_condition_met(double tolerance = 1e-8) const {
    if (fill_ == 0) return false;
    Eigen::SelfAdjointEigenSolver<Mat> es(excitation_matrix());
    return es.eigenvalues().minCoeff() > tolerance;
  }

  /// Offers a candidate record.  Returns true when the stack changed.
  bool offer(const Vec& regressor, double target) {
    if (regressor.size() != regressor_dim())
      throw ContractError("HistoryStack::offer: regressor dimension mismatch");
    if (fill_ < capacity()) {
      regressors_.col(fill_) = regressor;
      targets_(fill_) = target;
      ++fill_;
      return true;
    }
    const double s_old = min_singular_value();
    double s_new = -1.0;
    int best = -1;
    Mat trial = regressors_;
    for (int j = 0; j < capacity(); ++j) {
      trial.col(j) = regressor;
      Eigen::JacobiSVD<Mat> svd(trial.transpose());
      const double s = svd.singularValues().minCoeff();
      if (s > s_new) {  // strict: lowest index wins ties
        s_new = s;
        best = j;
      }
      trial.col(j) = regressors_.col(j);
    }
    if (s_new > s_old) {
      regressors_.col(best) = regressor;
      targets_(best) = target;
      return true;
    }
    return false;
  }

  /// Keeps only the first `count` records (used for warm starts).
  void truncate(int count) {
    if (count < 0 || count > fill_) throw ContractError("HistoryStack::truncate: bad count");
    for (int j = count; j < fill_; ++j) {
      regressors_.col(j).setZero();
      targets_(j) = 0.0;
    }
    fill_ = count;
  }

 private:
  Mat regressors_;  // m x p, column j = Phi(xbar^j)
  Vec targets_;     // p, entry j = xbar^j_{n+1}
  int fill_ = 0;
};

/// Trapezoidal approximation of the excitation Gramian of a sampled signal
/// over [t0, t1], with linear interpolation at the window boundaries.
inline Mat windowed_excitation_gramian(const std::vector<double>& times,
                                       const std::vector<Vec>& samples,
                                       double t0, double t1) {
  if (times.size() != samples.size() || times.size() < 2)
    throw ContractError("windowed_excitation_gramian: need >= 2 samples");
  if (t0 < times.front() || t1 > times.back() || t0 >= t1)
    throw ContractError("windowed_excitation_gramian: window outside sample range");
  const int m = static_cast<int>(samples.front().size());
  auto value_at = [&](std::size_t i, double t) {
    const double w = (t - times[i]) / (times[i + 1] - times[i]);
    return Vec((1.0 - w) * samples[i] + w * samples[i + 1]);
  };
  Mat gram = Mat::Zero(m, m);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double a = std::max(times[i], t0);
    const double b = std::min(times[i + 1], t1);
    if (b <= a) continue;
    const Vec va = value_at(i, a);
    const Vec vb = value_at(i, b);
    gram += 0.5 * (b - a) *
            (va * va.transpose() + vb * vb.transpose());
  }
  return gram;
}

}  // namespace claeo
