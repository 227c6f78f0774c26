#pragma once

#include <Eigen/Eigenvalues>
#include <vector>

#include "claeo/basis.hpp"
#include "claeo/plant.hpp"

namespace claeo {

struct LearnerConfig {
  double k_c1 = 1.0;
  double k_c2 = 5.0;
  double k_a1 = 80.0;
  double k_a2 = 0.1;
  double gamma = 0.5;       // regressor normalization gain
  double beta = 100.0;      // forgetting factor
  double gamma_bar = 1000.0;  // spectral-norm cap on the gain matrix
  std::vector<Vec> grid;    // BE extrapolation points
  CostSpec cost;
  // Box specification the grid was built from, kept for config echo; empty
  // when the grid was given as an explicit point list.
  Vec grid_lo, grid_hi;
  std::vector<int> grid_counts;

  void validate() const {
    if (k_c1 <= 0 || k_a1 <= 0 || k_a2 <= 0 || gamma <= 0 || beta <= 0 ||
        gamma_bar <= 0)
      throw ConfigError("learner gains must be positive");
    if (k_c2 < 0) throw ConfigError("learner.k_c2 must be non-negative");
    if (k_c2 > 0 && grid.empty())
      throw ConfigError("extrapolation requested (k_c2 > 0) with empty grid");
  }
};

struct LearnerState {
  Vec theta_c;
  Vec theta_a;
  Mat gain;  // Gamma, r x r symmetric

  static LearnerState zero(int r, double gamma0) {
    LearnerState st;
    st.theta_c = Vec::Zero(r);
    st.theta_a = Vec::Zero(r);
    st.gain = gamma0 * Mat::Identity(r, r);
    return st;
  }
};

/// V-hat = Theta_c' psi(x).
inline double value_estimate(const Basis& basis, const Vec& theta_c, const Vec& x) {
  return theta_c.dot(basis.psi(x));
}

/// u-hat = -1/2 R^{-1} g(x) (psi_x(x) B)' Theta_a.
inline double policy_estimate(const Basis& basis, const ParametricPlant& plant,
                              const CostSpec& cost, const Vec& theta_a,
                              const Vec& x) {
  const Mat psi_x = basis.psi_grad(x);
  return -0.5 / cost.control_weight * plant.control_gain(x) *
         psi_x.col(plant.n - 1).dot(theta_a);
}

struct BellmanEval {
  double delta = 0.0;  // BE value
  Vec mu;              // critic regressor
  Mat G;               // psi_x B g R^-1 g B' psi_x'
  double u = 0.0;      // policy value used in the evaluation
};

/// Bellman error under the estimated model {What, Phi, g, f0}.  Serves both
/// the trajectory evaluation (x = xbar) and grid extrapolation (x = x0^i).
inline BellmanEval bellman_error(const Basis& basis, const ParametricPlant& plant,
                                 const Vec& What, const CostSpec& cost,
                                 const Vec& theta_c, const Vec& theta_a,
                                 const Vec& x) {
  const Mat psi_x = basis.psi_grad(x);
  const Vec d = psi_x.col(plant.n - 1);  // psi_x B
  const double g = plant.control_gain(x);
  const double R = cost.control_weight;

  BellmanEval e;
  e.u = -0.5 / R * g * d.dot(theta_a);
  // psi_x * (Ax + B(f0 + What'Phi + g u))
  Vec flow = Vec::Zero(plant.n);
  for (int i = 0; i + 1 < plant.n; ++i) flow(i) = x(i + 1);
  flow(plant.n - 1) = plant.f0(x) + What.dot(plant.regressor(x)) + g * e.u;
  e.mu = psi_x * flow;
  e.delta = theta_c.dot(e.mu) + cost.state_cost(x) + R * e.u * e.u;
  e.G = (g * g / R) * d * d.transpose();
  return e;
}

/// rho = 1 + gamma mu' mu.  Normalizing by the gain matrix instead would
/// cancel it out of the weight updates entirely once it saturates, stalling
/// the learning; the plain quadratic form keeps the gain matrix effective.
inline double normalizer(const LearnerConfig& cfg, const Vec& mu) {
  return 1.0 + cfg.gamma * mu.squaredNorm();
}

/// Grid quantities in matrix form: column i belongs to grid point x0^i.
struct GridData {
  Mat mu;     // r x N regressors
  Vec delta;  // N Bellman errors
  Vec rho;    // N normalizers
  Mat s;      // r x N columns s_i with G_i = s_i s_i'
};

/// Precomputes everything grid-side that does not depend on the evolving
/// estimates; evaluate() then costs a handful of small mat-vec products.
class GridWorkspace {
 public:
  GridWorkspace(const Basis& basis, const ParametricPlant& plant,
                const CostSpec& cost, const std::vector<Vec>& grid)
      : R_(cost.control_weight), N_(static_cast<int>(grid.size())) {
    const int r = basis.r;
    c1_.resize(r, N_);
    d_.resize(r, N_);
    phi_.resize(plant.m, N_);
    g_.resize(N_);
    q_.resize(N_);
    for (int i = 0; i < N_; ++i) {
      const Vec& x = grid[i];
      const Mat psi_x = basis.psi_grad(x);
      Vec flow0 = Vec::Zero(plant.n);
      for (int k = 0; k + 1 < plant.n; ++k) flow0(k) = x(k + 1);
      flow0(plant.n - 1) = plant.f0(x);
      c1_.col(i) = psi_x * flow0;
      d_.col(i) = psi_x.col(plant.n - 1);
      phi_.col(i) = plant.regressor(x);
      g_(i) = plant.control_gain(x);
      q_(i) = cost.state_cost(x);
    }
  }

  int size() const { return N_; }

  GridData evaluate(const Vec& What, const LearnerConfig& cfg,
                    const LearnerState& st) const {
    GridData out;
    const Vec u = (-0.5 / R_) * g_.cwiseProduct(d_.transpose() * st.theta_a);
    const Vec s = phi_.transpose() * What + g_.cwiseProduct(u);
    out.mu = c1_ + d_ * s.asDiagonal();
    out.delta = out.mu.transpose() * st.theta_c + q_ +
                R_ * u.cwiseProduct(u);
    out.rho = Vec::Ones(N_) +
              cfg.gamma * out.mu.colwise().squaredNorm().transpose();
    out.s = d_ * (g_ / std::sqrt(R_)).asDiagonal();
    return out;
  }

 private:
  double R_;
  int N_;
  Mat c1_;   // psi_x (A x + B f0) per point
  Mat d_;    // psi_x B per point
  Mat phi_;  // Phi per point
  Vec g_;    // g per point
  Vec q_;    // Q per point
};

/// Least-square critic law: trajectory term plus averaged extrapolated term.
inline Vec critic_derivative(const LearnerConfig& cfg, const LearnerState& st,
                             const Vec& mu_t, double delta_t,
                             const GridData& grid) {
  const int N = static_cast<int>(grid.delta.size());
  if (cfg.k_c2 > 0.0 && N == 0)
    throw ConfigError("critic_derivative: extrapolation with empty grid");
  const double rho_t = normalizer(cfg, mu_t);
  Vec d = -cfg.k_c1 * (st.gain * mu_t) * (delta_t / rho_t);
  if (cfg.k_c2 > 0.0) {
    const Vec sum = grid.mu * grid.delta.cwiseQuotient(grid.rho);
    d -= (cfg.k_c2 / N) * (st.gain * sum);
  }
  return d;
}

/// Forgetting-factor gain matrix law with spectral-norm gate.
inline Mat gain_matrix_derivative(const LearnerConfig& cfg, const LearnerState& st,
                                  const Vec& mu_t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(st.gain);
  if (es.eigenvalues().maxCoeff() > cfg.gamma_bar)
    return Mat::Zero(st.gain.rows(), st.gain.cols());
  const double rho_t = normalizer(cfg, mu_t);
  const Vec gm = st.gain * mu_t;
  return cfg.beta * st.gain - (cfg.k_c1 / (rho_t * rho_t)) * gm * gm.transpose();
}

/// Actor law: consensus with the critic, leak, and the Lyapunov-motivated
/// correction terms along trajectory and grid.
inline Vec actor_derivative(const LearnerConfig& cfg, const LearnerState& st,
                            const Vec& mu_t, const Mat& G_t,
                            const GridData& grid) {
  const int N = static_cast<int>(grid.delta.size());
  if (cfg.k_c2 > 0.0 && N == 0)
    throw ConfigError("actor_derivative: extrapolation with empty grid");
  const double rho_t = normalizer(cfg, mu_t);
  Vec d = -cfg.k_a1 * (st.theta_a - st.theta_c) - cfg.k_a2 * st.theta_a;
  d += (cfg.k_c1 / (4.0 * rho_t)) * (G_t.transpose() * st.theta_a) *
       mu_t.dot(st.theta_c);
  if (cfg.k_c2 > 0.0) {
    // sum_i G_i' theta_a (mu_i' theta_c) / rho_i with G_i = s_i s_i'
    const Vec sa = grid.s.transpose() * st.theta_a;
    const Vec mc = grid.mu.transpose() * st.theta_c;
    const Vec w = sa.cwiseProduct(mc).cwiseQuotient(grid.rho);
    d += (cfg.k_c2 / (4.0 * N)) * (grid.s * w);
  }
  return d;
}

/// (1/N) lambda_min( sum_i mu_i mu_i' / rho_i ): the monitored excitation
/// level of the extrapolation grid.
inline double assumption_a1_metric(const GridData& grid) {
  const int N = static_cast<int>(grid.delta.size());
  if (N == 0) throw ContractError("assumption_a1_metric: empty grid");
  const Mat gram = grid.mu * grid.rho.cwiseInverse().asDiagonal() *
                   grid.mu.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  return es.eigenvalues().minCoeff() / N;
}

/// Uniform grid over a box, outer dimension varying slowest.
inline std::vector<Vec> make_uniform_grid(const Vec& lo, const Vec& hi,
                                          const std::vector<int>& count) {
  const int n = static_cast<int>(lo.size());
  if (hi.size() != n || static_cast<int>(count.size()) != n)
    throw ConfigError("grid specification dimensions disagree");
  std::vector<Vec> pts;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int k = 0; k < n; ++k) {
      x(k) = count[k] == 1
                 ? lo(k)
                 : lo(k) + (hi(k) - lo(k)) * idx[k] / (count[k] - 1);
    }
    pts.push_back(x);
    int k = n - 1;
    while (k >= 0 && ++idx[k] == count[k]) idx[k--] = 0;
    if (k < 0) break;
  }
  return pts;
}

}  // namespace claeo
