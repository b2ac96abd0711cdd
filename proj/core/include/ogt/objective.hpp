#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ogt/matrix.hpp"

namespace ogt {

using Point = Eigen::RowVectorXd;

enum class ObjectiveKind { quadratic, logistic_l2 };

std::string to_string(ObjectiveKind kind);

/// Counts single-agent gradient evaluations. Monotone; only reset at the start
/// of a run.
struct GradientCounter {
  long total_evals = 0;
  long calls = 0;

  void record(long evals) {
    total_evals += evals;
    ++calls;
  }
  void reset() { *this = GradientCounter{}; }
};

struct Smoothness {
  double L = 0.0;
  double mu = 0.0;

  double kappa() const { return L / mu; }
};

/// The n local objectives f_i of a decentralized problem. Agent i owns f_i;
/// the global objective is their average f = (1/n) sum_i f_i.
///
/// quadratic:   f_i(x) = 1/2 x^T A_i x - b_i^T x, with A_i symmetric positive definite.
/// logistic_l2: f_i(x) = log(1 + exp(-y_i z_i^T x)) + mu/2 ||x||^2, y_i in {-1, +1}.
class ObjectiveSuite {
 public:
  /// Throws InvalidObjectiveError unless every A_i is symmetric with smallest
  /// eigenvalue > 0, and ShapeError on inconsistent sizes.
  static ObjectiveSuite quadratic(std::vector<Matrix> a, std::vector<Vector> b);

  /// `features` is n x d (row i is z_i). Throws InvalidObjectiveError if a
  /// label is not +-1 or mu <= 0.
  static ObjectiveSuite logistic(Matrix features, Vector labels, double mu);

  ObjectiveKind kind() const { return kind_; }
  int n() const { return n_; }
  int d() const { return d_; }

  /// Cached L and mu; see smoothness_constants().
  const Smoothness& smoothness() const { return smooth_; }

  double local_loss(int i, const Point& x) const;
  Point local_grad(int i, const Point& x) const;

  /// f(x) = (1/n) sum_i f_i(x).
  double loss(const Point& x) const;

  /// grad f(x), uncounted. Used by the centralized reference solver.
  Point grad(const Point& x) const;

  /// Row i is grad f_i(x_i); adds n evaluations to `counter`.
  Matrix grad_all(const Matrix& x, GradientCounter& counter) const;

  /// Every agent evaluated at the same point; adds n evaluations.
  Matrix grad_at_common(const Point& x, GradientCounter& counter) const;

  /// (1/n) sum_i f(x_i): the global objective averaged over the agents' rows.
  double mean_global_loss(const Matrix& x) const;

  const std::vector<Matrix>& quadratic_a() const { return a_; }
  const std::vector<Vector>& quadratic_b() const { return b_; }
  const Matrix& features() const { return z_; }
  const Vector& labels() const { return y_; }
  double regularizer() const { return mu_reg_; }

 private:
  ObjectiveSuite() = default;
  void check_shape(const Matrix& x) const;

  ObjectiveKind kind_ = ObjectiveKind::quadratic;
  int n_ = 0;
  int d_ = 0;
  std::vector<Matrix> a_;
  std::vector<Vector> b_;
  Matrix a_mean_;
  Vector b_mean_;
  Matrix z_;
  Vector y_;
  double mu_reg_ = 0.0;
  Smoothness smooth_;
};

/// quadratic: L = max_i lambda_max(A_i), mu = min_i lambda_min(A_i).
/// logistic_l2: L = max_i ||z_i||^2 / 4 + mu_reg, mu = mu_reg.
Smoothness smoothness_constants(const ObjectiveSuite& suite);

struct MinimizerOptions {
  double tol = 1e-13;
  long max_iters = 1'000'000;
};

struct Minimizer {
  Point x;
  double grad_norm = 0.0;
  long iterations = 0;
};

/// Centralized minimizer of f. Quadratics are solved directly (with iterative
/// refinement); logistic suites run Nesterov's method for strongly convex
/// functions with stepsize 1/L and momentum (sqrt(kappa)-1)/(sqrt(kappa)+1).
/// Throws NonConvergenceError if ||grad f|| <= tol is not reached.
Minimizer reference_minimizer(const ObjectiveSuite& suite, const MinimizerOptions& options = {});

/// Reads the banknote CSV (v1,v2,v3,v4,label with label in {0,1}), samples
/// `n_agents` rows without replacement and maps labels 0 -> -1, 1 -> +1.
ObjectiveSuite load_banknote(const std::string& path, int n_agents, std::uint64_t seed, double mu = 0.01);

/// Same, from an already opened stream. `source` names it in error messages.
ObjectiveSuite parse_banknote(std::istream& in, const std::string& source, int n_agents, std::uint64_t seed,
                              double mu = 0.01);

/// Diagonal quadratics with eigenvalues log-uniform in [1/kappa, 1] (so L = 1
/// and L/mu = kappa exactly) and standard normal b_i.
ObjectiveSuite synth_quadratic(int n, int d, double kappa, std::uint64_t seed);

/// Closed-form minimizer (mean A_i)^{-1} (mean b_i) of a quadratic suite.
Point quadratic_minimizer(const ObjectiveSuite& suite);

/// Logistic suite with one example per agent: features drawn as independent
/// normals with per-coordinate scales mimicking the banknote data, labels from
/// a planted linear classifier with 10% label noise.
ObjectiveSuite synth_logistic(int n, int d, double mu, std::uint64_t seed);

}  // namespace ogt
