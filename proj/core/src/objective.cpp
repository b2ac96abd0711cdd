#include "ogt/objective.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <limits>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ogt/eigen_jacobi.hpp"
#include "ogt/errors.hpp"
#include "ogt/rng.hpp"

namespace ogt {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

std::string to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::quadratic ? "quadratic" : "logistic_l2";
}

ObjectiveSuite ObjectiveSuite::quadratic(std::vector<Matrix> a, std::vector<Vector> b) {
  if (a.empty() || a.size() != b.size()) throw ShapeError("quadratic suite: need one (A_i, b_i) per agent");
  ObjectiveSuite s;
  s.kind_ = ObjectiveKind::quadratic;
  s.n_ = static_cast<int>(a.size());
  s.d_ = static_cast<int>(b.front().size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != s.d_ || a[i].cols() != s.d_ || b[i].size() != s.d_)
      throw ShapeError("quadratic suite: agent " + std::to_string(i) + " has inconsistent dimensions");
    if (!a[i].isApprox(a[i].transpose(), 0.0))
      throw InvalidObjectiveError("quadratic suite: A_" + std::to_string(i) + " is not symmetric");
    const Vector eig = symmetric_eigenvalues(a[i]);
    lo = std::min(lo, eig.minCoeff());
    hi = std::max(hi, eig.maxCoeff());
  }
  if (!(lo > 0.0))
    throw InvalidObjectiveError("quadratic suite: smallest eigenvalue " + std::to_string(lo) +
                                " is not positive (not strongly convex)");
  s.a_mean_ = Matrix::Zero(s.d_, s.d_);
  s.b_mean_ = Vector::Zero(s.d_);
  for (std::size_t i = 0; i < a.size(); ++i) {
    s.a_mean_ += a[i];
    s.b_mean_ += b[i];
  }
  s.a_mean_ /= s.n_;
  s.b_mean_ /= s.n_;
  s.a_ = std::move(a);
  s.b_ = std::move(b);
  s.smooth_ = {hi, lo};
  return s;
}

ObjectiveSuite ObjectiveSuite::logistic(Matrix features, Vector labels, double mu) {
  if (features.rows() == 0 || features.rows() != labels.size())
    throw ShapeError("logistic suite: need one (z_i, y_i) per agent");
  if (!(mu > 0.0)) throw InvalidObjectiveError("logistic suite: regularizer must be positive");
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    if (labels[i] != 1.0 && labels[i] != -1.0)
      throw InvalidObjectiveError("logistic suite: label " + std::to_string(labels[i]) + " is not +-1");
  ObjectiveSuite s;
  s.kind_ = ObjectiveKind::logistic_l2;
  s.n_ = static_cast<int>(features.rows());
  s.d_ = static_cast<int>(features.cols());
  s.z_ = std::move(features);
  s.y_ = std::move(labels);
  s.mu_reg_ = mu;
  s.smooth_ = {s.z_.rowwise().squaredNorm().maxCoeff() / 4.0 + mu, mu};
  return s;
}

void ObjectiveSuite::check_shape(const Matrix& x) const {
  if (x.rows() != n_ || x.cols() != d_)
    throw ShapeError("expected a " + std::to_string(n_) + "x" + std::to_string(d_) + " matrix, got " +
                     std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
}

double ObjectiveSuite::local_loss(int i, const Point& x) const {
  if (kind_ == ObjectiveKind::quadratic) {
    const Vector xv = x.transpose();
    return 0.5 * xv.dot(a_[i] * xv) - b_[i].dot(xv);
  }
  const double margin = y_[i] * z_.row(i).dot(x);
  return softplus(-margin) + 0.5 * mu_reg_ * x.squaredNorm();
}

Point ObjectiveSuite::local_grad(int i, const Point& x) const {
  if (kind_ == ObjectiveKind::quadratic) return (a_[i] * x.transpose() - b_[i]).transpose();
  const double margin = y_[i] * z_.row(i).dot(x);
  return -y_[i] * sigmoid(-margin) * z_.row(i) + mu_reg_ * x;
}

double ObjectiveSuite::loss(const Point& x) const {
  if (x.size() != d_) throw ShapeError("loss: point has wrong dimension");
  if (kind_ == ObjectiveKind::quadratic) {
    const Vector xv = x.transpose();
    return 0.5 * xv.dot(a_mean_ * xv) - b_mean_.dot(xv);
  }
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += local_loss(i, x);
  return s / n_;
}

Point ObjectiveSuite::grad(const Point& x) const {
  if (x.size() != d_) throw ShapeError("grad: point has wrong dimension");
  if (kind_ == ObjectiveKind::quadratic) return (a_mean_ * x.transpose() - b_mean_).transpose();
  Point g = Point::Zero(d_);
  for (int i = 0; i < n_; ++i) g += local_grad(i, x);
  return g / n_;
}

Matrix ObjectiveSuite::grad_all(const Matrix& x, GradientCounter& counter) const {
  check_shape(x);
  Matrix g(n_, d_);
  for (int i = 0; i < n_; ++i) g.row(i) = local_grad(i, x.row(i));
  counter.record(n_);
  return g;
}

Matrix ObjectiveSuite::grad_at_common(const Point& x, GradientCounter& counter) const {
  if (x.size() != d_) throw ShapeError("grad_at_common: point has wrong dimension");
  Matrix g(n_, d_);
  for (int i = 0; i < n_; ++i) g.row(i) = local_grad(i, x);
  counter.record(n_);
  return g;
}

double ObjectiveSuite::mean_global_loss(const Matrix& x) const {
  check_shape(x);
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += loss(x.row(i));
  return s / n_;
}

Smoothness smoothness_constants(const ObjectiveSuite& suite) { return suite.smoothness(); }

Point quadratic_minimizer(const ObjectiveSuite& suite) {
  if (suite.kind() != ObjectiveKind::quadratic) throw InvalidObjectiveError("quadratic_minimizer: not a quadratic suite");
  Matrix a_mean = Matrix::Zero(suite.d(), suite.d());
  Vector b_mean = Vector::Zero(suite.d());
  for (int i = 0; i < suite.n(); ++i) {
    a_mean += suite.quadratic_a()[i];
    b_mean += suite.quadratic_b()[i];
  }
  a_mean /= suite.n();
  b_mean /= suite.n();
  const Eigen::LDLT<Matrix> ldlt(a_mean);
  Vector x = ldlt.solve(b_mean);
  // A couple of refinement sweeps tighten the residual to round-off.
  for (int it = 0; it < 3; ++it) x += ldlt.solve(b_mean - a_mean * x);
  return x.transpose();
}

Minimizer reference_minimizer(const ObjectiveSuite& suite, const MinimizerOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("reference_minimizer: tol must be positive");
  Minimizer out;
  if (suite.kind() == ObjectiveKind::quadratic) {
    out.x = quadratic_minimizer(suite);
    out.grad_norm = suite.grad(out.x).norm();
    if (out.grad_norm > options.tol)
      throw NonConvergenceError("reference_minimizer: linear solve left gradient norm " +
                                std::to_string(out.grad_norm) + " > tol");
    return out;
  }

  const Smoothness sm = suite.smoothness();
  const double step = 1.0 / sm.L;
  const double sk = std::sqrt(sm.kappa());
  const double momentum = (sk - 1.0) / (sk + 1.0);
  Point x = Point::Zero(suite.d());
  Point y = x;
  for (long k = 0; k < options.max_iters; ++k) {
    const Point gx = suite.grad(x);
    const double gn = gx.norm();
    if (gn <= options.tol) {
      out.x = x;
      out.grad_norm = gn;
      out.iterations = k;
      return out;
    }
    const Point y_next = x - step * gx;
    x = y_next + momentum * (y_next - y);
    y = y_next;
  }
  throw NonConvergenceError("reference_minimizer: iteration cap reached");
}

ObjectiveSuite parse_banknote(std::istream& in, const std::string& source, int n_agents, std::uint64_t seed,
                              double mu) {
  if (n_agents <= 0) throw DataError("banknote: n_agents must be positive");
  std::vector<std::array<double, 4>> feats;
  std::vector<double> labels;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    {
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
    }
    auto parse_num = [&](const std::string& cell, double& v) {
      const char* b = cell.c_str();
      char* e = nullptr;
      v = std::strtod(b, &e);
      if (e == b) return false;
      while (*e == ' ' || *e == '\t') ++e;
      return *e == '\0';
    };
    double probe = 0.0;
    if (first && !cells.empty() && !parse_num(cells[0], probe)) {
      first = false;  // header line
      continue;
    }
    first = false;
    if (cells.size() != 5) throw ParseError(source, line_no, "expected 5 comma-separated columns");
    std::array<double, 4> row{};
    for (int j = 0; j < 4; ++j)
      if (!parse_num(cells[j], row[j])) throw ParseError(source, line_no, "non-numeric feature '" + cells[j] + "'");
    double label = 0.0;
    if (!parse_num(cells[4], label) || (label != 0.0 && label != 1.0))
      throw ParseError(source, line_no, "label must be 0 or 1, got '" + cells[4] + "'");
    feats.push_back(row);
    labels.push_back(label == 1.0 ? 1.0 : -1.0);
  }
  if (static_cast<int>(feats.size()) < n_agents)
    throw DataError("banknote: " + source + " has " + std::to_string(feats.size()) + " rows, need " +
                    std::to_string(n_agents));

  // Partial Fisher-Yates: the first n_agents slots become a uniform sample
  // without replacement.
  std::vector<std::size_t> idx(feats.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Xoshiro256 gen(seed);
  for (int i = 0; i < n_agents; ++i) {
    const std::size_t remaining = idx.size() - static_cast<std::size_t>(i);
    const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(gen.uniform() * static_cast<double>(remaining));
    std::swap(idx[i], idx[std::min(j, idx.size() - 1)]);
  }
  Matrix z(n_agents, 4);
  Vector y(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    for (int j = 0; j < 4; ++j) z(i, j) = feats[idx[i]][j];
    y[i] = labels[idx[i]];
  }
  return ObjectiveSuite::logistic(std::move(z), std::move(y), mu);
}

ObjectiveSuite load_banknote(const std::string& path, int n_agents, std::uint64_t seed, double mu) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open banknote file '" + path + "'");
  return parse_banknote(in, path, n_agents, seed, mu);
}

ObjectiveSuite synth_quadratic(int n, int d, double kappa, std::uint64_t seed) {
  if (n <= 0 || d <= 0) throw DomainError("synth_quadratic: n and d must be positive");
  if (!(kappa >= 1.0)) throw DomainError("synth_quadratic: kappa must be >= 1");
  if (kappa > 1.0 && n * d < 2) throw DomainError("synth_quadratic: need n*d >= 2 to realize kappa > 1");
  const double mu = 1.0 / kappa;
  const double log_mu = std::log(mu);
  Xoshiro256 gen(seed);
  std::vector<Matrix> a(n, Matrix::Zero(d, d));
  std::vector<Vector> b(n, Vector::Zero(d));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) a[i](j, j) = std::exp(log_mu * gen.uniform());
    for (int j = 0; j < d; ++j) b[i][j] = standard_normal(gen);
  }
  // Pin the extremes so that L = 1 and mu = 1/kappa exactly.
  a.front()(0, 0) = mu;
  a.back()(d - 1, d - 1) = 1.0;
  if (kappa == 1.0)
    for (auto& ai : a) ai = Matrix::Identity(d, d);
  return ObjectiveSuite::quadratic(std::move(a), std::move(b));
}

ObjectiveSuite synth_logistic(int n, int d, double mu, std::uint64_t seed) {
  if (n <= 0 || d <= 0) throw DomainError("synth_logistic: n and d must be positive");
  // Per-coordinate spreads roughly those of the banknote features.
  static constexpr double kScales[] = {2.8, 5.9, 4.4, 2.1};
  Xoshiro256 gen(seed);
  Point w(d);
  for (int j = 0; j < d; ++j) w[j] = standard_normal(gen);
  Matrix z(n, d);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) z(i, j) = kScales[j % 4] * standard_normal(gen);
    double label = z.row(i).dot(w) >= 0.0 ? 1.0 : -1.0;
    if (gen.uniform() < 0.1) label = -label;
    y[i] = label;
  }
  return ObjectiveSuite::logistic(std::move(z), std::move(y), mu);
}

}  // namespace ogt
