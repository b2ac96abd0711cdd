#include "ogt/graph.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <fstream>

#include "ogt/eigen_jacobi.hpp"
#include "ogt/errors.hpp"

namespace ogt {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kPsdTol = 1e-12;
constexpr double kMinGap = 1e-14;
constexpr double kLcaBound = 7.0;
constexpr double kLcaRoundoff = 1e-9;

void check_edge(int n, const Edge& e) {
  if (e.first == e.second)
    throw InvalidGraphError("self loop on vertex " + std::to_string(e.first));
  if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n)
    throw InvalidGraphError("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                            ") out of range for n=" + std::to_string(n));
}

std::vector<int> degrees(int n, const EdgeSet& edges) {
  std::vector<int> deg(n, 0);
  for (const auto& [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

}  // namespace

Edge make_edge(int i, int j) { return i < j ? Edge{i, j} : Edge{j, i}; }

EdgeSet ring_edges(int n) {
  EdgeSet edges;
  for (int i = 0; i < n; ++i) edges.insert(make_edge(i, (i + 1) % n));
  return edges;
}

bool is_connected(int n, const EdgeSet& edges) {
  if (n <= 1) return true;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = n;
  for (const auto& [i, j] : edges) {
    const int a = find(i), b = find(j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

GossipMatrix build_ring(int n) {
  if (n < 3) throw InvalidGraphError("ring needs n >= 3, got " + std::to_string(n));
  GossipMatrix w;
  w.weights = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    w.weights(i, i) = 0.5;
    w.weights(i, (i + 1) % n) = 0.25;
    w.weights(i, (i + n - 1) % n) = 0.25;
  }
  w.edges = ring_edges(n);
  // Circulant eigenvalues 1/2 + 1/2 cos(2 pi k / n) are all >= 0.
  w.psd = true;
  return w;
}

GossipMatrix build_metropolis_lazy(int n, const EdgeSet& edges) {
  if (n < 1) throw InvalidGraphError("metropolis: n must be positive");
  EdgeSet normalized;
  for (const auto& e : edges) {
    check_edge(n, e);
    normalized.insert(make_edge(e.first, e.second));
  }
  if (!is_connected(n, normalized)) throw InvalidGraphError("metropolis: edge graph is disconnected");

  const auto deg = degrees(n, normalized);
  GossipMatrix w;
  w.weights = Matrix::Zero(n, n);
  for (const auto& [i, j] : normalized) {
    const double v = 1.0 / (2.0 * std::max(deg[i], deg[j]));
    w.weights(i, j) = v;
    w.weights(j, i) = v;
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int k = 0; k < n; ++k)
      if (k != i) off += w.weights(i, k);
    w.weights(i, i) = 1.0 - off;
  }
  w.edges = std::move(normalized);
  // Diagonal >= 1/2 >= sum of off-diagonals: diagonally dominant.
  w.psd = true;
  return w;
}

GossipMatrix make_psd(const GossipMatrix& w) {
  GossipMatrix out;
  const auto n = w.weights.rows();
  out.weights = 0.5 * (Matrix::Identity(n, n) + w.weights);
  out.edges = w.edges;
  out.psd = true;
  return out;
}

void validate(const GossipMatrix& w) {
  const int n = w.n();
  if (w.weights.cols() != n) throw InvalidGraphError("gossip matrix is not square");
  if (n == 0) throw InvalidGraphError("gossip matrix is empty");
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = w.weights(i, j);
      if (!std::isfinite(v)) throw InvalidGraphError("non-finite weight");
      if (v != w.weights(j, i))
        throw InvalidGraphError("not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (v < 0.0) throw InvalidGraphError("negative weight at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (i != j && v > 0.0 && !w.edges.count(make_edge(i, j)))
        throw InvalidGraphError("weight outside the edge set at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      row += v;
    }
    if (std::abs(row - 1.0) > kRowSumTol)
      throw InvalidGraphError("row " + std::to_string(i) + " sums to " + std::to_string(row));
    if (!(w.weights(i, i) > 0.0)) throw InvalidGraphError("zero diagonal at row " + std::to_string(i));
  }
  for (const auto& e : w.edges) check_edge(n, e);
  EdgeSet support;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (w.weights(i, j) > 0.0) support.insert({i, j});
  if (!is_connected(n, support)) throw InvalidGraphError("graph of positive weights is disconnected");
}

double spectral_gap(const GossipMatrix& w) {
  const auto n = w.weights.rows();
  const Matrix centered = w.weights - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  const Vector eig = symmetric_eigenvalues(centered);
  const double norm = std::max(std::abs(eig.minCoeff()), std::abs(eig.maxCoeff()));
  const double delta = 1.0 - norm;
  if (delta <= kMinGap)
    throw InvalidGraphError("spectral gap " + std::to_string(delta) + " indicates a disconnected or periodic graph");
  return delta;
}

SpectralConstants spectral_constants(double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw DomainError("spectral_constants: delta must lie in (0, 1], got " + std::to_string(delta));
  const double lam = 1.0 - delta;
  const double root = std::sqrt(1.0 - lam * lam);
  SpectralConstants c;
  c.delta = delta;
  c.theta = (1.0 - root) / (1.0 + root);
  c.eta_w = (1.0 + c.theta) / 2.0;
  c.rho_w = std::sqrt(c.eta_w);
  c.delta_tilde = 1.0 - c.rho_w;
  return c;
}

Matrix ca_stack(const Matrix& a) {
  Matrix s(2 * a.rows(), a.cols());
  s.topRows(a.rows()) = a;
  s.bottomRows(a.rows()) = a;
  return s;
}

Matrix apply_augmented(const GossipMatrix& w, double eta_w, const Matrix& stacked) {
  const auto n = w.weights.rows();
  if (stacked.rows() != 2 * n)
    throw ShapeError("apply_augmented: expected " + std::to_string(2 * n) + " rows, got " +
                     std::to_string(stacked.rows()));
  Matrix out(stacked.rows(), stacked.cols());
  out.topRows(n).noalias() = (1.0 + eta_w) * (w.weights * stacked.topRows(n));
  out.topRows(n) -= eta_w * stacked.bottomRows(n);
  out.bottomRows(n) = stacked.topRows(n);
  return out;
}

Matrix augmented_matrix(const GossipMatrix& w, double eta_w) {
  const auto n = w.weights.rows();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = (1.0 + eta_w) * w.weights;
  m.topRightCorner(n, n) = -eta_w * Matrix::Identity(n, n);
  m.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return m;
}

Matrix project_out_mean(const Matrix& a) { return a.rowwise() - row_mean(a); }

double consensus_error(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  return project_out_mean(a).squaredNorm();
}

LcaReport verify_lca(double delta, double eta_tilde, int k_max, int grid) {
  const SpectralConstants c = spectral_constants(delta);
  const double lower = (1.0 + c.theta) / 2.0;
  // Allow the closed-form value itself through despite last-bit differences.
  if (!(eta_tilde >= lower * (1.0 - 1e-15)) || !(eta_tilde < 1.0))
    throw DomainError("verify_lca: eta_tilde must lie in [(1+theta)/2, 1) = [" + std::to_string(lower) +
                      ", 1), got " + std::to_string(eta_tilde));
  if (grid < 2) throw DomainError("verify_lca: grid must be >= 2");
  if (k_max < 0) throw DomainError("verify_lca: k_max must be >= 0");

  // Work with S_k = T_k / eta^(k/2) so that the ratio is S_k^2 and nothing
  // underflows for small eta:
  //   S_0 = 1, S_1 = eta^(-1/2), S_{k+2} = (1 + eta) x / sqrt(eta) S_{k+1} - S_k.
  const double sqrt_eta = std::sqrt(eta_tilde);
  const double upper = 1.0 - delta;
  LcaReport report;
  report.max_ratio = 1.0;
  for (int g = 0; g < grid; ++g) {
    const double x = upper * static_cast<double>(g) / static_cast<double>(grid - 1);
    const double a = (1.0 + eta_tilde) * x / sqrt_eta;
    double s_prev = 1.0;
    double s_cur = 1.0 / sqrt_eta;
    if (k_max >= 1 && s_cur * s_cur > report.max_ratio) {
      report.max_ratio = s_cur * s_cur;
      report.argmax_k = 1;
      report.argmax_x = x;
    }
    for (int k = 2; k <= k_max; ++k) {
      const double s_next = a * s_cur - s_prev;
      s_prev = s_cur;
      s_cur = s_next;
      const double r = s_cur * s_cur;
      if (r > report.max_ratio) {
        report.max_ratio = r;
        report.argmax_k = k;
        report.argmax_x = x;
      }
    }
  }
  report.pass = report.max_ratio <= kLcaBound + kLcaRoundoff;
  return report;
}

LcaReport verify_lca(double delta, int k_max, int grid) {
  const SpectralConstants c = spectral_constants(delta);
  return verify_lca(delta, (1.0 + c.theta) / 2.0, k_max, grid);
}

void write_gossip(std::ostream& out, const Matrix& weights) {
  const auto n = weights.rows();
  out << n << '\n';
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << weights(i, j);
    }
    out << '\n';
  }
  out.precision(old);
}

Matrix read_gossip(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(source, 0, "empty gossip file");
  long n = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> n) || n <= 0 || (ls >> extra)) throw ParseError(source, line_no, "expected a positive agent count");
  }
  Matrix w(n, n);
  for (long i = 0; i < n; ++i) {
    if (!next_line()) throw ParseError(source, line_no, "expected " + std::to_string(n) + " rows");
    std::istringstream ls(line);
    for (long j = 0; j < n; ++j) {
      if (!(ls >> w(i, j))) throw ParseError(source, line_no, "expected " + std::to_string(n) + " weights");
    }
    std::string extra;
    if (ls >> extra) throw ParseError(source, line_no, "too many weights");
  }
  return w;
}

GossipMatrix gossip_from_weights(Matrix weights) {
  GossipMatrix w;
  w.weights = std::move(weights);
  if (w.weights.rows() != w.weights.cols()) throw InvalidGraphError("gossip matrix is not square");
  for (int i = 0; i < w.n(); ++i)
    for (int j = i + 1; j < w.n(); ++j)
      if (w.weights(i, j) > 0.0 || w.weights(j, i) > 0.0) w.edges.insert({i, j});
  validate(w);
  w.psd = symmetric_eigenvalues(w.weights).minCoeff() >= -kPsdTol;
  return w;
}

GossipMatrix load_gossip_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gossip file '" + path + "'");
  return gossip_from_weights(read_gossip(in, path));
}

void write_edges(std::ostream& out, const EdgeSet& edges) {
  for (const auto& [i, j] : edges) out << i << ' ' << j << '\n';
}

EdgeSet read_edges(std::istream& in, const std::string& source) {
  EdgeSet edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    int i = 0, j = 0;
    std::string extra;
    if (!(ls >> i >> j) || (ls >> extra)) throw ParseError(source, line_no, "expected 'i j'");
    if (i < 0 || j < 0) throw ParseError(source, line_no, "negative vertex index");
    edges.insert(make_edge(i, j));
  }
  return edges;
}

}  // namespace ogt
