#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ogt/matrix.hpp"

namespace ogt {

/// Undirected edge, stored with first < second.
using Edge = std::pair<int, int>;
using EdgeSet = std::set<Edge>;

/// Normalizes (i, j) so that the smaller index comes first.
Edge make_edge(int i, int j);

/// Symmetric doubly-stochastic mixing matrix supported on an undirected graph.
///
/// Instances built through the factories below satisfy:
///   - weights(i, j) == weights(j, i) exactly,
///   - each row sums to 1 within 1e-12 and all entries are >= 0,
///   - a positive off-diagonal weight only sits on an edge of `edges`,
///   - positive diagonal and a connected edge graph (which makes W regular).
struct GossipMatrix {
  Matrix weights;
  EdgeSet edges;
  bool psd = false;

  int n() const { return static_cast<int>(weights.rows()); }
};

/// Derived quantities of the spectral gap used by the accelerated mixing.
struct SpectralConstants {
  double delta = 0.0;        ///< spectral gap 1 - ||W - 11^T/n||_2
  double theta = 0.0;
  double eta_w = 0.0;        ///< momentum weight of the augmented operator
  double rho_w = 0.0;        ///< contraction rate sqrt(eta_w)
  double delta_tilde = 0.0;  ///< accelerated gap 1 - rho_w
};

/// n-cycle with 1/2 on the diagonal and 1/4 to each neighbour. Throws
/// InvalidGraphError for n < 3.
GossipMatrix build_ring(int n);

/// Lazy Metropolis weights: W_ij = 1 / (2 max(deg i, deg j)) on edges and
/// the remaining mass on the diagonal. Throws InvalidGraphError for self
/// loops, out-of-range endpoints or a disconnected edge graph.
GossipMatrix build_metropolis_lazy(int n, const EdgeSet& edges);

/// Edges of the n-cycle.
EdgeSet ring_edges(int n);

/// (I + W) / 2, which is positive semidefinite for any symmetric doubly
/// stochastic W.
GossipMatrix make_psd(const GossipMatrix& w);

/// Checks every structural invariant listed on GossipMatrix and throws
/// InvalidGraphError describing the first violation.
void validate(const GossipMatrix& w);

/// True if the edge graph on n vertices is connected.
bool is_connected(int n, const EdgeSet& edges);

/// 1 - max |eig(W - 11^T/n)|. Throws InvalidGraphError when the result is
/// <= 1e-14 (disconnected or periodic graph).
double spectral_gap(const GossipMatrix& w);

/// Closed forms for theta, eta_w, rho_w and delta_tilde. Throws DomainError
/// unless 0 < delta <= 1.
SpectralConstants spectral_constants(double delta);

/// Stacks an n x d block on top of itself (a "ca-type" 2n x d matrix).
Matrix ca_stack(const Matrix& a);

inline auto top_block(const Matrix& s) { return s.topRows(s.rows() / 2); }
inline auto bottom_block(const Matrix& s) { return s.bottomRows(s.rows() / 2); }

/// Applies the augmented operator [(1+eta_w) W, -eta_w I; I, 0] to a 2n x d
/// stack without forming the 2n x 2n matrix.
Matrix apply_augmented(const GossipMatrix& w, double eta_w, const Matrix& stacked);

/// The 2n x 2n augmented operator, materialized. Only used by tests and
/// reference checks.
Matrix augmented_matrix(const GossipMatrix& w, double eta_w);

/// sum_i ||row_i - mean row||^2.
double consensus_error(const Matrix& a);

/// Removes the column mean from every row: (I - 11^T/n) A.
Matrix project_out_mean(const Matrix& a);

struct LcaReport {
  double max_ratio = 0.0;
  int argmax_k = 0;
  double argmax_x = 0.0;
  bool pass = false;
};

/// Bound on the loopless Chebyshev polynomials. Evaluates T_k(x)^2 / eta^k on
/// `grid` uniform points of [0, 1 - delta] for k = 0..k_max, where
/// T_0 = T_1 = 1 and T_{k+2} = (1 + eta) x T_{k+1} - eta T_k.
///
/// Passes when the maximum ratio is <= 7 (plus 1e-9 round-off). Throws
/// DomainError if eta lies outside [(1 + theta)/2, 1) for the theta of delta.
LcaReport verify_lca(double delta, double eta_tilde, int k_max, int grid = 10001);

/// Same with eta_tilde = (1 + theta) / 2.
LcaReport verify_lca(double delta, int k_max, int grid = 10001);

// Plain-text formats -------------------------------------------------------

/// First line n, then n lines of n space-separated weights (17 significant
/// digits so that the round trip is exact).
void write_gossip(std::ostream& out, const Matrix& weights);
Matrix read_gossip(std::istream& in, const std::string& source = "<stream>");

/// Builds a GossipMatrix from raw weights, deriving the edge set from the
/// positive off-diagonals. Validates and checks positive semidefiniteness.
GossipMatrix gossip_from_weights(Matrix weights);
GossipMatrix load_gossip_file(const std::string& path);

/// One `i j` pair per line, 0-indexed.
void write_edges(std::ostream& out, const EdgeSet& edges);
EdgeSet read_edges(std::istream& in, const std::string& source = "<stream>");

}  // namespace ogt
