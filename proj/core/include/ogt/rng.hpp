#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace ogt {

/// xoshiro256** seeded through splitmix64. Both algorithms are fixed by their
/// published constants, so a seed yields the same stream on every platform.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();

  /// Top 53 bits of next() scaled by 2^-53, in [0, 1).
  double uniform();

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Standard normal via Box-Muller on two uniforms (portable, unlike
/// std::normal_distribution).
double standard_normal(Xoshiro256& gen);

enum class DrawMode { independent, coupled };

std::string to_string(DrawMode mode);
DrawMode parse_draw_mode(const std::string& text);

/// One iteration's shared random variables: xi in {0, 1} gates the snapshot
/// refresh, zeta in {0, 1/q} gates the gradient-difference correction.
struct Draw {
  int xi = 0;
  double zeta = 0.0;

  bool needs_gradient() const { return xi != 0 || zeta != 0.0; }
};

/// Shared-seed source of (xi^k, zeta^k). In coupled mode a single uniform u
/// drives both, giving xi = 1{u < p} and zeta = 1{u < q} / q, which equals
/// xi / q when p == q. Independent mode draws one uniform for each.
class CoupledBernoulliStream {
 public:
  /// Throws ConfigError if p or q lies outside (0, 1] or if coupled mode is
  /// requested with p != q.
  CoupledBernoulliStream(std::uint64_t seed, double p, double q, DrawMode mode = DrawMode::coupled);

  Draw next();

  std::uint64_t seed() const { return seed_; }
  double p() const { return p_; }
  double q() const { return q_; }
  DrawMode mode() const { return mode_; }
  long k() const { return k_; }

 private:
  std::uint64_t seed_;
  double p_;
  double q_;
  DrawMode mode_;
  Xoshiro256 gen_;
  long k_ = 0;
};

/// Fresh stream at k = 0.
CoupledBernoulliStream restart(std::uint64_t seed, double p, double q, DrawMode mode = DrawMode::coupled);

/// FNV-1a hash over the first 64 raw outputs of Xoshiro256(42), printed by
/// `ogt --version` to identify the generator.
std::uint64_t rng_fingerprint();

}  // namespace ogt
