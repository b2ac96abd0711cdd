#include "ogt/rng.hpp"

#include <cmath>
#include <numbers>

#include "ogt/errors.hpp"

namespace ogt {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double standard_normal(Xoshiro256& gen) {
  const double u1 = 1.0 - gen.uniform();  // (0, 1]
  const double u2 = gen.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string to_string(DrawMode mode) { return mode == DrawMode::coupled ? "coupled" : "independent"; }

DrawMode parse_draw_mode(const std::string& text) {
  if (text == "coupled") return DrawMode::coupled;
  if (text == "independent") return DrawMode::independent;
  throw ConfigError("unknown draw mode '" + text + "' (expected coupled or independent)");
}

CoupledBernoulliStream::CoupledBernoulliStream(std::uint64_t seed, double p, double q, DrawMode mode)
    : seed_(seed), p_(p), q_(q), mode_(mode), gen_(seed) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1], got " + std::to_string(p));
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("q must lie in (0, 1], got " + std::to_string(q));
  if (mode == DrawMode::coupled && p != q) throw ConfigError("coupled draws require p == q");
}

Draw CoupledBernoulliStream::next() {
  Draw d;
  if (mode_ == DrawMode::coupled) {
    const double u = gen_.uniform();
    d.xi = u < p_ ? 1 : 0;
    d.zeta = u < q_ ? 1.0 / q_ : 0.0;
  } else {
    const double u_xi = gen_.uniform();
    const double u_zeta = gen_.uniform();
    d.xi = u_xi < p_ ? 1 : 0;
    d.zeta = u_zeta < q_ ? 1.0 / q_ : 0.0;
  }
  ++k_;
  return d;
}

CoupledBernoulliStream restart(std::uint64_t seed, double p, double q, DrawMode mode) {
  return CoupledBernoulliStream(seed, p, q, mode);
}

std::uint64_t rng_fingerprint() {
  Xoshiro256 gen(42);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t v = gen.next();
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace ogt
