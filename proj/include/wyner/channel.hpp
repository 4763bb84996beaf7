#pragma once

// Wyner-model topologies and i.i.d. Rayleigh channel draws.
//
// Indexing (0-based throughout):
//   h[k]  desired channel, base k -> user k
//   g[k]  interfering channel, base k+1 -> user k   (indexed by the RECEIVING user)
// so base k leaks into user k-1 through g[k-1]. In a circular array the indices
// wrap; in a finite array the last user has no interferer and base 0 has no victim.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "wyner/errors.hpp"
#include "wyner/linalg.hpp"
#include "wyner/seeding.hpp"

namespace wyner {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

enum class TopologyKind { Circular, FiniteArray };

class Topology {
 public:
  Topology(TopologyKind kind, std::size_t cells) : kind_(kind), cells_(cells) {
    if (cells < 2) throw DomainError("a topology needs at least 2 cells");
  }

  TopologyKind kind() const noexcept { return kind_; }
  std::size_t cells() const noexcept { return cells_; }

  /// Base station whose transmission interferes at `user`, if any.
  std::optional<std::size_t> interferer_of(std::size_t user) const noexcept {
    if (kind_ == TopologyKind::FiniteArray && user + 1 == cells_) return std::nullopt;
    return (user + 1) % cells_;
  }

  /// User that suffers the leakage of `base`, if any.
  std::optional<std::size_t> victim_of(std::size_t base) const noexcept {
    if (kind_ == TopologyKind::FiniteArray && base == 0) return std::nullopt;
    return (base + cells_ - 1) % cells_;
  }

  bool has_interferer(std::size_t user) const noexcept { return interferer_of(user).has_value(); }

 private:
  TopologyKind kind_;
  std::size_t cells_;
};

struct CellParams {
  double rho_d = 1.0;  ///< desired received SNR, linear
  double alpha = 0.0;  ///< interfering / desired received power, in [0, 1]
  int total_bits = 0;  ///< feedback budget B_tot

  /// Received SNR of the interfering signal, alpha * rho_d.
  double rho_i() const noexcept { return alpha * rho_d; }

  void validate() const {
    if (!(rho_d > 0.0) || !std::isfinite(rho_d)) throw DomainError("rho_d must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    if (total_bits < 0) throw DomainError("total feedback bits must be nonnegative");
  }
};

inline std::vector<CellParams> uniform_params(std::size_t cells, double rho_d, double alpha,
                                              int total_bits) {
  CellParams p{rho_d, alpha, total_bits};
  p.validate();
  return std::vector<CellParams>(cells, p);
}

struct ChannelSet {
  std::vector<CVec> h;
  std::vector<std::optional<CVec>> g;

  std::size_t users() const noexcept { return h.size(); }
};

/// One CN(0, 1) vector from the stream `seed`.
inline CVec draw_cn_vector(std::size_t nt, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CVec v(nt);
  for (auto& x : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    x = {re, im};
  }
  return v;
}

/// Rayleigh channels for every user. Each vector has its own stream keyed by
/// (seed, cell, role), so the draw of one user never depends on another.
inline ChannelSet generate(const Topology& topology, std::size_t nt, std::uint64_t seed) {
  check_antennas(nt);
  ChannelSet set;
  const std::size_t k = topology.cells();
  set.h.reserve(k);
  set.g.reserve(k);
  for (std::size_t user = 0; user < k; ++user) {
    set.h.push_back(draw_cn_vector(nt, derive_seed(seed, {user, role_key(StreamRole::DesiredChannel)})));
    if (topology.has_interferer(user)) {
      set.g.emplace_back(
          draw_cn_vector(nt, derive_seed(seed, {user, role_key(StreamRole::InterferingChannel)})));
    } else {
      set.g.emplace_back(std::nullopt);
    }
  }
  return set;
}

struct UniformAlpha {
  double alpha;
};

/// alpha_k = 10^(a_k / 10) with a_k ~ U[lo_db, hi_db].
struct RandomDbAlpha {
  double lo_db;
  double hi_db;
};

using AlphaProfile = std::variant<UniformAlpha, RandomDbAlpha>;

inline std::vector<double> alpha_profile(const AlphaProfile& kind, std::size_t cells,
                                         std::uint64_t seed) {
  struct Visitor {
    std::size_t cells;
    std::uint64_t seed;

    std::vector<double> operator()(const UniformAlpha& u) const {
      if (!(u.alpha >= 0.0 && u.alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
      return std::vector<double>(cells, u.alpha);
    }

    std::vector<double> operator()(const RandomDbAlpha& r) const {
      if (r.hi_db > 0.0) throw DomainError("alpha upper bound must be <= 0 dB");
      if (!(r.lo_db <= r.hi_db)) throw DomainError("alpha range must satisfy lo_db <= hi_db");
      std::vector<double> out;
      out.reserve(cells);
      for (std::size_t k = 0; k < cells; ++k) {
        SplitMix64 rng(derive_seed(seed, {k, role_key(StreamRole::Alpha)}));
        std::uniform_real_distribution<double> u(r.lo_db, r.hi_db);
        out.push_back(db_to_linear(r.lo_db == r.hi_db ? r.lo_db : u(rng)));
      }
      return out;
    }
  };
  return std::visit(Visitor{cells, seed}, kind);
}

}  // namespace wyner
