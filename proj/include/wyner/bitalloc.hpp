#pragma once

// Upper bounds on the mean sum-rate loss caused by RVQ feedback, and the
// split of a per-user bit budget between the desired and interfering channel.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wyner/channel.hpp"
#include "wyner/errors.hpp"
#include "wyner/numerics.hpp"

namespace wyner {

struct BitSplit {
  int desired_bits = 0;      ///< B_d
  int interfering_bits = 0;  ///< B_i

  int total() const noexcept { return desired_bits + interfering_bits; }

  friend bool operator==(const BitSplit&, const BitSplit&) = default;
};

/// Inclusive admissible range for B_d, applied on top of [0, B_tot].
struct SplitClamp {
  int lo = 0;
  int hi = 0;

  friend bool operator==(const SplitClamp&, const SplitClamp&) = default;
};

struct LossBound {
  double desired = 0.0;      ///< bound on the desired-channel loss term
  double interfering = 0.0;  ///< bound on the interfering-channel loss term

  double total() const noexcept { return desired + interfering; }
};

/// Bound on the loss from quantizing the desired channel with `bits` bits.
inline double t_d_bound(int bits, int nt) { return -expected_log2_cos2(bits, nt); }

/// Bound on the loss from quantizing the interfering channel:
///   log2(1 + rho_i Nt 2^B B(2^B, Nt/(Nt-1))).
inline double t_i_bound(int bits, int nt, double rho_i) {
  if (!(rho_i >= 0.0)) throw DomainError("rho_i must be nonnegative");
  return std::log2(1.0 + rho_i * nt * expected_sin2_min(bits, nt));
}

inline LossBound cell_bound(const BitSplit& split, int nt, double rho_i) {
  return {t_d_bound(split.desired_bits, nt), t_i_bound(split.interfering_bits, nt, rho_i)};
}

/// Two-antenna per-cell bound as a continuous function of B_d:
///   log2(1 + 2 rho_i / (2^(B_tot - B_d) + 1)) + 2^(-B_d) log2(e).
inline double delta_tilde(double desired_bits, int total_bits, double rho_i) {
  if (!(desired_bits >= 0.0 && desired_bits <= total_bits)) {
    throw DomainError("B_d must lie in [0, B_tot]");
  }
  if (!(rho_i >= 0.0)) throw DomainError("rho_i must be nonnegative");
  const double bi = total_bits - desired_bits;
  return std::log2(1.0 + 2.0 * rho_i / (std::exp2(bi) + 1.0)) + std::exp2(-desired_bits) * kLog2E;
}

/// Derivative of delta_tilde with respect to B_d.
inline double delta_tilde_slope(double desired_bits, int total_bits, double rho_i) {
  const double p = std::exp2(total_bits - desired_bits);
  return 2.0 * rho_i * p / ((p + 2.0 * rho_i + 1.0) * (1.0 + p)) - std::exp2(-desired_bits);
}

/// Real-valued stationary point of delta_tilde. With p = 2^(B_tot - B_d) the
/// slope vanishes where (p + 1)(p + 1 + 2 rho_i) = 2 rho_i 2^B_tot, so
///   B_d = B_tot - log2(sqrt(rho_i 2^(B_tot+1) + rho_i^2) - 1 - rho_i).
/// Returns +inf when no root exists (the bound then decreases all the way to B_tot).
inline double optimal_desired_bits_real(int total_bits, double rho_i) {
  const double p = std::sqrt(rho_i * std::exp2(total_bits + 1.0) + rho_i * rho_i) - 1.0 - rho_i;
  if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
  return total_bits - std::log2(p);
}

inline void check_budget(int total_bits) {
  if (total_bits < 0) throw DomainError("B_tot must be nonnegative");
}

/// Minimizer of delta_tilde over integer B_d. The real stationary point is
/// clamped to [0, B_tot] (intersected with `clamp` when given) and then only
/// its floor and ceiling are compared; ties go to the smaller B_d.
inline BitSplit optimal_split(int total_bits, double rho_i,
                              std::optional<SplitClamp> clamp = std::nullopt) {
  check_budget(total_bits);
  if (!(rho_i >= 0.0)) throw DomainError("rho_i must be nonnegative");
  int lo = 0;
  int hi = total_bits;
  if (clamp) {
    lo = std::max(lo, clamp->lo);
    hi = std::min(hi, clamp->hi);
    if (lo > hi) throw DomainError("split clamp does not intersect [0, B_tot]");
  }
  const double real = std::clamp(optimal_desired_bits_real(total_bits, rho_i),
                                 static_cast<double>(lo), static_cast<double>(hi));
  const int down = static_cast<int>(std::floor(real));
  const int up = static_cast<int>(std::ceil(real));
  int best = down;
  if (up != down && delta_tilde(up, total_bits, rho_i) < delta_tilde(down, total_bits, rho_i)) {
    best = up;
  }
  return {best, total_bits - best};
}

/// Exhaustive integer search over delta_tilde. Ties go to the smaller B_d.
inline BitSplit brute_force_split(int total_bits, double rho_i) {
  check_budget(total_bits);
  if (total_bits > 20) throw BudgetTooLarge("brute-force split limited to 20 bits");
  int best = 0;
  double best_value = delta_tilde(0, total_bits, rho_i);
  for (int bd = 1; bd <= total_bits; ++bd) {
    const double v = delta_tilde(bd, total_bits, rho_i);
    if (v < best_value) {
      best_value = v;
      best = bd;
    }
  }
  return {best, total_bits - best};
}

/// Integer search over the general-Nt per-cell bound (no closed form exists for Nt > 2).
inline BitSplit best_split_general(int total_bits, int nt, double rho_i,
                                   std::optional<SplitClamp> clamp = std::nullopt) {
  check_budget(total_bits);
  int lo = 0;
  int hi = total_bits;
  if (clamp) {
    lo = std::max(lo, clamp->lo);
    hi = std::min(hi, clamp->hi);
    if (lo > hi) throw DomainError("split clamp does not intersect [0, B_tot]");
  }
  BitSplit best{lo, total_bits - lo};
  double best_value = cell_bound(best, nt, rho_i).total();
  for (int bd = lo + 1; bd <= hi; ++bd) {
    const BitSplit s{bd, total_bits - bd};
    const double v = cell_bound(s, nt, rho_i).total();
    if (v < best_value) {
      best_value = v;
      best = s;
    }
  }
  return best;
}

/// Sum over cells of the desired and interfering loss bounds.
inline double total_bound_general(const std::vector<BitSplit>& splits,
                                  const std::vector<CellParams>& params, int nt) {
  if (splits.size() != params.size()) throw ShapeError("one split per cell required");
  double total = 0.0;
  for (std::size_t k = 0; k < splits.size(); ++k) {
    total += cell_bound(splits[k], nt, params[k].rho_i()).total();
  }
  return total;
}

/// Same, but users without an interferer in `topology` contribute no interference term.
inline double total_bound_general(const std::vector<BitSplit>& splits,
                                  const std::vector<CellParams>& params, int nt,
                                  const Topology& topology) {
  if (splits.size() != params.size() || params.size() != topology.cells()) {
    throw ShapeError("one split per cell required");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < splits.size(); ++k) {
    const double rho_i = topology.has_interferer(k) ? params[k].rho_i() : 0.0;
    total += cell_bound(splits[k], nt, rho_i).total();
  }
  return total;
}

}  // namespace wyner
