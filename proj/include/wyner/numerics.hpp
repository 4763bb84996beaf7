#pragma once

// Closed-form rank-1 generalized eigensolver and the special functions behind
// the quantization-loss bounds.
//
// Conjugation convention: callers pass EFFECTIVE vectors. For a signal model
// y = h^T f, the caller hands in h_eff = conj(h) so that
// f* (h_eff h_eff*) f = |h^T f|^2 exactly. The beamforming layer is the only
// place that performs this conjugation.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "wyner/errors.hpp"
#include "wyner/linalg.hpp"

namespace wyner {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline constexpr double kLog2E = 1.4426950408889634074;

struct GeneralizedEigenpair {
  CVec vector;   ///< unit norm, phase-normalized
  double value;  ///< the single nonzero generalized eigenvalue
};

/// Principal generalized eigenvector of the pencil
///   R_h = h h*,  R_g = rho g g* + I.
/// R_h has rank one, so the answer is f ∝ R_g^{-1} h with
///   R_g^{-1} = I - rho g g* / (1 + rho ||g||^2)
/// and eigenvalue lambda = h* R_g^{-1} h.
inline GeneralizedEigenpair rank1_gen_eigvec(const CVec& h_eff, const CVec& g_eff, double rho) {
  require_same_size(h_eff, g_eff);
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw DomainError("interference SNR must be finite and nonnegative");
  }
  const double hh = h_eff.squared_norm();
  if (!(hh > 0.0)) throw DegenerateChannel("desired channel has zero norm");

  const cplx gh = dot(g_eff, h_eff);
  const double shrink = rho / (1.0 + rho * g_eff.squared_norm());
  CVec f = h_eff - g_eff * (shrink * gh);
  const double lambda = std::max(0.0, hh - shrink * std::norm(gh));
  return {phase_normalized(f.normalized()), lambda};
}

/// Euler Beta function B(a, b).
inline double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta function needs positive arguments");
  }
  return boost::math::beta(a, b);
}

namespace detail {

inline std::vector<unsigned> primes_up_to(unsigned n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<unsigned> primes;
  for (unsigned p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (std::uint64_t q = std::uint64_t{p} * p; q <= n; q += p) composite[q] = true;
  }
  return primes;
}

inline BigInt lcm_up_to(unsigned n) {
  BigInt l = 1;
  for (unsigned p : primes_up_to(n)) {
    std::uint64_t pk = p;
    while (pk * p <= n) pk *= p;
    l *= pk;
  }
  return l;
}

inline void check_rvq_args(int bits, int nt) {
  if (nt < 2) throw DomainError("antenna count must be at least 2");
  if (bits < 0) throw DomainError("codebook bits must be nonnegative");
  if (bits > 30) throw BudgetTooLarge("codebook bits must be at most 30");
}

}  // namespace detail

/// Exact value of  sum_{i=0}^{N} C(N,i) (-1)^i H_{i(Nt-1)},  N = 2^bits,
/// with H_n the n-th harmonic number. This is E{ln cos^2} of RVQ with N codewords.
///
/// All harmonic numbers share the denominator lcm(1..N(Nt-1)), so the sum is
/// accumulated in integers and reduced once at the end.
inline BigRational log_cos2_alternating_sum(int bits, int nt) {
  detail::check_rvq_args(bits, nt);
  if (bits > 16) throw BudgetTooLarge("exact alternating sum limited to 16 bits");
  const std::uint64_t n = std::uint64_t{1} << bits;
  const std::uint64_t m = static_cast<std::uint64_t>(nt) - 1;
  const std::uint64_t top = n * m;

  const BigInt denom = detail::lcm_up_to(static_cast<unsigned>(top));
  BigInt harmonic = 0;  // H_j * denom
  BigInt binom = 1;     // C(n, i)
  BigInt total = 0;
  std::uint64_t j = 0;
  for (std::uint64_t i = 0; i <= n; ++i) {
    for (; j < i * m; ) {
      ++j;
      harmonic += denom / j;
    }
    if (i % 2 == 0) {
      total += binom * harmonic;
    } else {
      total -= binom * harmonic;
    }
    binom *= (n - i);
    binom /= (i + 1);
  }
  return BigRational(total, denom);
}

/// -E{ln cos^2} for RVQ with 2^bits codewords, by quadrature.
///
/// With Z = 1 - cos^2 the minimum of N i.i.d. variables with CDF z^m (m = Nt-1),
/// integration by parts gives
///   -E{ln(1 - Z)} = int_0^1 (1 - z^m)^N / (1 - z) dz
///                 = int_0^1 (1 + z + ... + z^{m-1}) (1 - z^m)^{N-1} dz,
/// a smooth integrand. Mass sits below z ~ N^{-1/m}; the interval is cut
/// geometrically around that scale.
inline double neg_log_cos2_quadrature(int bits, int nt) {
  detail::check_rvq_args(bits, nt);
  const double n = std::ldexp(1.0, bits);
  const int m = nt - 1;
  auto integrand = [&](double z) {
    double geo = 0.0;
    double p = 1.0;
    for (int j = 0; j < m; ++j) {
      geo += p;
      p *= z;
    }
    if (n == 1.0) return geo;
    return geo * std::exp((n - 1.0) * std::log1p(-p));
  };

  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double scale = std::pow(n, -1.0 / m);
  double lo = 0.0;
  double hi = std::min(1.0, scale / 16.0);
  double total = 0.0;
  while (lo < 1.0) {
    total += Quad::integrate(integrand, lo, hi, 10, 1e-11);
    lo = hi;
    hi = std::min(1.0, 2.0 * hi);
    // The integrand is decreasing past the peak, so m * (1 - lo^m)^(N-1) bounds the rest.
    const double tail = m * std::exp((n - 1.0) * std::log1p(-std::pow(lo, m)));
    if (tail * (1.0 - lo) < 1e-17 * total) break;
  }
  return total;
}

inline constexpr int kExactMaxBits = 10;

/// E{log2 cos^2(angle(h, h_hat))} for RVQ with 2^bits isotropic codewords in C^Nt.
/// Exact rational evaluation up to 10 bits, quadrature above.
inline double expected_log2_cos2(int bits, int nt) {
  if (bits <= kExactMaxBits) {
    return kLog2E * log_cos2_alternating_sum(bits, nt).convert_to<double>();
  }
  return -kLog2E * neg_log_cos2_quadrature(bits, nt);
}

/// E{1 - cos^2} of the RVQ selection: 2^B * B(2^B, Nt/(Nt-1)).
inline double expected_sin2_min(int bits, int nt) {
  detail::check_rvq_args(bits, nt);
  const double n = std::ldexp(1.0, bits);
  return n * beta_fn(n, static_cast<double>(nt) / (nt - 1.0));
}

}  // namespace wyner
