#pragma once

// Full-CSI transmit beams (GEBF, EBF, ZF) and SINR / sum-rate evaluation.
//
// SINR_k = |h_k^T f_k|^2 / (alpha_k |g_k'^T f_{k+1}|^2 + 1/rho_k)
// where g_k' is the interfering channel seen by user k (ChannelSet::g[k]).

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wyner/channel.hpp"
#include "wyner/errors.hpp"
#include "wyner/linalg.hpp"
#include "wyner/numerics.hpp"

namespace wyner {

/// Unit-norm, phase-normalized transmit vector.
class Beamformer {
 public:
  /// Normalizes and phase-normalizes `direction`.
  explicit Beamformer(const CVec& direction) : f_(phase_normalized(direction.normalized())) {}

  const CVec& vector() const noexcept { return f_; }
  std::size_t size() const noexcept { return f_.size(); }

 private:
  CVec f_;
};

enum class Strategy { Gebf, Ebf, Zf };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Gebf: return "gebf";
    case Strategy::Ebf: return "ebf";
    case Strategy::Zf: return "zf";
  }
  return "?";
}

struct RateReport {
  std::vector<double> sinr;
  std::vector<double> rate_exact;     ///< log2(1 + SINR)
  std::vector<double> rate_highsinr;  ///< log2(SINR)
  double sum_exact = 0.0;
  double sum_highsinr = 0.0;
};

inline RateReport sinr(const ChannelSet& channels, const std::vector<Beamformer>& beams,
                       const std::vector<CellParams>& params, const Topology& topology) {
  const std::size_t k = topology.cells();
  if (channels.h.size() != k || channels.g.size() != k || beams.size() != k ||
      params.size() != k) {
    throw ShapeError("channels, beams and params must all have one entry per cell");
  }
  RateReport r;
  r.sinr.reserve(k);
  r.rate_exact.reserve(k);
  r.rate_highsinr.reserve(k);
  for (std::size_t user = 0; user < k; ++user) {
    const double signal = std::norm(bilinear(channels.h[user], beams[user].vector()));
    double leak = 0.0;
    if (auto base = topology.interferer_of(user)) {
      if (!channels.g[user]) throw ShapeError("missing interfering channel for user " + std::to_string(user));
      leak = std::norm(bilinear(*channels.g[user], beams[*base].vector()));
    }
    const double s = signal / (params[user].alpha * leak + 1.0 / params[user].rho_d);
    r.sinr.push_back(s);
    r.rate_exact.push_back(std::log2(1.0 + s));
    r.rate_highsinr.push_back(std::log2(s));
    r.sum_exact += r.rate_exact.back();
    r.sum_highsinr += r.rate_highsinr.back();
  }
  return r;
}

/// Matched beam f = conj(h) / ||h||.
inline Beamformer ebf(const CVec& h) {
  if (!(h.squared_norm() > 0.0)) throw DegenerateChannel("eigen-beamforming needs a nonzero channel");
  return Beamformer(h.conj());
}

inline constexpr double kZfMinSine = 1e-6;

/// Zero-forcing beam: first column of pinv([h^T; g^T]), normalized.
/// With A = [h^T; g^T], pinv(A) = A* (A A*)^{-1}; only its first column is formed.
inline Beamformer zf(const CVec& h, const CVec& g) {
  require_same_size(h, g);
  const double hh = h.squared_norm();
  const double gg = g.squared_norm();
  if (!(hh > 0.0)) throw DegenerateChannel("zero-forcing needs a nonzero desired channel");
  if (!(gg > 0.0)) return ebf(h);

  // Gram matrix A A* = [[hh, h^T g^c], [g^T h^c, gg]].
  const cplx hg = bilinear(h, g.conj());
  const cplx gh = std::conj(hg);
  const double det = hh * gg - std::norm(hg);
  const double sine2 = det / (hh * gg);
  if (!(sine2 >= kZfMinSine * kZfMinSine)) {
    throw RankDeficient("zero-forcing infeasible: desired and interfering channels are parallel");
  }
  // First column of (A A*)^{-1}.
  const cplx c0 = gg / det;
  const cplx c1 = -gh / det;
  return Beamformer(h.conj() * c0 + g.conj() * c1);
}

/// SLNR-optimal beam at base k: h_own = h_k, g_caused = channel from base k to
/// user k-1, rho_i_prev = alpha_{k-1} rho_{k-1}.
inline Beamformer gebf(const CVec& h_own, const CVec& g_caused, double rho_i_prev) {
  return Beamformer(rank1_gen_eigvec(h_own.conj(), g_caused.conj(), rho_i_prev).vector);
}

/// Generalized Rayleigh quotient |h^T f|^2 / (rho |g^T f|^2 + 1) of a beam.
inline double slnr(const CVec& h_own, const CVec& g_caused, double rho_i_prev, const Beamformer& f) {
  return std::norm(bilinear(h_own, f.vector())) /
         (rho_i_prev * std::norm(bilinear(g_caused, f.vector())) + 1.0);
}

/// Beams for every base from full CSI. Base k uses h[k], the channel it leaks
/// through (g[victim]) and the victim's interference SNR. A base without a
/// victim (finite array, base 0) falls back to EBF under every strategy.
inline std::vector<Beamformer> plan_full_csi(Strategy strategy, const ChannelSet& channels,
                                             const std::vector<CellParams>& params,
                                             const Topology& topology) {
  const std::size_t k = topology.cells();
  if (channels.h.size() != k || channels.g.size() != k || params.size() != k) {
    throw ShapeError("channels and params must have one entry per cell");
  }
  std::vector<Beamformer> beams;
  beams.reserve(k);
  for (std::size_t base = 0; base < k; ++base) {
    const CVec& h = channels.h[base];
    const auto victim = topology.victim_of(base);
    if (strategy == Strategy::Ebf || !victim) {
      beams.push_back(ebf(h));
      continue;
    }
    const auto& g = channels.g[*victim];
    if (!g) throw ShapeError("missing interfering channel for user " + std::to_string(*victim));
    if (strategy == Strategy::Zf) {
      beams.push_back(zf(h, *g));
    } else {
      beams.push_back(gebf(h, *g, params[*victim].rho_i()));
    }
  }
  return beams;
}

}  // namespace wyner
