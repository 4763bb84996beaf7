#pragma once

// Random vector quantization (RVQ) of channel directions, the backhaul
// exchange between neighbouring base stations, and limited-feedback beams.
//
// Flow for user k (0-based, see channel.hpp for indexing):
//   user k quantizes h[k] with a B_d-bit codebook and g[k] with a B_i-bit codebook,
//   base k receives both records, keeps h[k] and forwards the g[k] record to
//   base k+1, which is the base that leaks into user k.
// Base k therefore designs its beam from its own desired record and the record
// of g[k-1] supplied by base k-1.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wyner/beamforming.hpp"
#include "wyner/bitalloc.hpp"
#include "wyner/channel.hpp"
#include "wyner/errors.hpp"
#include "wyner/linalg.hpp"
#include "wyner/numerics.hpp"
#include "wyner/seeding.hpp"

namespace wyner {

inline constexpr int kMaxCodebookBits = 20;

/// 2^bits isotropic unit vectors in C^Nt.
///
/// Codewords are drawn in order from a single stream, so the first 2^b
/// codewords of a codebook are exactly the codebook that the same seed would
/// give for b bits. PrefixQuantizer relies on this.
class Codebook {
 public:
  Codebook(int bits, std::size_t nt, std::vector<cplx> entries)
      : bits_(bits), nt_(nt), entries_(std::move(entries)) {
    if (entries_.size() != (std::size_t{1} << bits) * nt) throw ShapeError("codebook storage size");
  }

  int bits() const noexcept { return bits_; }
  std::size_t nt() const noexcept { return nt_; }
  std::size_t size() const noexcept { return std::size_t{1} << bits_; }

  CVec operator[](std::size_t i) const { return CVec(span(i)); }

  std::span<const cplx> span(std::size_t i) const noexcept {
    return {entries_.data() + i * nt_, nt_};
  }

 private:
  int bits_;
  std::size_t nt_;
  std::vector<cplx> entries_;
};

inline Codebook draw_codebook(int bits, std::size_t nt, std::uint64_t seed) {
  check_antennas(nt);
  if (bits < 0) throw DomainError("codebook bits must be nonnegative");
  if (bits > kMaxCodebookBits) {
    throw BudgetTooLarge("codebook of " + std::to_string(bits) + " bits exceeds the " +
                         std::to_string(kMaxCodebookBits) + "-bit limit");
  }
  const std::size_t count = std::size_t{1} << bits;
  std::vector<cplx> entries(count * nt);
  SplitMix64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (std::size_t i = 0; i < count; ++i) {
    cplx* w = entries.data() + i * nt;
    double energy = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      w[j] = {re, im};
      energy += re * re + im * im;
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (std::size_t j = 0; j < nt; ++j) w[j] *= scale;
  }
  return Codebook(bits, nt, std::move(entries));
}

struct Quantized {
  std::size_t index;
  CVec vector;
};

namespace detail {

inline double match(std::span<const cplx> direction, std::span<const cplx> w) noexcept {
  cplx s{};
  for (std::size_t j = 0; j < direction.size(); ++j) s += std::conj(direction[j]) * w[j];
  return std::norm(s);
}

inline void check_unit(const CVec& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw DomainError("quantizer input must be a unit-norm direction");
  }
}

}  // namespace detail

/// Codeword maximizing |direction* w|^2; ties go to the lowest index.
inline Quantized quantize(const CVec& direction, const Codebook& cb) {
  if (direction.size() != cb.nt()) throw ShapeError("direction and codebook dimensions differ");
  detail::check_unit(direction);
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const double score = detail::match(direction.span(), cb.span(i));
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return {best, cb[best]};
}

/// best[b] = index quantize() would return using only the first 2^b codewords,
/// for b = 0..cb.bits(). One pass over the codebook.
inline std::vector<std::size_t> quantize_prefixes(const CVec& direction, const Codebook& cb) {
  if (direction.size() != cb.nt()) throw ShapeError("direction and codebook dimensions differ");
  detail::check_unit(direction);
  std::vector<std::size_t> best(static_cast<std::size_t>(cb.bits()) + 1);
  std::size_t arg = 0;
  double best_score = -1.0;
  std::size_t next_boundary = 1;
  std::size_t level = 0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const double score = detail::match(direction.span(), cb.span(i));
    if (score > best_score) {
      best_score = score;
      arg = i;
    }
    if (i + 1 == next_boundary) {
      best[level++] = arg;
      next_boundary <<= 1;
    }
  }
  return best;
}

/// Quantized direction plus the exact channel gain.
struct ChannelRecord {
  CVec direction;  ///< codeword
  double gain;     ///< ||channel||, known perfectly
  std::size_t index;

  /// gain * direction
  CVec scaled() const { return direction * gain; }
};

struct QuantizedCsi {
  ChannelRecord desired;
  std::optional<ChannelRecord> interfering;  ///< absent when the user has no interferer
  double rho_d = 1.0;
  double alpha = 0.0;
  BitSplit split;
};

struct FeedbackSeeds {
  std::uint64_t desired;
  std::uint64_t interfering;
};

inline FeedbackSeeds feedback_seeds(std::uint64_t trial_seed, std::size_t user) {
  return {derive_seed(trial_seed, {user, role_key(StreamRole::DesiredCodebook)}),
          derive_seed(trial_seed, {user, role_key(StreamRole::InterferingCodebook)})};
}

inline ChannelRecord quantize_channel(const CVec& channel, int bits, std::uint64_t seed) {
  const double gain = channel.norm();
  if (!(gain > 0.0)) throw DegenerateChannel("cannot quantize a zero channel");
  const Codebook cb = draw_codebook(bits, channel.size(), seed);
  auto q = quantize(channel * (1.0 / gain), cb);
  return {std::move(q.vector), gain, q.index};
}

/// Feedback of one user: fresh codebooks of B_d and B_i bits drawn from `seeds`.
inline QuantizedCsi user_feedback(const CVec& h, const std::optional<CVec>& g_next,
                                  const BitSplit& split, const CellParams& params,
                                  const FeedbackSeeds& seeds) {
  if (split.desired_bits < 0 || split.interfering_bits < 0) {
    throw DomainError("bit split entries must be nonnegative");
  }
  if (split.total() != params.total_bits) {
    throw DomainError("bit split must use exactly B_tot = " + std::to_string(params.total_bits) +
                      " bits");
  }
  QuantizedCsi csi{quantize_channel(h, split.desired_bits, seeds.desired), std::nullopt,
                   params.rho_d, params.alpha, split};
  if (g_next) csi.interfering = quantize_channel(*g_next, split.interfering_bits, seeds.interfering);
  return csi;
}

/// Quantizes one channel once against a codebook of `max_bits` and answers
/// for every smaller budget from the codebook prefixes. Equivalent to calling
/// quantize_channel(channel, b, seed) for each b <= max_bits.
class PrefixQuantizer {
 public:
  PrefixQuantizer(const CVec& channel, int max_bits, std::uint64_t seed)
      : gain_(channel.norm()), codebook_(draw_codebook(max_bits, channel.size(), seed)) {
    if (!(gain_ > 0.0)) throw DegenerateChannel("cannot quantize a zero channel");
    best_ = quantize_prefixes(channel * (1.0 / gain_), codebook_);
  }

  int max_bits() const noexcept { return codebook_.bits(); }

  ChannelRecord record(int bits) const {
    if (bits < 0 || bits > max_bits()) throw DomainError("requested bits exceed the drawn codebook");
    const std::size_t i = best_[static_cast<std::size_t>(bits)];
    return {codebook_[i], gain_, i};
  }

 private:
  double gain_;
  Codebook codebook_;
  std::vector<std::size_t> best_;
};

/// Everything a user needs to answer feedback requests for any split whose
/// parts stay within the drawn caps.
class UserFeedbackDraw {
 public:
  UserFeedbackDraw(const CVec& h, const std::optional<CVec>& g_next, int max_desired_bits,
                   int max_interfering_bits, const FeedbackSeeds& seeds)
      : desired_(h, max_desired_bits, seeds.desired) {
    if (g_next) interfering_.emplace(*g_next, max_interfering_bits, seeds.interfering);
  }

  QuantizedCsi csi(const BitSplit& split, const CellParams& params) const {
    if (split.total() != params.total_bits) {
      throw DomainError("bit split must use exactly B_tot bits");
    }
    QuantizedCsi out{desired_.record(split.desired_bits), std::nullopt, params.rho_d,
                     params.alpha, split};
    if (interfering_) out.interfering = interfering_->record(split.interfering_bits);
    return out;
  }

 private:
  PrefixQuantizer desired_;
  std::optional<PrefixQuantizer> interfering_;
};

/// What base k knows after feedback and the backhaul exchange.
struct BaseStationView {
  ChannelRecord own_desired;
  std::optional<ChannelRecord> caused_interference;  ///< record of the channel base k leaks through
  double rho_i_prev = 0.0;                           ///< victim's alpha * rho_d
};

inline std::vector<BaseStationView> exchange(const std::vector<QuantizedCsi>& feedback,
                                             const Topology& topology) {
  if (feedback.size() != topology.cells()) throw ShapeError("one feedback record per user required");
  std::vector<BaseStationView> views;
  views.reserve(feedback.size());
  for (std::size_t base = 0; base < feedback.size(); ++base) {
    BaseStationView v{feedback[base].desired, std::nullopt, 0.0};
    if (auto victim = topology.victim_of(base)) {
      const QuantizedCsi& from = feedback[*victim];
      if (!from.interfering) {
        throw ShapeError("user " + std::to_string(*victim) + " sent no interfering-channel record");
      }
      v.caused_interference = from.interfering;
      v.rho_i_prev = from.alpha * from.rho_d;
    }
    views.push_back(std::move(v));
  }
  return views;
}

/// GEBF from quantized CSI: R_h = ||h||^2 h^c h^T, R_g = rho ||g||^2 g^c g^T + I
/// in terms of the fed-back codewords.
inline Beamformer gebf_limited(const BaseStationView& view) {
  const CVec h = view.own_desired.scaled();
  if (!view.caused_interference) return ebf(h);
  return gebf(h, view.caused_interference->scaled(), view.rho_i_prev);
}

inline std::vector<Beamformer> plan_limited(Strategy strategy,
                                            const std::vector<BaseStationView>& views) {
  std::vector<Beamformer> beams;
  beams.reserve(views.size());
  for (const auto& v : views) {
    const CVec h = v.own_desired.scaled();
    if (strategy == Strategy::Ebf || !v.caused_interference) {
      beams.push_back(ebf(h));
    } else if (strategy == Strategy::Zf) {
      beams.push_back(zf(h, v.caused_interference->scaled()));
    } else {
      beams.push_back(gebf_limited(v));
    }
  }
  return beams;
}

}  // namespace wyner
