#pragma once

// Monte Carlo drivers for the sum-rate experiments.
//
// Every trial t draws its randomness from derive_seed(master, {t, Trial}) only.
// Within a trial all sweep points and all arms share the same channels and the
// same codebooks (common random numbers), which keeps comparisons between arms
// paired and makes any prefix of the trials independent of the trial count.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wyner/beamforming.hpp"
#include "wyner/bitalloc.hpp"
#include "wyner/channel.hpp"
#include "wyner/errors.hpp"
#include "wyner/feedback.hpp"
#include "wyner/parallel.hpp"
#include "wyner/seeding.hpp"
#include "wyner/table.hpp"

namespace wyner {

enum class Figure {
  HighSinrApprox,
  SumRateVsK,
  MeanLossVsBd,
  CompareStrategies,
  SumRateVsBtot,
  SplitVsAlpha,
  AsymmetricCells,
  Custom,
};

struct FigureInfo {
  Figure id;
  std::string_view name;
  std::string_view alias;
  std::string_view summary;
};

inline constexpr std::array<FigureInfo, 8> kFigures{{
    {Figure::HighSinrApprox, "fig3", "high-sinr-approx",
     "exact vs high-SINR sum-rate of full-CSI GEBF over rho_d"},
    {Figure::SumRateVsK, "fig4", "sum-rate-vs-k", "full-CSI GEBF sum-rate over the number of cells"},
    {Figure::MeanLossVsBd, "fig5", "mean-loss-vs-bd",
     "mean sum-rate loss of limited feedback over B_d, with the analytic bound"},
    {Figure::CompareStrategies, "fig6", "compare-strategies",
     "GEBF / EBF / ZF with full CSI and limited feedback over alpha"},
    {Figure::SumRateVsBtot, "fig7", "sum-rate-vs-btot", "limited-feedback GEBF sum-rate over B_tot"},
    {Figure::SplitVsAlpha, "fig8", "split-vs-alpha", "optimal (B_d, B_i) over alpha in dB"},
    {Figure::AsymmetricCells, "fig9", "asymmetric-cells",
     "per-cell rate with random alpha per user in a finite array"},
    {Figure::Custom, "custom", "custom", "all arms at a single configuration"},
}};

inline const FigureInfo& figure_info(Figure f) {
  for (const auto& info : kFigures)
    if (info.id == f) return info;
  throw Error("unknown figure");
}

inline std::optional<Figure> parse_figure(std::string_view s) {
  for (const auto& info : kFigures)
    if (info.name == s || info.alias == s) return info.id;
  return std::nullopt;
}

/// Transmission arm: how beams are designed and, with limited feedback, how bits are split.
enum class Arm { GebfFull, EbfFull, ZfFull, GebfLfOptimal, GebfLfEqual, EbfLf, ZfLf };

inline constexpr std::array<Arm, 7> kAllArms{Arm::GebfFull,    Arm::EbfFull,     Arm::ZfFull,
                                             Arm::GebfLfOptimal, Arm::GebfLfEqual, Arm::EbfLf,
                                             Arm::ZfLf};

inline std::string_view arm_name(Arm a) {
  switch (a) {
    case Arm::GebfFull: return "gebf_full";
    case Arm::EbfFull: return "ebf_full";
    case Arm::ZfFull: return "zf_full";
    case Arm::GebfLfOptimal: return "gebf_lf_opt";
    case Arm::GebfLfEqual: return "gebf_lf_equal";
    case Arm::EbfLf: return "ebf_lf";
    case Arm::ZfLf: return "zf_lf";
  }
  return "?";
}

struct Sweep {
  std::vector<double> alpha;     ///< linear
  std::vector<double> rho_d_db;
  std::vector<int> cells;
  std::vector<int> total_bits;
  std::vector<int> desired_bits;  ///< fig5 axis; empty = [3, B_tot-3]
  std::vector<double> alpha_db;   ///< fig8 axis
};

struct ExperimentSpec {
  Figure figure = Figure::Custom;
  Sweep sweep;
  int nt = 2;
  TopologyKind topology = TopologyKind::Circular;
  std::size_t trials = 10000;
  std::uint64_t master_seed = 0;
  std::optional<SplitClamp> clamp;
  RandomDbAlpha alpha_range{-40.0, 0.0};  ///< fig9
  unsigned threads = 0;                   ///< 0 = auto
};

inline constexpr std::size_t kMinTrials = 100;
inline constexpr int kMaxCells = 1000;
inline constexpr int kMaxTotalBits = 20;

/// Default sweep of each figure, 10^4 trials per point.
inline ExperimentSpec default_spec(Figure figure) {
  ExperimentSpec s;
  s.figure = figure;
  Sweep& w = s.sweep;
  w.alpha = {1.0};
  w.rho_d_db = {10.0};
  w.cells = {2};
  w.total_bits = {6};
  switch (figure) {
    case Figure::HighSinrApprox:
      s.nt = 4;
      w.alpha = {0.001, 0.1, 1.0};
      w.rho_d_db = {0.0, 5.0, 10.0, 15.0, 20.0};
      w.cells = {4};
      break;
    case Figure::SumRateVsK:
      s.nt = 4;
      w.alpha = {0.001, 0.1, 1.0};
      w.cells = {2, 3, 4, 5, 6, 8, 10, 12};
      break;
    case Figure::MeanLossVsBd:
      w.alpha = {0.001, 0.1, 1.0};
      w.total_bits = {15};
      break;
    case Figure::CompareStrategies:
      w.alpha = {0.001, 0.01, 0.1, 0.3, 1.0};
      break;
    case Figure::SumRateVsBtot:
      w.alpha = {0.001, 0.1, 1.0};
      w.total_bits = {2, 4, 6, 8, 10, 12, 14, 16};
      break;
    case Figure::SplitVsAlpha:
      w.total_bits = {8};
      for (int db = -40; db <= 0; ++db) w.alpha_db.push_back(db);
      break;
    case Figure::AsymmetricCells:
      s.topology = TopologyKind::FiniteArray;
      w.rho_d_db = {0.0, 5.0, 10.0, 15.0, 20.0};
      w.cells = {200};
      break;
    case Figure::Custom:
      break;
  }
  return s;
}

namespace detail {

struct AxisUse {
  bool alpha_axis = false, rho_axis = false, cells_axis = false, bits_axis = false;
  bool uses_alpha = true, uses_cells = true, uses_nt = true;
  bool equal_split_arms = false;
};

inline AxisUse axis_use(Figure f) {
  AxisUse u;
  switch (f) {
    case Figure::HighSinrApprox: u.alpha_axis = u.rho_axis = true; break;
    case Figure::SumRateVsK: u.alpha_axis = u.cells_axis = true; break;
    case Figure::MeanLossVsBd: u.alpha_axis = true; break;
    case Figure::CompareStrategies: u.alpha_axis = true; u.equal_split_arms = true; break;
    case Figure::SumRateVsBtot: u.alpha_axis = u.bits_axis = true; break;
    case Figure::SplitVsAlpha: u.uses_alpha = u.uses_cells = u.uses_nt = false; break;
    case Figure::AsymmetricCells:
      u.rho_axis = true;
      u.uses_alpha = false;
      u.equal_split_arms = true;
      break;
    case Figure::Custom: u.equal_split_arms = true; break;
  }
  return u;
}

template <class T>
void require_grid(const std::vector<T>& v, bool axis, const char* key) {
  if (v.empty()) throw ConfigError(key, "grid must not be empty");
  if (!axis && v.size() != 1) throw ConfigError(key, "this experiment takes a single value");
}

inline std::vector<int> desired_bits_axis(const ExperimentSpec& s) {
  if (!s.sweep.desired_bits.empty()) return s.sweep.desired_bits;
  const int b = s.sweep.total_bits.front();
  std::vector<int> out;
  const int lo = b >= 6 ? 3 : 0;
  const int hi = b >= 6 ? b - 3 : b;
  for (int d = lo; d <= hi; ++d) out.push_back(d);
  return out;
}

}  // namespace detail

/// Throws ConfigError naming the offending key.
inline void validate(const ExperimentSpec& s) {
  const auto use = detail::axis_use(s.figure);
  const Sweep& w = s.sweep;
  if (s.trials < kMinTrials) throw ConfigError("trials", "need at least 100 trials");
  if (use.uses_nt && (s.nt < 2 || s.nt > 8)) throw ConfigError("nt", "antenna count must be in [2, 8]");
  if (s.figure != Figure::SplitVsAlpha) {
    detail::require_grid(w.rho_d_db, use.rho_axis, "rho-d-db");
  } else {
    detail::require_grid(w.rho_d_db, false, "rho-d-db");
  }
  for (double r : w.rho_d_db)
    if (!std::isfinite(r) || r < -50.0 || r > 60.0) throw ConfigError("rho-d-db", "must lie in [-50, 60] dB");
  if (use.uses_alpha) {
    detail::require_grid(w.alpha, use.alpha_axis, "alpha");
    for (double a : w.alpha)
      if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("alpha", "must lie in [0, 1]");
  }
  if (use.uses_cells) {
    detail::require_grid(w.cells, use.cells_axis, "K");
    for (int k : w.cells)
      if (k < 2 || k > kMaxCells) throw ConfigError("K", "cell count must be in [2, 1000]");
  }
  if (s.figure != Figure::HighSinrApprox && s.figure != Figure::SumRateVsK) {
    detail::require_grid(w.total_bits, use.bits_axis, "btot");
  }
  for (int b : w.total_bits) {
    if (b < 0 || b > kMaxTotalBits) throw ConfigError("btot", "must be in [0, 20], got " + std::to_string(b));
    if (use.equal_split_arms && b % 2 != 0) {
      throw ConfigError("btot", "equal-split arms (gebf_lf_equal, zf_lf) need an even budget, got " +
                                    std::to_string(b) + "; pass an even --btot");
    }
  }
  if (s.figure == Figure::MeanLossVsBd) {
    const int b = w.total_bits.front();
    for (int d : w.desired_bits)
      if (d < 0 || d > b) throw ConfigError("bd", "each B_d must lie in [0, B_tot]");
    if (detail::desired_bits_axis(s).empty()) throw ConfigError("bd", "grid must not be empty");
  }
  if (s.figure == Figure::SplitVsAlpha) {
    if (w.alpha_db.empty()) throw ConfigError("alpha-db", "grid must not be empty");
    for (double a : w.alpha_db)
      if (!(a <= 0.0) || !std::isfinite(a)) throw ConfigError("alpha-db", "must be finite and <= 0 dB");
  }
  if (s.figure == Figure::AsymmetricCells) {
    if (s.alpha_range.hi_db > 0.0 || !(s.alpha_range.lo_db <= s.alpha_range.hi_db)) {
      throw ConfigError("alpha-range-db", "need lo <= hi <= 0");
    }
  }
  if (s.clamp) {
    if (s.clamp->lo > s.clamp->hi) throw ConfigError("clamp-lo", "clamp-lo must not exceed clamp-hi");
    for (int b : w.total_bits)
      if (s.clamp->lo > b || s.clamp->hi < 0) {
        throw ConfigError("clamp-hi", "clamp range does not intersect [0, B_tot]");
      }
  }
}

struct Summary {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t trials = 0;
};

/// Per-trial metric vectors, reduced in trial order.
inline std::vector<Summary> summarize(const std::vector<std::vector<double>>& per_trial) {
  if (per_trial.empty()) return {};
  const std::size_t m = per_trial.front().size();
  std::vector<double> mean(m, 0.0), m2(m, 0.0);
  std::size_t n = 0;
  for (const auto& row : per_trial) {
    ++n;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = row[j] - mean[j];
      mean[j] += d / static_cast<double>(n);
      m2[j] += d * (row[j] - mean[j]);
    }
  }
  std::vector<Summary> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double var = n > 1 ? m2[j] / static_cast<double>(n - 1) : 0.0;
    out[j] = {mean[j], std::sqrt(var / static_cast<double>(n)), n};
  }
  return out;
}

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return derive_seed(master, {trial, role_key(StreamRole::Trial)});
}

/// Split used by `arm` for `user`. Users without an interferer spend every bit on h.
inline BitSplit split_for(Arm arm, const Topology& topology, std::size_t user,
                          const CellParams& p, int nt, const std::optional<SplitClamp>& clamp) {
  const int b = p.total_bits;
  if (!topology.has_interferer(user)) return {b, 0};
  switch (arm) {
    case Arm::GebfLfOptimal:
      return nt == 2 ? optimal_split(b, p.rho_i(), clamp) : best_split_general(b, nt, p.rho_i(), clamp);
    case Arm::GebfLfEqual:
    case Arm::ZfLf:
      return {b / 2, b - b / 2};
    case Arm::EbfLf:
    default:
      return {b, 0};
  }
}

inline Strategy strategy_of(Arm a) {
  switch (a) {
    case Arm::GebfFull:
    case Arm::GebfLfOptimal:
    case Arm::GebfLfEqual: return Strategy::Gebf;
    case Arm::EbfFull:
    case Arm::EbfLf: return Strategy::Ebf;
    case Arm::ZfFull:
    case Arm::ZfLf: return Strategy::Zf;
  }
  return Strategy::Gebf;
}

inline bool is_limited(Arm a) {
  return a == Arm::GebfLfOptimal || a == Arm::GebfLfEqual || a == Arm::EbfLf || a == Arm::ZfLf;
}

/// One evaluation inside a trial: a strategy under given cell parameters, with
/// full CSI (no splits) or limited feedback (one split per user).
struct Job {
  Strategy strategy;
  const std::vector<CellParams>* params;
  std::vector<BitSplit> splits;  ///< empty = full CSI
};

inline Job make_job(Arm arm, const std::vector<CellParams>& params, const Topology& topology, int nt,
                    const std::optional<SplitClamp>& clamp) {
  Job j{strategy_of(arm), &params, {}};
  if (is_limited(arm)) {
    j.splits.reserve(params.size());
    for (std::size_t k = 0; k < params.size(); ++k)
      j.splits.push_back(split_for(arm, topology, k, params[k], nt, clamp));
  }
  return j;
}

inline Job fixed_split_job(Strategy strategy, const std::vector<CellParams>& params,
                           const Topology& topology, int desired_bits) {
  Job j{strategy, &params, {}};
  for (std::size_t k = 0; k < params.size(); ++k) {
    const int b = params[k].total_bits;
    j.splits.push_back(topology.has_interferer(k) ? BitSplit{desired_bits, b - desired_bits} : BitSplit{b, 0});
  }
  return j;
}

/// Evaluates every job on one channel draw. Codebooks are drawn once per user
/// at the largest size any job needs; smaller budgets use their prefixes.
inline std::vector<RateReport> run_jobs(const Topology& topology, const ChannelSet& channels,
                                        std::uint64_t seed, const std::vector<Job>& jobs) {
  const std::size_t k = topology.cells();
  std::vector<int> cap_d(k, -1), cap_i(k, -1);
  for (const auto& j : jobs) {
    for (std::size_t u = 0; u < j.splits.size(); ++u) {
      cap_d[u] = std::max(cap_d[u], j.splits[u].desired_bits);
      cap_i[u] = std::max(cap_i[u], j.splits[u].interfering_bits);
    }
  }
  std::vector<UserFeedbackDraw> draws;
  if (cap_d.front() >= 0) {
    draws.reserve(k);
    for (std::size_t u = 0; u < k; ++u) {
      draws.emplace_back(channels.h[u], channels.g[u], cap_d[u], std::max(cap_i[u], 0),
                         feedback_seeds(seed, u));
    }
  }

  std::vector<RateReport> out;
  out.reserve(jobs.size());
  for (const auto& j : jobs) {
    const auto& params = *j.params;
    if (j.splits.empty()) {
      out.push_back(sinr(channels, plan_full_csi(j.strategy, channels, params, topology), params, topology));
      continue;
    }
    std::vector<QuantizedCsi> fb;
    fb.reserve(k);
    for (std::size_t u = 0; u < k; ++u) fb.push_back(draws[u].csi(j.splits[u], params[u]));
    out.push_back(sinr(channels, plan_limited(j.strategy, wyner::exchange(fb, topology)), params, topology));
  }
  return out;
}

namespace detail {

/// Row labels plus one metric per output slot; `trial` fills the metrics.
struct Plan {
  std::vector<std::string> label_columns;
  std::vector<std::vector<Cell>> labels;
};

inline std::vector<Cell> with(std::vector<Cell> labels, Cell extra) {
  labels.push_back(std::move(extra));
  return labels;
}

}  // namespace detail

/// Raw per-trial metrics for a Monte Carlo figure, in slot order. Row t depends
/// only on (master_seed, t).
struct TrialMatrix {
  std::vector<std::string> label_columns;
  std::vector<std::vector<Cell>> labels;
  std::vector<std::vector<double>> per_trial;
  std::vector<double> extra;  ///< per-slot deterministic column (fig5 bound)
};

inline TrialMatrix simulate_trials(const ExperimentSpec& spec) {
  validate(spec);
  if (spec.figure == Figure::SplitVsAlpha) throw ConfigError("figure", "fig8 is analytic, not Monte Carlo");
  const Sweep& w = spec.sweep;
  const int nt = spec.nt;
  const auto& clamp = spec.clamp;
  TrialMatrix m;
  using detail::with;

  auto params_for = [&](std::size_t cells, double rho_db, double alpha, int bits) {
    return uniform_params(cells, db_to_linear(rho_db), alpha, bits);
  };

  std::function<std::vector<double>(std::size_t)> trial;

  switch (spec.figure) {
    case Figure::HighSinrApprox: {
      m.label_columns = {"alpha", "rho_d_db", "arm"};
      const Topology topo(spec.topology, w.cells.front());
      auto grid = std::make_shared<std::vector<std::vector<CellParams>>>();
      for (double a : w.alpha)
        for (double r : w.rho_d_db) {
          grid->push_back(params_for(topo.cells(), r, a, 0));
          m.labels.push_back({a, r, std::string("exact")});
          m.labels.push_back({a, r, std::string("high_sinr")});
        }
      trial = [=, &spec](std::size_t t) {
        const auto seed = trial_seed(spec.master_seed, t);
        const auto ch = generate(topo, nt, seed);
        std::vector<Job> jobs;
        for (const auto& p : *grid) jobs.push_back(make_job(Arm::GebfFull, p, topo, nt, clamp));
        std::vector<double> out;
        for (const auto& r : run_jobs(topo, ch, seed, jobs)) {
          out.push_back(r.sum_exact);
          out.push_back(r.sum_highsinr);
        }
        return out;
      };
      break;
    }
    case Figure::SumRateVsK: {
      m.label_columns = {"alpha", "K", "arm"};
      auto grid = std::make_shared<std::vector<std::pair<Topology, std::vector<std::vector<CellParams>>>>>();
      for (int k : w.cells) {
        std::vector<std::vector<CellParams>> ps;
        for (double a : w.alpha) ps.push_back(params_for(k, w.rho_d_db.front(), a, 0));
        grid->emplace_back(Topology(spec.topology, k), std::move(ps));
      }
      for (int k : w.cells)
        for (double a : w.alpha) m.labels.push_back({a, std::int64_t{k}, std::string("gebf_full")});
      trial = [=, &spec](std::size_t t) {
        const auto seed = trial_seed(spec.master_seed, t);
        std::vector<double> out;
        for (const auto& [topo, ps] : *grid) {
          const auto cseed = derive_seed(seed, {topo.cells(), role_key(StreamRole::Topology)});
          const auto ch = generate(topo, nt, cseed);
          std::vector<Job> jobs;
          for (const auto& p : ps) jobs.push_back(make_job(Arm::GebfFull, p, topo, nt, clamp));
          for (const auto& r : run_jobs(topo, ch, cseed, jobs)) out.push_back(r.sum_exact);
        }
        return out;
      };
      break;
    }
    case Figure::MeanLossVsBd: {
      m.label_columns = {"B_d", "alpha"};
      const Topology topo(spec.topology, w.cells.front());
      const int bits = w.total_bits.front();
      const auto bd_axis = detail::desired_bits_axis(spec);
      auto grid = std::make_shared<std::vector<std::vector<CellParams>>>();
      for (double a : w.alpha) grid->push_back(params_for(topo.cells(), w.rho_d_db.front(), a, bits));
      // Output order: B_d major, alpha minor.
      for (int d : bd_axis)
        for (std::size_t ai = 0; ai < w.alpha.size(); ++ai) {
          m.labels.push_back({std::int64_t{d}, w.alpha[ai]});
          const auto& p = (*grid)[ai];
          std::vector<BitSplit> splits;
          for (std::size_t u = 0; u < p.size(); ++u)
            splits.push_back(topo.has_interferer(u) ? BitSplit{d, bits - d} : BitSplit{bits, 0});
          m.extra.push_back(total_bound_general(splits, p, nt, topo));
        }
      trial = [=, &spec](std::size_t t) {
        const auto seed = trial_seed(spec.master_seed, t);
        const auto ch = generate(topo, nt, seed);
        std::vector<Job> jobs;
        for (const auto& p : *grid) {
          jobs.push_back(make_job(Arm::GebfFull, p, topo, nt, clamp));
          for (int d : bd_axis) jobs.push_back(fixed_split_job(Strategy::Gebf, p, topo, d));
        }
        const auto reports = run_jobs(topo, ch, seed, jobs);
        const std::size_t stride = bd_axis.size() + 1;
        std::vector<double> out;
        for (std::size_t di = 0; di < bd_axis.size(); ++di)
          for (std::size_t ai = 0; ai < grid->size(); ++ai) {
            const double full = reports[ai * stride].sum_highsinr;
            out.push_back(full - reports[ai * stride + 1 + di].sum_highsinr);
          }
        return out;
      };
      break;
    }
    case Figure::CompareStrategies:
    case Figure::Custom: {
      const bool custom = spec.figure == Figure::Custom;
      m.label_columns = custom ? std::vector<std::string>{"arm"} : std::vector<std::string>{"alpha", "arm"};
      const Topology topo(spec.topology, w.cells.front());
      auto grid = std::make_shared<std::vector<std::vector<CellParams>>>();
      for (double a : w.alpha) {
        grid->push_back(params_for(topo.cells(), w.rho_d_db.front(), a, w.total_bits.front()));
        for (Arm arm : kAllArms) {
          m.labels.push_back(custom ? std::vector<Cell>{std::string(arm_name(arm))}
                                    : std::vector<Cell>{a, std::string(arm_name(arm))});
        }
      }
      trial = [=, &spec](std::size_t t) {
        const auto seed = trial_seed(spec.master_seed, t);
        const auto ch = generate(topo, nt, seed);
        std::vector<Job> jobs;
        for (const auto& p : *grid)
          for (Arm arm : kAllArms) jobs.push_back(make_job(arm, p, topo, nt, clamp));
        std::vector<double> out;
        for (const auto& r : run_jobs(topo, ch, seed, jobs)) out.push_back(r.sum_exact);
        return out;
      };
      break;
    }
    case Figure::SumRateVsBtot: {
      m.label_columns = {"alpha", "B_tot", "arm"};
      const Topology topo(spec.topology, w.cells.front());
      auto grid = std::make_shared<std::vector<std::vector<CellParams>>>();
      for (double a : w.alpha)
        for (int b : w.total_bits) {
          grid->push_back(params_for(topo.cells(), w.rho_d_db.front(), a, b));
          m.labels.push_back({a, std::int64_t{b}, std::string("gebf_lf_opt")});
          m.labels.push_back({a, std::int64_t{b}, std::string("gebf_full")});
        }
      trial = [=, &spec](std::size_t t) {
        const auto seed = trial_seed(spec.master_seed, t);
        const auto ch = generate(topo, nt, seed);
        std::vector<Job> jobs;
        for (const auto& p : *grid) {
          jobs.push_back(make_job(Arm::GebfLfOptimal, p, topo, nt, clamp));
          jobs.push_back(make_job(Arm::GebfFull, p, topo, nt, clamp));
        }
        std::vector<double> out;
        for (const auto& r : run_jobs(topo, ch, seed, jobs)) out.push_back(r.sum_exact);
        return out;
      };
      break;
    }
    case Figure::AsymmetricCells: {
      m.label_columns = {"rho_d_db", "arm"};
      static constexpr std::array<Arm, 5> arms{Arm::GebfFull, Arm::GebfLfOptimal, Arm::GebfLfEqual,
                                               Arm::EbfLf, Arm::ZfLf};
      const Topology topo(spec.topology, w.cells.front());
      const int bits = w.total_bits.front();
      for (double r : w.rho_d_db)
        for (Arm arm : arms) m.labels.push_back({r, std::string(arm_name(arm))});
      const auto rhos = w.rho_d_db;
      const auto range = spec.alpha_range;
      trial = [=, &spec](std::size_t t) {
        const auto seed = trial_seed(spec.master_seed, t);
        const auto ch = generate(topo, nt, seed);
        const auto alphas = alpha_profile(range, topo.cells(), seed);
        std::vector<std::vector<CellParams>> grid;
        for (double r : rhos) {
          std::vector<CellParams> p(topo.cells());
          for (std::size_t u = 0; u < p.size(); ++u) p[u] = {db_to_linear(r), alphas[u], bits};
          grid.push_back(std::move(p));
        }
        std::vector<Job> jobs;
        for (const auto& p : grid)
          for (Arm arm : arms) jobs.push_back(make_job(arm, p, topo, nt, clamp));
        std::vector<double> out;
        const double cells = static_cast<double>(topo.cells());
        for (const auto& r : run_jobs(topo, ch, seed, jobs)) out.push_back(r.sum_exact / cells);
        return out;
      };
      break;
    }
    case Figure::SplitVsAlpha:
      break;
  }

  m.per_trial = parallel_map(spec.trials, spec.threads, trial);
  return m;
}

/// Optimal split over alpha (dB); analytic, independent of trials and seed.
inline ResultTable split_table(const ExperimentSpec& spec) {
  validate(spec);
  const int bits = spec.sweep.total_bits.front();
  const double rho_d = db_to_linear(spec.sweep.rho_d_db.front());
  ResultTable table({"alpha_db", "B_d", "B_i", "B_d_real", "B_d_brute"});
  for (double a_db : spec.sweep.alpha_db) {
    const double rho_i = rho_d * db_to_linear(a_db);
    const BitSplit s = optimal_split(bits, rho_i, spec.clamp);
    const double real = std::clamp(optimal_desired_bits_real(bits, rho_i), 0.0, static_cast<double>(bits));
    table.add_row({a_db, std::int64_t{s.desired_bits}, std::int64_t{s.interfering_bits}, real,
                   std::int64_t{brute_force_split(bits, rho_i).desired_bits}});
  }
  return table;
}

inline ResultTable run(const ExperimentSpec& spec) {
  if (spec.figure == Figure::SplitVsAlpha) return split_table(spec);
  const TrialMatrix m = simulate_trials(spec);
  const auto stats = summarize(m.per_trial);

  if (spec.figure == Figure::MeanLossVsBd) {
    ResultTable table({"B_d", "alpha", "mean_loss_bits", "stderr", "bound_bits"});
    for (std::size_t i = 0; i < stats.size(); ++i) {
      auto row = m.labels[i];
      row.push_back(stats[i].mean);
      row.push_back(stats[i].stderr_);
      row.push_back(m.extra[i]);
      table.add_row(std::move(row));
    }
    return table;
  }

  auto columns = m.label_columns;
  for (const char* c : {"mean", "stderr", "trials"}) columns.emplace_back(c);
  ResultTable table(std::move(columns));
  for (std::size_t i = 0; i < stats.size(); ++i) {
    auto row = m.labels[i];
    row.push_back(stats[i].mean);
    row.push_back(stats[i].stderr_);
    row.push_back(static_cast<std::int64_t>(stats[i].trials));
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace wyner
