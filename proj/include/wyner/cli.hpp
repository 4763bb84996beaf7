#pragma once

// `simulate` command-line front end.
//
//   simulate <command> [flags]
//   simulate --list
//
// <command> is a figure driver (fig3 .. fig9, custom) or `split`.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wyner/bitalloc.hpp"
#include "wyner/channel.hpp"
#include "wyner/errors.hpp"
#include "wyner/experiments.hpp"
#include "wyner/parallel.hpp"
#include "wyner/table.hpp"

namespace wyner::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kIoError = 1, kConfigError = 2 };

enum class Format { Csv, Json };

struct Flags {
  std::string command;
  std::vector<int> cells;
  std::optional<int> nt;
  std::vector<double> rho_d_db;
  std::vector<double> alpha;
  std::vector<double> alpha_db;
  std::vector<int> total_bits;
  std::vector<int> desired_bits;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 0;
  std::optional<std::string> topology;
  std::optional<int> clamp_lo;
  std::optional<int> clamp_hi;
  std::optional<double> alpha_lo_db;
  std::optional<double> alpha_hi_db;
  std::string out;
  std::string format = "csv";
  bool list = false;
};

inline void add_flags(CLI::App& app, Flags& f) {
  app.add_option("command", f.command, "figure driver (fig3..fig9, custom) or split");
  app.add_flag("--list", f.list, "list the available figure drivers");
  app.add_option("-K,--K", f.cells, "number of cells (comma-separated grid where the figure sweeps it)")
      ->delimiter(',');
  app.add_option("--nt", f.nt, "transmit antennas per base station");
  app.add_option("--rho-d-db", f.rho_d_db, "desired SNR in dB (grid)")->delimiter(',');
  app.add_option("--alpha", f.alpha, "interference-to-signal power ratio, linear in [0, 1] (grid)")
      ->delimiter(',');
  app.add_option("--alpha-db", f.alpha_db, "interference-to-signal ratio in dB, <= 0 (grid)")->delimiter(',');
  app.add_option("--btot", f.total_bits, "feedback bits per user (grid)")->delimiter(',');
  app.add_option("--bd", f.desired_bits, "desired-channel bits (fig5 grid)")->delimiter(',');
  app.add_option("--trials", f.trials, "Monte Carlo trials per sweep point");
  app.add_option("--seed", f.seed, "master seed")->capture_default_str();
  app.add_option("--topology", f.topology, "circular or finite");
  app.add_option("--clamp-lo", f.clamp_lo, "smallest admissible B_d for the optimal split");
  app.add_option("--clamp-hi", f.clamp_hi, "largest admissible B_d for the optimal split");
  app.add_option("--alpha-lo-db", f.alpha_lo_db, "fig9: lower end of the random alpha range, dB");
  app.add_option("--alpha-hi-db", f.alpha_hi_db, "fig9: upper end of the random alpha range, dB");
  app.add_option("-o,--out", f.out, "output file (default: stdout)");
  app.add_option("--format", f.format, "csv or json")->capture_default_str();
}

inline std::string list_text() {
  std::ostringstream os;
  for (const auto& info : kFigures) os << info.name << "  " << info.summary << '\n';
  os << "split  optimal (B_d, B_i) for one configuration\n";
  return os.str();
}

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("format", "expected csv or json, got '" + s + "'");
}

inline TopologyKind parse_topology(const std::string& s) {
  if (s == "circular") return TopologyKind::Circular;
  if (s == "finite" || s == "finite-array" || s == "linear") return TopologyKind::FiniteArray;
  throw ConfigError("topology", "expected circular or finite, got '" + s + "'");
}

inline std::optional<SplitClamp> clamp_from(const Flags& f, int total_bits) {
  if (!f.clamp_lo && !f.clamp_hi) return std::nullopt;
  return SplitClamp{f.clamp_lo.value_or(0), f.clamp_hi.value_or(total_bits)};
}

/// Applies the flags on top of the figure's defaults.
inline ExperimentSpec build_spec(Figure figure, const Flags& f) {
  ExperimentSpec s = default_spec(figure);
  Sweep& w = s.sweep;
  if (!f.cells.empty()) w.cells = f.cells;
  if (f.nt) s.nt = *f.nt;
  if (!f.rho_d_db.empty()) w.rho_d_db = f.rho_d_db;
  if (!f.alpha.empty() && !f.alpha_db.empty()) {
    throw ConfigError("alpha", "give either --alpha or --alpha-db, not both");
  }
  if (figure == Figure::SplitVsAlpha) {
    if (!f.alpha.empty()) throw ConfigError("alpha", "fig8 sweeps --alpha-db");
    if (!f.alpha_db.empty()) w.alpha_db = f.alpha_db;
  } else {
    if (!f.alpha.empty()) w.alpha = f.alpha;
    if (!f.alpha_db.empty()) {
      w.alpha.clear();
      for (double a : f.alpha_db) {
        if (!(a <= 0.0)) throw ConfigError("alpha-db", "must be <= 0 dB");
        w.alpha.push_back(db_to_linear(a));
      }
    }
  }
  if (!f.total_bits.empty()) w.total_bits = f.total_bits;
  if (!f.desired_bits.empty()) {
    if (figure != Figure::MeanLossVsBd) throw ConfigError("bd", "only fig5 sweeps B_d");
    w.desired_bits = f.desired_bits;
  }
  if (f.trials) s.trials = *f.trials;
  s.master_seed = f.seed;
  if (f.topology) s.topology = parse_topology(*f.topology);
  if (f.alpha_lo_db) s.alpha_range.lo_db = *f.alpha_lo_db;
  if (f.alpha_hi_db) s.alpha_range.hi_db = *f.alpha_hi_db;
  if (!w.total_bits.empty()) s.clamp = clamp_from(f, w.total_bits.front());
  s.threads = threads_from_env();
  validate(s);
  return s;
}

inline std::string topology_name(TopologyKind k) {
  return k == TopologyKind::Circular ? "circular" : "finite";
}

/// Config echo for the JSON metadata block. Thread count is left out on purpose:
/// it never changes the numbers.
inline nlohmann::ordered_json describe(const ExperimentSpec& s) {
  nlohmann::ordered_json c;
  c["figure"] = figure_info(s.figure).name;
  c["K"] = s.sweep.cells;
  c["nt"] = s.nt;
  c["rho_d_db"] = s.sweep.rho_d_db;
  c["alpha"] = s.sweep.alpha;
  c["btot"] = s.sweep.total_bits;
  if (s.figure == Figure::MeanLossVsBd) c["bd"] = detail::desired_bits_axis(s);
  if (s.figure == Figure::SplitVsAlpha) c["alpha_db"] = s.sweep.alpha_db;
  if (s.figure == Figure::AsymmetricCells) {
    c["alpha_range_db"] = {s.alpha_range.lo_db, s.alpha_range.hi_db};
  }
  c["trials"] = s.trials;
  c["topology"] = topology_name(s.topology);
  if (s.clamp) {
    c["clamp_lo"] = s.clamp->lo;
    c["clamp_hi"] = s.clamp->hi;
  } else {
    c["clamp_lo"] = nullptr;
    c["clamp_hi"] = nullptr;
  }
  return c;
}

inline std::string render(const ResultTable& table, const ExperimentSpec& spec, Format format) {
  if (format == Format::Csv) return table.to_csv();
  nlohmann::ordered_json doc;
  doc["metadata"] = {{"version", kVersion}, {"seed", spec.master_seed}, {"config", describe(spec)}};
  doc["columns"] = table.columns();
  doc["rows"] = table.rows_json();
  return doc.dump(2) + "\n";
}

struct IoError : Error {
  using Error::Error;
};

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

inline std::string run_split(const Flags& f) {
  auto single = [](const auto& v, const char* key, auto fallback) {
    if (v.empty()) return fallback;
    if (v.size() != 1) throw ConfigError(key, "split takes a single value");
    return v.front();
  };
  const int bits = single(f.total_bits, "btot", 8);
  if (bits < 0 || bits > kMaxTotalBits) throw ConfigError("btot", "must be in [0, 20]");
  const double rho_db = single(f.rho_d_db, "rho-d-db", 10.0);
  if (!std::isfinite(rho_db)) throw ConfigError("rho-d-db", "must be finite");
  if (!f.alpha.empty() && !f.alpha_db.empty()) {
    throw ConfigError("alpha", "give either --alpha or --alpha-db, not both");
  }
  double alpha = 1.0;
  if (!f.alpha_db.empty()) {
    const double a_db = single(f.alpha_db, "alpha-db", 0.0);
    if (!(a_db <= 0.0)) throw ConfigError("alpha-db", "must be <= 0 dB");
    alpha = db_to_linear(a_db);
  } else {
    alpha = single(f.alpha, "alpha", 1.0);
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha", "must lie in [0, 1]");
  }
  const int nt = f.nt.value_or(2);
  if (nt < 2 || nt > 8) throw ConfigError("nt", "antenna count must be in [2, 8]");
  const auto clamp = clamp_from(f, bits);
  if (clamp && (clamp->lo > clamp->hi || clamp->lo > bits || clamp->hi < 0)) {
    throw ConfigError("clamp-lo", "clamp range does not intersect [0, B_tot]");
  }
  const double rho_i = alpha * db_to_linear(rho_db);
  const BitSplit s = nt == 2 ? optimal_split(bits, rho_i, clamp) : best_split_general(bits, nt, rho_i, clamp);
  return "B_d=" + std::to_string(s.desired_bits) + " B_i=" + std::to_string(s.interfering_bits) + "\n";
}

/// Full CLI. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multicell MISO beamforming simulator", "simulate"};
  Flags f;
  add_flags(app, f);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "simulate: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (f.list) {
      out << list_text();
      return kOk;
    }
    if (f.command.empty()) throw ConfigError("command", "missing command; try --list");
    const Format format = parse_format(f.format);
    if (f.command == "split") {
      emit(run_split(f), f.out, out);
      return kOk;
    }
    const auto figure = parse_figure(f.command);
    if (!figure) throw ConfigError("command", "unknown command '" + f.command + "'; try --list");
    const ExperimentSpec spec = build_spec(*figure, f);
    emit(render(wyner::run(spec), spec, format), f.out, out);
    return kOk;
  } catch (const ConfigError& e) {
    err << "simulate: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "simulate: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "simulate: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace wyner::cli
