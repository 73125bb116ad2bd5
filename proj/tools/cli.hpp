#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "primedisc/primedisc.hpp"

namespace primedisc::cli {

/// Bad flags or flag combinations; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string format = "";  // empty: command default
  std::string out_path;
  unsigned threads = 0;
  std::int64_t sweep_limit = kDefaultSweepLimit;

  std::string family;
  std::uint64_t n = 0;
  bool header = false;
  std::string input_path;

  std::int64_t prime = 0;
  std::string ordering = "inversive";
  std::int64_t pmin = 2;
  std::int64_t pmax = 0;

  std::string m_range;

  std::string table = "lambert";
  double xmin = 1e-3;
  double xmax = 1e10;
  std::uint64_t points = 25;
  std::uint64_t mmax = 10000;
};

namespace detail {

inline Format resolve_format(const RunConfig& cfg, Format fallback) {
  if (cfg.format.empty()) return fallback;
  if (cfg.format == "csv") return Format::Csv;
  if (cfg.format == "json") return Format::Json;
  throw UsageError("--format must be csv or json");
}

inline Family require_family(const RunConfig& cfg) {
  const auto f = parse_family(cfg.family);
  if (!f) throw UsageError("--family must be eta, omega or prime-increasing");
  return *f;
}

inline Ordering require_ordering(const RunConfig& cfg) {
  const auto o = parse_ordering(cfg.ordering);
  if (!o) throw UsageError("--ordering must be inversive or increasing");
  return *o;
}

inline std::int64_t require_prime(std::int64_t p) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
    throw UsageError(std::to_string(p) + " is not prime");
  return p;
}

/// Table sized for prefixes of `length` elements; Omega needs none.
inline PrimeTable table_for(Family f, std::uint64_t length) {
  return family_uses_primes(f) ? PrimeTable::covering(length) : PrimeTable::build(1);
}

inline std::vector<Fraction> family_prefix(const RunConfig& cfg) {
  const Family f = require_family(cfg);
  if (cfg.n == 0) throw UsageError("--n must be positive");
  const PrimeTable table = table_for(f, cfg.n);
  return generate_prefix(f, cfg.n, table);
}

inline std::vector<Fraction> read_input_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
  return read_fractions(in);
}

/// Parses "a..b" into a block range with 1 <= a <= b.
inline std::pair<std::uint64_t, std::uint64_t> parse_m_range(const std::string& s) {
  const auto dots = s.find("..");
  std::optional<std::int64_t> lo, hi;
  if (dots != std::string::npos) {
    lo = primedisc::detail::parse_int(s.substr(0, dots));
    hi = primedisc::detail::parse_int(s.substr(dots + 2));
  } else {
    lo = hi = primedisc::detail::parse_int(s);
  }
  if (!lo || !hi) throw UsageError("--m expects a range like 1..10");
  if (*lo < 1 || *hi < *lo) throw UsageError("--m range must satisfy 1 <= lo <= hi");
  return {static_cast<std::uint64_t>(*lo), static_cast<std::uint64_t>(*hi)};
}

inline std::string optional_float(std::optional<double> v) {
  return v ? format_float(*v) : std::string();
}

inline nlohmann::ordered_json optional_json(std::optional<double> v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

inline void cmd_gen(const RunConfig& cfg, std::ostream& out) {
  const auto points = detail::family_prefix(cfg);
  write_sequence(out, points,
                 cfg.header ? std::optional(detail::require_family(cfg)) : std::nullopt);
}

inline void cmd_disc(const RunConfig& cfg, std::ostream& out) {
  const Format fmt = detail::resolve_format(cfg, Format::Json);
  std::vector<Fraction> points;
  if (!cfg.input_path.empty()) {
    if (!cfg.family.empty()) throw UsageError("use either --input or --family");
    points = detail::read_input_file(cfg.input_path);
    if (points.empty()) throw std::runtime_error("input contains no fractions");
  } else {
    points = detail::family_prefix(cfg);
  }
  const auto d = star_discrepancy(points);
  if (fmt == Format::Json) {
    out << to_json(points.size(), d).dump() << '\n';
  } else {
    out << "n,disc_num,disc_den,disc_float,witness_num,witness_den,side\n"
        << points.size() << ',' << d.exact.num() << ',' << d.exact.den() << ','
        << format_float(d.approx) << ',' << d.witness.num() << ',' << d.witness.den()
        << ',' << to_string(d.side) << '\n';
  }
}

inline void cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const Format fmt = detail::resolve_format(cfg, Format::Csv);
  std::vector<Fraction> points;
  if (cfg.prime != 0) {
    const BlockSpec spec{detail::require_prime(cfg.prime), detail::require_ordering(cfg)};
    if (spec.p > cfg.sweep_limit)
      throw UsageError("prime " + std::to_string(spec.p) + " exceeds the sweep limit " +
                       std::to_string(cfg.sweep_limit));
    points = generate_block(spec);
  } else if (!cfg.input_path.empty()) {
    points = detail::read_input_file(cfg.input_path);
    if (points.empty()) throw std::runtime_error("input contains no fractions");
  } else if (!cfg.family.empty()) {
    points = detail::family_prefix(cfg);
  } else {
    throw UsageError("scan needs --prime, --family/--n or --input");
  }
  const auto records = prefix_scan(points);

  if (fmt == Format::Csv) {
    write_scan_csv(out, records);
    return;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].weighted > records[best].weighted) best = i;
  nlohmann::ordered_json j;
  j["max_weighted_num"] = records[best].weighted.num();
  j["max_weighted_den"] = records[best].weighted.den();
  j["argmax_k"] = records[best].k;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    auto row = to_json(r.k, r.disc);
    row["weighted_num"] = r.weighted.num();
    row["weighted_den"] = r.weighted.den();
    rows.push_back(row);
  }
  out << j.dump() << '\n';
}

struct BoundsRow {
  std::int64_t p = 0;
  BlockMax max;
  double nw_at_argmax = 0.0;
  bool nw_all_k = false;
  Rational eighth;
};

inline void cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const Format fmt = detail::resolve_format(cfg, Format::Csv);
  const Ordering ordering = detail::require_ordering(cfg);
  if (cfg.pmax < 2) throw UsageError("--pmax must be at least 2");
  if (cfg.pmin < 2 || cfg.pmin > cfg.pmax) throw UsageError("--pmin must lie in [2, pmax]");
  if (cfg.pmax > cfg.sweep_limit)
    throw UsageError("--pmax exceeds the sweep limit " + std::to_string(cfg.sweep_limit));

  std::vector<std::int64_t> primes;
  for (std::int64_t p = cfg.pmin; p <= cfg.pmax; ++p)
    if (is_prime(static_cast<std::uint64_t>(p))) primes.push_back(p);

  const auto rows = parallel_map(primes.size(), cfg.threads, [&](std::size_t i) {
    const BlockSpec spec{primes[i], ordering};
    const auto profile = block_weighted_profile(spec, cfg.sweep_limit);
    BoundsRow row;
    row.p = spec.p;
    row.nw_all_k = true;
    row.max = {profile.front(), 1};
    for (std::size_t k = 1; k <= profile.size(); ++k) {
      const Rational& w = profile[k - 1];
      if (w > row.max.weighted) row.max = {w, k};
      const double bound = nw_bound(spec.p, static_cast<std::int64_t>(k));
      if (static_cast<long double>(w.num()) >
          static_cast<long double>(bound) * static_cast<long double>(w.den()))
        row.nw_all_k = false;
    }
    row.nw_at_argmax = nw_bound(spec.p, static_cast<std::int64_t>(row.max.k));
    row.eighth = Rational(spec.p - 1, 8);
    return row;
  });

  if (fmt == Format::Csv) {
    out << "p,ordering,max_num,max_den,max_float,argmax_k,nw_bound,nw_holds_all_k,"
           "eighth_num,eighth_den,max_ge_eighth\n";
    for (const auto& r : rows) {
      out << r.p << ',' << to_string(ordering) << ',' << r.max.weighted.num() << ','
          << r.max.weighted.den() << ',' << format_float(r.max.weighted.to_double())
          << ',' << r.max.k << ',' << format_float(r.nw_at_argmax) << ','
          << (r.nw_all_k ? 1 : 0) << ',' << r.eighth.num() << ',' << r.eighth.den()
          << ',' << (r.max.weighted >= r.eighth ? 1 : 0) << '\n';
    }
    return;
  }
  auto j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["p"] = r.p;
    row["ordering"] = std::string(to_string(ordering));
    row["max_num"] = r.max.weighted.num();
    row["max_den"] = r.max.weighted.den();
    row["max_float"] = r.max.weighted.to_double();
    row["argmax_k"] = r.max.k;
    row["nw_bound"] = r.nw_at_argmax;
    row["nw_holds_all_k"] = r.nw_all_k;
    row["eighth_num"] = r.eighth.num();
    row["eighth_den"] = r.eighth.den();
    row["max_ge_eighth"] = r.max.weighted >= r.eighth;
    j.push_back(row);
  }
  out << j.dump() << '\n';
}

inline void cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Format fmt = detail::resolve_format(cfg, Format::Csv);
  const auto [m_lo, m_hi] = detail::parse_m_range(cfg.m_range);
  const PrimeTable table = PrimeTable::build(m_hi);

  auto pnt = [&](std::uint64_t m) -> std::optional<double> {
    if (m < 2) return std::nullopt;
    return table.pnt_ratio(m);
  };
  auto sum = [&](std::uint64_t m) -> std::optional<double> {
    if (m < 2) return std::nullopt;
    return table.sum_ratio(m);
  };
  auto masym = [&](std::uint64_t n) -> std::optional<double> {
    if (n < 2) return std::nullopt;
    return m_asymptotic(n);
  };

  if (fmt == Format::Csv) {
    out << kTheoremCsvHeader << ",pnt_ratio,sum_ratio,m_asymptotic\n";
    verify_theorem(table, m_lo, m_hi, [&](const TheoremRow& row) {
      write_theorem_row(out, row);
      out << ',' << detail::optional_float(pnt(row.m)) << ','
          << detail::optional_float(sum(row.m)) << ','
          << detail::optional_float(masym(row.n)) << '\n';
    });
    return;
  }
  auto j = nlohmann::ordered_json::array();
  verify_theorem(table, m_lo, m_hi, [&](const TheoremRow& row) {
    nlohmann::ordered_json r;
    r["m"] = row.m;
    r["N"] = row.n;
    r["p_m"] = row.p_m;
    r["disc_num"] = row.disc.exact.num();
    r["disc_den"] = row.disc.exact.den();
    r["disc_float"] = row.disc.approx;
    r["scaled"] = detail::optional_json(row.scaled);
    r["lower_num"] = row.lower.num();
    r["lower_den"] = row.lower.den();
    r["pnt_ratio"] = detail::optional_json(pnt(row.m));
    r["sum_ratio"] = detail::optional_json(sum(row.m));
    r["m_asymptotic"] = detail::optional_json(masym(row.n));
    j.push_back(r);
  });
  out << j.dump() << '\n';
}

inline void cmd_asym(const RunConfig& cfg, std::ostream& out) {
  const Format fmt = detail::resolve_format(cfg, Format::Csv);
  if (cfg.points < 2) throw UsageError("--points must be at least 2");
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();

  if (cfg.table == "lambert") {
    if (!(cfg.xmin > 0.0) || !(cfg.xmax > cfg.xmin))
      throw UsageError("lambert table needs 0 < xmin < xmax");
    if (fmt == Format::Csv) out << "x,w,fixed_point_residual,identity_residual,w_over_ln\n";
    const double step = std::log(cfg.xmax / cfg.xmin) / static_cast<double>(cfg.points - 1);
    for (std::uint64_t i = 0; i < cfg.points; ++i) {
      const double x = cfg.xmin * std::exp(step * static_cast<double>(i));
      const double w = lambert_w(x);
      const double fixed = std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x));
      const double ident = lambert_identity_residual(x);
      const std::optional<double> ratio =
          x > 1.0 ? std::optional(w / std::log(x)) : std::nullopt;
      if (fmt == Format::Csv) {
        out << format_float(x) << ',' << format_float(w) << ',' << format_float(fixed)
            << ',' << format_float(ident) << ',' << detail::optional_float(ratio) << '\n';
      } else {
        rows.push_back({{"x", x},
                        {"w", w},
                        {"fixed_point_residual", fixed},
                        {"identity_residual", ident},
                        {"w_over_ln", detail::optional_json(ratio)}});
      }
    }
  } else if (cfg.table == "primes") {
    if (cfg.mmax < 2) throw UsageError("--mmax must be at least 2");
    const PrimeTable table = PrimeTable::build(cfg.mmax);
    if (fmt == Format::Csv)
      out << "m,p_m,P_m,pnt_ratio,sum_ratio,m_asymptotic,m_over_asymptotic\n";
    const double step = std::log(static_cast<double>(cfg.mmax) / 2.0) /
                        static_cast<double>(cfg.points - 1);
    std::uint64_t previous = 0;
    for (std::uint64_t i = 0; i < cfg.points; ++i) {
      auto m = static_cast<std::uint64_t>(std::llround(2.0 * std::exp(step * static_cast<double>(i))));
      m = std::clamp<std::uint64_t>(m, 2, cfg.mmax);
      if (m == previous) continue;
      previous = m;
      const std::uint64_t n = table.cumulative_P(m);
      const double predicted = m_asymptotic(n);
      const double ratio = static_cast<double>(m) / predicted;
      if (fmt == Format::Csv) {
        out << m << ',' << table.prime(m) << ',' << n << ','
            << format_float(table.pnt_ratio(m)) << ',' << format_float(table.sum_ratio(m))
            << ',' << format_float(predicted) << ',' << format_float(ratio) << '\n';
      } else {
        rows.push_back({{"m", m},
                        {"p_m", table.prime(m)},
                        {"P_m", n},
                        {"pnt_ratio", table.pnt_ratio(m)},
                        {"sum_ratio", table.sum_ratio(m)},
                        {"m_asymptotic", predicted},
                        {"m_over_asymptotic", ratio}});
      }
    }
  } else {
    throw UsageError("--table must be lambert or primes");
  }
  if (fmt == Format::Json) out << rows.dump() << '\n';
}

/// Parses the command line and runs one command. Returns the process exit
/// code: 0 success, 1 runtime or data error, 2 usage error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Exact star discrepancy of prime-inversive block sequences"};
  app.name("primedisc");
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out_path, "Write output to this file instead of stdout");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = auto)");
  app.add_option("--sweep-limit", cfg.sweep_limit,
                 "Largest prime accepted by quadratic block sweeps")
      ->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 30));

  auto* gen = app.add_subcommand("gen", "Print a prefix of a sequence, one num/den per line");
  gen->add_option("--family", cfg.family, "eta, omega or prime-increasing")->required();
  gen->add_option("--n", cfg.n, "Prefix length")->required();
  gen->add_flag("--header", cfg.header, "Emit a '# family=... N=...' header line");

  auto* disc = app.add_subcommand("disc", "Exact star discrepancy of a point list");
  disc->add_option("--input", cfg.input_path, "File of num/den lines");
  disc->add_option("--family", cfg.family, "Sequence family instead of --input");
  disc->add_option("--n", cfg.n, "Prefix length for --family");

  auto* scan = app.add_subcommand("scan", "Prefix-by-prefix discrepancy table");
  scan->add_option("--prime", cfg.prime, "Scan one block with this prime denominator");
  scan->add_option("--ordering", cfg.ordering, "inversive or increasing");
  scan->add_option("--family", cfg.family, "Scan a sequence prefix instead");
  scan->add_option("--n", cfg.n, "Prefix length for --family");
  scan->add_option("--input", cfg.input_path, "Scan a file of num/den lines");

  auto* bounds = app.add_subcommand("bounds", "Per-prime maximum of k D_k* against bounds");
  bounds->add_option("--pmax", cfg.pmax, "Largest prime")->required();
  bounds->add_option("--pmin", cfg.pmin, "Smallest prime");
  bounds->add_option("--ordering", cfg.ordering, "inversive or increasing");

  auto* verify = app.add_subcommand("verify", "Discrepancy of eta at block boundaries");
  verify->add_option("--m", cfg.m_range, "Block range lo..hi")->required();

  auto* asym = app.add_subcommand("asym", "Lambert W and prime-sum ratio tables");
  asym->add_option("--table", cfg.table, "lambert or primes");
  asym->add_option("--xmin", cfg.xmin, "Smallest x of the lambert grid");
  asym->add_option("--xmax", cfg.xmax, "Largest x of the lambert grid");
  asym->add_option("--points", cfg.points, "Number of grid points");
  asym->add_option("--mmax", cfg.mmax, "Largest block index of the primes table");

  for (auto* sub : {gen, disc, scan, bounds, verify, asym}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    std::ofstream file;
    std::ostringstream buffer;
    // Output is buffered so a failing command leaves no partial file.
    if (gen->parsed()) cmd_gen(cfg, buffer);
    else if (disc->parsed()) cmd_disc(cfg, buffer);
    else if (scan->parsed()) cmd_scan(cfg, buffer);
    else if (bounds->parsed()) cmd_bounds(cfg, buffer);
    else if (verify->parsed()) cmd_verify(cfg, buffer);
    else if (asym->parsed()) cmd_asym(cfg, buffer);

    if (cfg.out_path.empty()) {
      out << buffer.str();
    } else {
      file.open(cfg.out_path);
      if (!file) throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
      file << buffer.str();
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace primedisc::cli
