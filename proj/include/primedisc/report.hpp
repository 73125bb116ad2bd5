#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "primedisc/asymptotics.hpp"
#include "primedisc/discrepancy.hpp"
#include "primedisc/rational.hpp"
#include "primedisc/sequences.hpp"

namespace primedisc {

// Text formats shared by the command line tool:
//
//   sequence dump   one `num/den` per line, optional `# family=<f> N=<n>` header
//   scan CSV        k,disc_num,disc_den,disc_float,weighted_num,weighted_den
//   theorem CSV     m,N,p_m,disc_num,disc_den,disc_float,scaled,lower_num,lower_den
//
// Integer columns are exact; float columns carry 17 significant digits.

inline constexpr std::string_view kScanCsvHeader =
    "k,disc_num,disc_den,disc_float,weighted_num,weighted_den";
inline constexpr std::string_view kTheoremCsvHeader =
    "m,N,p_m,disc_num,disc_den,disc_float,scaled,lower_num,lower_den";

/// Shortest-form rendering with 17 significant digits (round-trips a double).
inline std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_sequence(std::ostream& os, std::span<const Fraction> points,
                           std::optional<Family> header_family = std::nullopt) {
  if (header_family)
    os << "# family=" << to_string(*header_family) << " N=" << points.size() << '\n';
  for (const auto& x : points) os << x.num() << '/' << x.den() << '\n';
}

inline void write_scan_row(std::ostream& os, const ScanRecord& r) {
  os << r.k << ',' << r.disc.exact.num() << ',' << r.disc.exact.den() << ','
     << format_float(r.disc.approx) << ',' << r.weighted.num() << ','
     << r.weighted.den() << '\n';
}

inline void write_scan_csv(std::ostream& os, std::span<const ScanRecord> records) {
  os << kScanCsvHeader << '\n';
  for (const auto& r : records) write_scan_row(os, r);
}

/// Theorem row in CSV; the scaled column is empty when N = 1.
inline void write_theorem_row(std::ostream& os, const TheoremRow& r) {
  os << r.m << ',' << r.n << ',' << r.p_m << ',' << r.disc.exact.num() << ','
     << r.disc.exact.den() << ',' << format_float(r.disc.approx) << ',';
  if (r.scaled) os << format_float(*r.scaled);
  os << ',' << r.lower.num() << ',' << r.lower.den();
}

inline nlohmann::ordered_json to_json(std::uint64_t n, const DiscrepancyValue& d) {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["disc_num"] = d.exact.num();
  j["disc_den"] = d.exact.den();
  j["disc_float"] = d.approx;
  j["witness_num"] = d.witness.num();
  j["witness_den"] = d.witness.den();
  j["side"] = std::string(to_string(d.side));
  return j;
}

/// Malformed input line; line() is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses one `num/den` token into a fraction strictly inside (0,1).
inline std::optional<Fraction> parse_fraction(std::string_view token) {
  token = detail::trim(token);
  const auto slash = token.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  const auto num = detail::parse_int(detail::trim(token.substr(0, slash)));
  const auto den = detail::parse_int(detail::trim(token.substr(slash + 1)));
  if (!num || !den || *den < 2 || *num < 1 || *num >= *den) return std::nullopt;
  return Fraction(*num, *den);
}

/// Reads `num/den` lines; blank lines and `#` comments are skipped.
inline std::vector<Fraction> read_fractions(std::istream& in) {
  std::vector<Fraction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos)
      body = body.substr(0, hash);
    body = detail::trim(body);
    if (body.empty()) continue;
    const auto f = parse_fraction(body);
    if (!f)
      throw ParseError(line_no, "expected num/den strictly inside (0,1), got '" +
                                    std::string(body) + "'");
    out.push_back(*f);
  }
  return out;
}

}  // namespace primedisc
