#pragma once

// Structured-text descriptions of profiles, exponents and domains.
//
//   const:c   power:a   power:a,coeff:c   power:a,cutoff:R   exp:c (= e^{c r})
//   logpower:a,b   twostep:q1,q2,r0   linear-x   grid:file.csv
//
//   ball:R   shell:t,R   exterior:t   whole   halfline:a,inf   interval:a,b

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "varlp/core_types.hpp"
#include "varlp/errors.hpp"

namespace varlp {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

inline double parse_number(std::string_view text, const std::string& field) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return -kInf;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw parse_error(field, "'" + std::string(text) + "' is not a number");
  return v;
}

inline std::vector<double> parse_numbers(std::string_view args, std::size_t count, const std::string& field,
                                         std::string_view kind) {
  const auto parts = split(args, ',');
  if (args.empty() || parts.size() != count)
    throw parse_error(field, std::string(kind) + " expects " + std::to_string(count) + " comma-separated value(s)");
  std::vector<double> out;
  for (auto p : parts) out.push_back(parse_number(p, field));
  return out;
}

inline std::string spec_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// Two-column node/value table; '#' comments and one non-numeric header line are skipped.
inline RadialProfile read_grid_file(const std::string& path, const std::string& field = "grid") {
  std::ifstream in(path);
  if (!in) throw parse_error(field, "cannot open '" + path + "'");
  std::vector<double> nodes, values;
  std::string line;
  int lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::string cleaned(t);
    for (char& c : cleaned)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ss(cleaned);
    std::string a, b, extra;
    ss >> a >> b;
    const std::string where = path + ":" + std::to_string(lineno);
    try {
      const double r = detail::parse_number(a, where);
      const double v = detail::parse_number(b, where);
      nodes.push_back(r);
      values.push_back(v);
    } catch (const parse_error&) {
      if (!header_allowed) throw parse_error(field, where + ": expected two numeric columns");
    }
    header_allowed = false;
    if (ss >> extra) throw parse_error(field, where + ": expected two columns");
  }
  if (nodes.size() < 2) throw parse_error(field, "'" + path + "' holds fewer than two rows");
  try {
    return RadialProfile::sampled(std::move(nodes), std::move(values));
  } catch (const domain_error& e) {
    throw parse_error(field, e.what());
  }
}

inline RadialProfile parse_profile(std::string_view text, const std::string& field = "profile") {
  text = detail::trim(text);
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  try {
    if (kind == "linear-x" || kind == "identity") {
      if (!args.empty()) throw parse_error(field, "linear-x takes no arguments");
      return RadialProfile::identity();
    }
    if (kind == "const") return RadialProfile::constant(detail::parse_numbers(args, 1, field, kind)[0]);
    if (kind == "exp") return RadialProfile::exponential(detail::parse_numbers(args, 1, field, kind)[0]);
    if (kind == "logpower") {
      const auto v = detail::parse_numbers(args, 2, field, kind);
      return RadialProfile::log_power(v[0], v[1]);
    }
    if (kind == "twostep") {
      const auto v = detail::parse_numbers(args, 3, field, kind);
      return RadialProfile::two_step(v[0], v[1], v[2]);
    }
    if (kind == "power") {
      const auto parts = detail::split(args, ',');
      if (args.empty()) throw parse_error(field, "power expects an exponent");
      const double a = detail::parse_number(parts[0], field);
      double coeff = 1.0;
      std::optional<double> cutoff;
      for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto kv = detail::split(parts[i], ':');
        if (kv.size() != 2) throw parse_error(field, "power options are key:value");
        if (kv[0] == "cutoff")
          cutoff = detail::parse_number(kv[1], field);
        else if (kv[0] == "coeff")
          coeff = detail::parse_number(kv[1], field);
        else
          throw parse_error(field, "unknown power option '" + std::string(kv[0]) + "'");
      }
      if (cutoff) {
        if (coeff != 1.0) return RadialProfile::power_cutoff(a, *cutoff).scaled(coeff);
        return RadialProfile::power_cutoff(a, *cutoff);
      }
      return RadialProfile::power(a, coeff);
    }
    if (kind == "grid") {
      if (args.empty()) throw parse_error(field, "grid expects a file name");
      return read_grid_file(std::string(args), field);
    }
  } catch (const parse_error&) {
    throw;
  } catch (const domain_error& e) {
    throw parse_error(field, e.what());
  }
  throw parse_error(field, "unknown profile kind '" + std::string(kind) + "'");
}

// A bare number is a constant exponent.
inline ExponentSpec parse_exponent(std::string_view text, const std::string& field = "exponent") {
  text = detail::trim(text);
  if (!text.empty() && (std::isdigit(static_cast<unsigned char>(text.front())) || text.front() == '.')) {
    const double p = detail::parse_number(text, field);
    try {
      return ExponentSpec::fixed(p);
    } catch (const domain_error& e) {
      throw parse_error(field, e.what());
    }
  }
  auto prof = parse_profile(text, field);
  try {
    return ExponentSpec::variable(std::move(prof));
  } catch (const domain_error& e) {
    throw parse_error(field, e.what());
  }
}

inline RadialDomain parse_domain(std::string_view text, int n, const std::string& field = "domain") {
  text = detail::trim(text);
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  RadialDomain d;
  if (kind == "whole" || kind == "space") {
    d = RadialDomain::whole_space(n);
  } else if (kind == "ball") {
    d = RadialDomain::ball(n, detail::parse_numbers(args, 1, field, kind)[0]);
  } else if (kind == "exterior") {
    d = RadialDomain::exterior(n, detail::parse_numbers(args, 1, field, kind)[0]);
  } else if (kind == "shell") {
    const auto v = detail::parse_numbers(args, 2, field, kind);
    d = RadialDomain::shell(n, v[0], v[1]);
  } else if (kind == "halfline" || kind == "interval") {
    const auto v = detail::parse_numbers(args, 2, field, kind);
    if (!(v[0] >= 0.0)) throw parse_error(field, "intervals start at a >= 0");
    d = RadialDomain::half_line(v[0], v[1]);
  } else {
    throw parse_error(field, "unknown domain kind '" + std::string(kind) + "'");
  }
  try {
    d.validate();
  } catch (const domain_error& e) {
    throw parse_error(field, e.what());
  }
  return d;
}

inline std::string domain_label(const RadialDomain& d) {
  using detail::spec_number;
  if (d.measure == Measure::interval) return "interval:" + spec_number(d.inner) + "," + spec_number(d.outer);
  if (d.inner == 0.0) return std::isinf(d.outer) ? "whole" : "ball:" + spec_number(d.outer);
  if (std::isinf(d.outer)) return "exterior:" + spec_number(d.inner);
  return "shell:" + spec_number(d.inner) + "," + spec_number(d.outer);
}

}  // namespace varlp
