#pragma once

// Result tables. Numbers go through std::to_chars so the output never depends
// on the global locale; NaN fields are written empty.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "fastbin/random.hpp"
#include "fastbin/stats.hpp"

namespace fastbin::harness {

inline constexpr double kNa = std::numeric_limits<double>::quiet_NaN();

/// One assertion of a verification suite.
struct ResultRow {
  std::string check;  // what is being asserted
  std::string kind;   // embedder kind or estimator
  std::size_t n = 0, m = 0, nprime = 0, B = 0, s = 0, trials = 0;
  SeedSpec seed;
  double mean = kNa, var = kNa, se_mean = kNa, se_var = kNa, bound_rhs = kNa;
  bool pass = false;

  ResultRow& with(const MomentEstimate& e) {
    mean = e.mean;
    var = e.variance;
    se_mean = e.std_error_mean;
    se_var = e.std_error_variance;
    trials = e.trials;
    seed = e.seed;
    return *this;
  }
};

inline const char* kCsvHeader = "check,kind,n,m,nprime,B,s,trials,seed,mean,var,se_mean,se_var,bound_rhs,pass";

inline std::string format_number(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_seed(SeedSpec s) { return std::to_string(s.master) + ":" + std::to_string(s.stream); }

/// Quotes a field only when it needs it.
inline std::string csv_field(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_row(std::ostream& out, const ResultRow& r) {
  out << csv_field(r.check) << ',' << csv_field(r.kind) << ',' << r.n << ',' << r.m << ',' << r.nprime << ',' << r.B
      << ',' << r.s << ',' << r.trials << ',' << format_seed(r.seed) << ',' << format_number(r.mean) << ','
      << format_number(r.var) << ',' << format_number(r.se_mean) << ',' << format_number(r.se_var) << ','
      << format_number(r.bound_rhs) << ',' << (r.pass ? "true" : "false") << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) write_row(out, r);
}

}  // namespace fastbin::harness
