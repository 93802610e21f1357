#pragma once

// The fastbin command line:
//
//   fastbin embed      --input points.txt --output codes.txt --kind median --delta 0.25
//   fastbin verify     --suite withoutrad [--scale 0.1] [--csv out.csv]
//   fastbin bench      [--quick] [--csv out.csv]
//   fastbin variance   --kind signed --grid 65536:16,65536:64 --trials 1000
//   fastbin covariance --x1 1,0,0 --x2 ... --y1 ... --y2 ... --trials 1000000
//
// --config FILE supplies defaults: a JSON object or key=value lines, keys
// named like the long flags. Flags given on the command line win.
//
// Exit codes: 0 success, 1 a verification assertion failed, 2 usage or I/O.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastbin/bitcode.hpp"
#include "fastbin/embedding.hpp"
#include "fastbin/harness/bench.hpp"
#include "fastbin/harness/csv.hpp"
#include "fastbin/harness/pointset.hpp"
#include "fastbin/harness/suites.hpp"
#include "fastbin/params.hpp"
#include "fastbin/recipe_json.hpp"
#include "fastbin/stats.hpp"

namespace fastbin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Reads a config file into flat (key, value) pairs. Booleans become bare
/// flags (value "true") or are dropped (false); arrays are comma-joined.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<std::pair<std::string, std::string>> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto j = nlohmann::json::parse(text);
    for (const auto& [key, value] : j.items()) {
      if (value.is_boolean()) {
        if (value.get<bool>()) out.emplace_back(key, "true");
      } else if (value.is_string()) {
        out.emplace_back(key, value.get<std::string>());
      } else if (value.is_array()) {
        std::string joined;
        for (const auto& v : value) {
          if (!joined.empty()) joined += ',';
          joined += v.is_string() ? v.get<std::string>() : v.dump();
        }
        out.emplace_back(key, joined);
      } else {
        out.emplace_back(key, value.dump());
      }
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "config: expected key=value");
    auto trim = [](std::string s) {
      const auto l = s.find_first_not_of(" \t\r");
      const auto r = s.find_last_not_of(" \t\r");
      return l == std::string::npos ? std::string{} : s.substr(l, r - l + 1);
    };
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

/// argv with the config file's entries appended as --key=value, unless the
/// same flag already appears.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (config.empty()) return kept;
  for (const auto& [key, value] : read_config(config)) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : kept) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
    if (present) continue;
    kept.push_back(value == "true" ? flag : flag + "=" + value);
  }
  return kept;
}

namespace detail {

inline RealVector parse_vector(const std::string& text) {
  std::istringstream in(text);
  const PointSet ps = parse_pointset(in, false);
  if (ps.size() != 1) throw DomainError("expected a single vector");
  const auto r = ps.row(0);
  return RealVector(r.begin(), r.end());
}

inline std::ostream* open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return &file;
}

struct EmbedArgs {
  std::string input, output, format = "text", recipe_out;
  std::string kind = "dense", rows = "first_m", variant = "fjlt", shape = "circulant";
  std::size_t m = 0, nprime = 0, blocks = 0, mprime = 0, s = 0;
  std::vector<std::size_t> explicit_rows;
  double delta = 0.0, eta = 0.1;
  ConstantMultipliers c;
  bool normalize = false;
};

inline int run_embed(const EmbedArgs& a, SeedSpec seed) {
  const PointSet points = load_pointset(a.input, a.normalize);
  EmbedderRecipe r;
  r.kind = parse_kind(a.kind);
  r.n = points.dim();
  r.rows = parse_row_mode(a.rows);
  r.variant = parse_variant(a.variant);
  r.block_shape = parse_shape(a.shape);
  r.explicit_rows = a.explicit_rows;
  r.seed = seed;
  r.m = a.m;
  r.nprime = a.nprime;
  r.blocks = a.blocks == 0 ? 1 : a.blocks;
  r.s = a.s;

  if (a.delta > 0.0) {
    const ProblemSize prob{r.n, points.size(), a.delta, a.eta};
    ResolvedParams p;
    switch (r.kind) {
      case EmbedderKind::AcceleratedGaussian: p = resolve_accelerated(r.variant, prob, a.c); break;
      case EmbedderKind::MedianFast: p = resolve_median(r.variant, prob, a.c); break;
      default:
        p.m = dense_bits(prob, a.c);
        p.mprime = p.m;
    }
    // Explicit flags take precedence over the resolved values.
    if (a.nprime == 0) r.nprime = p.nprime;
    if (a.blocks == 0) r.blocks = p.blocks;
    if (a.s == 0) r.s = p.s;
    if (a.m == 0) r.m = r.kind == EmbedderKind::MedianFast ? r.blocks * (a.mprime ? a.mprime : p.mprime) : p.m;
  } else if (r.kind == EmbedderKind::MedianFast && a.mprime != 0 && a.m == 0) {
    r.m = r.blocks * a.mprime;
  }
  if (r.kind != EmbedderKind::MedianFast) r.blocks = 1;
  if (r.m == 0) throw DomainError("embed: give --m (or --mprime), or --delta to derive it");
  std::cout << "resolved: m=" << r.m << " nprime=" << r.nprime << " B=" << r.blocks << " mprime=" << r.mprime()
            << " s=" << r.s << '\n';

  const BinaryEmbedder e = build_embedder(r);
  using clock = std::chrono::steady_clock;
  double t_pre = 0.0, t_sign = 0.0;
  std::vector<BitCode> codes;
  codes.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto t0 = clock::now();
    const RealVector y = e.precondition(points.row(i));
    const auto t1 = clock::now();
    codes.push_back(BitCode::from_values(e.sign_stage(y), e.block_count()));
    const auto t2 = clock::now();
    t_pre += std::chrono::duration<double>(t1 - t0).count();
    t_sign += std::chrono::duration<double>(t2 - t1).count();
  }
  std::cout << "timing: points=" << points.size() << " precondition_ms=" << harness::format_number(t_pre * 1e3)
            << " sign_stage_ms=" << harness::format_number(t_sign * 1e3) << '\n';

  if (a.format == "binary") {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + a.output);
    write_codes_binary(out, codes);
  } else {
    std::ofstream out(a.output);
    if (!out) throw std::runtime_error("cannot write " + a.output);
    write_codes_text(out, codes);
  }
  if (!a.recipe_out.empty()) {
    std::ofstream out(a.recipe_out);
    if (!out) throw std::runtime_error("cannot write " + a.recipe_out);
    out << to_json(r).dump(2) << '\n';
  }
  return kExitOk;
}

/// Embedder family for the variance command.
inline EmbedderFamily family_for(const std::string& kind, RowMode rows) {
  const EmbedderKind k = parse_kind(kind);
  switch (k) {
    case EmbedderKind::DenseGaussian:
      return [](std::size_t n, std::size_t m, SeedSpec s) { return build_dense_embedder(s, n, m); };
    case EmbedderKind::SignedCirculant:
      return [rows](std::size_t n, std::size_t m, SeedSpec s) {
        return build_signed_circulant_embedder(s, n, rows, m);
      };
    case EmbedderKind::SubsampledCirculant:
      return [rows](std::size_t n, std::size_t m, SeedSpec s) {
        return build_subsampled_circulant_embedder(s, n, rows, m);
      };
    default: break;
  }
  throw DomainError("variance: kind must be dense, signed or subsampled");
}

inline std::vector<GridPoint> parse_grid(const std::string& text) {
  std::vector<GridPoint> grid;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw DomainError("grid entries look like n:m, got '" + item + "'");
    grid.push_back({std::stoul(item.substr(0, colon)), std::stoul(item.substr(colon + 1))});
  }
  if (grid.empty()) throw DomainError("empty grid");
  return grid;
}

}  // namespace detail

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(args);
  } catch (const std::exception& e) {
    std::cerr << "fastbin: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Binary embeddings of spherical data into the Hamming cube"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed may follow the subcommand
  std::string seed_text = "0x5eed";
  app.add_option("--seed", seed_text, "Master seed, decimal or 0x-hex")->capture_default_str();

  detail::EmbedArgs ea;
  auto* embed = app.add_subcommand("embed", "Embed a dataset into bit codes");
  embed->add_option("--input", ea.input, "Dataset, one vector per line")->required();
  embed->add_option("--output", ea.output, "Where to write the codes")->required();
  embed->add_option("--format", ea.format)->check(CLI::IsMember({"text", "binary"}))->capture_default_str();
  embed->add_option("--kind", ea.kind)
      ->check(CLI::IsMember({"dense", "accelerated", "subsampled", "signed", "median"}))
      ->capture_default_str();
  embed->add_option("--m", ea.m, "Total code length");
  embed->add_option("--nprime", ea.nprime, "Reduced dimension n'");
  embed->add_option("--B", ea.blocks, "Number of median blocks");
  embed->add_option("--mprime", ea.mprime, "Rows per median block");
  embed->add_option("--s", ea.s, "SJLT column sparsity");
  embed->add_option("--rows", ea.rows)->check(CLI::IsMember({"first_m", "dyadic", "uniform", "explicit"}));
  embed->add_option("--explicit-rows", ea.explicit_rows, "1-based rows for --rows explicit")->delimiter(',');
  embed->add_option("--variant", ea.variant)->check(CLI::IsMember({"fjlt", "sjlt"}));
  embed->add_option("--shape", ea.shape)->check(CLI::IsMember({"circulant", "toeplitz"}));
  embed->add_option("--delta", ea.delta, "Target distortion; derives unset sizes");
  embed->add_option("--eta", ea.eta, "Failure probability")->capture_default_str();
  embed->add_option("--c1", ea.c.c1)->capture_default_str();
  embed->add_option("--c2", ea.c.c2)->capture_default_str();
  embed->add_option("--c3", ea.c.c3)->capture_default_str();
  embed->add_option("--c4", ea.c.c4)->capture_default_str();
  embed->add_flag("--normalize", ea.normalize, "Scale rows to unit length");
  embed->add_option("--recipe-out", ea.recipe_out, "Write the embedder recipe as JSON");

  std::string suite, verify_csv;
  double scale = 1.0;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::vector<std::string> suite_names;
  for (const auto& [name, fn] : harness::suite_registry()) suite_names.push_back(name);
  verify->add_option("--suite", suite)->required()->check(CLI::IsMember(suite_names));
  verify->add_option("--scale", scale, "Multiplier on every trial count")->capture_default_str();
  verify->add_option("--csv", verify_csv, "Output file (default stdout)");

  std::string bench_csv;
  bool quick = false;
  std::size_t reps = 5;
  auto* bench = app.add_subcommand("bench", "Per-point embedding time across n");
  bench->add_option("--csv", bench_csv);
  bench->add_option("--reps", reps)->check(CLI::Range(5, 1000))->capture_default_str();
  bench->add_flag("--quick", quick, "Smaller grid");

  std::string var_kind = "signed", var_rows = "uniform", var_grid, var_pair = "random", var_csv;
  std::size_t var_trials = 1000;
  auto* variance = app.add_subcommand("variance", "Variance of the embedded distance over a grid");
  variance->add_option("--kind", var_kind)->capture_default_str();
  variance->add_option("--rows", var_rows)->capture_default_str();
  variance->add_option("--grid", var_grid, "n:m pairs, comma separated")->required();
  variance->add_option("--pair", var_pair)->check(CLI::IsMember({"random", "alternating"}))->capture_default_str();
  variance->add_option("--trials", var_trials)->capture_default_str();
  variance->add_option("--csv", var_csv);

  std::string x1s, x2s, y1s, y2s, cov_csv;
  double remark_a = -1.0;
  std::size_t cov_trials = 1000000;
  auto* covariance = app.add_subcommand("covariance", "Covariance of two sign-disagreement indicators");
  covariance->add_option("--x1", x1s);
  covariance->add_option("--x2", x2s);
  covariance->add_option("--y1", y1s);
  covariance->add_option("--y2", y2s);
  covariance->add_option("--remark", remark_a, "Use the shared-direction family with this a");
  covariance->add_option("--trials", cov_trials)->capture_default_str();
  covariance->add_option("--csv", cov_csv);

  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const SeedSpec seed{parse_seed(seed_text), 0};
    if (*embed) return detail::run_embed(ea, seed);

    if (*verify) {
      harness::SuiteOptions o;
      o.master = seed.master;
      o.scale = scale;
      const harness::SuiteReport rep = harness::suite_registry().at(suite)(o);
      std::ofstream file;
      harness::write_csv(*detail::open_output(verify_csv, file), rep.rows);
      const bool ok = rep.pass();
      std::cerr << "suite " << suite << ": " << (ok ? "pass" : "FAIL") << '\n';
      return ok ? kExitOk : kExitFail;
    }

    if (*bench) {
      harness::BenchOptions o;
      o.master = seed.master;
      o.reps = reps;
      if (quick) {
        o.grid = {std::size_t{1} << 10, std::size_t{1} << 12, std::size_t{1} << 14};
        o.stage_grid = {std::size_t{1} << 12, std::size_t{1} << 14, std::size_t{1} << 16};
        o.min_rep_seconds = 0.005;
      }
      const auto rows = harness::run_bench(o);
      std::ofstream file;
      harness::write_bench_csv(*detail::open_output(bench_csv, file), rows);
      bool ok = true;
      for (const auto& r : rows) ok = ok && r.pass;
      return ok ? kExitOk : kExitFail;
    }

    if (*variance) {
      const auto grid = detail::parse_grid(var_grid);
      const EmbedderFamily family = detail::family_for(var_kind, parse_row_mode(var_rows));
      Rng pair_rng(seed.fork(1));
      const PairSource pairs = [&](std::size_t n) {
        if (var_pair == "alternating") return harness::alternating_pair(n);
        return std::make_pair(harness::random_unit(pair_rng, n), harness::random_unit(pair_rng, n));
      };
      const VarianceCurve curve = variance_curve(family, grid, pairs, var_trials, SeedSpec{seed.master, 1});
      std::vector<harness::ResultRow> rows;
      for (const auto& row : curve.rows) {
        harness::ResultRow r;
        r.check = "variance";
        r.kind = var_kind;
        r.n = row.point.n;
        r.m = row.point.m;
        r.with(row.estimate);
        r.pass = true;
        rows.push_back(r);
      }
      harness::ResultRow slope;
      slope.check = "loglog slope over m<=sqrt(n)";
      slope.kind = var_kind;
      slope.mean = curve.slope;
      slope.seed = SeedSpec{seed.master, 1};
      slope.pass = true;
      rows.push_back(slope);
      std::ofstream file;
      harness::write_csv(*detail::open_output(var_csv, file), rows);
      return kExitOk;
    }

    if (*covariance) {
      RealVector x1, x2, y1, y2;
      if (remark_a >= 0.0) {
        const double s = std::sqrt(1.0 + remark_a * remark_a);
        x1 = {1, 0, 0};
        x2 = {1 / s, 0, remark_a / s};
        y1 = {0, 1, 0};
        y2 = {0, 1 / s, remark_a / s};
      } else {
        if (x1s.empty() || x2s.empty() || y1s.empty() || y2s.empty()) {
          throw DomainError("covariance: give --x1 --x2 --y1 --y2, or --remark");
        }
        x1 = detail::parse_vector(x1s);
        x2 = detail::parse_vector(x2s);
        y1 = detail::parse_vector(y1s);
        y2 = detail::parse_vector(y2s);
      }
      const CovarianceEstimate est = estimate_indicator_covariance(x1, x2, y1, y2, cov_trials, seed);
      harness::ResultRow r;
      r.check = "|cov|<=8max|<x,y>|+3se";
      r.kind = "indicator_cov";
      r.n = x1.size();
      r.trials = cov_trials;
      r.seed = seed;
      r.mean = est.value;
      r.se_mean = est.std_error;
      r.bound_rhs = est.bound_rhs;
      r.pass = std::abs(est.value) <= est.bound_rhs + 3.0 * est.std_error;
      std::ofstream file;
      harness::write_csv(*detail::open_output(cov_csv, file), {r});
      return r.pass ? kExitOk : kExitFail;
    }
  } catch (const std::exception& e) {
    std::cerr << "fastbin: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fastbin::cli
