// benford_cli: coefficient caches, leading-digit densities, window scans and
// Sato-Tate diagnostics for eta-quotient newforms.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <benford/benford.hpp>

namespace fs = std::filesystem;
using namespace benford;

namespace {

struct RunConfig {
  std::string form = "delta";
  std::uint64_t limit = 0;
  unsigned base = 10;
  std::string digits = "1";
  std::string out_dir = ".";
  std::string cache_dir;
  std::string prime_cache;
  unsigned threads = 1;
};

/// Thrown when a hard validation fails; maps to exit code 1.
struct ValidationFailure : Error {
  using Error::Error;
};

struct LoadedForm {
  EtaQuotientSpec spec;
  std::optional<WeierstrassCurve> curve;
};

LoadedForm resolve_form(const std::string& form) {
  if (auto preset = find_preset(form)) return {preset->spec, preset->curve};
  if (!fs::exists(form)) {
    std::string names;
    for (const auto& p : form_presets()) names += (names.empty() ? "" : ", ") + p.spec.id();
    throw InvalidParams("unknown form '" + form + "' (presets: " + names + "; or a JSON spec path)");
  }
  // {"id": "...", "level": N, "weight": k, "factors": [[m, r], ...] or [{"dilation": m, "exponent": r}, ...]}
  std::ifstream in(form);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(form + ": " + e.what());
  }
  try {
    std::vector<EtaFactor> factors;
    for (const auto& f : j.at("factors")) {
      if (f.is_array()) {
        factors.push_back({f.at(0).get<std::uint64_t>(), f.at(1).get<std::int64_t>()});
      } else {
        factors.push_back({f.at("dilation").get<std::uint64_t>(), f.at("exponent").get<std::int64_t>()});
      }
    }
    EtaQuotientSpec spec(j.at("id").get<std::string>(), std::move(factors), j.at("level").get<std::uint32_t>());
    if (j.contains("weight") && j["weight"].get<unsigned>() != spec.weight()) {
      throw InvalidParams("declared weight " + std::to_string(j["weight"].get<unsigned>()) +
                          " does not match sum(r)/2 = " + std::to_string(spec.weight()));
    }
    return {std::move(spec), std::nullopt};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(form + ": " + e.what());
  }
}

std::string cache_dir(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  if (const char* env = std::getenv("BENFORD_CACHE_DIR"); env && *env) return env;
  return (fs::path(cfg.out_dir) / "cache").string();
}

PrimeSet load_or_sieve(const RunConfig& cfg, std::uint64_t limit) {
  if (!cfg.prime_cache.empty() && fs::exists(cfg.prime_cache)) {
    PrimeSet cached = load_primes(cfg.prime_cache);
    if (cached.limit() >= limit) return cached.restricted(limit);
  }
  if (cfg.prime_cache.empty()) return sieve(limit);
  // Sieve a little past the limit so the stored list proves completeness up
  // to `limit` (the file records no limit of its own).
  const PrimeSet wide = sieve(limit + limit / 50 + 1000);
  save_primes(wide, cfg.prime_cache);
  return wide.restricted(limit);
}

void hard_validate(const CoefficientTable& t, const PrimeSet& primes, const LoadedForm& form) {
  const HeckeReport h = hecke_validate(t);
  if (!h.ok) throw ValidationFailure("Hecke relation fails at n = " + std::to_string(*h.violation));
  const DeligneReport d = deligne_validate(t, primes);
  if (!d.ok) throw ValidationFailure("Deligne bound fails at p = " + std::to_string(*d.violation));
  std::cerr << "validated: " << h.relations_checked << " Hecke relations, " << d.primes_checked
            << " primes under the Deligne bound (max ratio " << format("%.6Lf", d.max_ratio) << " at p = " << d.argmax
            << ")\n";
  if (form.curve && t.weight() == 2) {
    std::size_t checked = 0;
    for (std::uint64_t p : primes) {
      if (p > 10000) break;
      if (t.level() % p == 0) continue;
      if (t(p) != trace_of_frobenius(*form.curve, p)) {
        throw ValidationFailure("a_p differs from p + 1 - #E(F_p) at p = " + std::to_string(p));
      }
      ++checked;
    }
    std::cerr << "validated: a_p = p + 1 - #E(F_p) at " << checked << " good primes\n";
  }
}

struct Workspace {
  LoadedForm form;
  CoefficientTable table;
  PrimeSet primes;
};

/// Loads the coefficient table from the cache when it covers the limit,
/// otherwise computes and stores it.  Validation always runs.
Workspace prepare(const RunConfig& cfg, std::uint64_t limit) {
  LoadedForm form = resolve_form(cfg.form);
  const fs::path dir = cache_dir(cfg);
  fs::create_directories(dir);
  const fs::path path = dir / (form.spec.id() + ".nfc");
  std::optional<CoefficientTable> table;
  if (fs::exists(path)) {
    const TableHeader h = read_table_header(path.string());
    if (h.form_id == form.spec.id() && h.weight == form.spec.weight() && h.level == form.spec.level() &&
        h.limit >= limit) {
      std::cerr << "cache hit: " << path.string() << " (X = " << h.limit << ")\n";
      CoefficientTable full = load_table(path.string());
      std::vector<i128> values(full.values().begin(), full.values().begin() + static_cast<std::ptrdiff_t>(limit));
      table.emplace(full.form_id(), full.weight(), full.level(), std::move(values));
    }
  }
  if (!table) {
    const auto t0 = std::chrono::steady_clock::now();
    table = compute_coefficients(form.spec, limit, cfg.threads);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "computed " << form.spec.id() << " to X = " << limit << " in " << format("%.2f", secs) << " s\n";
    save_table(*table, path.string());
    std::cerr << "wrote " << path.string() << "\n";
  }
  PrimeSet primes = load_or_sieve(cfg, std::max<std::uint64_t>(limit, 2));
  hard_validate(*table, primes, form);
  return {std::move(form), std::move(*table), std::move(primes)};
}

std::string output_path(const RunConfig& cfg, const std::string& form_id, const std::string& analysis,
                        const std::string& ext = "csv") {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / (form_id + "_" + analysis + "_" + std::to_string(cfg.base) + "_" + cfg.digits +
                                   "." + ext))
      .string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path);
  std::cout << "wrote " << path << "\n";
}

DigitString digit_string(const RunConfig& cfg) { return DigitString::parse(cfg.base, cfg.digits); }

std::uint64_t limit_or(const RunConfig& cfg, std::uint64_t fallback) { return cfg.limit ? cfg.limit : fallback; }

/// Parses "3..16", "3,5,7" or "10".
std::vector<unsigned> parse_list(const std::string& s) {
  std::vector<unsigned> out;
  if (auto dots = s.find(".."); dots != std::string::npos) {
    const unsigned lo = static_cast<unsigned>(std::stoul(s.substr(0, dots)));
    const unsigned hi = static_cast<unsigned>(std::stoul(s.substr(dots + 2)));
    if (hi < lo) throw InvalidParams("empty range " + s);
    for (unsigned v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (!tok.empty()) out.push_back(static_cast<unsigned>(std::stoul(tok)));
  }
  if (out.empty()) throw InvalidParams("empty list");
  return out;
}

int cmd_coeffs(const RunConfig& cfg) {
  const Workspace ws = prepare(cfg, limit_or(cfg, 100000));
  std::cout << ws.table.form_id() << ": weight " << ws.table.weight() << ", level " << ws.table.level() << ", X = "
            << ws.table.limit() << "\n";
  for (std::uint64_t n = 1; n <= std::min<std::uint64_t>(10, ws.table.limit()); ++n) {
    std::cout << "  lambda(" << n << ") = " << to_string(ws.table(n)) << "\n";
  }
  return 0;
}

int cmd_table(const RunConfig& cfg) {
  const Workspace ws = prepare(cfg, limit_or(cfg, 100000));
  std::vector<std::uint64_t> xs;
  for (std::uint64_t x : {1000u, 10000u, 100000u}) {
    if (x <= ws.table.limit()) xs.push_back(x);
  }
  const DensitySeries s = arithmetic_density_series(ws.table, ws.primes, digit_string(cfg), xs);
  std::cout << "       x      pi(x)    members    ratio\n";
  for (const Checkpoint& c : s.checkpoints) {
    std::cout << format("%8llu %10.0Lf %10.0Lf  %.5f\n", static_cast<unsigned long long>(c.x), c.denominator,
                        c.numerator, c.ratio);
  }
  write_file(output_path(cfg, ws.table.form_id(), "table"), density_csv(s));
  return 0;
}

int cmd_curve(const RunConfig& cfg) {
  const Workspace ws = prepare(cfg, limit_or(cfg, 2000000));
  const DigitString ds = digit_string(cfg);
  const auto cps = default_checkpoints(ws.table.limit());
  const DensitySeries s = arithmetic_density_series(ws.table, ws.primes, ds, cps);
  double lo = 1, hi = 0;
  for (const Checkpoint& c : s.checkpoints) {
    if (c.x < 100000) continue;
    lo = std::min(lo, c.ratio);
    hi = std::max(hi, c.ratio);
  }
  const double ref = static_cast<double>(benford_expectation(ds));
  write_file(output_path(cfg, ws.table.form_id(), "curve"), density_csv(s));
  write_file(output_path(cfg, ws.table.form_id(), "curve", "svg"),
             density_svg(s, ref,
                         "Proportion of p <= x with " + ws.table.form_id() + " coefficient starting with " +
                             cfg.digits + " (base " + std::to_string(cfg.base) + ")"));
  if (hi >= lo) std::cout << format("range over [1e5, %llu]: %.5f .. %.5f (spread %.5f), reference %.5f\n",
                                    static_cast<unsigned long long>(ws.table.limit()), lo, hi, hi - lo, ref);
  return 0;
}

int cmd_logdensity(const RunConfig& cfg) {
  const Workspace ws = prepare(cfg, limit_or(cfg, 2000000));
  const DigitString ds = digit_string(cfg);
  const DensitySeries s = logarithmic_density_series(ws.table, ws.primes, ds, default_checkpoints(ws.table.limit()));
  write_file(output_path(cfg, ws.table.form_id(), "logdensity"), density_csv(s));
  const Checkpoint& last = s.checkpoints.back();
  std::cout << format("logarithmic density at x = %llu: %.6f; log_b(1 + 1/S) = %.6Lf; difference %+.6f\n",
                      static_cast<unsigned long long>(last.x), last.ratio, benford_expectation(ds),
                      last.ratio - static_cast<double>(benford_expectation(ds)));
  if (s.zero_values) std::cout << s.zero_values << " primes with lambda(p) = 0 counted in the denominator only\n";
  return 0;
}

int cmd_baseline(const RunConfig& cfg) {
  const DigitString ds = digit_string(cfg);
  const auto [arith, logd] = natural_number_baseline(ds, limit_or(cfg, 10000000));
  write_file(output_path(cfg, "naturals", "arithmetic"), density_csv(arith));
  write_file(output_path(cfg, "naturals", "logarithmic"), density_csv(logd));
  std::cout << format("logarithmic density at x = %llu: %.6f; expectation %.6Lf\n",
                      static_cast<unsigned long long>(logd.checkpoints.back().x), logd.checkpoints.back().ratio,
                      benford_expectation(ds));
  return 0;
}

struct WindowOptions {
  bool oscillation = false;
  unsigned c = 2;
  std::string d = "1,2";
  long double alpha = 0, gamma = 0, beta = 0;
};

int cmd_windows(RunConfig cfg, const WindowOptions& wo, bool digits_given) {
  if (wo.oscillation && cfg.base == 2 && !digits_given) cfg.digits = "10";
  const Workspace ws = prepare(cfg, limit_or(cfg, 2000000));
  const DigitString ds = digit_string(cfg);
  std::vector<WindowFamily> fams;
  std::vector<unsigned> ds_list;
  if (wo.oscillation) {
    for (unsigned d : parse_list(wo.d)) {
      fams.push_back(oscillation_windows(cfg.base, wo.c, ws.table.weight(), d));
      ds_list.push_back(d);
    }
  } else {
    if (!(wo.alpha > 0 && wo.gamma > wo.alpha && wo.beta > 1)) {
      throw InvalidParams("custom windows need 0 < alpha < gamma and beta > 1 (or pass --oscillation)");
    }
    fams.push_back({wo.alpha, wo.gamma, wo.beta});
    ds_list.push_back(0);
  }
  int top = -1;
  for (const auto& w : fams) {
    const auto m = max_window_index(w, ws.table.limit());
    if (!m) throw InvalidParams("no window fits below the limit");
    top = top < 0 ? *m : std::min(top, *m);
  }
  std::vector<std::vector<WindowResult>> results;
  for (const auto& w : fams) results.push_back(window_scan(ws.table, ws.primes, ds, w, 0, top));
  write_file(output_path(cfg, ws.table.form_id(), "windows"), window_csv(results, ds_list));
  for (std::size_t f = 0; f < fams.size(); ++f) {
    std::uint64_t members = 0, primes = 0;
    for (const auto& r : results[f]) {
      if (r.n >= top / 2) {
        members += r.members;
        primes += r.primes;
      }
    }
    std::cout << format("d = %u: pooled proportion over n in [%d, %d] = %.4f (%llu primes)\n", ds_list[f], top / 2,
                        top, primes ? static_cast<double>(members) / static_cast<double>(primes) : 0.0,
                        static_cast<unsigned long long>(primes));
  }
  return 0;
}

int cmd_gap(RunConfig cfg, const std::string& bases, unsigned c, long double tol) {
  std::string csv = "b,c,S,gap,error_bound,exceeds_1_40\n";
  bool ok = true;
  const auto bs = parse_list(bases);
  for (unsigned b : bs) {
    const GapResult g = digit_window_gap(b, c, tol);
    const bool pass = b == 2 ? g.gap - g.error_bound > 0 : g.gap - g.error_bound > 1.0L / 40;
    ok = ok && pass;
    csv += format("%u,%u,%s,%.15Lf,%.3Le,%s\n", b, c, b == 2 ? "10" : "1", g.gap, g.error_bound,
                  b == 2 ? (g.gap > 1.0L / 40 ? "yes" : "no") : (pass ? "yes" : "no"));
    std::cout << format("b = %2u  c = %u  gap = %.10Lf  %s\n", b, c, g.gap, pass ? "ok" : "FAILS");
  }
  cfg.base = bs.front();
  cfg.digits = bases;
  std::replace(cfg.digits.begin(), cfg.digits.end(), ',', '-');
  fs::create_directories(cfg.out_dir);
  write_file((fs::path(cfg.out_dir) / ("st_gap_" + cfg.digits + "_" + std::to_string(c) + ".csv")).string(), csv);
  return ok ? 0 : 1;
}

int cmd_satotate(const RunConfig& cfg, unsigned cells, unsigned points, long double ilo, long double ihi) {
  const Workspace ws = prepare(cfg, limit_or(cfg, 2000000));
  const ThetaView v = theta_view(ws.table, ws.primes, cfg.threads);
  const std::uint64_t x = ws.table.limit();
  const auto cell_rows = equal_measure_cells(v, x, cells);
  long double worst = 0;
  for (const Cell& c : cell_rows) worst = std::max(worst, std::fabs(c.empirical - c.expected));
  write_file(output_path(cfg, ws.table.form_id(), "satotate-cells"), cells_csv(cell_rows));
  write_file(output_path(cfg, ws.table.form_id(), "satotate-cdf"), cdf_csv(cdf_rows(v, x, points)));

  const Interval iv(ilo, ihi);
  std::string csv = "x,lo,hi,empirical,st_measure,lhs,rhs,ratio\n";
  for (std::uint64_t cx : multiplicative_grid(x, 10.0L, {}, 100)) {
    const Comparison e = equidistribution_check(v, cx, iv);
    const Comparison k = reciprocal_check(v, cx, iv);
    csv += format("%llu,%.6Lf,%.6Lf,%.10Lg,%.10Lg,", static_cast<unsigned long long>(cx), iv.lo, iv.hi, e.empirical,
                  e.expected) +
           format("%.12Lg,%.12Lg,%.10Lg\n", k.empirical, k.expected, k.empirical / k.expected);
  }
  write_file(output_path(cfg, ws.table.form_id(), "satotate-reciprocal"), csv);
  const Comparison k = reciprocal_check(v, x, iv);
  std::cout << format("x = %llu: max cell error %.5Lf over %u cells; KS %.5Lf; reciprocal-sum ratio on [%.3Lf, %.3Lf] "
                      "= %.5Lf\n",
                      static_cast<unsigned long long>(x), worst, cells, ks_statistic(v, x, points), iv.lo, iv.hi,
                      k.empirical / k.expected);
  return 0;
}

int cmd_sandwich(const RunConfig& cfg, const std::string& ells) {
  const Workspace ws = prepare(cfg, limit_or(cfg, 2000000));
  const ThetaView v = theta_view(ws.table, ws.primes, cfg.threads);
  const DigitString ds = digit_string(cfg);
  std::string csv = "x,ell,lower_base_b,lower_natural,middle,upper_base_b,upper_natural\n";
  for (unsigned ell : parse_list(ells)) {
    for (std::uint64_t x : multiplicative_grid(ws.table.limit(), 10.0L, {}, 10)) {
      const SandwichReport r = reciprocal_sandwich(ws.table, v, ds, ell, x);
      csv += format("%llu,%u,", static_cast<unsigned long long>(x), ell) +
             format("%.10Lg,%.10Lg,%.10Lg,%.10Lg,%.10Lg\n", r.lower_base_b, r.lower_natural, r.middle, r.upper_base_b,
                    r.upper_natural);
    }
  }
  write_file(output_path(cfg, ws.table.form_id(), "sandwich"), csv);
  return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool with_digits = true) {
  sub->add_option("--form", cfg.form, "Preset name or path to a JSON eta-quotient spec")->capture_default_str();
  sub->add_option("--limit", cfg.limit, "Largest index n (default depends on the command)");
  if (with_digits) {
    sub->add_option("--b", cfg.base, "Base")->check(CLI::Range(2, 36))->capture_default_str();
    sub->add_option("--S", cfg.digits, "Leading digit string")->capture_default_str();
  }
  sub->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--cache-dir", cfg.cache_dir, "Coefficient cache directory (env BENFORD_CACHE_DIR)");
  sub->add_option("--prime-cache", cfg.prime_cache, "Prime list cache file");
  sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leading-digit statistics of newform coefficients"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* coeffs = app.add_subcommand("coeffs", "Compute or reuse the coefficient cache");
  add_common(coeffs, cfg, false);
  auto* table = app.add_subcommand("table", "Proportions at x = 10^3, 10^4, 10^5");
  add_common(table, cfg);
  auto* curve = app.add_subcommand("curve", "Running arithmetic density, CSV and SVG");
  add_common(curve, cfg);
  auto* logdensity = app.add_subcommand("logdensity", "Running logarithmic density");
  add_common(logdensity, cfg);
  auto* baseline = app.add_subcommand("baseline", "Densities over all positive integers");
  baseline->add_option("--limit", cfg.limit, "x_max (default 10^7)");
  baseline->add_option("--b", cfg.base, "Base")->check(CLI::Range(2, 36));
  baseline->add_option("--S", cfg.digits, "Leading digit string");
  baseline->add_option("--out", cfg.out_dir, "Output directory");

  WindowOptions wo;
  auto* windows = app.add_subcommand("windows", "Proportions in geometric windows");
  add_common(windows, cfg);
  windows->add_flag("--oscillation", wo.oscillation, "Use the oscillation window families");
  windows->add_option("--c", wo.c, "Window parameter c")->capture_default_str();
  windows->add_option("--d", wo.d, "Comma-separated d values")->capture_default_str();
  windows->add_option("--alpha", wo.alpha, "Custom window start factor");
  windows->add_option("--gamma", wo.gamma, "Custom window end factor");
  windows->add_option("--beta", wo.beta, "Custom window ratio");

  std::string bases = "3..16";
  unsigned gap_c = 10;
  long double tol = 1e-12L;
  auto* gap = app.add_subcommand("gap", "Sato-Tate measure gap between window families");
  gap->add_option("--b", bases, "Bases: 3..16, 2,3,10 or 10")->capture_default_str();
  gap->add_option("--c", gap_c, "c >= 3")->capture_default_str();
  gap->add_option("--tol", tol, "Tail tolerance");
  gap->add_option("--out", cfg.out_dir, "Output directory");

  unsigned cells = 20, points = 200;
  long double ilo = 0, ihi = 0.5L;
  auto* satotate = app.add_subcommand("satotate", "Equidistribution of cos theta_p");
  add_common(satotate, cfg);
  satotate->add_option("--cells", cells, "Equal-measure cells")->capture_default_str();
  satotate->add_option("--points", points, "CDF grid size")->capture_default_str();
  satotate->add_option("--lo", ilo, "Interval start for the reciprocal-sum check");
  satotate->add_option("--hi", ihi, "Interval end for the reciprocal-sum check");

  std::string ells = "41,100,1000";
  auto* sandwich = app.add_subcommand("sandwich", "Reciprocal-prime sandwich");
  add_common(sandwich, cfg);
  sandwich->add_option("--ell", ells, "Comma-separated cutoffs ell")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*coeffs) return cmd_coeffs(cfg);
    if (*table) return cmd_table(cfg);
    if (*curve) return cmd_curve(cfg);
    if (*logdensity) return cmd_logdensity(cfg);
    if (*baseline) return cmd_baseline(cfg);
    if (*windows) return cmd_windows(cfg, wo, windows->count("--S") > 0);
    if (*gap) return cmd_gap(cfg, bases, gap_c, tol);
    if (*satotate) return cmd_satotate(cfg, cells, points, ilo, ihi);
    if (*sandwich) return cmd_sandwich(cfg, ells);
  } catch (const ValidationFailure& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
