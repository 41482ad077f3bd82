// Copyright 2026 The shiftconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "shiftconv/arcs.hpp"
#include "shiftconv/coefficients.hpp"
#include "shiftconv/errors.hpp"
#include "shiftconv/experiments.hpp"
#include "shiftconv/expsum.hpp"
#include "shiftconv/fit.hpp"
#include "shiftconv/report.hpp"
#include "shiftconv/sums.hpp"

namespace shiftconv::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string form = "delta12";
  std::optional<std::uint64_t> n_max;
  std::optional<std::uint64_t> x;
  std::optional<int> x_min_exp;
  std::optional<int> x_max_exp;
  std::optional<double> theta;
  std::optional<std::uint64_t> h_max;
  std::optional<std::uint64_t> q;
  std::optional<int> grid_exp;
  std::optional<double> delta_exp;
  std::string hk = "0/1";
  std::optional<std::string> weight;
  std::optional<std::string> theorem;
  std::optional<std::uint64_t> seed;
  std::string threads = "1";
  std::string cache_dir = ".shiftconv-cache";
  std::string out;
  std::string input;  // positional: config file (verify) or data file (fit)
};

class Context {
 public:
  Context(const Options& o, std::string subcommand, std::vector<std::string> argv,
          std::ostream& out)
      : opts(o),
        sub(std::move(subcommand)),
        args(std::move(argv)),
        out(out),
        executor(make_executor(o.threads)),
        cache(o.cache_dir) {}

  const Options& opts;
  std::string sub;
  std::vector<std::string> args;
  std::ostream& out;
  Executor executor;
  TauCache cache;

  std::uint64_t seed() const { return opts.seed.value_or(0); }

  fs::path stem() const {
    return opts.out.empty() ? fs::path("shiftconv_" + sub) : fs::path(opts.out);
  }

  ConfigEcho echo() const {
    ConfigEcho c;
    c.set("subcommand", sub);
    return c;
  }

  CoefficientTable lambda(std::uint64_t n) const {
    if (n == 0) throw PreconditionError("coefficient range is empty");
    if (auto tau = cache.find(n)) return normalize_gl2(*tau);
    if (n > 2 * kUncachedXLimit) {
      throw ResourceLimitError(fmt::format(
          "tau up to n = {} is not cached in '{}'; runs with X > {} read coefficients from "
          "the cache only. Run `shiftconv coeffs --form delta12 --n-max {} --cache-dir {}` first",
          n, cache.dir().string(), kUncachedXLimit, n, cache.dir().string()));
    }
    TauOptions to;
    to.executor = executor;
    return normalize_gl2(compute_tau(n, to));
  }

  CoefficientTable sym2(std::uint64_t n) const {
    if (n > (std::uint64_t{1} << 16)) {
      throw ResourceLimitError(fmt::format("sym2 table of length {} needs lambda up to {}^2", n, n));
    }
    return sym2_lift(lambda(n * n), n);
  }

  /// f(1..n) for --form: delta12, sym2, or a coefficient file.
  CoefficientTable table(std::uint64_t n) const {
    if (opts.form == "delta12") return lambda(n);
    if (opts.form == "sym2") return sym2(n);
    if (!fs::exists(opts.form)) {
      throw PreconditionError("--form must be delta12, sym2 or an existing coefficient file, got '" +
                              opts.form + "'");
    }
    auto t = load_user_coefficients(opts.form);
    if (t.n_max() < n) {
      throw RangeError(fmt::format("{} holds n <= {}, run needs n <= {}", opts.form, t.n_max(), n));
    }
    return t;
  }

  void emit(const ReportFiles& files, const fs::path& stem) const {
    write_report(files, stem);
    nlohmann::ordered_json meta;
    meta["generated_at"] = utc_timestamp();
    meta["threads"] = executor.threads();
    meta["argv"] = args;
    std::ofstream(fs::path(stem.string() + ".meta.json")) << meta.dump(2) << '\n';
    out << "wrote " << stem.string() << ".{csv,json,meta.json}\n";
  }

 private:
  static Executor make_executor(const std::string& threads) {
    if (threads == "auto") return Executor::automatic();
    unsigned n = 0;
    const auto* end = threads.data() + threads.size();
    auto [p, ec] = std::from_chars(threads.data(), end, n);
    if (ec != std::errc() || p != end || n == 0) {
      throw PreconditionError("--threads must be a positive integer or 'auto'");
    }
    return Executor(n);
  }

  static std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }
};

std::string fmt_num(double v) { return format_double(v); }

std::string fmt_complex(Complex z) {
  return fmt::format("{}{}{}i", format_double(z.real()), z.imag() < 0 ? "" : "+",
                     format_double(z.imag()));
}

template <typename T>
T require(const std::optional<T>& v, const char* flag, const std::string& sub) {
  if (!v) throw PreconditionError(fmt::format("{} requires {}", sub, flag));
  return *v;
}

std::uint64_t pow2(int e, const char* flag) {
  if (e < 0 || e > 40) throw PreconditionError(fmt::format("{} must be in [0, 40]", flag));
  return std::uint64_t{1} << e;
}

std::vector<std::uint64_t> dyadic(const Options& o, const std::string& sub) {
  const int lo = require(o.x_min_exp, "--x-min-exp", sub);
  const int hi = require(o.x_max_exp, "--x-max-exp", sub);
  if (lo < 1 || hi < lo || hi > 40) {
    throw PreconditionError("X grid exponents must satisfy 1 <= min <= max <= 40");
  }
  std::vector<std::uint64_t> xs;
  for (int e = lo; e <= hi; ++e) xs.push_back(std::uint64_t{1} << e);
  return xs;
}

// coeffs ---------------------------------------------------------------------

void cmd_coeffs(const Context& c) {
  const auto& o = c.opts;
  const std::uint64_t n = require(o.n_max, "--n-max", c.sub);
  auto cfg = c.echo();
  cfg.set("form", o.form).set("n_max", n).set("seed", c.seed());

  if (o.form == "delta12") {
    TauOptions to;
    to.executor = c.executor;
    const auto tau = TauCache(c.cache).load_or_compute(n, to);
    c.out << "tau: n_max=" << n << " cache=" << c.cache.path_for(n).string() << '\n';
    HeckeOptions ho;
    ho.seed = c.seed();
    const auto hecke = verify_hecke(tau, 1000, ho);
    const auto lam = normalize_gl2(tau);
    const auto deligne = find_deligne_violation(lam);
    c.out << "hecke: " << (hecke.passed ? "passed" : "FAILED") << " ("
          << (hecke.exhaustive ? "exhaustive" : "sampled") << ", " << hecke.checks
          << " checks)\n";
    if (deligne) {
      c.out << "deligne: violated at n=" << *deligne << '\n';
    } else {
      c.out << "deligne: |lambda(n)| <= d(n) for n <= " << n << '\n';
    }
    c.emit(render_coefficients(cfg, lam, 32), c.stem());
    c.emit(render_hecke(cfg, hecke, deligne, n), c.stem().string() + "_verification");
    return;
  }
  const auto table = c.table(n);
  c.out << "coefficients: form=" << o.form << " n_max=" << table.n_max() << '\n';
  c.emit(render_coefficients(cfg, table, 32), c.stem());
}

// sums -----------------------------------------------------------------------

void cmd_sums(const Context& c) {
  const auto& o = c.opts;
  const std::uint64_t X = require(o.x, "--x", c.sub);
  const std::uint64_t H = require(o.h_max, "--h-max", c.sub);
  const std::string wname = o.weight.value_or("none");
  const auto w = parse_weight(wname);
  if (!w) throw PreconditionError("--weight must be none, lambda or sym2");

  ShiftedSumSpec spec{X, H, c.table(2 * X), c.table(2 * X), std::nullopt};
  if (*w == WeightKind::kLambda) spec.weight = c.lambda(H);
  if (*w == WeightKind::kSym2) spec.weight = c.sym2(H);

  auto cfg = c.echo();
  cfg.set("form", o.form).set("X", X).set("H", H).set("weight", std::string(to_string(*w)));
  const auto result = averaged_shifted_sum(spec, c.executor);
  for (std::size_t i = 0; i < result.per_h.size(); ++i) {
    c.out << "h=" << i + 1 << " S=" << fmt_complex(result.per_h[i]) << '\n';
  }
  c.out << "aggregate=" << fmt_complex(result.aggregate) << " |.|=" << fmt_num(result.abs_aggregate)
        << '\n';
  c.emit(render_shifted_sums(cfg, result), c.stem());

  if (!spec.weight) {
    const auto reordered = reordered_average(spec.f, spec.g, X, H, c.executor);
    const double rel = std::abs(reordered - result.aggregate) /
                       std::max(std::abs(result.aggregate), 1e-300);
    c.out << "reordered=" << fmt_complex(reordered) << " rel_diff=" << fmt_num(rel) << '\n';
    c.emit(render_reordered(cfg, reordered), c.stem().string() + "_reordered");
  }
}

// expsum ---------------------------------------------------------------------

void cmd_expsum(const Context& c) {
  const auto& o = c.opts;
  if (o.x) {
    const std::uint64_t X = *o.x;
    const std::uint64_t G = o.grid_exp ? pow2(*o.grid_exp, "--grid-exp") : std::bit_ceil(8 * X);
    const auto f = c.table(2 * X);
    auto cfg = c.echo();
    cfg.set("form", o.form).set("X", X).set("G", G);
    const auto grid = exp_sum_grid(f, X, G);
    const double ms = grid_mean_square(grid);
    const double sm = second_moment(f, X);
    c.out << "X=" << X << " G=" << G << " mean_square=" << fmt_num(ms)
          << " second_moment=" << fmt_num(sm)
          << " rel_diff=" << fmt_num(std::abs(ms - sm) / std::max(sm, 1e-300)) << '\n';
    c.emit(render_grid_summary(cfg, grid, sm), c.stem());
    save_grid_binary(grid, c.stem().string() + ".grid.bin");
    return;
  }
  const auto xs = dyadic(o, c.sub);
  // --grid-exp k switches to the grid maximum with oversampling 2^k.
  const ScanMode mode = o.grid_exp ? ScanMode::kGridMax : ScanMode::kPartialSumMax;
  const std::uint64_t oversample = o.grid_exp ? pow2(*o.grid_exp, "--grid-exp") : 1;
  const double exponent = mode == ScanMode::kPartialSumMax ? 1.0 / 3.0 : 0.5;
  const auto f = c.table(xs.back());
  auto cfg = c.echo();
  cfg.set("form", o.form)
      .set("x_min_exp", std::int64_t{*o.x_min_exp})
      .set("x_max_exp", std::int64_t{*o.x_max_exp})
      .set("mode", std::string(mode == ScanMode::kGridMax ? "grid_max" : "partial_sum_max"))
      .set("oversample", oversample)
      .set("theoretical_exponent", exponent);
  const auto report = uniform_bound_scan(f, xs, oversample, exponent, mode, c.executor);
  for (const auto& r : report.rows) {
    c.out << "X=" << r.X << " max=" << fmt_num(r.max_abs) << " ratio=" << fmt_num(r.ratio) << '\n';
  }
  if (report.fit) c.out << "fitted exponent=" << fmt_num(report.fit->slope) << '\n';
  c.emit(render_scan(cfg, report), c.stem());
}

// arcs -----------------------------------------------------------------------

void cmd_arcs(const Context& c) {
  const auto& o = c.opts;
  auto cfg = c.echo();
  if (o.x && o.h_max) {
    const std::uint64_t X = *o.x, H = *o.h_max;
    const std::uint64_t Q = require(o.q, "--q", c.sub);
    const std::uint64_t G = o.grid_exp ? pow2(*o.grid_exp, "--grid-exp") : std::bit_ceil(8 * X);
    const auto f = c.table(2 * X);
    cfg.set("form", o.form).set("X", X).set("H", H).set("Q", Q).set("G", G);
    const auto d = arc_decomposed_average(f, f, X, H, Q, G, c.executor);
    for (const auto& a : d.arcs) {
      c.out << "arc " << a.a << "/" << a.q << " value=" << fmt_complex(a.value) << '\n';
    }
    c.out << "major=" << fmt_complex(d.major.value) << " minor=" << fmt_complex(d.minor_total)
          << " total=" << fmt_complex(d.total) << " exact=" << fmt_complex(d.exact)
          << " rel_err=" << fmt_num(d.relative_error) << '\n';
    c.emit(render_arc_decomposition(cfg, d), c.stem());
    return;
  }
  if (o.x && o.theta) {
    const std::uint64_t X = *o.x;
    const double theta = *o.theta;
    const std::uint64_t G = o.grid_exp ? pow2(*o.grid_exp, "--grid-exp") : std::bit_ceil(8 * X);
    const auto span = static_cast<std::uint64_t>(std::floor(1.0 / theta)) + 2;
    const auto f = c.table(2 * X + span);
    cfg.set("form", o.form).set("X", X).set("theta", theta).set("G", G);
    const auto g = gallagher_compare(f, X, theta, G);
    c.out << "X=" << X << " theta=" << fmt_num(theta) << " lhs=" << fmt_num(g.lhs)
          << " rhs=" << fmt_num(g.rhs) << " ratio=" << (g.ratio ? fmt_num(*g.ratio) : "n/a")
          << '\n';
    c.emit(render_gallagher(cfg, std::span<const GallagherReport>(&g, 1)), c.stem());
    return;
  }
  const std::uint64_t Q = require(o.q, "--q", c.sub);
  cfg.set("Q", Q);
  const auto d = dirichlet_dissection(Q);
  const auto check = check_dissection(d);
  for (const auto& a : d.arcs) {
    c.out << a.a << "/" << a.q << " [" << a.lo << ", " << a.hi << ")\n";
  }
  c.out << "arcs=" << d.arcs.size() << " total_length=" << check.total_length
        << " partition=" << (check.ok() ? "ok" : "BROKEN") << '\n';
  c.emit(render_arc_table(cfg, d, check), c.stem());
}

// variance -------------------------------------------------------------------

std::pair<std::int64_t, std::uint64_t> parse_hk(const std::string& s) {
  const auto slash = s.find('/');
  std::int64_t h = 0;
  std::uint64_t k = 0;
  bool ok = slash != std::string::npos;
  if (ok) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto r1 = std::from_chars(b, b + slash, h);
    auto r2 = std::from_chars(b + slash + 1, e, k);
    ok = r1.ec == std::errc() && r1.ptr == b + slash && r2.ec == std::errc() && r2.ptr == e;
  }
  if (!ok) throw PreconditionError("--hk expects h/k, got '" + s + "'");
  return {h, k};
}

void cmd_variance(const Context& c) {
  const auto& o = c.opts;
  const auto Ms = dyadic(o, c.sub);
  const double de = o.delta_exp.value_or(0.3);
  const auto [h, k] = parse_hk(o.hk);
  const auto delta = [&](std::uint64_t M) { return std::pow(static_cast<double>(M), de); };
  const std::uint64_t need =
      2 * Ms.back() + static_cast<std::uint64_t>(std::floor(delta(Ms.back()))) + 1;
  const auto lam = c.table(need);
  auto cfg = c.echo();
  cfg.set("form", o.form)
      .set("x_min_exp", std::int64_t{*o.x_min_exp})
      .set("x_max_exp", std::int64_t{*o.x_max_exp})
      .set("delta_exp", de)
      .set("h", h)
      .set("k", k)
      .set("mode", std::string("fixed"));
  std::vector<VariancePoint> points;
  std::vector<std::pair<double, double>> fit_points;
  for (const auto M : Ms) {
    points.push_back(short_interval_variance(lam, M, delta(M), h, k, false, c.executor));
    const auto& p = points.back();
    fit_points.emplace_back(p.Delta, p.variance / static_cast<double>(M));
    c.out << "M=" << M << " Delta=" << fmt_num(p.Delta) << " variance=" << fmt_num(p.variance)
          << " normalized=" << fmt_num(p.normalized())
          << (p.in_lemma_regime ? "" : " (k > Delta^{1/4})") << '\n';
  }
  std::optional<ExponentFit> fit;
  if (fit_points.size() >= 3) {
    fit = fit_exponent(fit_points);
    c.out << "fitted exponent in Delta=" << fmt_num(fit->slope) << '\n';
  }
  c.emit(render_variance(cfg, points, fit), c.stem());
}

// verify ---------------------------------------------------------------------

void cmd_verify(const Context& c) {
  const auto& o = c.opts;
  BoundCheckConfig bc;
  if (!o.input.empty()) {
    std::ifstream in(o.input);
    if (!in) throw PreconditionError("cannot read config file '" + o.input + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    bc = parse_bound_config(ss.str());
  }
  if (o.theorem) {
    auto t = parse_theorem(*o.theorem);
    if (!t) throw PreconditionError("--theorem must be main, gl3 or weighted");
    bc.theorem = *t;
  }
  if (o.weight) {
    auto w = parse_weight(*o.weight);
    if (!w) throw PreconditionError("--weight must be none, lambda or sym2");
    bc.weight = *w;
  }
  if (o.x_min_exp) bc.x_min_exp = *o.x_min_exp;
  if (o.x_max_exp) bc.x_max_exp = *o.x_max_exp;
  if (o.theta) bc.theta = *o.theta;
  if (o.seed) bc.seed = *o.seed;
  validate_bound_config(bc);

  const std::uint64_t x_max = std::uint64_t{1} << bc.x_max_exp;
  auto cfg = c.echo();
  cfg.set("theorem", std::string(to_string(bc.theorem)))
      .set("form", o.form)
      .set("x_min_exp", std::int64_t{bc.x_min_exp})
      .set("x_max_exp", std::int64_t{bc.x_max_exp})
      .set("theta", bc.theta)
      .set("b1", bc.b1)
      .set("b2", bc.b2)
      .set("a1", bc.a1)
      .set("a2", bc.a2)
      .set("weight", std::string(to_string(bc.weight)))
      .set("seed", bc.seed)
      .set("slope_threshold", bc.threshold());

  BoundReport report;
  switch (bc.theorem) {
    case Theorem::kMain: {
      const auto f = c.table(2 * x_max);
      report = check_theorem_main(bc, f, f, c.executor);
      break;
    }
    case Theorem::kGl3: {
      if (o.form != "delta12") throw PreconditionError("verify --theorem gl3 uses --form delta12");
      // Lambda_F(n) needs lambda up to n^2, so the lambda table size caps
      // the X grid: by default 2^20, giving Lambda_F up to 1024.
      const std::uint64_t n_lam = o.n_max.value_or(std::min<std::uint64_t>(
          (2 * x_max) * (2 * x_max), std::uint64_t{1} << 20));
      const auto lam = c.lambda(n_lam);
      const std::uint64_t n_sym = std::min<std::uint64_t>(2 * x_max, sym2_capacity(lam));
      cfg.set("n_max", n_lam).set("sym2_n_max", n_sym);
      report = check_corollary_gl3(bc, lam, sym2_lift(lam, n_sym), c.executor);
      break;
    }
    case Theorem::kWeighted: {
      const auto f = c.table(2 * x_max);
      const auto lam = c.lambda(2 * x_max);
      std::optional<CoefficientTable> w;
      const std::uint64_t h_top = bc.h_for(x_max);
      if (bc.weight == WeightKind::kLambda) w = lam;
      if (bc.weight == WeightKind::kSym2) w = c.sym2(h_top);
      report = check_weighted(bc, f, lam, w, c.executor);
      break;
    }
  }
  for (const auto& r : report.rows) {
    c.out << "X=" << r.X << " H=" << r.H << " lhs=" << fmt_num(r.lhs) << " rhs=" << fmt_num(r.rhs)
          << " ratio=" << fmt_num(r.ratio);
    if (r.split_alpha) c.out << " alpha=" << fmt_num(*r.split_alpha);
    c.out << '\n';
  }
  for (const auto& n : report.notes) c.out << "note: " << n << '\n';
  c.out << "verdict: " << to_string(report.verdict);
  if (report.fit) c.out << " (ratio slope " << fmt_num(report.fit->slope) << ")";
  c.out << '\n';
  c.emit(render_bound_report(cfg, report), c.stem());
}

// fit ------------------------------------------------------------------------

std::vector<std::pair<double, double>> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read '" + path + "'");
  std::vector<std::pair<double, double>> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a) || a[0] == '#') continue;
    if (!(ls >> b)) throw ParseError("expected two columns", line_no);
    char* end_a = nullptr;
    char* end_b = nullptr;
    const double x = std::strtod(a.c_str(), &end_a);
    const double y = std::strtod(b.c_str(), &end_b);
    if (*end_a != '\0' || *end_b != '\0') {
      if (pts.empty() && line_no == 1) continue;  // header row
      throw ParseError("non-numeric value", line_no);
    }
    pts.emplace_back(x, y);
  }
  return pts;
}

void cmd_fit(const Context& c) {
  const auto& o = c.opts;
  auto cfg = c.echo();
  if (!o.input.empty()) {
    const auto pts = read_points(o.input);
    cfg.set("input", fs::path(o.input).filename().string()).set("points", std::uint64_t{pts.size()});
    const auto fit = fit_exponent(pts);
    c.out << "slope=" << fmt_num(fit.slope) << " intercept=" << fmt_num(fit.intercept)
          << " r2=" << fmt_num(fit.r_squared) << '\n';
    c.emit(render_fit(cfg, fit), c.stem());
    return;
  }
  const auto xs = dyadic(o, c.sub);
  const double a_rule = o.theta.value_or(0.3);
  const auto a_top = std::pow(static_cast<double>(xs.back()), a_rule);
  const auto f = c.table(2 * xs.back() + static_cast<std::uint64_t>(a_top) + 1);
  cfg.set("form", o.form)
      .set("x_min_exp", std::int64_t{*o.x_min_exp})
      .set("x_max_exp", std::int64_t{*o.x_max_exp})
      .set("a_rule", a_rule);
  const auto m = fclass_membership(f, xs, a_rule, c.executor);
  for (const auto& r : m.rows) {
    c.out << "X=" << r.X << " A=" << fmt_num(r.A) << " variance=" << fmt_num(r.variance_integral)
          << " second_moment=" << fmt_num(r.second_moment) << '\n';
  }
  c.out << "b_hat=" << fmt_num(m.b_hat.slope) << " a2_hat=" << fmt_num(m.a2_hat.slope) << '\n';
  c.emit(render_fclass(cfg, m), c.stem());
}

// wiring ---------------------------------------------------------------------

enum Flag : unsigned {
  kForm = 1u << 0,
  kNMax = 1u << 1,
  kX = 1u << 2,
  kXRange = 1u << 3,
  kTheta = 1u << 4,
  kHMax = 1u << 5,
  kQ = 1u << 6,
  kGridExp = 1u << 7,
  kDeltaExp = 1u << 8,
  kHk = 1u << 9,
  kWeight = 1u << 10,
  kTheorem = 1u << 11,
  kInput = 1u << 12,
};

CLI::App* add_command(CLI::App& app, Options& o, const char* name, const char* help,
                      unsigned flags) {
  auto* s = app.add_subcommand(name, help);
  if (flags & kForm) s->add_option("--form", o.form, "delta12, sym2, or a coefficient file");
  if (flags & kNMax) s->add_option("--n-max", o.n_max, "Coefficient table length");
  if (flags & kX) s->add_option("--x", o.x, "X");
  if (flags & kXRange) {
    s->add_option("--x-min-exp", o.x_min_exp, "Smallest X = 2^e of the dyadic grid");
    s->add_option("--x-max-exp", o.x_max_exp, "Largest X = 2^e of the dyadic grid");
  }
  if (flags & kTheta) s->add_option("--theta", o.theta, "H = X^theta");
  if (flags & kHMax) s->add_option("--h-max", o.h_max, "Largest shift H");
  if (flags & kQ) s->add_option("--q", o.q, "Dissection level Q");
  if (flags & kGridExp) s->add_option("--grid-exp", o.grid_exp, "DFT grid size 2^e");
  if (flags & kDeltaExp) s->add_option("--delta-exp", o.delta_exp, "Delta = M^e (default 0.3)");
  if (flags & kHk) s->add_option("--hk", o.hk, "Twist h/k (default 0/1)");
  if (flags & kWeight) s->add_option("--weight", o.weight, "none, lambda or sym2");
  if (flags & kTheorem) s->add_option("--theorem", o.theorem, "main, gl3 or weighted");
  s->add_option("--seed", o.seed, "Random seed (default 0)");
  s->add_option("--threads", o.threads, "Worker threads or 'auto' (default 1)");
  s->add_option("--cache-dir", o.cache_dir, "Tau cache directory");
  s->add_option("--out", o.out, "Report stem; writes <stem>.csv and <stem>.json");
  if (flags & kInput) s->add_option("input", o.input, "Input file");
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"shiftconv: shifted convolution sums of Hecke eigenvalues"};
  app.name("shiftconv");
  app.require_subcommand(1);
  Options o;
  using Handler = void (*)(const Context&);
  const std::vector<std::pair<CLI::App*, Handler>> commands = {
      {add_command(app, o, "coeffs", "Compute, cache and check coefficient tables",
                   kForm | kNMax),
       cmd_coeffs},
      {add_command(app, o, "sums", "Shifted convolution sums averaged over h <= H",
                   kForm | kX | kHMax | kWeight),
       cmd_sums},
      {add_command(app, o, "expsum", "Exponential sums on a DFT grid, uniform-bound scans",
                   kForm | kX | kXRange | kGridExp),
       cmd_expsum},
      {add_command(app, o, "arcs", "Farey dissection, arc decomposition, Gallagher comparison",
                   kForm | kX | kHMax | kQ | kGridExp | kTheta),
       cmd_arcs},
      {add_command(app, o, "variance", "Short-interval variance of twisted eigenvalues",
                   kForm | kXRange | kDeltaExp | kHk),
       cmd_variance},
      {add_command(app, o, "verify", "Bounded-ratio checks of the shifted-sum bounds",
                   kForm | kNMax | kXRange | kTheta | kWeight | kTheorem | kInput),
       cmd_verify},
      {add_command(app, o, "fit", "Exponent fit of a data file, or F-class membership",
                   kForm | kXRange | kTheta | kInput),
       cmd_fit},
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    const CLI::App* scope = &app;
    for (const auto* sub : app.get_subcommands()) scope = sub;
    err << scope->help();
    return kExitUsage;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  for (const auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    try {
      Context ctx(o, sub->get_name(), std::move(args), out);
      handler(ctx);
      return kExitOk;
    } catch (const ResourceLimitError& e) {
      err << "shiftconv " << sub->get_name() << ": " << e.what() << '\n';
      return kExitResource;
    } catch (const std::exception& e) {
      err << "shiftconv " << sub->get_name() << ": " << e.what() << '\n';
      return kExitUsage;
    }
  }
  return kExitUsage;
}

}  // namespace shiftconv::cli
