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

// Runs the acceptance criteria end to end and prints one PASS/FAIL line per
// criterion. Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "shiftconv/arcs.hpp"
#include "shiftconv/coefficients.hpp"
#include "shiftconv/errors.hpp"
#include "shiftconv/experiments.hpp"
#include "shiftconv/expsum.hpp"
#include "shiftconv/fit.hpp"
#include "shiftconv/sums.hpp"

namespace sc = shiftconv;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int g_failures = 0;

void report(int id, const std::string& name, const std::function<void(Outcome&)>& body,
            double budget_seconds = 0.0) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_seconds > 0.0) o.require(secs < budget_seconds, "runtime budget exceeded");
  if (!o.pass) ++g_failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "):"
            << o.detail.str() << " [" << std::fixed << std::setprecision(1) << secs << " s]"
            << std::defaultfloat << std::setprecision(6) << std::endl;
}

std::vector<std::uint64_t> dyadic(int lo, int hi) {
  std::vector<std::uint64_t> xs;
  for (int e = lo; e <= hi; ++e) xs.push_back(std::uint64_t{1} << e);
  return xs;
}

double rel(sc::Complex a, sc::Complex b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::vector<std::string>& args, std::string* err = nullptr) {
  std::vector<std::string> storage{"shiftconv"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, e;
  const int code = sc::cli::run(static_cast<int>(argv.size()), argv.data(), out, e);
  if (err) *err = e.str();
  return code;
}

}  // namespace

int main() {
  constexpr std::size_t kBigN = std::size_t{1} << 20;
  const fs::path work = fs::temp_directory_path() / "shiftconv_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  sc::ExactTauTable big_tau = sc::compute_tau(1);
  sc::CoefficientTable lam = sc::CoefficientTable::user({0.0});

  report(1, "exact coefficients", [&](Outcome& o) {
    constexpr std::size_t n = 10'000;
    const auto tau = sc::compute_tau(n);
    const auto ref = shiftconv::testing::naive_tau(n);
    std::size_t mismatches = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      if (tau[i].str() != shiftconv::testing::to_string(ref[i - 1])) ++mismatches;
    }
    o.detail << " naive oracle mismatches=" << mismatches;
    o.require(mismatches == 0, "tau matches naive product");

    const auto hecke = sc::verify_hecke(tau, 0);
    o.detail << ", hecke checks=" << hecke.checks << (hecke.exhaustive ? " (exhaustive)" : "");
    o.require(hecke.passed && hecke.exhaustive, "exhaustive Hecke relations");

    big_tau = sc::compute_tau(kBigN);
    lam = sc::normalize_gl2(big_tau);
    const auto deligne = sc::find_deligne_violation(lam);
    o.detail << ", deligne n<=" << lam.n_max() << " " << (deligne ? "violated at " + std::to_string(*deligne) : "ok");
    o.require(!deligne, "Deligne bound");
  }, 60.0);

  report(2, "sym2 identities", [&](Outcome& o) {
    const std::size_t cap = sc::sym2_capacity(lam);
    const auto L = sc::sym2_lift(lam, cap);
    double worst = 0.0;
    int primes = 0;
    for (std::uint64_t p = 2; p <= 1000; ++p) {
      if (!shiftconv::testing::is_prime(p)) continue;
      ++primes;
      const double expect = lam(p) * lam(p) - 1.0;
      worst = std::max(worst, std::abs(L(p) - expect) / std::max(std::abs(expect), 1.0));
    }
    o.detail << " primes=" << primes << " max rel err=" << worst;
    o.require(primes == 168 && worst <= 1e-10, "Lambda(p) = lambda(p)^2 - 1");

    std::mt19937_64 rng(20260);
    std::uniform_int_distribution<std::uint64_t> pick(2, cap / 2);
    int pairs = 0;
    double worst_mult = 0.0;
    while (pairs < 100) {
      const std::uint64_t m = pick(rng), n = pick(rng);
      if (m * n > cap || std::gcd(m, n) != 1) continue;
      ++pairs;
      const double expect = L(m) * L(n);
      worst_mult = std::max(worst_mult, std::abs(L(m * n) - expect) / std::max(std::abs(expect), 1.0));
    }
    o.detail << ", coprime pairs=" << pairs << " max rel err=" << worst_mult;
    o.require(worst_mult <= 1e-10, "coprime multiplicativity");
  });

  report(3, "discrete Parseval", [&](Outcome& o) {
    for (const std::uint64_t X : {std::uint64_t{1} << 10, std::uint64_t{1} << 14}) {
      const std::uint64_t G = std::bit_ceil(8 * X);
      const double lhs = sc::grid_mean_square(sc::exp_sum_grid(lam, X, G));
      const double rhs = sc::second_moment(lam, X);
      const double r = std::abs(lhs - rhs) / rhs;
      o.detail << " X=" << X << " rel=" << r;
      o.require(r <= 1e-9, "Parseval at X=" + std::to_string(X));
    }
  });

  report(4, "dissection exactness", [&](Outcome& o) {
    int bad = 0;
    for (std::uint64_t Q = 1; Q <= 200; ++Q) {
      if (!sc::check_dissection(sc::dirichlet_dissection(Q)).ok()) ++bad;
    }
    o.detail << " Q=1..200 failing=" << bad;
    o.require(bad == 0, "partition, length 1, caps");
  });

  struct Case {
    std::uint64_t X, H, Q;
  };
  const std::vector<Case> pipeline_cases{{1 << 10, 1 << 5, 8}, {1 << 12, 1 << 6, 16}};

  report(5, "pipeline consistency", [&](Outcome& o) {
    for (const auto& c : pipeline_cases) {
      const auto d = sc::arc_decomposed_average(lam, lam, c.X, c.H, c.Q, std::bit_ceil(8 * c.X));
      const auto avg = sc::averaged_shifted_sum(sc::ShiftedSumSpec{c.X, c.H, lam, lam, std::nullopt});
      const double r = rel(d.major.value + d.minor_total, avg.aggregate);
      o.detail << " (X=" << c.X << ",H=" << c.H << ",Q=" << c.Q << ") rel=" << r;
      o.require(r <= 1e-6, "major+minor vs averaged sum");
    }
  }, 120.0);

  report(6, "order exchange", [&](Outcome& o) {
    for (const auto& c : pipeline_cases) {
      const auto avg = sc::averaged_shifted_sum(sc::ShiftedSumSpec{c.X, c.H, lam, lam, std::nullopt});
      const double r = rel(sc::reordered_average(lam, lam, c.X, c.H), avg.aggregate);
      o.detail << " (X=" << c.X << ",H=" << c.H << ") rel=" << r;
      o.require(r <= 1e-9, "reordered vs averaged sum");
    }
  });

  report(7, "short-interval variance trend", [&](Outcome& o) {
    for (const auto [h, k] : {std::pair<std::int64_t, std::uint64_t>{0, 1}, {1, 3}}) {
      std::vector<std::pair<double, double>> pts;
      std::vector<double> norm;
      for (const auto M : dyadic(14, 18)) {
        const double Delta = std::pow(static_cast<double>(M), 0.3);
        const auto p = sc::short_interval_variance(lam, M, Delta, h, k, false);
        pts.emplace_back(p.Delta, p.variance / static_cast<double>(M));
        norm.push_back(p.normalized());
      }
      const double slope = sc::fit_exponent(pts).slope;
      auto sorted = norm;
      std::sort(sorted.begin(), sorted.end());
      const double median = sorted[sorted.size() / 2];
      const double stab = sorted.back() / median;
      o.detail << " h/k=" << h << "/" << k << " slope=" << slope << " max/median=" << stab;
      o.require(slope >= 0.6 && slope <= 1.4, "exponent in [0.6,1.4] for " + std::to_string(h) + "/" +
                                                  std::to_string(k));
      o.require(stab < 10.0, "normalized max below 10x median");
    }
  }, 600.0);

  report(8, "partial-sum cancellation", [&](Outcome& o) {
    const auto xs = dyadic(12, 20);
    const auto scan = sc::uniform_bound_scan(lam, xs, 1, 1.0 / 3.0, sc::ScanMode::kPartialSumMax,
                                             sc::Executor(1));
    o.require(scan.fit.has_value(), "fit available");
    if (scan.fit) {
      o.detail << " slope=" << scan.fit->slope;
      o.require(scan.fit->slope <= 0.45, "slope <= 0.45");
    }
  });

  report(9, "main bounded ratio", [&](Outcome& o) {
    sc::BoundCheckConfig cfg;
    cfg.theorem = sc::Theorem::kMain;
    cfg.x_min_exp = 12;
    cfg.x_max_exp = 18;
    cfg.theta = 0.5;
    const auto rep = sc::check_theorem_main(cfg, lam, lam);
    const bool finite = std::all_of(rep.rows.begin(), rep.rows.end(),
                                    [](const sc::BoundRow& r) { return std::isfinite(r.ratio); });
    o.require(rep.rows.size() == 7 && finite, "finite ratio on every row");
    o.require(rep.fit.has_value(), "fit available");
    if (rep.fit) {
      o.detail << " rows=" << rep.rows.size() << " slope=" << rep.fit->slope;
      o.require(rep.fit->slope <= 0.05, "slope <= 0.05");
    }
  });

  report(10, "gl3 window", [&](Outcome& o) {
    for (const double theta : {0.35, 0.5, 0.7, 0.9}) {
      const double a = sc::gl3_split_parameter(theta);
      o.detail << " theta=" << theta << " alpha=" << a;
      o.require(a > 0.0 && a < 1.0, "alpha in (0,1)");
    }
    sc::BoundCheckConfig cfg;
    cfg.theorem = sc::Theorem::kGl3;
    cfg.theta = 0.3;
    bool rejected = false;
    try {
      sc::validate_bound_config(cfg);
    } catch (const sc::WindowError&) {
      rejected = true;
    }
    o.detail << ", theta=0.3 " << (rejected ? "rejected" : "accepted");
    o.require(rejected, "theta=0.3 raises a window error");
  });

  report(11, "weighted averages", [&](Outcome& o) {
    sc::BoundCheckConfig cfg;
    cfg.theorem = sc::Theorem::kWeighted;
    cfg.x_min_exp = 12;
    cfg.x_max_exp = 16;
    cfg.theta = 0.5;
    cfg.weight = sc::WeightKind::kLambda;
    const auto lam_rep = sc::check_weighted(cfg, lam, lam, lam);
    o.require(lam_rep.fit.has_value(), "lambda-weighted fit available");
    if (lam_rep.fit) {
      o.detail << " w=lambda slope=" << lam_rep.fit->slope;
      o.require(lam_rep.fit->slope <= 0.1, "lambda-weighted slope <= 0.1");
    }
    cfg.weight = sc::WeightKind::kSym2;
    const std::size_t h_top = cfg.h_for(std::uint64_t{1} << cfg.x_max_exp);
    const auto sym = sc::sym2_lift(lam, std::min(h_top, sc::sym2_capacity(lam)));
    const auto sym_rep = sc::check_weighted(cfg, lam, lam, sym);
    const bool finite = !sym_rep.rows.empty() &&
                        std::all_of(sym_rep.rows.begin(), sym_rep.rows.end(),
                                    [](const sc::BoundRow& r) { return std::isfinite(r.ratio); });
    o.detail << ", w=sym2 rows=" << sym_rep.rows.size() << (finite ? " finite" : " non-finite");
    o.require(finite, "sym2-weighted ratios finite");
  });

  report(12, "determinism across thread counts", [&](Outcome& o) {
    const std::string cache = (work / "cache").string();
    sc::TauCache(cache).store(big_tau);
    struct Run {
      std::string name;
      std::vector<std::string> args;
    };
    const std::vector<Run> runs{
        {"arcs_a", {"arcs", "--x", "1024", "--h-max", "32", "--q", "8"}},
        {"arcs_b", {"arcs", "--x", "4096", "--h-max", "64", "--q", "16"}},
        {"var_01", {"variance", "--x-min-exp", "14", "--x-max-exp", "18", "--hk", "0/1"}},
        {"var_13", {"variance", "--x-min-exp", "14", "--x-max-exp", "18", "--hk", "1/3"}},
        {"verify_main",
         {"verify", "--theorem", "main", "--theta", "0.5", "--x-min-exp", "12", "--x-max-exp", "18"}},
    };
    for (const auto& r : runs) {
      std::string stems[2];
      const char* threads[2] = {"1", "8"};
      for (int i = 0; i < 2; ++i) {
        stems[i] = (work / (r.name + "_t" + threads[i])).string();
        auto args = r.args;
        args.insert(args.end(), {"--threads", threads[i], "--cache-dir", cache, "--out", stems[i]});
        std::string err;
        const int code = cli(args, &err);
        o.require(code == 0, r.name + " exit " + std::to_string(code) + ": " + err);
      }
      const bool same = slurp(stems[0] + ".csv") == slurp(stems[1] + ".csv") &&
                        slurp(stems[0] + ".json") == slurp(stems[1] + ".json") &&
                        !slurp(stems[0] + ".json").empty();
      o.detail << " " << r.name << (same ? "=identical" : "=DIFFERENT");
      o.require(same, r.name + " byte-identical");
    }
  });

  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed")
            << std::endl;
  fs::remove_all(work);
  return g_failures == 0 ? 0 : 1;
}
