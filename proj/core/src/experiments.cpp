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

#include "shiftconv/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "shiftconv/errors.hpp"
#include "shiftconv/sums.hpp"

namespace shiftconv {
namespace {

void require_theta(double theta, double lo, double hi, const char* what) {
  if (!(theta >= lo && theta <= hi)) {
    throw WindowError(std::string(what) + ": theta = " + std::to_string(theta) +
                      " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

void require_grid(const BoundCheckConfig& cfg) {
  if (cfg.x_min_exp < 1 || cfg.x_max_exp < cfg.x_min_exp || cfg.x_max_exp > 40) {
    throw PreconditionError("X grid exponents must satisfy 1 <= min <= max <= 40");
  }
}

double log_power(double X, double e) { return std::pow(std::log(X), e); }

BoundReport finish(BoundReport report) {
  std::sort(report.rows.begin(), report.rows.end(),
            [](const BoundRow& a, const BoundRow& b) { return a.X < b.X; });
  report.verdict = judge(report.rows, report.config.threshold(), &report.fit);
  return report;
}

std::string trim_copy(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& v, std::size_t line) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError("bad number '" + v + "'", line);
  }
  return out;
}

}  // namespace

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::kMain:
      return "main";
    case Theorem::kGl3:
      return "gl3";
    case Theorem::kWeighted:
      return "weighted";
  }
  return "main";
}

std::string_view to_string(WeightKind w) {
  switch (w) {
    case WeightKind::kNone:
      return "none";
    case WeightKind::kLambda:
      return "lambda";
    case WeightKind::kSym2:
      return "sym2";
  }
  return "none";
}

std::optional<Theorem> parse_theorem(std::string_view s) {
  if (s == "main") return Theorem::kMain;
  if (s == "gl3") return Theorem::kGl3;
  if (s == "weighted") return Theorem::kWeighted;
  return std::nullopt;
}

std::optional<WeightKind> parse_weight(std::string_view s) {
  if (s == "none" || s == "1") return WeightKind::kNone;
  if (s == "lambda") return WeightKind::kLambda;
  if (s == "sym2") return WeightKind::kSym2;
  return std::nullopt;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInsufficientPoints:
      return "insufficient points";
    case Verdict::kDegenerate:
      return "degenerate";
  }
  return "fail";
}

double default_slope_threshold(Theorem t) {
  switch (t) {
    case Theorem::kMain:
      return kMainSlopeThreshold;
    case Theorem::kGl3:
      return kGl3SlopeThreshold;
    case Theorem::kWeighted:
      return kWeightedSlopeThreshold;
  }
  return kMainSlopeThreshold;
}

std::vector<std::uint64_t> BoundCheckConfig::x_grid() const {
  std::vector<std::uint64_t> out;
  for (int e = x_min_exp; e <= x_max_exp; ++e) out.push_back(std::uint64_t{1} << e);
  return out;
}

std::uint64_t BoundCheckConfig::h_for(std::uint64_t X) const {
  const double v = std::exp2(theta * std::log2(static_cast<double>(X)));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(v * (1.0 + 1e-12))));
}

BoundCheckConfig parse_bound_config(std::string_view text,
                                    std::map<std::string, std::string>* extra) {
  BoundCheckConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::string stripped = trim_copy(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = trim_copy(std::string_view(stripped).substr(0, eq));
    const std::string value = trim_copy(std::string_view(stripped).substr(eq + 1));
    if (key == "theorem") {
      const auto t = parse_theorem(value);
      if (!t) throw ParseError("unknown theorem '" + value + "'", line_no);
      cfg.theorem = *t;
    } else if (key == "x_min_exp") {
      cfg.x_min_exp = parse_number<int>(value, line_no);
    } else if (key == "x_max_exp") {
      cfg.x_max_exp = parse_number<int>(value, line_no);
    } else if (key == "theta") {
      cfg.theta = parse_number<double>(value, line_no);
    } else if (key == "b1") {
      cfg.b1 = parse_number<double>(value, line_no);
    } else if (key == "b2") {
      cfg.b2 = parse_number<double>(value, line_no);
    } else if (key == "a1") {
      cfg.a1 = parse_number<double>(value, line_no);
    } else if (key == "a2") {
      cfg.a2 = parse_number<double>(value, line_no);
    } else if (key == "weight") {
      const auto w = parse_weight(value);
      if (!w) throw ParseError("unknown weight '" + value + "'", line_no);
      cfg.weight = *w;
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(value, line_no);
    } else if (key == "slope_threshold") {
      cfg.slope_threshold = parse_number<double>(value, line_no);
    } else if (extra != nullptr) {
      (*extra)[key] = value;
    } else {
      throw ParseError("unknown key '" + key + "'", line_no);
    }
  }
  return cfg;
}

Verdict judge(std::span<const BoundRow> rows, double threshold,
              std::optional<ExponentFit>* fit) {
  if (fit != nullptr) fit->reset();
  if (rows.size() < 3) return Verdict::kInsufficientPoints;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (!(r.ratio > 0.0) || !std::isfinite(r.ratio)) return Verdict::kDegenerate;
    pts.emplace_back(static_cast<double>(r.X), r.ratio);
  }
  ExponentFit f = fit_exponent(pts);
  const Verdict v = f.slope <= threshold ? Verdict::kPass : Verdict::kFail;
  if (fit != nullptr) *fit = std::move(f);
  return v;
}

double q_star(double H, double b1, double b2) {
  if (!(b1 > 0.0 && b1 <= 2.0 && b2 > 0.0 && b2 <= 2.0)) {
    throw DomainError("q_star: b1 and b2 must lie in (0, 2]");
  }
  if (!(H >= 1.0)) throw DomainError("q_star: H must be >= 1");
  return std::pow(H, 2.0 / (8.0 - (b1 + b2)));
}

double gl3_split_parameter(double theta) {
  return 2.5 * (1.0 / 18.0 + 2.0 * theta / 9.0) / theta;
}

double weight_beta(WeightKind w) {
  switch (w) {
    case WeightKind::kNone:
      return 1.0;
    case WeightKind::kLambda:
      return 0.5;
    case WeightKind::kSym2:
      return 0.75;
  }
  return 1.0;
}

BoundReport check_theorem_main(const BoundCheckConfig& cfg, const CoefficientTable& f,
                               const CoefficientTable& g, const Executor& executor) {
  require_grid(cfg);
  require_theta(cfg.theta, kThetaMin, kThetaMax, "check_theorem_main");
  const double q_exp = 2.0 / (8.0 - (cfg.b1 + cfg.b2));
  q_star(1.0, cfg.b1, cfg.b2);  // domain check
  const double log_exp = std::max(cfg.a1, cfg.a2 + 1.0);
  BoundReport report;
  report.config = cfg;
  for (const auto X : cfg.x_grid()) {
    const std::uint64_t H = cfg.h_for(X);
    const auto res = averaged_shifted_sum(ShiftedSumSpec{X, H, f, g, std::nullopt}, executor);
    BoundRow row;
    row.X = X;
    row.H = H;
    row.Q = q_star(static_cast<double>(H), cfg.b1, cfg.b2);
    row.lhs = res.abs_aggregate;
    row.rhs = std::pow(static_cast<double>(H), 2.0 * q_exp) * static_cast<double>(X) *
              log_power(static_cast<double>(X), log_exp);
    row.ratio = row.lhs / row.rhs;
    report.rows.push_back(row);
  }
  return finish(std::move(report));
}

void validate_bound_config(const BoundCheckConfig& cfg) {
  require_grid(cfg);
  switch (cfg.theorem) {
    case Theorem::kMain:
      require_theta(cfg.theta, kThetaMin, kThetaMax, "check_theorem_main");
      break;
    case Theorem::kGl3:
      require_theta(cfg.theta, kGl3ThetaMin, kGl3ThetaMax, "check_corollary_gl3");
      break;
    case Theorem::kWeighted:
      require_theta(cfg.theta, kThetaMin, kThetaMax, "check_weighted");
      break;
  }
}

BoundReport check_corollary_gl3(const BoundCheckConfig& cfg, const CoefficientTable& lambda,
                                const CoefficientTable& sym2, const Executor& executor) {
  require_grid(cfg);
  require_theta(cfg.theta, kGl3ThetaMin, kGl3ThetaMax, "check_corollary_gl3");
  const double alpha = gl3_split_parameter(cfg.theta);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw WindowError("check_corollary_gl3: split parameter outside (0, 1)");
  }
  BoundReport report;
  report.config = cfg;
  const std::uint64_t cap = std::min(sym2.n_max(), lambda.n_max()) / 2;
  for (const auto X : cfg.x_grid()) {
    if (X > cap) {
      report.notes.push_back("X = " + std::to_string(X) + " skipped: sym2 table covers n <= " +
                             std::to_string(sym2.n_max()));
      continue;
    }
    const std::uint64_t H = cfg.h_for(X);
    const double x = static_cast<double>(X);
    const double h = static_cast<double>(H);
    const auto res = averaged_shifted_sum(ShiftedSumSpec{X, H, sym2, lambda, std::nullopt}, executor);
    const auto diag = averaged_shifted_sum(ShiftedSumSpec{X, H, lambda, lambda, std::nullopt}, executor);
    BoundRow row;
    row.X = X;
    row.H = H;
    row.Q = std::pow(x, 1.0 / 18.0) * std::pow(h, 2.0 / 9.0);
    row.lhs = res.abs_aggregate / h;
    row.rhs = std::pow(x, 10.0 / 9.0) * std::pow(h, -5.0 / 9.0);
    row.ratio = row.lhs / row.rhs;
    row.split_alpha = alpha;
    row.remark_ratio = (diag.abs_aggregate / h) / (x * std::pow(h, -5.0 / 9.0));
    report.rows.push_back(row);
  }
  return finish(std::move(report));
}

BoundReport check_weighted(const BoundCheckConfig& cfg, const CoefficientTable& f,
                           const CoefficientTable& lambda,
                           const std::optional<CoefficientTable>& weight,
                           const Executor& executor) {
  require_grid(cfg);
  require_theta(cfg.theta, kThetaMin, kThetaMax, "check_weighted");
  if (cfg.weight != WeightKind::kNone && !weight) {
    throw PreconditionError("check_weighted: weight table required for w = " +
                            std::string(to_string(cfg.weight)));
  }
  const double beta = weight_beta(cfg.weight);
  const double h_exp = 1.0 - (1.0 - beta) / 5.0;
  BoundReport report;
  report.config = cfg;
  for (const auto X : cfg.x_grid()) {
    const std::uint64_t H = cfg.h_for(X);
    std::optional<CoefficientTable> w;
    if (cfg.weight != WeightKind::kNone) {
      if (weight->n_max() < H) {
        throw InsufficientInputError("check_weighted: H = " + std::to_string(H) +
                                     " exceeds weight table n_max " +
                                     std::to_string(weight->n_max()));
      }
      w = weight;
    }
    const auto res = averaged_shifted_sum(ShiftedSumSpec{X, H, f, lambda, w}, executor);
    const double x = static_cast<double>(X);
    const double h = static_cast<double>(H);
    BoundRow row;
    row.X = X;
    row.H = H;
    row.Q = std::pow(h, 2.0 * (1.0 - beta) / 5.0);
    row.lhs = res.abs_aggregate;
    row.rhs = x * std::pow(h, h_exp) * log_power(x, cfg.a2);
    row.ratio = row.lhs / row.rhs;
    report.rows.push_back(row);
  }
  return finish(std::move(report));
}

FClassMembership fclass_membership(const CoefficientTable& f,
                                   std::span<const std::uint64_t> X_grid, double a_rule,
                                   const Executor& executor) {
  if (!(a_rule > 0.0 && a_rule < 1.0)) throw DomainError("fclass_membership: a_rule must be in (0, 1)");
  FClassMembership out;
  std::vector<std::pair<double, double>> b_pts;
  std::vector<std::pair<double, double>> a2_pts;
  for (const auto X : X_grid) {
    const double a_max = std::max(2.0, std::pow(static_cast<double>(X), a_rule));
    double second = 0.0;
    for (double A = 2.0; A <= a_max * (1.0 + 1e-12); A *= 2.0) {
      const FClassStats s = fclass_stats(f, X, A, executor);
      out.rows.push_back(FClassRow{X, A, s.variance_integral, s.second_moment});
      b_pts.emplace_back(A, s.variance_integral / static_cast<double>(X));
      second = s.second_moment;
    }
    a2_pts.emplace_back(std::log(static_cast<double>(X)), second / static_cast<double>(X));
  }
  out.b_hat = fit_exponent(b_pts);
  out.a2_hat = fit_exponent(a2_pts);
  return out;
}

}  // namespace shiftconv
