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

// Bound-verification harness: every "<< X^c" statement is turned into rows of
// (lhs, rhs, ratio) over a dyadic X grid and judged by the fitted slope of
// the ratio against X.

#ifndef SHIFTCONV_EXPERIMENTS_HPP_
#define SHIFTCONV_EXPERIMENTS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftconv/coefficients.hpp"
#include "shiftconv/fit.hpp"
#include "shiftconv/parallel.hpp"

namespace shiftconv {

enum class Theorem { kMain, kGl3, kWeighted };
enum class WeightKind { kNone, kLambda, kSym2 };

std::string_view to_string(Theorem t);
std::string_view to_string(WeightKind w);
std::optional<Theorem> parse_theorem(std::string_view s);      // main | gl3 | weighted
std::optional<WeightKind> parse_weight(std::string_view s);    // none | lambda | sym2

/// Slope thresholds used for verdicts.
inline constexpr double kMainSlopeThreshold = 0.05;
inline constexpr double kGl3SlopeThreshold = 0.1;
inline constexpr double kWeightedSlopeThreshold = 0.1;
double default_slope_threshold(Theorem t);

/// Admissible H = X^theta ranges.
inline constexpr double kThetaMin = 0.1;
inline constexpr double kThetaMax = 0.9;
inline constexpr double kGl3ThetaMin = 0.35;
inline constexpr double kGl3ThetaMax = 0.9;

struct BoundCheckConfig {
  Theorem theorem = Theorem::kMain;
  int x_min_exp = 12;
  int x_max_exp = 18;
  double theta = 0.5;  // H = floor(X^theta)
  double b1 = 2.0;
  double b2 = 1.0;
  double a1 = 2.0;
  double a2 = 0.0;
  WeightKind weight = WeightKind::kNone;
  std::uint64_t seed = 0;
  std::optional<double> slope_threshold;  // default_slope_threshold when empty

  double threshold() const {
    return slope_threshold.value_or(default_slope_threshold(theorem));
  }
  /// 2^x_min_exp, ..., 2^x_max_exp.
  std::vector<std::uint64_t> x_grid() const;
  std::uint64_t h_for(std::uint64_t X) const;
};

/// Parses `key = value` lines ('#' starts a comment). Known keys fill the
/// config; anything else is returned through `extra` (or rejected when
/// `extra` is null). Throws ParseError with the line number.
BoundCheckConfig parse_bound_config(std::string_view text,
                                    std::map<std::string, std::string>* extra = nullptr);

/// Grid and theta-window checks that the matching check_* function would
/// perform, without touching any coefficients.
void validate_bound_config(const BoundCheckConfig& cfg);

struct BoundRow {
  std::uint64_t X = 0;
  std::uint64_t H = 0;
  double Q = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// gl3 split exponent 5/2 log Q / log H (gl3 only).
  std::optional<double> split_alpha;
  /// |(1/H) sum_h S(X,h;lambda,lambda)| / (X H^{-5/9}) (gl3 only).
  std::optional<double> remark_ratio;
};

enum class Verdict { kPass, kFail, kInsufficientPoints, kDegenerate };
std::string_view to_string(Verdict v);

struct BoundReport {
  BoundCheckConfig config;
  std::vector<BoundRow> rows;  // ascending X
  std::optional<ExponentFit> fit;  // ratio against X
  Verdict verdict = Verdict::kInsufficientPoints;
  std::vector<std::string> notes;
};

/// Pure function of the rows and the slope threshold. Fewer than 3 rows is
/// kInsufficientPoints; a zero or non-finite ratio is kDegenerate.
Verdict judge(std::span<const BoundRow> rows, double threshold, std::optional<ExponentFit>* fit);

/// Q = H^{2/(8-(b1+b2))}. DomainError unless 0 < b1, b2 <= 2.
double q_star(double H, double b1, double b2);

/// 5/2 (1/18 + 2 theta/9) / theta, with Q = X^{1/18} H^{2/9} and H = X^theta.
double gl3_split_parameter(double theta);

/// lhs = |sum_{h<=H} S(X,h;f,g)|,
/// rhs = H^{4/(8-(b1+b2))} X (log X)^{max(a1, a2+1)}.
BoundReport check_theorem_main(const BoundCheckConfig& cfg, const CoefficientTable& f,
                               const CoefficientTable& g, const Executor& executor = Executor{1});

/// lhs = |(1/H) sum_{h<=H} S(X,h;Lambda,lambda)|, rhs = X^{10/9} H^{-5/9}.
/// The X grid is clipped to what the sym2 table covers. WindowError when
/// theta is outside [0.35, 0.9].
BoundReport check_corollary_gl3(const BoundCheckConfig& cfg, const CoefficientTable& lambda,
                                const CoefficientTable& sym2,
                                const Executor& executor = Executor{1});

/// lhs = |sum_{h<=H} w(h) S(X,h;f,lambda)|, rhs = X H^{1-(1-beta)/5} (log X)^{a2}
/// with beta = 1/2 for w = lambda, 3/4 for w = Lambda_F, 1 for w = 1.
/// `weight` must be given (and cover every H) unless cfg.weight is kNone.
BoundReport check_weighted(const BoundCheckConfig& cfg, const CoefficientTable& f,
                           const CoefficientTable& lambda,
                           const std::optional<CoefficientTable>& weight,
                           const Executor& executor = Executor{1});

/// Exponent beta of the uniform bound |sum_{h<=Y} w(h) e(h alpha)| << Y^beta.
double weight_beta(WeightKind w);

struct FClassRow {
  std::uint64_t X = 0;
  double A = 0.0;
  double variance_integral = 0.0;
  double second_moment = 0.0;
};

struct FClassMembership {
  ExponentFit b_hat;   // variance_integral / X against A, pooled over X
  ExponentFit a2_hat;  // second_moment / X against log X
  std::vector<FClassRow> rows;
};

/// For each X, A runs over 2, 4, ... up to X^a_rule (at least A = 2).
FClassMembership fclass_membership(const CoefficientTable& f,
                                   std::span<const std::uint64_t> X_grid, double a_rule,
                                   const Executor& executor = Executor{1});

}  // namespace shiftconv

#endif  // SHIFTCONV_EXPERIMENTS_HPP_
