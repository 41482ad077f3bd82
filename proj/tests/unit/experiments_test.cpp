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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "shiftconv/errors.hpp"
#include "shiftconv/experiments.hpp"
#include "shiftconv/sums.hpp"

namespace shiftconv {
namespace {

using testing::shared_lambda;

BoundCheckConfig grid(Theorem t, int lo, int hi, double theta) {
  BoundCheckConfig c;
  c.theorem = t;
  c.x_min_exp = lo;
  c.x_max_exp = hi;
  c.theta = theta;
  return c;
}

TEST(QStar, Examples) {
  EXPECT_DOUBLE_EQ(q_star(256, 2, 2), 16.0);
  EXPECT_EQ(q_star(1000, 2, 1), std::pow(1000.0, 0.4));
  EXPECT_EQ(q_star(1, 1.5, 0.5), 1.0);
  EXPECT_EQ(q_star(1, 2, 2), 1.0);
}

TEST(QStar, MonotoneInBSum) {
  double prev = 0;
  for (int k = 1; k <= 20; ++k) {
    const double q = q_star(50, 0.1 * k, 0.1 * k);
    EXPECT_GT(q, prev);
    prev = q;
  }
}

TEST(QStar, DomainErrors) {
  EXPECT_THROW(q_star(10, 0, 1), DomainError);
  EXPECT_THROW(q_star(10, 2.5, 1), DomainError);
  EXPECT_THROW(q_star(0.5, 1, 1), DomainError);
}

TEST(Gl3Split, Values) {
  EXPECT_NEAR(gl3_split_parameter(0.5), 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(gl3_split_parameter(5.0 / 16.0), 1.0, 1e-15);
  for (double theta = kGl3ThetaMin; theta <= kGl3ThetaMax + 1e-12; theta += 0.01) {
    const double a = gl3_split_parameter(theta);
    EXPECT_GT(a, 0.0) << theta;
    EXPECT_LT(a, 1.0) << theta;
  }
}

TEST(Gl3Split, WindowRejected) {
  const auto& lam = shared_lambda();
  const auto sym = sym2_lift(lam, 64);
  EXPECT_THROW(check_corollary_gl3(grid(Theorem::kGl3, 3, 5, 0.3), lam, sym), WindowError);
  EXPECT_THROW(check_corollary_gl3(grid(Theorem::kGl3, 3, 5, 0.95), lam, sym), WindowError);
  EXPECT_THROW(validate_bound_config(grid(Theorem::kGl3, 12, 16, 0.3)), WindowError);
  EXPECT_NO_THROW(validate_bound_config(grid(Theorem::kGl3, 12, 16, 0.35)));
  EXPECT_THROW(validate_bound_config(grid(Theorem::kMain, 12, 16, 0.05)), WindowError);
  EXPECT_THROW(validate_bound_config(grid(Theorem::kMain, 16, 12, 0.5)), PreconditionError);
}

TEST(BoundConfig, DefaultsAndGrid) {
  BoundCheckConfig c;
  EXPECT_EQ(c.threshold(), kMainSlopeThreshold);
  c.theorem = Theorem::kWeighted;
  EXPECT_EQ(c.threshold(), kWeightedSlopeThreshold);
  c.slope_threshold = 0.2;
  EXPECT_EQ(c.threshold(), 0.2);
  const auto xs = grid(Theorem::kMain, 3, 6, 0.5).x_grid();
  EXPECT_EQ(xs, (std::vector<std::uint64_t>{8, 16, 32, 64}));
  EXPECT_EQ(grid(Theorem::kMain, 12, 12, 0.5).h_for(4096), 64u);
  EXPECT_EQ(grid(Theorem::kMain, 12, 12, 0.5).h_for(8192), 90u);
  EXPECT_EQ(grid(Theorem::kMain, 1, 1, 0.1).h_for(2), 1u);
}

TEST(BoundConfig, Parse) {
  std::map<std::string, std::string> extra;
  const auto c = parse_bound_config(
      "# run\ntheorem = weighted\nx_min_exp=10\n x_max_exp = 14 # inline\ntheta=0.4\n"
      "b1 = 1.5\nb2=1\na1=3\na2=1\nweight=lambda\nseed=42\nslope_threshold=0.2\nout=runs/a\n",
      &extra);
  EXPECT_EQ(c.theorem, Theorem::kWeighted);
  EXPECT_EQ(c.x_min_exp, 10);
  EXPECT_EQ(c.x_max_exp, 14);
  EXPECT_EQ(c.theta, 0.4);
  EXPECT_EQ(c.b1, 1.5);
  EXPECT_EQ(c.a1, 3.0);
  EXPECT_EQ(c.weight, WeightKind::kLambda);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.threshold(), 0.2);
  EXPECT_EQ(extra.at("out"), "runs/a");
}

TEST(BoundConfig, ParseErrors) {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_bound_config(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("theta = 0.5\nbogus = 1\n"), 2u);
  EXPECT_EQ(line_of("\n\ntheta = x\n"), 3u);
  EXPECT_EQ(line_of("theorem = gl4\n"), 1u);
  EXPECT_EQ(line_of("just words\n"), 1u);
  EXPECT_EQ(line_of("weight = sym3\n"), 1u);
}

BoundRow row(std::uint64_t X, double ratio) {
  BoundRow r;
  r.X = X;
  r.ratio = ratio;
  return r;
}

TEST(Judge, Verdicts) {
  std::optional<ExponentFit> fit;
  std::vector<BoundRow> two = {row(2, 1), row(4, 1)};
  EXPECT_EQ(judge(two, 0.05, &fit), Verdict::kInsufficientPoints);
  EXPECT_FALSE(fit.has_value());
  std::vector<BoundRow> flat = {row(2, 1), row(4, 1), row(8, 1)};
  EXPECT_EQ(judge(flat, 0.05, &fit), Verdict::kPass);
  ASSERT_TRUE(fit.has_value());
  EXPECT_NEAR(fit->slope, 0.0, 1e-15);
  std::vector<BoundRow> rising = {row(2, 1), row(4, 2), row(8, 4)};
  EXPECT_EQ(judge(rising, 0.05, &fit), Verdict::kFail);
  EXPECT_EQ(judge(rising, 1.5, nullptr), Verdict::kPass);
  std::vector<BoundRow> zero = {row(2, 1), row(4, 0), row(8, 4)};
  EXPECT_EQ(judge(zero, 0.05, &fit), Verdict::kDegenerate);
  std::vector<BoundRow> inf = {row(2, 1), row(4, INFINITY), row(8, 4)};
  EXPECT_EQ(judge(inf, 0.05, &fit), Verdict::kDegenerate);
  EXPECT_EQ(to_string(Verdict::kInsufficientPoints), "insufficient points");
}

TEST(CheckTheoremMain, RowsMatchAveragedSums) {
  const auto& lam = shared_lambda();
  const auto cfg = grid(Theorem::kMain, 10, 13, 0.5);
  const auto r = check_theorem_main(cfg, lam, lam);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) {
    const auto avg = averaged_shifted_sum(ShiftedSumSpec{row.X, row.H, lam, lam, std::nullopt});
    EXPECT_EQ(row.lhs, avg.abs_aggregate);
    const double x = static_cast<double>(row.X);
    EXPECT_NEAR(row.rhs, std::pow(row.H, 0.8) * x * std::pow(std::log(x), 2.0), 1e-9 * row.rhs);
    EXPECT_NEAR(row.Q, std::pow(row.H, 0.4), 1e-12);
    EXPECT_GT(row.rhs, 0.0);
    EXPECT_TRUE(std::isfinite(row.lhs));
  }
  EXPECT_TRUE(r.fit.has_value());
  EXPECT_EQ(r.verdict, judge(r.rows, cfg.threshold(), nullptr));
}

TEST(CheckTheoremMain, IndicatorOfOne) {
  std::vector<double> v(1 << 10, 0.0);
  v[0] = 1.0;
  const auto f = CoefficientTable::user(v);
  const auto r = check_theorem_main(grid(Theorem::kMain, 4, 8, 0.5), f, f);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.lhs, 0.0);
    EXPECT_EQ(row.ratio, 0.0);
  }
  EXPECT_EQ(r.verdict, Verdict::kDegenerate);
}

TEST(CheckTheoremMain, SingleX) {
  const auto& lam = shared_lambda();
  const auto r = check_theorem_main(grid(Theorem::kMain, 10, 10, 0.5), lam, lam);
  EXPECT_EQ(r.rows.size(), 1u);
  EXPECT_FALSE(r.fit.has_value());
  EXPECT_EQ(r.verdict, Verdict::kInsufficientPoints);
}

TEST(CheckTheoremMain, Reproducible) {
  const auto& lam = shared_lambda();
  const auto cfg = grid(Theorem::kMain, 10, 14, 0.6);
  const auto a = check_theorem_main(cfg, lam, lam, Executor(1));
  const auto b = check_theorem_main(cfg, lam, lam, Executor(8));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].lhs, b.rows[i].lhs);
    EXPECT_EQ(a.rows[i].ratio, b.rows[i].ratio);
  }
  EXPECT_EQ(a.fit->slope, b.fit->slope);
}

TEST(CheckGl3, ClipsGridToSym2Table) {
  const auto& lam = shared_lambda();
  const auto sym = sym2_lift(lam, sym2_capacity(lam));  // 512
  const auto r = check_corollary_gl3(grid(Theorem::kGl3, 4, 10, 0.5), lam, sym);
  ASSERT_EQ(r.rows.size(), 5u);  // X = 16..256
  EXPECT_EQ(r.notes.size(), 2u);
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.split_alpha.has_value());
    EXPECT_NEAR(*row.split_alpha, 5.0 / 6.0, 1e-15);
    ASSERT_TRUE(row.remark_ratio.has_value());
    EXPECT_TRUE(std::isfinite(*row.remark_ratio));
    const auto avg = averaged_shifted_sum(ShiftedSumSpec{row.X, row.H, sym, lam, std::nullopt});
    EXPECT_DOUBLE_EQ(row.lhs, avg.abs_aggregate / static_cast<double>(row.H));
    const double x = static_cast<double>(row.X), h = static_cast<double>(row.H);
    EXPECT_NEAR(row.rhs, std::pow(x, 10.0 / 9.0) * std::pow(h, -5.0 / 9.0), 1e-9 * row.rhs);
  }
}

TEST(CheckWeighted, UnitWeightIsMainWithExponentOne) {
  const auto& lam = shared_lambda();
  auto cfg = grid(Theorem::kWeighted, 10, 12, 0.5);
  const auto r = check_weighted(cfg, lam, lam, std::nullopt);
  cfg.theorem = Theorem::kMain;
  const auto m = check_theorem_main(cfg, lam, lam);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].lhs, m.rows[i].lhs);
    EXPECT_DOUBLE_EQ(r.rows[i].rhs, static_cast<double>(r.rows[i].X * r.rows[i].H));
  }
}

TEST(CheckWeighted, LambdaWeight) {
  const auto& lam = shared_lambda();
  auto cfg = grid(Theorem::kWeighted, 10, 12, 0.5);
  cfg.weight = WeightKind::kLambda;
  const auto r = check_weighted(cfg, lam, lam, lam);
  for (const auto& row : r.rows) {
    long double want = 0;
    for (std::uint64_t h = 1; h <= row.H; ++h) {
      want += static_cast<long double>(lam(h)) * testing::direct_shifted_sum(lam, lam, row.X, h);
    }
    EXPECT_LT(testing::relative_error(row.lhs, std::abs(static_cast<double>(want))), 1e-10);
    const double x = static_cast<double>(row.X);
    EXPECT_NEAR(row.rhs, x * std::pow(static_cast<double>(row.H), 0.9), 1e-9 * row.rhs);
  }
}

TEST(CheckWeighted, Sym2WeightTableCap) {
  const auto& lam = shared_lambda();
  auto cfg = grid(Theorem::kWeighted, 10, 14, 0.5);
  cfg.weight = WeightKind::kSym2;
  EXPECT_THROW(check_weighted(cfg, lam, lam, std::nullopt), PreconditionError);
  EXPECT_THROW(check_weighted(cfg, lam, lam, sym2_lift(lam, 100)), InsufficientInputError);
  const auto r = check_weighted(cfg, lam, lam, sym2_lift(lam, 128));
  for (const auto& row : r.rows) {
    EXPECT_TRUE(std::isfinite(row.ratio));
    EXPECT_NEAR(row.rhs, static_cast<double>(row.X) * std::pow(static_cast<double>(row.H), 0.95),
                1e-9 * row.rhs);
  }
}

TEST(WeightBeta, Values) {
  EXPECT_EQ(weight_beta(WeightKind::kNone), 1.0);
  EXPECT_EQ(weight_beta(WeightKind::kLambda), 0.5);
  EXPECT_EQ(weight_beta(WeightKind::kSym2), 0.75);
  EXPECT_EQ(parse_weight("1"), WeightKind::kNone);
  EXPECT_FALSE(parse_weight("other").has_value());
  EXPECT_EQ(parse_theorem("gl3"), Theorem::kGl3);
}

TEST(FClassMembershipTest, ConstantSequence) {
  const auto one = CoefficientTable::user(std::vector<double>(1 << 14, 1.0));
  const std::vector<std::uint64_t> xs = {1024, 2048, 4096};
  const auto m = fclass_membership(one, xs, 0.5);
  EXPECT_NEAR(m.b_hat.slope, 2.0, 0.15);
  // second_moment / X = (X + 1) / X.
  EXPECT_NEAR(m.a2_hat.slope, 0.0, 0.01);
}

TEST(FClassMembershipTest, Lambda) {
  const auto& lam = shared_lambda();
  const std::vector<std::uint64_t> xs = {1 << 12, 1 << 13, 1 << 14, 1 << 15};
  // A <= X^0.3 keeps the windows in the square-root regime.
  const auto m = fclass_membership(lam, xs, 0.3);
  EXPECT_GE(m.b_hat.slope, 0.7);
  EXPECT_LE(m.b_hat.slope, 1.3);
  EXPECT_LT(std::abs(m.a2_hat.slope), 0.1);
  EXPECT_FALSE(m.rows.empty());
  EXPECT_THROW(fclass_membership(lam, xs, 1.5), DomainError);
}

}  // namespace
}  // namespace shiftconv
