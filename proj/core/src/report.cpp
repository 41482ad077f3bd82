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

#include "shiftconv/report.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "shiftconv/errors.hpp"

#ifndef SHIFTCONV_VERSION
#define SHIFTCONV_VERSION "0.0.0"
#endif

namespace shiftconv {
namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json complex_json(Complex z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

Json fit_json(const std::optional<ExponentFit>& fit) {
  if (!fit) return nullptr;
  Json pts = Json::array();
  for (const auto& [x, y] : fit->points) pts.push_back(Json::array({number(x), number(y)}));
  return Json{{"slope", number(fit->slope)},
              {"intercept", number(fit->intercept)},
              {"r_squared", number(fit->r_squared)},
              {"residual_max", number(fit->residual_max)},
              {"points", std::move(pts)}};
}

Json config_json(const ConfigEcho& config) {
  Json out = Json::object();
  for (const auto& [key, value] : config.entries()) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out[key] = number(v);
          } else {
            out[key] = v;
          }
        },
        value);
  }
  return out;
}

std::string envelope(std::string_view name, const ConfigEcho& config, Json result) {
  Json doc;
  doc["tool"] = "shiftconv";
  doc["version"] = library_version();
  doc["report"] = name;
  doc["config"] = config_json(config);
  doc["result"] = std::move(result);
  return doc.dump(2) + "\n";
}

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string_view> header) { row(header); }

  template <typename... Ts>
  void add(const Ts&... fields) {
    bool first = true;
    ((append(fields, first)), ...);
    text_ += "\r\n";
  }
  void row(std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (const auto f : fields) append(f, first);
    text_ += "\r\n";
  }
  std::string str() && { return std::move(text_); }

 private:
  void sep(bool& first) {
    if (!first) text_ += ',';
    first = false;
  }
  void append(std::string_view s, bool& first) {
    sep(first);
    text_ += csv_field(s);
  }
  void append(const std::string& s, bool& first) { append(std::string_view(s), first); }
  void append(const char* s, bool& first) { append(std::string_view(s), first); }
  void append(double v, bool& first) {
    sep(first);
    text_ += format_double(v);
  }
  void append(bool v, bool& first) {
    sep(first);
    text_ += v ? "true" : "false";
  }
  template <typename I>
    requires std::is_integral_v<I>
  void append(I v, bool& first) {
    sep(first);
    text_ += std::to_string(v);
  }

  std::string text_;
};

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string_view library_version() { return SHIFTCONV_VERSION; }

ConfigEcho& ConfigEcho::set(std::string key, ConfigValue value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
  return *this;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

ReportFiles render_shifted_sums(const ConfigEcho& config, const ShiftedSumResult& result) {
  Csv csv{"h", "re", "im"};
  Json per_h = Json::array();
  for (std::size_t i = 0; i < result.per_h.size(); ++i) {
    csv.add(i + 1, result.per_h[i].real(), result.per_h[i].imag());
    per_h.push_back(complex_json(result.per_h[i]));
  }
  csv.add("aggregate", result.aggregate.real(), result.aggregate.imag());
  Json res{{"aggregate", complex_json(result.aggregate)},
           {"abs_aggregate", number(result.abs_aggregate)},
           {"per_h", std::move(per_h)}};
  return {std::move(csv).str(), envelope("shifted_sums", config, std::move(res))};
}

ReportFiles render_reordered(const ConfigEcho& config, Complex value) {
  Csv csv{"quantity", "re", "im"};
  csv.add("reordered_average", value.real(), value.imag());
  return {std::move(csv).str(),
          envelope("reordered_average", config, Json{{"value", complex_json(value)}})};
}

ReportFiles render_arc_table(const ConfigEcho& config, const FareyDissection& dissection,
                             const DissectionCheck& check) {
  Csv csv{"a", "q", "lo_num", "lo_den", "hi_num", "hi_den"};
  Json arcs = Json::array();
  for (const auto& arc : dissection.arcs) {
    csv.add(arc.a, arc.q, arc.lo.numerator(), arc.lo.denominator(), arc.hi.numerator(),
            arc.hi.denominator());
    arcs.push_back(Json{{"a", arc.a},
                        {"q", arc.q},
                        {"lo", fmt::format("{}/{}", arc.lo.numerator(), arc.lo.denominator())},
                        {"hi", fmt::format("{}/{}", arc.hi.numerator(), arc.hi.denominator())}});
  }
  Json res{{"Q", dissection.Q},
           {"arc_count", dissection.arcs.size()},
           {"total_length", fmt::format("{}/{}", check.total_length.numerator(),
                                        check.total_length.denominator())},
           {"partition", check.disjoint_and_covering},
           {"caps", check.caps_hold},
           {"reduced", check.reduced},
           {"arcs", std::move(arcs)}};
  return {std::move(csv).str(), envelope("dissection", config, std::move(res))};
}

ReportFiles render_arc_decomposition(const ConfigEcho& config, const ArcDecomposition& d) {
  Csv csv{"a", "q", "re", "im", "abs"};
  Json arcs = Json::array();
  for (const auto& arc : d.arcs) {
    csv.add(arc.a, arc.q, arc.value.real(), arc.value.imag(), arc.abs_value);
    arcs.push_back(Json{{"a", arc.a}, {"q", arc.q}, {"value", complex_json(arc.value)}});
  }
  csv.add("minor_total", "", d.minor_total.real(), d.minor_total.imag(), std::abs(d.minor_total));
  csv.add("exact", "", d.exact.real(), d.exact.imag(), std::abs(d.exact));
  Json res{{"major", complex_json(d.major.value)},
           {"minor_total", complex_json(d.minor_total)},
           {"total", complex_json(d.total)},
           {"exact", complex_json(d.exact)},
           {"relative_error", number(d.relative_error)},
           {"l1_integral", number(d.l1_integral)},
           {"minor_kernel_sup", number(d.minor_kernel_sup)},
           {"minor_bound", number(d.minor_bound)},
           {"kernel_mass", number(d.kernel_mass)},
           {"arcs", std::move(arcs)}};
  return {std::move(csv).str(), envelope("arc_decomposition", config, std::move(res))};
}

ReportFiles render_gallagher(const ConfigEcho& config, std::span<const GallagherReport> rows) {
  Csv csv{"X", "theta", "G", "lhs", "rhs", "ratio"};
  Json out = Json::array();
  for (const auto& r : rows) {
    csv.add(r.X, r.theta, r.G, r.lhs, r.rhs, opt_str(r.ratio));
    out.push_back(Json{{"X", r.X},
                       {"theta", number(r.theta)},
                       {"G", r.G},
                       {"lhs", number(r.lhs)},
                       {"rhs", number(r.rhs)},
                       {"ratio", r.ratio ? number(*r.ratio) : Json(nullptr)}});
  }
  return {std::move(csv).str(), envelope("gallagher", config, Json{{"rows", std::move(out)}})};
}

ReportFiles render_variance(const ConfigEcho& config, std::span<const VariancePoint> points,
                            const std::optional<ExponentFit>& fit) {
  Csv csv{"M", "Delta", "h", "k", "mode", "variance", "ratio_to_MDeltaLog2M"};
  Json rows = Json::array();
  for (const auto& p : points) {
    const char* mode = p.max_mode ? "max" : "fixed";
    csv.add(p.M, p.Delta, p.h, p.k, mode, p.variance, p.normalized());
    rows.push_back(Json{{"M", p.M},
                        {"Delta", number(p.Delta)},
                        {"h", p.h},
                        {"k", p.k},
                        {"mode", mode},
                        {"variance", number(p.variance)},
                        {"ratio_to_MDeltaLog2M", number(p.normalized())},
                        {"in_lemma_regime", p.in_lemma_regime}});
  }
  return {std::move(csv).str(),
          envelope("variance", config, Json{{"rows", std::move(rows)}, {"fit", fit_json(fit)}})};
}

ReportFiles render_bound_report(const ConfigEcho& config, const BoundReport& report) {
  const bool gl3 = report.config.theorem == Theorem::kGl3;
  Csv csv = gl3 ? Csv{"X", "H", "Q", "lhs", "rhs", "ratio", "split_alpha", "remark_ratio"}
                : Csv{"X", "H", "Q", "lhs", "rhs", "ratio"};
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    if (gl3) {
      csv.add(r.X, r.H, r.Q, r.lhs, r.rhs, r.ratio, opt_str(r.split_alpha), opt_str(r.remark_ratio));
    } else {
      csv.add(r.X, r.H, r.Q, r.lhs, r.rhs, r.ratio);
    }
    Json row{{"X", r.X},       {"H", r.H},       {"Q", number(r.Q)},
             {"lhs", number(r.lhs)}, {"rhs", number(r.rhs)}, {"ratio", number(r.ratio)}};
    if (r.split_alpha) row["split_alpha"] = number(*r.split_alpha);
    if (r.remark_ratio) row["remark_ratio"] = number(*r.remark_ratio);
    rows.push_back(std::move(row));
  }
  Json res{{"theorem", to_string(report.config.theorem)},
           {"slope_threshold", number(report.config.threshold())},
           {"verdict", to_string(report.verdict)},
           {"fit", fit_json(report.fit)},
           {"notes", report.notes},
           {"rows", std::move(rows)}};
  return {std::move(csv).str(), envelope("bound_check", config, std::move(res))};
}

ReportFiles render_scan(const ConfigEcho& config, const ScanReport& report) {
  Csv csv{"X", "max_abs", "ratio"};
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    csv.add(r.X, r.max_abs, r.ratio);
    rows.push_back(Json{{"X", r.X}, {"max_abs", number(r.max_abs)}, {"ratio", number(r.ratio)}});
  }
  Json res{{"mode", report.mode == ScanMode::kGridMax ? "grid_max" : "partial_sum_max"},
           {"theoretical_exponent", number(report.theoretical_exponent)},
           {"oversample", report.oversample},
           {"fit", fit_json(report.fit)},
           {"rows", std::move(rows)}};
  return {std::move(csv).str(), envelope("uniform_bound_scan", config, std::move(res))};
}

ReportFiles render_fit(const ConfigEcho& config, const ExponentFit& fit) {
  Csv csv{"ln_x", "ln_y"};
  for (const auto& [x, y] : fit.points) csv.add(x, y);
  return {std::move(csv).str(), envelope("fit", config, fit_json(fit))};
}

ReportFiles render_fclass(const ConfigEcho& config, const FClassMembership& m) {
  Csv csv{"X", "A", "variance_integral", "second_moment"};
  Json rows = Json::array();
  for (const auto& r : m.rows) {
    csv.add(r.X, r.A, r.variance_integral, r.second_moment);
    rows.push_back(Json{{"X", r.X},
                        {"A", number(r.A)},
                        {"variance_integral", number(r.variance_integral)},
                        {"second_moment", number(r.second_moment)}});
  }
  Json res{{"b_hat", fit_json(m.b_hat)}, {"a2_hat", fit_json(m.a2_hat)}, {"rows", std::move(rows)}};
  return {std::move(csv).str(), envelope("fclass_membership", config, std::move(res))};
}

ReportFiles render_grid_summary(const ConfigEcho& config, const ExpSumGrid& grid,
                                double second_moment) {
  Csv csv{"j", "re", "im"};
  for (std::size_t j = 0; j < grid.values.size(); ++j) {
    csv.add(j, grid.values[j].real(), grid.values[j].imag());
  }
  const double mean_square = grid_mean_square(grid);
  Json res{{"X", grid.X},
           {"G", grid.G},
           {"mean_square", number(mean_square)},
           {"second_moment", number(second_moment)},
           {"parseval_relative_defect",
            number(second_moment > 0 ? std::abs(mean_square - second_moment) / second_moment : 0.0)},
           {"value_at_zero", complex_json(grid.values.at(0))}};
  return {std::move(csv).str(), envelope("exp_sum_grid", config, std::move(res))};
}

ReportFiles render_coefficients(const ConfigEcho& config, const CoefficientTable& table,
                                std::size_t preview_rows) {
  Csv csv{"n", "value"};
  const std::size_t rows = std::min(preview_rows, table.n_max());
  for (std::size_t n = 1; n <= rows; ++n) csv.add(n, table(n));
  Json res{{"kind", to_string(table.kind())},
           {"n_max", table.n_max()},
           {"weight", table.weight()},
           {"label", table.label()},
           {"preview_rows", rows}};
  return {std::move(csv).str(), envelope("coefficients", config, std::move(res))};
}

ReportFiles render_hecke(const ConfigEcho& config, const HeckeReport& report,
                         std::optional<std::size_t> deligne_violation, std::size_t n_max) {
  Csv csv{"check", "passed", "detail"};
  std::string detail;
  if (report.counterexample) {
    const auto& c = *report.counterexample;
    const char* kind = c.kind == HeckeCounterexample::Kind::kLeading
                           ? "leading"
                           : (c.kind == HeckeCounterexample::Kind::kMultiplicative ? "multiplicative"
                                                                                  : "prime_power");
    detail = fmt::format("{} ({},{})", kind, c.first, c.second);
  }
  csv.add("hecke", report.passed, detail);
  csv.add("deligne", !deligne_violation.has_value(),
          deligne_violation ? fmt::format("n={}", *deligne_violation) : std::string());
  Json res{{"n_max", n_max},
           {"hecke_passed", report.passed},
           {"exhaustive", report.exhaustive},
           {"checks", report.checks},
           {"counterexample", detail.empty() ? Json(nullptr) : Json(detail)},
           {"deligne_passed", !deligne_violation.has_value()},
           {"deligne_violation", deligne_violation ? Json(*deligne_violation) : Json(nullptr)}};
  return {std::move(csv).str(), envelope("coefficient_verification", config, std::move(res))};
}

void write_report(const ReportFiles& files, const std::filesystem::path& stem) {
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  auto put = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
    if (!out) throw Error("write failed: " + p.string());
  };
  put(std::filesystem::path(stem.string() + ".csv"), files.csv);
  put(std::filesystem::path(stem.string() + ".json"), files.json);
}

}  // namespace shiftconv
