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

// CSV and JSON renderings of every result type. Output depends only on the
// values passed in, so identical inputs give byte-identical files.

#ifndef SHIFTCONV_REPORT_HPP_
#define SHIFTCONV_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "shiftconv/arcs.hpp"
#include "shiftconv/coefficients.hpp"
#include "shiftconv/experiments.hpp"
#include "shiftconv/expsum.hpp"
#include "shiftconv/fit.hpp"
#include "shiftconv/sums.hpp"

namespace shiftconv {

/// Library version embedded in every JSON report.
std::string_view library_version();

using ConfigValue = std::variant<std::string, std::int64_t, std::uint64_t, double, bool>;

/// Resolved parameters, echoed in insertion order.
class ConfigEcho {
 public:
  ConfigEcho& set(std::string key, ConfigValue value);
  const std::vector<std::pair<std::string, ConfigValue>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, ConfigValue>> entries_;
};

struct ReportFiles {
  std::string csv;
  std::string json;
};

/// RFC-4180 field quoting: quoted when the field holds a comma, quote, CR or
/// LF; embedded quotes doubled.
std::string csv_field(std::string_view s);
/// Shortest decimal that round-trips.
std::string format_double(double v);

ReportFiles render_shifted_sums(const ConfigEcho& config, const ShiftedSumResult& result);
ReportFiles render_reordered(const ConfigEcho& config, Complex value);
ReportFiles render_arc_table(const ConfigEcho& config, const FareyDissection& dissection,
                             const DissectionCheck& check);
ReportFiles render_arc_decomposition(const ConfigEcho& config, const ArcDecomposition& d);
ReportFiles render_gallagher(const ConfigEcho& config, std::span<const GallagherReport> rows);
ReportFiles render_variance(const ConfigEcho& config, std::span<const VariancePoint> points,
                            const std::optional<ExponentFit>& fit);
ReportFiles render_bound_report(const ConfigEcho& config, const BoundReport& report);
ReportFiles render_scan(const ConfigEcho& config, const ScanReport& report);
ReportFiles render_fit(const ConfigEcho& config, const ExponentFit& fit);
ReportFiles render_fclass(const ConfigEcho& config, const FClassMembership& m);
ReportFiles render_grid_summary(const ConfigEcho& config, const ExpSumGrid& grid,
                                double second_moment);
ReportFiles render_coefficients(const ConfigEcho& config, const CoefficientTable& table,
                                std::size_t preview_rows);
ReportFiles render_hecke(const ConfigEcho& config, const HeckeReport& report,
                         std::optional<std::size_t> deligne_violation, std::size_t n_max);

/// Writes stem.csv and stem.json. Directories are created as needed.
void write_report(const ReportFiles& files, const std::filesystem::path& stem);

}  // namespace shiftconv

#endif  // SHIFTCONV_REPORT_HPP_
