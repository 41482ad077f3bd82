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

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include <fmt/format.h>

#include "shiftconv/coefficients.hpp"
#include "shiftconv/errors.hpp"

namespace shiftconv {
namespace {

namespace fs = std::filesystem;

struct Header {
  std::string kind;
  std::optional<std::size_t> n_max;
  std::string label;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  return s;
}

// "# kind=<tag> n_max=<N> label=<string>"; label runs to end of line.
Header parse_header(std::string_view line, std::size_t line_no) {
  Header h;
  line.remove_prefix(1);
  while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
  auto take = [&](std::string_view key) -> std::string_view {
    if (!line.starts_with(key)) {
      throw ParseError("header: expected '" + std::string(key) + "'", line_no);
    }
    line.remove_prefix(key.size());
    const auto sp = line.find(' ');
    const auto value = line.substr(0, sp);
    line = sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1);
    return value;
  };
  h.kind = std::string(take("kind="));
  const auto n_text = take("n_max=");
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
  if (ec != std::errc() || ptr != n_text.data() + n_text.size()) {
    throw ParseError("header: bad n_max", line_no);
  }
  h.n_max = n;
  if (!line.starts_with("label=")) throw ParseError("header: expected 'label='", line_no);
  h.label = std::string(line.substr(6));
  return h;
}

struct Row {
  std::size_t n;
  std::string_view value;
};

Row split_row(std::string_view line, std::size_t line_no) {
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) throw ParseError("expected n<TAB>value", line_no);
  Row r{};
  const auto idx = line.substr(0, tab);
  const auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), r.n);
  if (ec != std::errc() || ptr != idx.data() + idx.size()) {
    throw ParseError("bad index '" + std::string(idx) + "'", line_no);
  }
  r.value = line.substr(tab + 1);
  if (r.value.empty()) throw ParseError("missing value", line_no);
  return r;
}

// Reads the file once, calling on_value(n, text, line) for each data row in
// order and validating contiguity.
template <typename OnValue>
Header read_rows(const fs::path& path, OnValue&& on_value) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  Header header;
  bool saw_header = false;
  std::string raw;
  std::size_t line_no = 0;
  std::size_t expected = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (saw_header || expected != 1) throw ParseError("unexpected comment line", line_no);
      header = parse_header(line, line_no);
      saw_header = true;
      continue;
    }
    const Row row = split_row(line, line_no);
    if (row.n != expected) {
      throw NonContiguousIndexError(
          "index " + std::to_string(row.n) + " where " + std::to_string(expected) + " expected",
          line_no);
    }
    on_value(row.n, row.value, line_no);
    ++expected;
  }
  if (expected == 1) throw ParseError("no data rows", line_no + 1);
  if (header.n_max && *header.n_max != expected - 1) {
    throw ParseError("header n_max=" + std::to_string(*header.n_max) + " but " +
                         std::to_string(expected - 1) + " rows",
                     0);
  }
  return header;
}

void write_header(std::ostream& out, std::string_view kind, std::size_t n_max,
                  std::string_view label) {
  out << "# kind=" << kind << " n_max=" << n_max << " label=" << label << '\n';
}

constexpr std::string_view kTauCachePrefix = "tau_delta12_v";

}  // namespace

CoefficientTable load_user_coefficients(const fs::path& path) {
  std::vector<double> values;
  const Header h = read_rows(path, [&](std::size_t, std::string_view text, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError("bad value '" + std::string(text) + "'", line_no);
    }
    values.push_back(v);
  });
  std::string label = h.label.empty() ? path.filename().string() : h.label;
  return CoefficientTable::user(std::move(values), std::move(label));
}

void save_coefficients(const CoefficientTable& table, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_header(out, to_string(table.kind()), table.n_max(), table.label());
  std::string buf;
  for (std::size_t n = 1; n <= table.n_max(); ++n) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{}\t{}\n", n, table(n));
    out << buf;
  }
  if (!out) throw Error("write failed: " + path.string());
}

void save_tau_table(const ExactTauTable& tau, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_header(out, "tau", tau.n_max(),
               "delta12 cache-v" + std::to_string(TauCache::kFormatVersion));
  for (std::size_t n = 1; n <= tau.n_max(); ++n) out << n << '\t' << tau[n].str() << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

ExactTauTable load_tau_table(const fs::path& path) {
  std::vector<TauInt> values;
  const Header h = read_rows(path, [&](std::size_t, std::string_view text, std::size_t line_no) {
    try {
      values.emplace_back(std::string(text));
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + std::string(text) + "'", line_no);
    }
  });
  if (!h.kind.empty() && h.kind != "tau") throw ParseError("not a tau table: kind=" + h.kind, 1);
  return ExactTauTable(std::move(values));
}

TauCache::TauCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path TauCache::path_for(std::size_t n_max) const {
  return dir_ / fmt::format("{}{}_{}.tsv", kTauCachePrefix, kFormatVersion, n_max);
}

std::optional<ExactTauTable> TauCache::find(std::size_t min_n) const {
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) return std::nullopt;
  const std::string prefix = fmt::format("{}{}_", kTauCachePrefix, kFormatVersion);
  std::optional<std::size_t> best;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    const std::string name = entry.path().filename().string();
    if (!name.starts_with(prefix) || !name.ends_with(".tsv")) continue;
    const std::string_view num(name.data() + prefix.size(), name.size() - prefix.size() - 4);
    std::size_t n = 0;
    const auto [ptr, err] = std::from_chars(num.data(), num.data() + num.size(), n);
    if (err != std::errc() || ptr != num.data() + num.size()) continue;
    if (n >= min_n && (!best || n < *best)) best = n;
  }
  if (!best) return std::nullopt;
  ExactTauTable full = load_tau_table(path_for(*best));
  if (full.n_max() == min_n) return full;
  const auto v = full.values();
  return ExactTauTable(std::vector<TauInt>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(min_n)));
}

void TauCache::store(const ExactTauTable& tau) const {
  fs::create_directories(dir_);
  const fs::path target = path_for(tau.n_max());
  const fs::path tmp = target.string() + ".tmp";
  save_tau_table(tau, tmp);
  fs::rename(tmp, target);
}

ExactTauTable TauCache::load_or_compute(std::size_t n_max, const TauOptions& options) {
  if (auto hit = find(n_max)) return *std::move(hit);
  ExactTauTable tau = compute_tau(n_max, options);
  store(tau);
  return tau;
}

}  // namespace shiftconv
