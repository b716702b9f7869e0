// Copyright 2026 The kmlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kmlp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace kmlp {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool skippable(std::string_view s) { return s.empty() || s.front() == '#'; }

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

template <class T>
T parse_field(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    fail(line, "cannot parse '" + std::string(field) + "'");
  return value;
}

std::ifstream open(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  return f;
}

}  // namespace

PointSet read_points_csv(std::istream& in, bool skip_header) {
  std::string raw;
  std::size_t line = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  bool header_pending = skip_header;
  std::vector<double> coords;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = trim(raw);
    if (skippable(s)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::size_t fields = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = s.find(',', start);
      const auto field = s.substr(start, comma == std::string_view::npos
                                             ? std::string_view::npos
                                             : comma - start);
      const double v = parse_field<double>(field, line);
      if (!std::isfinite(v)) fail(line, "non-finite coordinate");
      coords.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n == 0) {
      m = fields;
    } else if (fields != m) {
      fail(line, "expected " + std::to_string(m) + " columns, found " +
                     std::to_string(fields));
    }
    ++n;
  }
  if (n == 0) throw InputError("no data rows");
  return PointSet(n, m, std::move(coords));
}

PointSet read_points_csv_file(const std::string& path, bool skip_header) {
  auto f = open(path);
  try {
    return read_points_csv(f, skip_header);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Partition read_labels(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  std::vector<int> labels;
  int max_label = -1;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = trim(raw);
    if (skippable(s)) continue;
    const int v = parse_field<int>(s, line);
    if (v < 0) fail(line, "labels must be >= 0");
    labels.push_back(v);
    max_label = std::max(max_label, v);
  }
  if (labels.empty()) throw InputError("no labels");
  return Partition(static_cast<std::size_t>(max_label) + 1, std::move(labels));
}

Partition read_labels_file(const std::string& path) {
  auto f = open(path);
  try {
    return read_labels(f);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  char buf[32];
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < points.dim(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", points(i, k));
      if (k) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_labels(std::ostream& out, const Partition& p) {
  for (int a : p.assignment()) out << a << '\n';
}

}  // namespace kmlp
