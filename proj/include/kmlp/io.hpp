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

// CSV input and output. Points are comma-separated numeric rows, one point
// per line; labels are one integer per line, clusters numbered from 0.
// Blank lines and lines starting with '#' are ignored.

#ifndef KMLP_IO_HPP
#define KMLP_IO_HPP

#include <iosfwd>
#include <string>

#include "kmlp/core_types.hpp"

namespace kmlp {

/// Throws InputError with the offending line number.
PointSet read_points_csv(std::istream& in, bool skip_header = false);
PointSet read_points_csv_file(const std::string& path, bool skip_header = false);

/// K is one more than the largest label; every cluster must be nonempty.
Partition read_labels(std::istream& in);
Partition read_labels_file(const std::string& path);

/// Coordinates with 17 significant digits.
void write_points_csv(std::ostream& out, const PointSet& points);
void write_labels(std::ostream& out, const Partition& p);

}  // namespace kmlp

#endif  // KMLP_IO_HPP
