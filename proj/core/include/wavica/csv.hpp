// Copyright 2026 The wavica Authors
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

#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace wavica {

/// Reads a numeric matrix, one row per line, comma or whitespace separated.
/// A first line that does not parse as numbers is treated as a header.
/// Lines starting with '#' are skipped.
Eigen::MatrixXd read_matrix_csv(std::istream& is);
Eigen::MatrixXd read_matrix_csv_file(const std::string& path);

void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& os,
                      const std::vector<std::string>& header = {});

}  // namespace wavica
