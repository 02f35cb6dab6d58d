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

#include "wavica/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "wavica/error.hpp"

namespace wavica {
namespace {

bool parse_row(const std::string& line, std::vector<double>& row) {
  row.clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() &&
           (line[pos] == ',' || line[pos] == ' ' || line[pos] == '\t' ||
            line[pos] == '\r' || line[pos] == ';')) {
      ++pos;
    }
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ',' && line[end] != ' ' &&
           line[end] != '\t' && line[end] != '\r' && line[end] != ';') {
      ++end;
    }
    double v = 0.0;
    const char* first = line.data() + pos;
    const char* last = line.data() + end;
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return false;
    row.push_back(v);
    pos = end;
  }
  return true;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::vector<double> row;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!parse_row(line, row)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw InvalidArgument("csv line " + std::to_string(line_no) +
                            " is not numeric");
    }
    if (row.empty()) continue;
    header_allowed = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument("csv line " + std::to_string(line_no) + " has " +
                            std::to_string(row.size()) + " columns, expected " +
                            std::to_string(rows.front().size()));
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw InvalidArgument("csv input has no data rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t l = 0; l < rows[i].size(); ++l) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = rows[i][l];
    }
  }
  return m;
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_matrix_csv(in);
}

void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& os,
                      const std::vector<std::string>& header) {
  const auto old = os.precision(17);
  for (std::size_t c = 0; c < header.size(); ++c) {
    os << (c ? "," : "") << header[c];
  }
  if (!header.empty()) os << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index l = 0; l < m.cols(); ++l) {
      os << (l ? "," : "") << m(i, l);
    }
    os << '\n';
  }
  os.precision(old);
}

}  // namespace wavica
