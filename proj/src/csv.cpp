// Copyright 2026 the rsengine authors
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

#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "errors.hpp"

namespace rs {

std::string format_double(double value) {
  char buffer[32];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, const std::string& path,
                    std::size_t line_number) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' ||
                         end[-1] == '\r')) --end;
  double value = 0.0;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    fail(ErrorCode::IoError,
         path + ":" + std::to_string(line_number) +
             ": cannot parse '" + field + "' as a number");
  }
  return value;
}

}  // namespace

Eigen::MatrixXd load_empirical_csv(const std::string& path) {
  std::ifstream input(path);
  if (!input) {
    fail(ErrorCode::IoError, "cannot open " + path);
  }
  std::string line;
  if (!std::getline(input, line)) {
    fail(ErrorCode::EmptyTable, path + ": missing header row");
  }
  const std::size_t columns = split_fields(line).size();
  if (columns == 0) {
    fail(ErrorCode::EmptyTable, path + ": empty header row");
  }

  std::vector<std::vector<double>> rows;
  std::size_t line_number = 1;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != columns) {
      fail(ErrorCode::IoError,
           path + ":" + std::to_string(line_number) + ": expected " +
               std::to_string(columns) + " fields, got " +
               std::to_string(fields.size()));
    }
    std::vector<double> row(columns);
    for (std::size_t j = 0; j < columns; ++j) {
      row[j] = parse_number(fields[j], path, line_number);
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) {
    fail(ErrorCode::EmptyTable,
         path + ": need at least 2 data rows, got " +
             std::to_string(rows.size()));
  }

  Eigen::MatrixXd table(rows.size(), columns);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < columns; ++j) table(i, j) = rows[i][j];
  }
  return table;
}

}  // namespace rs
