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

#ifndef RSENGINE_CSV_HPP
#define RSENGINE_CSV_HPP

#include <string>

#include <Eigen/Dense>

namespace rs {

// Shortest round-trip decimal form of a double ("0.1", not
// "0.10000000000000001"); keeps CSV output stable and reparsable.
std::string format_double(double value);

// Empirical data table: first row holds alternative labels, every later row
// one joint observation (comma separated, '.' decimal separator).
Eigen::MatrixXd load_empirical_csv(const std::string& path);

}  // namespace rs

#endif  // RSENGINE_CSV_HPP
