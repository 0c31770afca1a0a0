/*
 * Copyright 2026 The housebench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef HOUSEBENCH_TESTS_TEST_UTIL_H_
#define HOUSEBENCH_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "housebench/csv.h"
#include "housebench/data_model.h"

namespace housebench::testing {

// Small mixed-kind schema: id, price target, two numeric features, a
// categorical and a binary.
inline Schema SmallSchema() {
  return SchemaFromJson(nlohmann::json::parse(R"({"columns": [
    {"name": "id", "kind": "numeric", "role": "identifier"},
    {"name": "price", "kind": "numeric", "role": "target"},
    {"name": "area", "kind": "numeric"},
    {"name": "age", "kind": "numeric"},
    {"name": "Region", "kind": "categorical",
     "levels": ["Central", "North", "South", "East", "Gunbarrel", "Rural"]},
    {"name": "pool", "kind": "binary"}
  ]})"));
}

inline Eigen::MatrixXd RandomMatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = normal(gen);
  }
  return m;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("housebench_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace housebench::testing

#endif  // HOUSEBENCH_TESTS_TEST_UTIL_H_
