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

#ifndef HOUSEBENCH_ERRORS_H_
#define HOUSEBENCH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace housebench {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind {
  kConfig = 1,
  kData = 2,
  kModel = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorKind::kConfig, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::kData, message) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& message)
      : Error(ErrorKind::kModel, message) {}
};

}  // namespace housebench

#endif  // HOUSEBENCH_ERRORS_H_
