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

#ifndef HOUSEBENCH_CSV_H_
#define HOUSEBENCH_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "housebench/data_model.h"
#include "json.hpp"

namespace housebench {

// RFC-4180 record splitter. Quoted fields may contain commas, doubled quotes
// and line breaks.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);
std::string EscapeCsvField(std::string_view field);
std::string FormatDouble(double value);

// Schema sidecar: {"columns": [{"name", "kind", "role", "levels", "units"}]}.
Schema SchemaFromJson(const nlohmann::json& doc);
nlohmann::json SchemaToJson(const Schema& schema);
Schema LoadSchema(const std::filesystem::path& path);

// Missing cells are the empty string or "NA". Errors carry the 1-based data
// row and the column name.
Dataset ParseDataset(std::string_view csv_text, const Schema& schema);
Dataset LoadCsv(const std::filesystem::path& csv_path,
                const std::filesystem::path& schema_path);

std::string DatasetToCsv(const Dataset& ds);
void WriteDataset(const Dataset& ds, const std::filesystem::path& csv_path,
                  const std::filesystem::path& schema_path);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace housebench

#endif  // HOUSEBENCH_CSV_H_
