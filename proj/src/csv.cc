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

#include "housebench/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "housebench/errors.h"

namespace housebench {

using nlohmann::json;

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t i = 0;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // CRLF handled on the '\n'.
    } else if (c == '\n') {
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (in_quotes) throw DataError("unterminated quoted CSV field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

std::string EscapeCsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string FormatDouble(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Schema SchemaFromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("columns") ||
      !doc["columns"].is_array()) {
    throw DataError("schema document must be an object with a 'columns' array");
  }
  static const std::set<std::string> kKeys = {"name", "kind", "role",
                                              "levels", "units"};
  Schema schema;
  for (const json& entry : doc["columns"]) {
    for (const auto& [key, unused] : entry.items()) {
      if (!kKeys.count(key)) {
        throw DataError("unknown schema key '" + key + "'");
      }
    }
    ColumnSchema col;
    try {
      col.name = entry.at("name").get<std::string>();
      col.kind = ParseColumnKind(entry.value("kind", std::string("numeric")));
      col.role = ParseColumnRole(entry.value("role", std::string("feature")));
      if (entry.contains("levels")) {
        col.levels = entry["levels"].get<std::vector<std::string>>();
      }
      col.units = entry.value("units", std::string());
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed schema entry: ") + e.what());
    }
    if (col.kind == ColumnKind::kBinary && col.levels.empty()) {
      col.levels = {"0", "1"};
    }
    schema.push_back(std::move(col));
  }
  ValidateSchema(schema);
  return schema;
}

json SchemaToJson(const Schema& schema) {
  json columns = json::array();
  for (const ColumnSchema& col : schema) {
    json entry = {{"name", col.name},
                  {"kind", std::string(ColumnKindName(col.kind))},
                  {"role", std::string(ColumnRoleName(col.role))}};
    if (col.kind == ColumnKind::kCategorical) entry["levels"] = col.levels;
    if (!col.units.empty()) entry["units"] = col.units;
    columns.push_back(std::move(entry));
  }
  return json{{"columns", columns}};
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

Schema LoadSchema(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError("schema '" + path.string() + "' does not parse: " +
                    e.what());
  }
  return SchemaFromJson(doc);
}

namespace {

std::string Where(size_t data_row, const std::string& column) {
  return " (row " + std::to_string(data_row) + ", column '" + column + "')";
}

bool IsMissingToken(std::string_view cell) {
  return cell.empty() || cell == "NA";
}

double ParseNumber(const std::string& cell, size_t row,
                   const std::string& column) {
  size_t start = cell.find_first_not_of(" \t");
  size_t stop = cell.find_last_not_of(" \t");
  if (start == std::string::npos) start = stop = 0;
  const char* first = cell.data() + start;
  const char* last = cell.data() + stop + 1;
  double value = 0.0;
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
    throw DataError("unparseable numeric cell '" + cell + "'" +
                    Where(row, column));
  }
  return value;
}

}  // namespace

Dataset ParseDataset(std::string_view csv_text, const Schema& schema) {
  ValidateSchema(schema);
  std::vector<std::vector<std::string>> records = ParseCsv(csv_text);
  if (records.empty()) throw DataError("CSV has no header row");
  const std::vector<std::string>& header = records.front();

  std::map<std::string, size_t> schema_index;
  for (size_t c = 0; c < schema.size(); ++c) schema_index[schema[c].name] = c;

  std::vector<size_t> field_for_column(schema.size(), SIZE_MAX);
  for (size_t f = 0; f < header.size(); ++f) {
    auto it = schema_index.find(header[f]);
    if (it == schema_index.end()) {
      throw DataError("unknown column '" + header[f] + "' in CSV header (column " +
                      std::to_string(f + 1) + ")");
    }
    if (field_for_column[it->second] != SIZE_MAX) {
      throw DataError("duplicate header '" + header[f] + "' (column " +
                      std::to_string(f + 1) + ")");
    }
    field_for_column[it->second] = f;
  }
  for (size_t c = 0; c < schema.size(); ++c) {
    if (field_for_column[c] == SIZE_MAX) {
      throw DataError("CSV header lacks schema column '" + schema[c].name + "'");
    }
  }

  std::vector<Column> columns(schema.size());
  size_t data_row = 0;
  for (size_t r = 1; r < records.size(); ++r) {
    const std::vector<std::string>& rec = records[r];
    if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
    ++data_row;
    if (rec.size() != header.size()) {
      throw DataError("row " + std::to_string(data_row) + " has " +
                      std::to_string(rec.size()) + " fields, header has " +
                      std::to_string(header.size()));
    }
    for (size_t c = 0; c < schema.size(); ++c) {
      const ColumnSchema& cs = schema[c];
      const std::string& cell = rec[field_for_column[c]];
      Column& col = columns[c];
      if (cs.role == ColumnRole::kIdentifier) {
        col.text.push_back(cell);
        col.missing.push_back(IsMissingToken(cell) ? 1 : 0);
        continue;
      }
      if (IsMissingToken(cell)) {
        col.values.push_back(0.0);
        col.missing.push_back(1);
        continue;
      }
      double value = 0.0;
      switch (cs.kind) {
        case ColumnKind::kNumeric:
          value = ParseNumber(cell, data_row, cs.name);
          break;
        case ColumnKind::kBinary:
          if (cell == "0") {
            value = 0.0;
          } else if (cell == "1") {
            value = 1.0;
          } else {
            throw DataError("binary value '" + cell + "' is not 0 or 1" +
                            Where(data_row, cs.name));
          }
          break;
        case ColumnKind::kCategorical: {
          auto it = std::find(cs.levels.begin(), cs.levels.end(), cell);
          if (it == cs.levels.end()) {
            throw DataError("value '" + cell + "' is not a declared level" +
                            Where(data_row, cs.name));
          }
          value = static_cast<double>(it - cs.levels.begin());
          break;
        }
      }
      col.values.push_back(value);
      col.missing.push_back(0);
    }
  }
  if (data_row == 0) throw DataError("CSV has no data rows");
  return Dataset(schema, std::move(columns));
}

Dataset LoadCsv(const std::filesystem::path& csv_path,
                const std::filesystem::path& schema_path) {
  const Schema schema = LoadSchema(schema_path);
  return ParseDataset(ReadFile(csv_path), schema);
}

std::string DatasetToCsv(const Dataset& ds) {
  std::string out;
  for (size_t c = 0; c < ds.num_columns(); ++c) {
    if (c) out.push_back(',');
    out += EscapeCsvField(ds.column_schema(c).name);
  }
  out.push_back('\n');
  for (size_t r = 0; r < ds.num_rows(); ++r) {
    for (size_t c = 0; c < ds.num_columns(); ++c) {
      if (c) out.push_back(',');
      out += EscapeCsvField(ds.CellText(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

void WriteDataset(const Dataset& ds, const std::filesystem::path& csv_path,
                  const std::filesystem::path& schema_path) {
  WriteFile(csv_path, DatasetToCsv(ds));
  WriteFile(schema_path, SchemaToJson(ds.schema()).dump(2) + "\n");
}

}  // namespace housebench
