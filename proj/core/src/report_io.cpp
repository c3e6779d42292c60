#include "driftspec/report_io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "driftspec/error.hpp"

namespace driftspec {

namespace {

using Json = nlohmann::ordered_json;

std::string format_number(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

Json to_json(const MetaValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

Json to_json(const MetaList& list) {
  Json obj = Json::object();
  for (const auto& [key, value] : list) obj[key] = to_json(value);
  return obj;
}

MetaValue from_json(const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    if (!j.empty() && j.front().is_string()) return j.get<std::vector<std::string>>();
    std::vector<double> out;
    for (const Json& e : j) {
      if (!e.is_number()) throw IoError("mixed array in report metadata");
      out.push_back(e.get<double>());
    }
    return out;
  }
  throw IoError("unsupported value in report metadata");
}

MetaList meta_from_json(const Json& obj) {
  if (!obj.is_object()) throw IoError("expected a JSON object");
  MetaList out;
  for (auto it = obj.begin(); it != obj.end(); ++it) out.emplace_back(it.key(), from_json(*it));
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string format_csv(const Table& t) {
  std::string s;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c > 0) s += ',';
    s += t.columns[c];
  }
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) s += ',';
      s += format_number(row[c]);
    }
    s += '\n';
  }
  return s;
}

std::string format_json(const JobReport& r) {
  Json root = Json::object();
  root["kind"] = r.kind;
  root["version"] = r.version;
  root["config"] = to_json(r.config);
  root["columns"] = r.table.columns;
  Json rows = Json::array();
  for (const auto& row : r.table.rows) {
    if (row.size() != r.table.columns.size()) {
      throw IoError("table row width does not match the column count");
    }
    Json obj = Json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[r.table.columns[c]] = row[c];
    rows.push_back(std::move(obj));
  }
  root["rows"] = std::move(rows);
  root["metadata"] = to_json(r.metadata);
  root["verdict"] = {{"passed", r.passed()}, {"failures", r.failures}};
  return root.dump(2) + "\n";
}

JobReport parse_json_report(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed report JSON: ") + e.what());
  }
  try {
    JobReport r;
    r.kind = root.at("kind").get<std::string>();
    r.version = root.at("version").get<std::string>();
    r.config = meta_from_json(root.at("config"));
    r.table.columns = root.at("columns").get<std::vector<std::string>>();
    for (const Json& obj : root.at("rows")) {
      std::vector<double> row;
      for (const auto& col : r.table.columns) row.push_back(obj.at(col).get<double>());
      r.table.rows.push_back(std::move(row));
    }
    r.metadata = meta_from_json(root.at("metadata"));
    r.failures = root.at("verdict").at("failures").get<std::vector<std::string>>();
    return r;
  } catch (const Json::exception& e) {
    throw IoError(std::string("report JSON has the wrong shape: ") + e.what());
  }
}

void write_csv(const Table& t, const std::filesystem::path& path) {
  write_file(path, format_csv(t));
}

void write_json(const JobReport& r, const std::filesystem::path& path) {
  write_file(path, format_json(r));
}

}  // namespace driftspec
