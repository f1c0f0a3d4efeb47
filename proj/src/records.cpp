#include "symvp/records.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace symvp {
namespace {

using json = nlohmann::ordered_json;

json numberOrNull(double v) {
  if (!std::isfinite(v)) return nullptr;
  return roundSignificant(v);
}

json vectorJson(const Vector& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(numberOrNull(v[i]));
  return arr;
}

double numberFrom(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

std::string csvCell(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

double roundSignificant(double v, int digits) {
  if (!std::isfinite(v)) return v;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

std::string headerJson(unsigned long long seed, const std::string& timestamp) {
  json j;
  j["schema"] = 1;
  j["kind"] = "header";
  j["tool"] = "symvp";
  j["generated_at"] = timestamp;
  j["seed"] = seed;
  return j.dump();
}

std::string recordToJson(const RunRecord& r) {
  json j;
  j["schema"] = 1;
  j["kind"] = "record";
  j["scenario"] = r.scenario;
  j["task"] = r.task;
  j["succeeded"] = r.succeeded;
  j["degenerate"] = r.degenerate;
  j["note"] = r.note;
  json metrics = json::object();
  for (const auto& [key, value] : r.metrics) metrics[key] = numberOrNull(value);
  j["metrics"] = metrics;
  json vectors = json::object();
  for (const auto& [key, value] : r.vectors) vectors[key] = vectorJson(value);
  j["vectors"] = vectors;
  json series = json::array();
  for (const SeriesRow& row : r.series) {
    json s;
    s["n"] = row.n;
    s["value"] = numberOrNull(row.value);
    s["grad_norm"] = numberOrNull(row.gradNorm);
    s["step"] = numberOrNull(row.step);
    s["bound"] = numberOrNull(row.bound);
    series.push_back(s);
  }
  j["series"] = series;
  return j.dump();
}

void writeRecords(std::ostream& out, const std::vector<RunRecord>& records,
                  unsigned long long seed, const std::string& timestamp) {
  out << headerJson(seed, timestamp) << '\n';
  for (const RunRecord& r : records) out << recordToJson(r) << '\n';
}

std::vector<RunRecord> readRecords(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("line " + std::to_string(lineNo) + ": " + e.what());
    }
    if (j.value("kind", "") == "header") continue;
    RunRecord r;
    r.scenario = j.value("scenario", "");
    r.task = j.value("task", "");
    r.succeeded = j.value("succeeded", false);
    r.degenerate = j.value("degenerate", false);
    r.note = j.value("note", "");
    if (j.contains("metrics"))
      for (const auto& [key, value] : j["metrics"].items())
        r.metrics.emplace_back(key, numberFrom(value));
    if (j.contains("vectors"))
      for (const auto& [key, value] : j["vectors"].items()) {
        Vector v(static_cast<int>(value.size()));
        for (int i = 0; i < v.size(); ++i) v[i] = numberFrom(value[i]);
        r.vectors.emplace_back(key, std::move(v));
      }
    if (j.contains("series"))
      for (const auto& s : j["series"]) {
        SeriesRow row;
        row.n = s.value("n", 0);
        row.value = numberFrom(s.at("value"));
        row.gradNorm = numberFrom(s.at("grad_norm"));
        row.step = numberFrom(s.at("step"));
        row.bound = numberFrom(s.at("bound"));
        r.series.push_back(row);
      }
    out.push_back(std::move(r));
  }
  return out;
}

std::string seriesCsv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << "scenario,n,value,grad_norm,step,bound\n";
  for (const RunRecord& r : records)
    for (const SeriesRow& row : r.series)
      os << r.scenario << ',' << row.n << ',' << csvCell(row.value) << ','
         << csvCell(row.gradNorm) << ',' << csvCell(row.step) << ',' << csvCell(row.bound)
         << '\n';
  return os.str();
}

}  // namespace symvp
