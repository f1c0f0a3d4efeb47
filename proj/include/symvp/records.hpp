#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "symvp/space.hpp"

namespace symvp {

// One point of a per-run series (descent stages, 1/n schedules, residual
// histories).  Missing columns stay NaN and serialize as nulls/blanks.
struct SeriesRow {
  int n = 0;
  double value = std::numeric_limits<double>::quiet_NaN();
  double gradNorm = std::numeric_limits<double>::quiet_NaN();
  double step = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
};

// Flat, order-preserving run certificate; one JSON line per record.
struct RunRecord {
  std::string scenario;
  std::string task;
  bool succeeded = false;
  bool degenerate = false;  // analytic obstruction, not a numerical failure
  std::string note;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, Vector>> vectors;
  std::vector<SeriesRow> series;
};

// Nearest double with 12 significant decimal digits; applied to every number
// before serialization so byte-identical output does not depend on how the
// producing run was threaded.
double roundSignificant(double v, int digits = 12);

// {"schema":1,"kind":"header",...}; the timestamp is the only field callers
// are expected to strip when comparing runs.
std::string headerJson(unsigned long long seed, const std::string& timestamp);

std::string recordToJson(const RunRecord& r);

void writeRecords(std::ostream& out, const std::vector<RunRecord>& records,
                  unsigned long long seed, const std::string& timestamp);

// Inverse of writeRecords; header lines are skipped.
std::vector<RunRecord> readRecords(std::istream& in);

// scenario,n,value,grad_norm,step,bound with blank cells for NaN.
std::string seriesCsv(const std::vector<RunRecord>& records);

}  // namespace symvp
