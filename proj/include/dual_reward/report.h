// Copyright 2026 The dual-reward Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Aggregation of metrics.csv into plot-ready series and a summary table.

#ifndef DUAL_REWARD_REPORT_H_
#define DUAL_REWARD_REPORT_H_

#include <istream>
#include <string>
#include <vector>

#include "dual_reward/experiment.h"
#include "dual_reward/metrics.h"

namespace dual_reward {

// Throws Error("<name>:<line>: ...") on a malformed header or row.
std::vector<MetricsRow> ParseMetricsCsv(std::istream& in,
                                        const std::string& name);
std::vector<MetricsRow> ReadMetricsCsv(const std::string& path);

// Aggregates of one (method, k, t) cell. Failed (NaN) rows are skipped.
struct ReportPoint {
  std::string method;
  int k = 0;
  int t = 0;
  int n = 0;
  MeanStdErr subopt;
  MeanStdErr mse;
  double gv = 0.0;
  double logdet = 0.0;
  double wall_ms = 0.0;
};

// Least-squares slope of log mean MSE against log T.
struct MseSlope {
  std::string method;
  int k = 0;
  double slope = 0.0;
};

struct Report {
  // Methods in first-appearance order, then k and t ascending.
  std::vector<ReportPoint> points;
  std::vector<MseSlope> slopes;
};

Report BuildReport(const std::vector<MetricsRow>& rows);

// Writes series.csv, summary.csv, slopes.csv and summary.txt. GV is scaled
// by 1e11 in summary.txt only.
void WriteReport(const Report& report, const std::string& dir);

}  // namespace dual_reward

#endif  // DUAL_REWARD_REPORT_H_
