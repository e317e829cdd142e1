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

#include "dual_reward/report.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>

#include "dual_reward/errors.h"

namespace dual_reward {
namespace {

[[noreturn]] void Fail(const std::string& name, int line,
                       const std::string& what) {
  throw Error(name + ":" + std::to_string(line) + ": " + what);
}

double ParseDouble(const std::string& field, const std::string& name,
                   int line) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || *end != '\0' || errno == ERANGE) {
    Fail(name, line, "bad number '" + field + "'");
  }
  return v;
}

long long ParseInt(const std::string& field, const std::string& name,
                   int line) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(field.c_str(), &end, 10);
  if (field.empty() || *end != '\0' || errno == ERANGE) {
    Fail(name, line, "bad integer '" + field + "'");
  }
  return v;
}

using FilePtr = std::unique_ptr<FILE, int (*)(FILE*)>;

FilePtr Open(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.string().c_str(), "w"), &std::fclose);
  if (!f) throw Error("cannot write " + path.string());
  return f;
}

void Close(FilePtr f, const std::filesystem::path& path) {
  if (std::ferror(f.get()) || std::fclose(f.release()) != 0) {
    throw Error("write failed: " + path.string());
  }
}

}  // namespace

std::vector<MetricsRow> ParseMetricsCsv(std::istream& in,
                                        const std::string& name) {
  std::vector<MetricsRow> rows;
  std::string text;
  int line = 0;
  if (!std::getline(in, text)) Fail(name, 1, "missing header");
  ++line;
  if (!text.empty() && text.back() == '\r') text.pop_back();
  if (text != kMetricsHeader) Fail(name, line, "unexpected header");
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(text);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (!text.empty() && text.back() == ',') fields.push_back("");
    if (fields.size() != 10) {
      Fail(name, line, "expected 10 fields, got " +
                           std::to_string(fields.size()));
    }
    MetricsRow r;
    r.method = fields[0];
    if (r.method.empty()) Fail(name, line, "empty method");
    r.t = static_cast<int>(ParseInt(fields[1], name, line));
    r.k = static_cast<int>(ParseInt(fields[2], name, line));
    r.rep = static_cast<int>(ParseInt(fields[3], name, line));
    r.seed = static_cast<std::uint64_t>(ParseInt(fields[4], name, line));
    r.gv = ParseDouble(fields[5], name, line);
    r.mse = ParseDouble(fields[6], name, line);
    r.subopt = ParseDouble(fields[7], name, line);
    r.logdet = ParseDouble(fields[8], name, line);
    r.wall_ms = ParseInt(fields[9], name, line);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<MetricsRow> ReadMetricsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return ParseMetricsCsv(in, path);
}

Report BuildReport(const std::vector<MetricsRow>& rows) {
  std::map<std::string, int> method_order;
  for (const MetricsRow& r : rows) {
    method_order.emplace(r.method, static_cast<int>(method_order.size()));
  }
  // (method order, k, t) -> member rows.
  std::map<std::tuple<int, int, int>, std::vector<const MetricsRow*>> cells;
  for (const MetricsRow& r : rows) {
    cells[{method_order.at(r.method), r.k, r.t}].push_back(&r);
  }

  Report report;
  for (const auto& [key, members] : cells) {
    ReportPoint p;
    p.method = members.front()->method;
    p.k = std::get<1>(key);
    p.t = std::get<2>(key);
    std::vector<double> subopt, mse;
    double gv_sum = 0.0, logdet_sum = 0.0, wall_sum = 0.0;
    int gv_n = 0;
    for (const MetricsRow* r : members) {
      if (std::isnan(r->mse) || std::isnan(r->subopt)) continue;
      subopt.push_back(r->subopt);
      mse.push_back(r->mse);
      logdet_sum += r->logdet;
      wall_sum += static_cast<double>(r->wall_ms);
      if (!std::isnan(r->gv)) {
        gv_sum += r->gv;
        ++gv_n;
      }
    }
    p.n = static_cast<int>(mse.size());
    p.subopt = Summarize(subopt);
    p.mse = Summarize(mse);
    p.gv = gv_n > 0 ? gv_sum / gv_n : std::nan("");
    p.logdet = p.n > 0 ? logdet_sum / p.n : std::nan("");
    p.wall_ms = p.n > 0 ? wall_sum / p.n : std::nan("");
    report.points.push_back(std::move(p));
  }

  // Points of one (method, k) are contiguous with t ascending.
  for (size_t i = 0; i < report.points.size();) {
    size_t j = i;
    std::vector<double> ts, means;
    while (j < report.points.size() &&
           report.points[j].method == report.points[i].method &&
           report.points[j].k == report.points[i].k) {
      if (report.points[j].n > 0 && report.points[j].mse.mean > 0.0) {
        ts.push_back(report.points[j].t);
        means.push_back(report.points[j].mse.mean);
      }
      ++j;
    }
    if (ts.size() >= 2) {
      report.slopes.push_back({report.points[i].method, report.points[i].k,
                               LogLogSlope(ts, means)});
    }
    i = j;
  }
  return report;
}

void WriteReport(const Report& report, const std::string& dir_name) {
  const std::filesystem::path dir(dir_name);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());

  const auto series_path = dir / "series.csv";
  FilePtr series = Open(series_path);
  std::fprintf(series.get(),
               "method,k,t,n,subopt_mean,subopt_se,mse_mean,mse_se\n");
  for (const ReportPoint& p : report.points) {
    std::fprintf(series.get(), "%s,%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n",
                 p.method.c_str(), p.k, p.t, p.n, p.subopt.mean,
                 p.subopt.std_error, p.mse.mean, p.mse.std_error);
  }
  Close(std::move(series), series_path);

  const auto summary_path = dir / "summary.csv";
  FilePtr summary = Open(summary_path);
  std::fprintf(summary.get(),
               "method,k,t,n,gv,mse_mean,mse_se,subopt_mean,subopt_se,"
               "logdet_mean,wall_ms_mean\n");
  for (const ReportPoint& p : report.points) {
    std::fprintf(summary.get(),
                 "%s,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                 p.method.c_str(), p.k, p.t, p.n, p.gv, p.mse.mean,
                 p.mse.std_error, p.subopt.mean, p.subopt.std_error, p.logdet,
                 p.wall_ms);
  }
  Close(std::move(summary), summary_path);

  const auto slopes_path = dir / "slopes.csv";
  FilePtr slopes = Open(slopes_path);
  std::fprintf(slopes.get(), "method,k,mse_loglog_slope\n");
  for (const MseSlope& s : report.slopes) {
    std::fprintf(slopes.get(), "%s,%d,%.17g\n", s.method.c_str(), s.k,
                 s.slope);
  }
  Close(std::move(slopes), slopes_path);

  const auto text_path = dir / "summary.txt";
  FilePtr text = Open(text_path);
  std::fprintf(text.get(), "%-18s %5s %6s %4s %14s %18s %20s %10s\n", "method",
               "K", "T", "n", "GV (1e-11)", "MSE", "SubOpt", "wall_ms");
  for (const ReportPoint& p : report.points) {
    std::fprintf(text.get(),
                 "%-18s %5d %6d %4d %14.4g %8.4f +- %6.4f %9.5f +- %7.5f "
                 "%10.1f\n",
                 p.method.c_str(), p.k, p.t, p.n, p.gv * 1e11, p.mse.mean,
                 p.mse.std_error, p.subopt.mean, p.subopt.std_error,
                 p.wall_ms);
  }
  if (!report.slopes.empty()) {
    std::fprintf(text.get(), "\nlog-log slope of mean MSE vs T\n");
    for (const MseSlope& s : report.slopes) {
      std::fprintf(text.get(), "%-18s K=%-5d %+.3f\n", s.method.c_str(), s.k,
                   s.slope);
    }
  }
  Close(std::move(text), text_path);
}

}  // namespace dual_reward
