// Copyright 2026 The monomix Authors
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
#include "monomix/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "monomix/errors.h"
#include "monomix/random.h"

namespace monomix {
namespace {

std::string FormatValue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string ScenarioLabel(const ExperimentConfig& c) {
  return c.env == EnvKind::kTwoStep ? "two_step" : c.scenario;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

double Percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

}  // namespace

void WriteMetricsCsv(std::ostream& out, const EvalReport& report,
                     const ExperimentConfig& config) {
  if (report.points.empty()) throw ContractError("empty evaluation report");
  out << kMetricsCsvHeader << '\n';
  for (const EvalPoint& p : report.points) {
    out << p.episode << ',' << p.env_steps << ',' << CsvField(report.metric_name)
        << ',' << FormatValue(p.value) << ',' << config.seed << ','
        << CsvField(config.algorithm) << ',' << CsvField(ScenarioLabel(config))
        << '\n';
  }
}

void SaveMetricsCsv(const std::filesystem::path& path, const EvalReport& report,
                    const ExperimentConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot write " + path.string());
  WriteMetricsCsv(out, report, config);
  if (!out) throw ContractError("failed writing " + path.string());
}

std::vector<CsvRow> ReadMetricsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsCsvHeader) {
    throw FormatError("metrics CSV: missing or unexpected header");
  }
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 7) {
      throw FormatError("metrics CSV: expected 7 fields in '" + line + "'");
    }
    try {
      rows.push_back({std::stoll(f[0]), std::stoll(f[1]), f[2], std::stod(f[3]),
                      std::stoull(f[4]), f[5], f[6]});
    } catch (const std::exception&) {
      throw FormatError("metrics CSV: malformed row '" + line + "'");
    }
  }
  return rows;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw ContractError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SeedSummary BootstrapMedian(const std::vector<double>& values, int resamples,
                            std::uint64_t seed) {
  if (values.empty()) throw ContractError("bootstrap of an empty set");
  if (resamples < 1) throw ContractError("bootstrap needs >= 1 resample");
  SeedSummary s;
  s.n = static_cast<int>(values.size());
  s.median = Median(values);
  Rng rng(seed);
  std::vector<double> medians;
  medians.reserve(static_cast<std::size_t>(resamples));
  std::vector<double> draw(values.size());
  for (int r = 0; r < resamples; ++r) {
    for (double& d : draw) {
      d = values[static_cast<std::size_t>(
          UniformInt(rng, 0, static_cast<int>(values.size()) - 1))];
    }
    medians.push_back(Median(draw));
  }
  std::sort(medians.begin(), medians.end());
  s.ci_low = Percentile(medians, 0.025);
  s.ci_high = Percentile(medians, 0.975);
  return s;
}

}  // namespace monomix
