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
#ifndef MONOMIX_REPORT_H_
#define MONOMIX_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "monomix/config.h"
#include "monomix/experiment.h"

namespace monomix {

inline constexpr const char* kMetricsCsvHeader =
    "episode,env_steps,metric_name,value,seed,algorithm,scenario";

// One row per evaluation point. Throws ContractError on an empty report.
void WriteMetricsCsv(std::ostream& out, const EvalReport& report,
                     const ExperimentConfig& config);
void SaveMetricsCsv(const std::filesystem::path& path, const EvalReport& report,
                    const ExperimentConfig& config);

struct CsvRow {
  std::int64_t episode = 0;
  std::int64_t env_steps = 0;
  std::string metric_name;
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string algorithm;
  std::string scenario;
};
std::vector<CsvRow> ReadMetricsCsv(std::istream& in);

double Median(std::vector<double> values);

struct SeedSummary {
  int n = 0;
  double median = 0.0;
  double ci_low = 0.0;   // 2.5th percentile of bootstrap medians
  double ci_high = 0.0;  // 97.5th percentile
};

// Percentile bootstrap of the median.
SeedSummary BootstrapMedian(const std::vector<double>& values, int resamples,
                            std::uint64_t seed);

}  // namespace monomix

#endif  // MONOMIX_REPORT_H_
