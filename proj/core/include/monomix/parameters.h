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
#ifndef MONOMIX_PARAMETERS_H_
#define MONOMIX_PARAMETERS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "monomix/random.h"
#include "monomix/tensor.h"

namespace monomix {

// Ordered, named collection of trainable tensors. Copying a ParameterSet
// produces an independent snapshot, which is how target networks and
// evaluation snapshots are made.
class ParameterSet {
 public:
  std::size_t Add(std::string name, Tensor value);

  std::size_t size() const { return values_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const Tensor& value(std::size_t i) const { return values_[i]; }
  Tensor& mutable_value(std::size_t i) { return values_[i]; }

  std::optional<std::size_t> Find(std::string_view name) const;
  std::size_t IndexOf(std::string_view name) const;
  const Tensor& value(std::string_view name) const {
    return values_[IndexOf(name)];
  }
  Tensor& mutable_value(std::string_view name) {
    return values_[IndexOf(name)];
  }

  std::size_t TotalElements() const;

  // FNV-1a over names, shapes and the raw bytes of every value.
  std::uint64_t Fingerprint() const;

  friend bool operator==(const ParameterSet& a, const ParameterSet& b) {
    return a.names_ == b.names_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Gradients aligned index-for-index with a ParameterSet.
using Gradients = std::vector<Tensor>;

double GlobalNorm(const Gradients& grads);

// Fills with U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
void InitFanIn(Tensor& t, std::size_t fan_in, Rng& rng);

// Checkpoint format (little-endian):
//   "MONOMIX\0" magic, u8 version, u32 record count, then per record:
//   u32 name length, name bytes, u8 rank, u64 dims..., f64 row-major payload.
inline constexpr std::uint8_t kCheckpointVersion = 1;

void WriteCheckpoint(std::ostream& out, const ParameterSet& params);
ParameterSet ReadCheckpoint(std::istream& in);
void SaveCheckpoint(const std::filesystem::path& path,
                    const ParameterSet& params);
ParameterSet LoadCheckpoint(const std::filesystem::path& path);

// Copies values from 'source' into 'target', requiring identical names and
// shapes.
void AssignParameters(ParameterSet& target, const ParameterSet& source);

}  // namespace monomix

#endif  // MONOMIX_PARAMETERS_H_
