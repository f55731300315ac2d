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
#include "monomix/parameters.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "monomix/errors.h"

namespace monomix {
namespace {

constexpr char kMagic[8] = {'M', 'O', 'N', 'O', 'M', 'I', 'X', '\0'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename T>
void WritePod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError("checkpoint truncated");
  return value;
}

}  // namespace

std::size_t ParameterSet::Add(std::string name, Tensor value) {
  if (index_.contains(name)) {
    throw ContractError("duplicate parameter name: " + name);
  }
  const std::size_t i = values_.size();
  index_.emplace(name, i);
  names_.push_back(std::move(name));
  values_.push_back(std::move(value));
  return i;
}

std::optional<std::size_t> ParameterSet::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ParameterSet::IndexOf(std::string_view name) const {
  auto i = Find(name);
  if (!i) throw ContractError("unknown parameter: " + std::string(name));
  return *i;
}

std::size_t ParameterSet::TotalElements() const {
  std::size_t n = 0;
  for (const Tensor& t : values_) n += t.size();
  return n;
}

std::uint64_t ParameterSet::Fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  for (std::size_t i = 0; i < values_.size(); ++i) {
    mix(names_[i].data(), names_[i].size());
    for (std::size_t d : values_[i].shape()) mix(&d, sizeof(d));
    mix(values_[i].data().data(), values_[i].size() * sizeof(double));
  }
  return h;
}

double GlobalNorm(const Gradients& grads) {
  double sq = 0.0;
  for (const Tensor& g : grads) {
    for (double v : g.data()) sq += v * v;
  }
  return std::sqrt(sq);
}

void InitFanIn(Tensor& t, std::size_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (double& v : t.data()) v = UniformReal(rng, -bound, bound);
}

void WriteCheckpoint(std::ostream& out, const ParameterSet& params) {
  out.write(kMagic, sizeof(kMagic));
  WritePod<std::uint8_t>(out, kCheckpointVersion);
  WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::string& name = params.name(i);
    const Tensor& t = params.value(i);
    WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    WritePod<std::uint8_t>(out, static_cast<std::uint8_t>(t.rank()));
    for (std::size_t d : t.shape()) WritePod<std::uint64_t>(out, d);
    out.write(reinterpret_cast<const char*>(t.data().data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!out) throw FormatError("failed writing checkpoint");
}

ParameterSet ReadCheckpoint(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a monomix checkpoint (bad magic)");
  }
  const auto version = ReadPod<std::uint8_t>(in);
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " +
                      std::to_string(version));
  }
  const auto count = ReadPod<std::uint32_t>(in);
  ParameterSet params;
  for (std::uint32_t r = 0; r < count; ++r) {
    const auto name_len = ReadPod<std::uint32_t>(in);
    if (name_len > 4096) throw FormatError("implausible parameter name length");
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const auto rank = ReadPod<std::uint8_t>(in);
    if (rank > 2) throw FormatError("checkpoint tensor rank above 2");
    Shape shape(rank);
    for (auto& d : shape) d = ReadPod<std::uint64_t>(in);
    std::vector<double> values(ShapeSize(shape));
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw FormatError("checkpoint truncated in record " + name);
    params.Add(std::move(name), Tensor(std::move(shape), std::move(values)));
  }
  return params;
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const ParameterSet& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  WriteCheckpoint(out, params);
}

ParameterSet LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  return ReadCheckpoint(in);
}

void AssignParameters(ParameterSet& target, const ParameterSet& source) {
  if (target.size() != source.size()) {
    throw ContractError("parameter sets differ in size");
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target.name(i) != source.name(i) ||
        !target.value(i).SameShape(source.value(i))) {
      throw ContractError("parameter mismatch at " + target.name(i));
    }
    target.mutable_value(i) = source.value(i);
  }
}

}  // namespace monomix
