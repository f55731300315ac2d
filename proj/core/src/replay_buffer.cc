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
#include "monomix/replay_buffer.h"

#include <string>
#include <utility>

#include "monomix/errors.h"

namespace monomix {

ReplayBuffer::ReplayBuffer(int capacity, int max_episode_length)
    : capacity_(capacity), max_episode_length_(max_episode_length) {
  if (capacity < 1) throw ConfigError("replay capacity must be >= 1");
  if (max_episode_length < 1) {
    throw ConfigError("replay episode length limit must be >= 1");
  }
}

void ReplayBuffer::Store(Episode episode) {
  if (episode.length < 1) throw ContractError("cannot store an empty episode");
  if (episode.length > max_episode_length_) {
    throw ContractError("episode of length " + std::to_string(episode.length) +
                        " exceeds the limit of " +
                        std::to_string(max_episode_length_));
  }
  if (static_cast<int>(episodes_.size()) == capacity_) episodes_.pop_front();
  episodes_.push_back(std::move(episode));
  ++total_stored_;
}

std::vector<const Episode*> ReplayBuffer::Sample(int count, Rng& rng) const {
  if (episodes_.empty()) throw ContractError("sampling from an empty buffer");
  if (count < 1) throw ContractError("sample count must be >= 1");
  std::vector<const Episode*> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int k = UniformInt(rng, 0, static_cast<int>(episodes_.size()) - 1);
    out.push_back(&episodes_[static_cast<std::size_t>(k)]);
  }
  return out;
}

const Episode& ReplayBuffer::at(int i) const {
  if (i < 0 || i >= size()) throw ContractError("replay index out of range");
  return episodes_[static_cast<std::size_t>(i)];
}

Episode& ReplayBuffer::mutable_at(int i) {
  if (i < 0 || i >= size()) throw ContractError("replay index out of range");
  return episodes_[static_cast<std::size_t>(i)];
}

}  // namespace monomix
