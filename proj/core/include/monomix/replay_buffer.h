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
#ifndef MONOMIX_REPLAY_BUFFER_H_
#define MONOMIX_REPLAY_BUFFER_H_

#include <cstdint>
#include <deque>
#include <vector>

#include "monomix/episode.h"
#include "monomix/random.h"

namespace monomix {

// Ring of the most recent 'capacity' episodes with uniform sampling.
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int max_episode_length);

  // Evicts the oldest episode when full. Throws ContractError when the episode
  // is longer than max_episode_length or empty.
  void Store(Episode episode);

  // 'count' draws uniformly with replacement. Throws ContractError when empty.
  std::vector<const Episode*> Sample(int count, Rng& rng) const;

  int size() const { return static_cast<int>(episodes_.size()); }
  int capacity() const { return capacity_; }
  int max_episode_length() const { return max_episode_length_; }
  std::int64_t total_stored() const { return total_stored_; }
  // 0 is the oldest stored episode.
  const Episode& at(int i) const;
  Episode& mutable_at(int i);

 private:
  int capacity_;
  int max_episode_length_;
  std::int64_t total_stored_ = 0;
  std::deque<Episode> episodes_;
};

}  // namespace monomix

#endif  // MONOMIX_REPLAY_BUFFER_H_
