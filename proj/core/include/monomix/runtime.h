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
#ifndef MONOMIX_RUNTIME_H_
#define MONOMIX_RUNTIME_H_

namespace monomix {

// Keeps large tensor buffers on the heap instead of fresh mmap regions, which
// otherwise dominate training time through page faults. Intended to be called
// once at program start; a no-op outside glibc.
void ConfigureAllocator();

}  // namespace monomix

#endif  // MONOMIX_RUNTIME_H_
