// Copyright 2026 The contincl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONTINCL_PARALLEL_HPP_
#define CONTINCL_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace contincl {

// Process-wide worker count used by parallel_for. 0 restores the default
// (std::thread::hardware_concurrency()).
void set_thread_count(std::size_t n);
std::size_t thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous chunks; each
// index runs exactly once, so callers that write result[i] get output that
// does not depend on the thread count. The first exception thrown by any
// body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace contincl

#endif  // CONTINCL_PARALLEL_HPP_
