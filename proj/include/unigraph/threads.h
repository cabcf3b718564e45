// Copyright 2026 The Unigraph Authors.
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

#ifndef UNIGRAPH_THREADS_H_
#define UNIGRAPH_THREADS_H_

#include <functional>

namespace unigraph {

// Worker count: UNIGRAPH_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int ThreadLimit();

// Calls fn(i) for i in [0, n) on up to ThreadLimit() threads. Each index is
// handled exactly once; the first exception is rethrown after all workers
// finish.
void ParallelFor(int n, const std::function<void(int)> &fn);

}  // namespace unigraph

#endif  // UNIGRAPH_THREADS_H_
