// mixprint/parallel.hpp
//
// Copyright 2026 the mixprint authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIXPRINT_PARALLEL_HPP_
#define MIXPRINT_PARALLEL_HPP_

namespace mixprint {

/// Execution policy for the data-parallel kernels (frame extraction,
/// subset-model construction, trial batches).
///
/// kSerial is the reference path kept around for tests and the benchmark.
/// kParallel runs the same per-element function under OpenMP; every element
/// writes to its own preassigned slot and all reductions happen afterwards
/// in index order, so the two policies produce bit-identical results.
enum class Exec { kSerial, kParallel };

template <typename Fn>
void for_each_index(Exec exec, int n, Fn&& fn) {
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      fn(i);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      fn(i);
    }
  }
}

}  // namespace mixprint

#endif  // MIXPRINT_PARALLEL_HPP_
