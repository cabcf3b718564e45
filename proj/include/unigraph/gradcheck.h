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

#ifndef UNIGRAPH_GRADCHECK_H_
#define UNIGRAPH_GRADCHECK_H_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "unigraph/tensor.h"

namespace unigraph::nn {

struct GradCheckEntry {
  std::string name;
  double max_relative_error = 0;
  double max_absolute_error = 0;
};

struct GradCheckReport {
  bool passed = false;
  double max_relative_error = 0;
  std::vector<GradCheckEntry> entries;
  std::vector<std::string> failures;  // non-finite gradients and the like
};

// Compares analytic gradients of a scalar function with central
// differences, entry by entry, for every tensor in `wrt`. `loss` must
// rebuild the computation from the current values of those tensors.
//
// The relative error of one entry is |analytic - numeric| divided by
// max(|analytic|, |numeric|, floor); the floor keeps entries whose true
// gradient is zero from dividing rounding noise by zero.
GradCheckReport FiniteDiffGradCheck(
    const std::function<Tensor()> &loss,
    const std::vector<std::pair<std::string, Tensor>> &wrt, double eps = 1e-5,
    double tolerance = 1e-4, double floor = 1e-6);

}  // namespace unigraph::nn

#endif  // UNIGRAPH_GRADCHECK_H_
