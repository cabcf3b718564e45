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

#include "unigraph/gradcheck.h"

#include <algorithm>
#include <cmath>

namespace unigraph::nn {

GradCheckReport FiniteDiffGradCheck(
    const std::function<Tensor()> &loss,
    const std::vector<std::pair<std::string, Tensor>> &wrt, double eps,
    double tolerance, double floor) {
  GradCheckReport report;
  for (const auto &[name, tensor] : wrt) {
    tensor->requires_grad = true;
    tensor->grad.resize(0, 0);
  }
  Tensor out = loss();
  Backward(out);

  for (const auto &[name, tensor] : wrt) {
    GradCheckEntry entry;
    entry.name = name;
    Matrix analytic = tensor->grad.size() == 0
                          ? Matrix::Zero(tensor->value.rows(),
                                         tensor->value.cols())
                          : tensor->grad;
    if (!analytic.allFinite()) {
      report.failures.push_back("non-finite analytic gradient for " + name);
    }
    for (int i = 0; i < tensor->value.size(); ++i) {
      double &x = tensor->value.data()[i];
      const double saved = x;
      x = saved + eps;
      const double plus = loss()->value(0, 0);
      x = saved - eps;
      const double minus = loss()->value(0, 0);
      x = saved;
      const double numeric = (plus - minus) / (2 * eps);
      const double a = analytic.data()[i];
      if (!std::isfinite(numeric)) {
        report.failures.push_back("non-finite numeric gradient for " + name);
        continue;
      }
      const double abs_err = std::abs(a - numeric);
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      entry.max_absolute_error = std::max(entry.max_absolute_error, abs_err);
      entry.max_relative_error =
          std::max(entry.max_relative_error, abs_err / denom);
    }
    report.max_relative_error =
        std::max(report.max_relative_error, entry.max_relative_error);
    report.entries.push_back(entry);
  }
  report.passed =
      report.failures.empty() && report.max_relative_error <= tolerance;
  return report;
}

}  // namespace unigraph::nn
