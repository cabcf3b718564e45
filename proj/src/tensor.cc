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

#include "unigraph/tensor.h"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace unigraph::nn {
namespace {

bool AnyRequiresGrad(const std::vector<Tensor> &inputs) {
  for (const Tensor &t : inputs) {
    if (t->requires_grad) return true;
  }
  return false;
}

// Builds a result node; the backward closure is only kept when some input
// needs a gradient.
Tensor MakeNode(Matrix value, std::vector<Tensor> inputs,
                std::function<void(Node &)> backward) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  if (AnyRequiresGrad(inputs)) {
    node->requires_grad = true;
    node->inputs = std::move(inputs);
    node->backward = std::move(backward);
  }
  return node;
}

void CheckSameShape(const Matrix &a, const Matrix &b, const char *op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

void Node::AccumulateGrad(const Matrix &g) {
  if (!requires_grad) return;
  if (grad.size() == 0) {
    grad = g;
  } else {
    grad += g;
  }
}

Tensor Constant(Matrix value) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  return node;
}

Tensor Parameter(Matrix value, std::string name) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->requires_grad = true;
  node->name = std::move(name);
  return node;
}

void Backward(const Tensor &loss) {
  if (loss->value.size() != 1) {
    throw std::invalid_argument("Backward needs a 1x1 loss");
  }
  // Iterative post-order DFS gives a topological order.
  std::vector<Node *> order;
  std::unordered_set<Node *> seen;
  std::vector<std::pair<Node *, size_t>> stack;
  stack.emplace_back(loss.get(), 0);
  seen.insert(loss.get());
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node *child = node->inputs[next++].get();
      if (child->requires_grad && seen.insert(child).second) {
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (Node *node : order) {
    if (node->backward) node->grad = Matrix::Zero(node->value.rows(),
                                                  node->value.cols());
  }
  loss->grad = Matrix::Ones(1, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node *node = *it;
    if (node->backward && node->grad.size() != 0) node->backward(*node);
  }
}

Tensor MatMul(const Tensor &a, const Tensor &b) {
  if (a->value.cols() != b->value.rows()) {
    throw std::invalid_argument("MatMul: inner dimensions differ");
  }
  return MakeNode(a->value * b->value, {a, b}, [](Node &self) {
    const Tensor &a = self.inputs[0];
    const Tensor &b = self.inputs[1];
    if (a->requires_grad) a->AccumulateGrad(self.grad * b->value.transpose());
    if (b->requires_grad) b->AccumulateGrad(a->value.transpose() * self.grad);
  });
}

Tensor MatMulTransposed(const Tensor &a, const Tensor &b) {
  if (a->value.cols() != b->value.cols()) {
    throw std::invalid_argument("MatMulTransposed: widths differ");
  }
  return MakeNode(a->value * b->value.transpose(), {a, b}, [](Node &self) {
    const Tensor &a = self.inputs[0];
    const Tensor &b = self.inputs[1];
    if (a->requires_grad) a->AccumulateGrad(self.grad * b->value);
    if (b->requires_grad) b->AccumulateGrad(self.grad.transpose() * a->value);
  });
}

Tensor Add(const Tensor &a, const Tensor &b) {
  CheckSameShape(a->value, b->value, "Add");
  return MakeNode(a->value + b->value, {a, b}, [](Node &self) {
    self.inputs[0]->AccumulateGrad(self.grad);
    self.inputs[1]->AccumulateGrad(self.grad);
  });
}

Tensor AddBias(const Tensor &a, const Tensor &bias) {
  if (bias->value.rows() != 1 || bias->value.cols() != a->value.cols()) {
    throw std::invalid_argument("AddBias: bias must be 1 x cols");
  }
  Matrix out = a->value.rowwise() + bias->value.row(0);
  return MakeNode(std::move(out), {a, bias}, [](Node &self) {
    self.inputs[0]->AccumulateGrad(self.grad);
    self.inputs[1]->AccumulateGrad(self.grad.colwise().sum());
  });
}

Tensor Scale(const Tensor &a, double factor) {
  return MakeNode(a->value * factor, {a}, [factor](Node &self) {
    self.inputs[0]->AccumulateGrad(self.grad * factor);
  });
}

Tensor Relu(const Tensor &a) {
  return MakeNode(a->value.cwiseMax(0.0), {a}, [](Node &self) {
    const Matrix &x = self.inputs[0]->value;
    self.inputs[0]->AccumulateGrad(
        (x.array() > 0).select(self.grad, 0.0).matrix());
  });
}

Tensor SoftmaxRows(const Tensor &a, const BoolMatrix *mask) {
  const Matrix &x = a->value;
  if (mask != nullptr && (mask->rows() != x.rows() || mask->cols() != x.cols())) {
    throw std::invalid_argument("SoftmaxRows: mask shape mismatch");
  }
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < x.cols(); ++j) {
      if (mask == nullptr || (*mask)(i, j)) best = std::max(best, x(i, j));
    }
    if (best == -std::numeric_limits<double>::infinity()) {
      throw std::domain_error("softmax row " + std::to_string(i) +
                              " is fully masked");
    }
    double total = 0;
    for (int j = 0; j < x.cols(); ++j) {
      if (mask == nullptr || (*mask)(i, j)) {
        out(i, j) = std::exp(x(i, j) - best);
        total += out(i, j);
      }
    }
    out.row(i) /= total;
  }
  return MakeNode(std::move(out), {a}, [](Node &self) {
    // dx = y .* (dy - rowsum(dy .* y))
    const Matrix &y = self.value;
    Eigen::VectorXd dot = (self.grad.array() * y.array()).rowwise().sum();
    Matrix dx = y.array() * (self.grad.colwise() - dot).array();
    self.inputs[0]->AccumulateGrad(dx);
  });
}

Tensor LayerNorm(const Tensor &x, const Tensor &gain, const Tensor &bias,
                 double epsilon) {
  const Matrix &v = x->value;
  const int cols = v.cols();
  Eigen::VectorXd mean = v.rowwise().mean();
  Matrix centered = v.colwise() - mean;
  Eigen::VectorXd inv_std =
      ((centered.array().square().rowwise().sum() / cols) + epsilon)
          .sqrt()
          .inverse();
  Matrix normalized = centered.array().colwise() * inv_std.array();
  Matrix out = (normalized.array().rowwise() * gain->value.row(0).array())
                   .rowwise() +
               bias->value.row(0).array();
  return MakeNode(
      std::move(out), {x, gain, bias},
      [normalized, inv_std, cols](Node &self) {
        const Tensor &x = self.inputs[0];
        const Tensor &gain = self.inputs[1];
        const Tensor &bias = self.inputs[2];
        if (gain->requires_grad) {
          gain->AccumulateGrad(
              (self.grad.array() * normalized.array()).colwise().sum());
        }
        if (bias->requires_grad) bias->AccumulateGrad(self.grad.colwise().sum());
        if (x->requires_grad) {
          Matrix dn = self.grad.array().rowwise() * gain->value.row(0).array();
          Eigen::VectorXd mean_dn = dn.rowwise().mean();
          Eigen::VectorXd mean_dn_n =
              (dn.array() * normalized.array()).rowwise().mean();
          Matrix dx = (dn.colwise() - mean_dn).array() -
                      normalized.array().colwise() * mean_dn_n.array();
          dx = dx.array().colwise() * inv_std.array();
          x->AccumulateGrad(dx);
        }
      });
}

Tensor ConcatCols(const std::vector<Tensor> &parts) {
  if (parts.empty()) throw std::invalid_argument("ConcatCols: no inputs");
  const int rows = parts[0]->value.rows();
  int cols = 0;
  for (const Tensor &p : parts) {
    if (p->value.rows() != rows) {
      throw std::invalid_argument("ConcatCols: row counts differ");
    }
    cols += p->value.cols();
  }
  Matrix out(rows, cols);
  int offset = 0;
  for (const Tensor &p : parts) {
    out.middleCols(offset, p->value.cols()) = p->value;
    offset += p->value.cols();
  }
  return MakeNode(std::move(out), parts, [](Node &self) {
    int offset = 0;
    for (const Tensor &p : self.inputs) {
      const int width = p->value.cols();
      p->AccumulateGrad(self.grad.middleCols(offset, width));
      offset += width;
    }
  });
}

Tensor SliceCols(const Tensor &a, int start, int count) {
  if (start < 0 || start + count > a->value.cols()) {
    throw std::out_of_range("SliceCols out of range");
  }
  return MakeNode(a->value.middleCols(start, count), {a},
                  [start, count](Node &self) {
                    const Tensor &a = self.inputs[0];
                    Matrix g = Matrix::Zero(a->value.rows(), a->value.cols());
                    g.middleCols(start, count) = self.grad;
                    a->AccumulateGrad(g);
                  });
}

Tensor SliceRows(const Tensor &a, int start, int count) {
  if (start < 0 || start + count > a->value.rows()) {
    throw std::out_of_range("SliceRows out of range");
  }
  return MakeNode(a->value.middleRows(start, count), {a},
                  [start, count](Node &self) {
                    const Tensor &a = self.inputs[0];
                    Matrix g = Matrix::Zero(a->value.rows(), a->value.cols());
                    g.middleRows(start, count) = self.grad;
                    a->AccumulateGrad(g);
                  });
}

Tensor GatherRows(const Tensor &table, const std::vector<int> &ids) {
  Matrix out(ids.size(), table->value.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= table->value.rows()) {
      throw std::out_of_range("GatherRows: id " + std::to_string(ids[i]) +
                              " outside table");
    }
    out.row(i) = table->value.row(ids[i]);
  }
  return MakeNode(std::move(out), {table}, [ids](Node &self) {
    const Tensor &table = self.inputs[0];
    Matrix g = Matrix::Zero(table->value.rows(), table->value.cols());
    for (size_t i = 0; i < ids.size(); ++i) g.row(ids[i]) += self.grad.row(i);
    table->AccumulateGrad(g);
  });
}

Tensor Dropout(const Tensor &a, double rate, std::mt19937_64 &rng) {
  if (rate <= 0) return a;
  std::bernoulli_distribution keep(1.0 - rate);
  Matrix scale(a->value.rows(), a->value.cols());
  for (int i = 0; i < scale.size(); ++i) {
    scale.data()[i] = keep(rng) ? 1.0 / (1.0 - rate) : 0.0;
  }
  return MakeNode(a->value.cwiseProduct(scale), {a}, [scale](Node &self) {
    self.inputs[0]->AccumulateGrad(self.grad.cwiseProduct(scale));
  });
}

Tensor WeightedSum(const Tensor &a, const Matrix &weights) {
  CheckSameShape(a->value, weights, "WeightedSum");
  Matrix out(1, 1);
  out(0, 0) = a->value.cwiseProduct(weights).sum();
  return MakeNode(std::move(out), {a}, [weights](Node &self) {
    self.inputs[0]->AccumulateGrad(weights * self.grad(0, 0));
  });
}

Tensor LabelSmoothedLoss(const Tensor &logits, const std::vector<int> &targets,
                         double smoothing) {
  const Matrix &z = logits->value;
  const int rows = z.rows();
  const int classes = z.cols();
  if (static_cast<int>(targets.size()) != rows) {
    throw std::invalid_argument("LabelSmoothedLoss: one target per row");
  }
  if (classes < 2) throw std::invalid_argument("LabelSmoothedLoss: < 2 classes");
  const double on = 1.0 - smoothing;
  const double off = smoothing / (classes - 1);
  auto xlogx = [](double q) { return q > 0 ? q * std::log(q) : 0.0; };
  const double neg_entropy = xlogx(on) + (classes - 1) * xlogx(off);

  Matrix probs(rows, classes);
  double loss = 0;
  for (int t = 0; t < rows; ++t) {
    if (targets[t] < 0 || targets[t] >= classes) {
      throw std::out_of_range("LabelSmoothedLoss: target outside vocabulary");
    }
    const double best = z.row(t).maxCoeff();
    const double log_total = best + std::log((z.row(t).array() - best).exp().sum());
    double cross = 0;
    for (int k = 0; k < classes; ++k) {
      const double log_p = z(t, k) - log_total;
      probs(t, k) = std::exp(log_p);
      cross -= (k == targets[t] ? on : off) * log_p;
    }
    loss += neg_entropy + cross;
  }
  Matrix out(1, 1);
  out(0, 0) = loss / rows;
  return MakeNode(std::move(out), {logits},
                  [probs, targets, on, off, rows](Node &self) {
                    Matrix g = probs;
                    g.array() -= off;
                    for (int t = 0; t < rows; ++t) g(t, targets[t]) -= on - off;
                    self.inputs[0]->AccumulateGrad(g * (self.grad(0, 0) / rows));
                  });
}

}  // namespace unigraph::nn
