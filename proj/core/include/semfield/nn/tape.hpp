// Copyright 2026 The Semfield Authors
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

#ifndef SEMFIELD_NN_TAPE_HPP_
#define SEMFIELD_NN_TAPE_HPP_

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace semfield::nn {

// Trainable tensor. Gradients accumulate across tapes until zero_grad().
struct Param {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;

  Param() = default;
  Param(std::string n, Eigen::MatrixXd v)
      : name(std::move(n)), value(std::move(v)) {
    grad = Eigen::MatrixXd::Zero(value.rows(), value.cols());
  }
  void zero_grad() { grad.setZero(); }
};

// Sums a buffer in ascending value order. Reductions over the part axis use
// this so that the result depends only on the multiset of addends, never on
// part order; that is what makes set operations bit-identical under
// permutation rather than merely close.
double canonical_sum(std::vector<double>* buf);

// Handle into a Tape node.
struct Var {
  int id = -1;
};

// Reverse-mode tape over Eigen matrices. Build a graph with the op methods,
// call backward() on a 1x1 loss, read gradients from Param::grad or grad().
// Single-threaded; create one tape per forward pass.
class Tape {
 public:
  // Constant w.r.t. differentiation.
  Var input(const Eigen::MatrixXd& value);
  // Trainable leaf; backward() adds into p->grad.
  Var leaf(Param* p);

  Var matmul(Var a, Var b);
  // a * b^T without materializing the transpose.
  Var matmul_nt(Var a, Var b);
  // a * b with the contraction summed in canonical order. Use when the
  // contracted axis ranges over parts.
  Var matmul_canonical(Var a, Var b);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var hadamard(Var a, Var b);
  Var scale(Var a, double c);
  Var add_scalar(Var a, double c);
  // s is 1x1; every entry of m scaled by it.
  Var mul_scalar(Var m, Var s);
  // row is 1 x C, broadcast over the rows of m.
  Var add_broadcast_row(Var m, Var row);
  Var mul_broadcast_row(Var m, Var row);

  Var relu(Var a);
  // Row-wise softmax with max-shift; denominators via canonical_sum.
  Var softmax_rows_canonical(Var a);
  // Row-wise (x - mean) / sqrt(var + eps), no affine part.
  Var layernorm_rows(Var a, double eps = 1e-5);

  Var concat_cols(Var a, Var b);
  Var concat_rows(Var a, Var b);
  Var slice_cols(Var a, int start, int len);
  // Row i of the result is row indices[i] of a; duplicates allowed. The
  // backward pass scatter-adds into the source rows.
  Var gather_rows(Var a, const std::vector<int>& indices);
  // Column-wise max over rows -> 1 x C. Ties route gradient to the lowest
  // row index.
  Var max_over_rows(Var a);
  // Column-wise mean over rows -> 1 x C, canonical order.
  Var mean_over_rows_canonical(Var a);
  // Rows moved down by offset (up if negative), vacated rows zero.
  Var shift_rows(Var a, int offset);
  // Sum of squared entries -> 1x1.
  Var sum_squares(Var a);

  const Eigen::MatrixXd& value(Var v) const;
  // Valid after backward().
  const Eigen::MatrixXd& grad(Var v) const;
  void backward(Var loss);

  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Eigen::MatrixXd value;
    Param* param = nullptr;
    std::function<void(Tape&, const Eigen::MatrixXd&)> pull;
  };

  Var push(Eigen::MatrixXd value,
           std::function<void(Tape&, const Eigen::MatrixXd&)> pull);
  void accumulate(int id, const Eigen::MatrixXd& g);
  const Eigen::MatrixXd& val(Var v) const { return nodes_[v.id].value; }

  std::vector<Node> nodes_;
  std::vector<Eigen::MatrixXd> grads_;
};

}  // namespace semfield::nn

#endif  // SEMFIELD_NN_TAPE_HPP_
