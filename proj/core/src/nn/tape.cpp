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

#include "semfield/nn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semfield::nn {

double canonical_sum(std::vector<double>* buf) {
  std::sort(buf->begin(), buf->end());
  double acc = 0.0;
  for (double x : *buf) acc += x;
  return acc;
}

Var Tape::push(Eigen::MatrixXd value,
               std::function<void(Tape&, const Eigen::MatrixXd&)> pull) {
  Node node;
  node.value = std::move(value);
  node.pull = std::move(pull);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

void Tape::accumulate(int id, const Eigen::MatrixXd& g) {
  if (grads_[id].size() == 0) {
    grads_[id] = g;
  } else {
    grads_[id] += g;
  }
}

Var Tape::input(const Eigen::MatrixXd& value) { return push(value, nullptr); }

Var Tape::leaf(Param* p) {
  if (p == nullptr) throw std::invalid_argument("null parameter");
  Var v = push(p->value, nullptr);
  nodes_[v.id].param = p;
  return v;
}

namespace {

// Blocked GEMM kernels round leftover rows differently, so a row's low bits
// would depend on its position in the matrix. Evaluating row by row keeps
// every product row-permutation equivariant at the bit level, which the
// set-symmetric pathways rely on.
Eigen::MatrixXd row_stable_product(const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out.row(i) = a.row(i) * b;
  }
  return out;
}

}  // namespace

Var Tape::matmul(Var a, Var b) {
  const auto& va = val(a);
  const auto& vb = val(b);
  if (va.cols() != vb.rows()) {
    throw std::invalid_argument("matmul shape mismatch");
  }
  return push(row_stable_product(va, vb),
              [a, b](Tape& t, const Eigen::MatrixXd& g) {
                t.accumulate(a.id, g * t.val(b).transpose());
                t.accumulate(b.id, t.val(a).transpose() * g);
              });
}

Var Tape::matmul_nt(Var a, Var b) {
  const auto& va = val(a);
  const auto& vb = val(b);
  if (va.cols() != vb.cols()) {
    throw std::invalid_argument("matmul_nt shape mismatch");
  }
  return push(row_stable_product(va, vb.transpose()),
              [a, b](Tape& t, const Eigen::MatrixXd& g) {
                t.accumulate(a.id, g * t.val(b));
                t.accumulate(b.id, g.transpose() * t.val(a));
              });
}

Var Tape::matmul_canonical(Var a, Var b) {
  const auto& va = val(a);
  const auto& vb = val(b);
  if (va.cols() != vb.rows()) {
    throw std::invalid_argument("matmul shape mismatch");
  }
  Eigen::MatrixXd out(va.rows(), vb.cols());
  std::vector<double> buf(static_cast<std::size_t>(va.cols()));
  for (Eigen::Index i = 0; i < va.rows(); ++i) {
    for (Eigen::Index c = 0; c < vb.cols(); ++c) {
      for (Eigen::Index k = 0; k < va.cols(); ++k) {
        buf[static_cast<std::size_t>(k)] = va(i, k) * vb(k, c);
      }
      out(i, c) = canonical_sum(&buf);
    }
  }
  return push(std::move(out), [a, b](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(a.id, g * t.val(b).transpose());
    t.accumulate(b.id, t.val(a).transpose() * g);
  });
}

Var Tape::add(Var a, Var b) {
  const auto& va = val(a);
  const auto& vb = val(b);
  if (va.rows() != vb.rows() || va.cols() != vb.cols()) {
    throw std::invalid_argument("add shape mismatch");
  }
  return push(va + vb, [a, b](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(a.id, g);
    t.accumulate(b.id, g);
  });
}

Var Tape::sub(Var a, Var b) {
  const auto& va = val(a);
  const auto& vb = val(b);
  if (va.rows() != vb.rows() || va.cols() != vb.cols()) {
    throw std::invalid_argument("sub shape mismatch");
  }
  return push(va - vb, [a, b](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(a.id, g);
    t.accumulate(b.id, -g);
  });
}

Var Tape::hadamard(Var a, Var b) {
  const auto& va = val(a);
  const auto& vb = val(b);
  if (va.rows() != vb.rows() || va.cols() != vb.cols()) {
    throw std::invalid_argument("hadamard shape mismatch");
  }
  return push(va.cwiseProduct(vb), [a, b](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(a.id, g.cwiseProduct(t.val(b)));
    t.accumulate(b.id, g.cwiseProduct(t.val(a)));
  });
}

Var Tape::scale(Var a, double c) {
  return push(val(a) * c, [a, c](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(a.id, g * c);
  });
}

Var Tape::add_scalar(Var a, double c) {
  return push((val(a).array() + c).matrix(),
              [a](Tape& t, const Eigen::MatrixXd& g) {
                t.accumulate(a.id, g);
              });
}

Var Tape::mul_scalar(Var m, Var s) {
  const auto& vs = val(s);
  if (vs.rows() != 1 || vs.cols() != 1) {
    throw std::invalid_argument("scalar must be 1x1");
  }
  return push(val(m) * vs(0, 0), [m, s](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(m.id, g * t.val(s)(0, 0));
    Eigen::MatrixXd gs(1, 1);
    gs(0, 0) = (g.array() * t.val(m).array()).sum();
    t.accumulate(s.id, gs);
  });
}

Var Tape::add_broadcast_row(Var m, Var row) {
  const auto& vm = val(m);
  const auto& vr = val(row);
  if (vr.rows() != 1 || vr.cols() != vm.cols()) {
    throw std::invalid_argument("broadcast row shape mismatch");
  }
  return push(vm.rowwise() + vr.row(0),
              [m, row](Tape& t, const Eigen::MatrixXd& g) {
                t.accumulate(m.id, g);
                t.accumulate(row.id, g.colwise().sum());
              });
}

Var Tape::mul_broadcast_row(Var m, Var row) {
  const auto& vm = val(m);
  const auto& vr = val(row);
  if (vr.rows() != 1 || vr.cols() != vm.cols()) {
    throw std::invalid_argument("broadcast row shape mismatch");
  }
  Eigen::MatrixXd out = vm.array().rowwise() * vr.row(0).array();
  return push(std::move(out), [m, row](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(m.id,
                 (g.array().rowwise() * t.val(row).row(0).array()).matrix());
    t.accumulate(row.id,
                 (g.array() * t.val(m).array()).colwise().sum().matrix());
  });
}

Var Tape::relu(Var a) {
  return push(val(a).cwiseMax(0.0), [a](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(
        a.id,
        (t.val(a).array() > 0.0).select(g.array(), 0.0).matrix());
  });
}

Var Tape::softmax_rows_canonical(Var a) {
  const auto& va = val(a);
  Eigen::MatrixXd out(va.rows(), va.cols());
  std::vector<double> buf(static_cast<std::size_t>(va.cols()));
  for (Eigen::Index i = 0; i < va.rows(); ++i) {
    const double m = va.row(i).maxCoeff();
    for (Eigen::Index j = 0; j < va.cols(); ++j) {
      buf[static_cast<std::size_t>(j)] = std::exp(va(i, j) - m);
      out(i, j) = buf[static_cast<std::size_t>(j)];
    }
    std::vector<double> denom_buf = buf;
    const double denom = canonical_sum(&denom_buf);
    out.row(i) /= denom;
  }
  Var v = push(std::move(out), nullptr);
  nodes_[v.id].pull = [a, v](Tape& t, const Eigen::MatrixXd& g) {
    const Eigen::MatrixXd& y = t.val(v);
    Eigen::MatrixXd gx(y.rows(), y.cols());
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      const double dot = g.row(i).dot(y.row(i));
      gx.row(i) = y.row(i).cwiseProduct((g.row(i).array() - dot).matrix());
    }
    t.accumulate(a.id, gx);
  };
  return v;
}

Var Tape::layernorm_rows(Var a, double eps) {
  const auto& va = val(a);
  if (va.cols() < 1) throw std::invalid_argument("layernorm needs columns");
  Eigen::MatrixXd out(va.rows(), va.cols());
  Eigen::VectorXd inv_std(va.rows());
  for (Eigen::Index i = 0; i < va.rows(); ++i) {
    const double mu = va.row(i).mean();
    const Eigen::RowVectorXd centered = (va.row(i).array() - mu).matrix();
    const double var = centered.squaredNorm() / va.cols();
    inv_std(i) = 1.0 / std::sqrt(var + eps);
    out.row(i) = centered * inv_std(i);
  }
  Var v = push(std::move(out), nullptr);
  nodes_[v.id].pull = [a, v, inv_std](Tape& t, const Eigen::MatrixXd& g) {
    const Eigen::MatrixXd& y = t.val(v);
    const double n = static_cast<double>(y.cols());
    Eigen::MatrixXd gx(y.rows(), y.cols());
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      const double gsum = g.row(i).sum();
      const double gy = g.row(i).dot(y.row(i));
      gx.row(i) =
          inv_std(i) / n *
          (n * g.row(i).array() - gsum - y.row(i).array() * gy).matrix();
    }
    t.accumulate(a.id, gx);
  };
  return v;
}

Var Tape::concat_cols(Var a, Var b) {
  const auto& va = val(a);
  const auto& vb = val(b);
  if (va.rows() != vb.rows()) {
    throw std::invalid_argument("concat_cols row mismatch");
  }
  Eigen::MatrixXd out(va.rows(), va.cols() + vb.cols());
  out.leftCols(va.cols()) = va;
  out.rightCols(vb.cols()) = vb;
  const Eigen::Index split = va.cols();
  return push(std::move(out), [a, b, split](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(a.id, g.leftCols(split));
    t.accumulate(b.id, g.rightCols(g.cols() - split));
  });
}

Var Tape::concat_rows(Var a, Var b) {
  const auto& va = val(a);
  const auto& vb = val(b);
  if (va.cols() != vb.cols()) {
    throw std::invalid_argument("concat_rows column mismatch");
  }
  Eigen::MatrixXd out(va.rows() + vb.rows(), va.cols());
  out.topRows(va.rows()) = va;
  out.bottomRows(vb.rows()) = vb;
  const Eigen::Index split = va.rows();
  return push(std::move(out), [a, b, split](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(a.id, g.topRows(split));
    t.accumulate(b.id, g.bottomRows(g.rows() - split));
  });
}

Var Tape::slice_cols(Var a, int start, int len) {
  const auto& va = val(a);
  if (start < 0 || len < 1 || start + len > va.cols()) {
    throw std::invalid_argument("slice out of range");
  }
  return push(va.middleCols(start, len),
              [a, start, len](Tape& t, const Eigen::MatrixXd& g) {
                Eigen::MatrixXd ga = Eigen::MatrixXd::Zero(
                    t.val(a).rows(), t.val(a).cols());
                ga.middleCols(start, len) = g;
                t.accumulate(a.id, ga);
              });
}

Var Tape::gather_rows(Var a, const std::vector<int>& indices) {
  const auto& va = val(a);
  if (indices.empty()) throw std::invalid_argument("gather of no rows");
  for (int idx : indices) {
    if (idx < 0 || idx >= va.rows()) {
      throw std::invalid_argument("gather index out of range");
    }
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), va.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = va.row(indices[i]);
  }
  return push(std::move(out), [a, indices](Tape& t, const Eigen::MatrixXd& g) {
    Eigen::MatrixXd ga =
        Eigen::MatrixXd::Zero(t.val(a).rows(), t.val(a).cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
      ga.row(indices[i]) += g.row(static_cast<Eigen::Index>(i));
    }
    t.accumulate(a.id, ga);
  });
}

Var Tape::max_over_rows(Var a) {
  const auto& va = val(a);
  if (va.rows() < 1) throw std::invalid_argument("max over empty");
  Eigen::MatrixXd out(1, va.cols());
  std::vector<Eigen::Index> arg(static_cast<std::size_t>(va.cols()));
  for (Eigen::Index c = 0; c < va.cols(); ++c) {
    Eigen::Index r = 0;
    out(0, c) = va.col(c).maxCoeff(&r);
    arg[static_cast<std::size_t>(c)] = r;
  }
  return push(std::move(out), [a, arg](Tape& t, const Eigen::MatrixXd& g) {
    Eigen::MatrixXd ga =
        Eigen::MatrixXd::Zero(t.val(a).rows(), t.val(a).cols());
    for (Eigen::Index c = 0; c < ga.cols(); ++c) {
      ga(arg[static_cast<std::size_t>(c)], c) = g(0, c);
    }
    t.accumulate(a.id, ga);
  });
}

Var Tape::mean_over_rows_canonical(Var a) {
  const auto& va = val(a);
  if (va.rows() < 1) throw std::invalid_argument("mean over empty");
  Eigen::MatrixXd out(1, va.cols());
  std::vector<double> buf(static_cast<std::size_t>(va.rows()));
  for (Eigen::Index c = 0; c < va.cols(); ++c) {
    for (Eigen::Index r = 0; r < va.rows(); ++r) {
      buf[static_cast<std::size_t>(r)] = va(r, c);
    }
    out(0, c) = canonical_sum(&buf) / static_cast<double>(va.rows());
  }
  return push(std::move(out), [a](Tape& t, const Eigen::MatrixXd& g) {
    const double n = static_cast<double>(t.val(a).rows());
    t.accumulate(a.id, (g / n).replicate(t.val(a).rows(), 1));
  });
}

Var Tape::shift_rows(Var a, int offset) {
  const auto& va = val(a);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(va.rows(), va.cols());
  for (Eigen::Index i = 0; i < va.rows(); ++i) {
    const Eigen::Index src = i - offset;
    if (src >= 0 && src < va.rows()) out.row(i) = va.row(src);
  }
  return push(std::move(out), [a, offset](Tape& t, const Eigen::MatrixXd& g) {
    Eigen::MatrixXd ga = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const Eigen::Index src = i - offset;
      if (src >= 0 && src < g.rows()) ga.row(src) += g.row(i);
    }
    t.accumulate(a.id, ga);
  });
}

Var Tape::sum_squares(Var a) {
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = val(a).squaredNorm();
  return push(std::move(out), [a](Tape& t, const Eigen::MatrixXd& g) {
    t.accumulate(a.id, 2.0 * g(0, 0) * t.val(a));
  });
}

const Eigen::MatrixXd& Tape::value(Var v) const {
  if (v.id < 0 || v.id >= size()) throw std::invalid_argument("stale var");
  return nodes_[v.id].value;
}

const Eigen::MatrixXd& Tape::grad(Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(grads_.size())) {
    throw std::invalid_argument("gradient not computed");
  }
  return grads_[v.id];
}

void Tape::backward(Var loss) {
  const auto& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw std::invalid_argument("backward needs a 1x1 loss");
  }
  grads_.assign(nodes_.size(), Eigen::MatrixXd());
  grads_[loss.id] = Eigen::MatrixXd::Ones(1, 1);
  for (int id = loss.id; id >= 0; --id) {
    if (grads_[id].size() == 0) continue;
    if (nodes_[id].param != nullptr) {
      nodes_[id].param->grad += grads_[id];
    }
    if (nodes_[id].pull) {
      nodes_[id].pull(*this, grads_[id]);
    }
  }
}

}  // namespace semfield::nn
