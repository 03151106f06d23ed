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

#include "semfield/nn/modules.hpp"

#include <cmath>
#include <stdexcept>

namespace semfield::nn {

Linear::Linear(const std::string& name, int in, int out, Rng& rng,
               bool zero_init) {
  if (in < 1 || out < 1) throw std::invalid_argument("bad layer dims");
  Eigen::MatrixXd weight;
  if (zero_init) {
    weight = Eigen::MatrixXd::Zero(in, out);
  } else {
    weight = rng.normal_matrix(in, out) * std::sqrt(2.0 / in);
  }
  w = Param(name + ".w", std::move(weight));
  b = Param(name + ".b", Eigen::MatrixXd::Zero(1, out));
}

Var Linear::apply(Tape& t, Var x) {
  return t.add_broadcast_row(t.matmul(x, t.leaf(&w)), t.leaf(&b));
}

void Linear::collect(std::vector<Param*>* out) {
  out->push_back(&w);
  out->push_back(&b);
}

Mlp::Mlp(const std::string& name, const std::vector<int>& dims, Rng& rng,
         bool zero_last) {
  if (dims.size() < 2) throw std::invalid_argument("mlp needs >= 2 dims");
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const bool last = i + 2 == dims.size();
    layers.emplace_back(name + ".l" + std::to_string(i), dims[i], dims[i + 1],
                        rng, zero_last && last);
  }
}

Var Mlp::apply(Tape& t, Var x) {
  Var h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    h = layers[i].apply(t, h);
    if (i + 1 < layers.size()) h = t.relu(h);
  }
  return h;
}

void Mlp::collect(std::vector<Param*>* out) {
  for (auto& layer : layers) layer.collect(out);
}

Adam::Adam(std::vector<Param*> params, double lr, double beta1, double beta2,
           double eps)
    : params_(std::move(params)),
      lr_(lr),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {
  for (const Param* p : params_) {
    m_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Param* p = params_[i];
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p->grad;
    v_[i] = beta2_ * v_[i].array() +
            (1.0 - beta2_) * p->grad.array().square();
    const Eigen::ArrayXXd m_hat = m_[i].array() / bc1;
    const Eigen::ArrayXXd v_hat = v_[i].array() / bc2;
    p->value.array() -= lr_ * m_hat / (v_hat.sqrt() + eps_);
  }
}

void Adam::zero_grad() {
  for (Param* p : params_) p->zero_grad();
}

}  // namespace semfield::nn
