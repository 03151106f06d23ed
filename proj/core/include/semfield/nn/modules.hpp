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

#ifndef SEMFIELD_NN_MODULES_HPP_
#define SEMFIELD_NN_MODULES_HPP_

#include <string>
#include <vector>

#include "semfield/nn/tape.hpp"
#include "semfield/rng.hpp"

namespace semfield::nn {

// y = x W + b with W sized in x out. zero_init makes the layer emit zeros,
// which turns residual paths into exact identities at the start of training.
struct Linear {
  Param w;
  Param b;

  Linear() = default;
  Linear(const std::string& name, int in, int out, Rng& rng,
         bool zero_init = false);

  Var apply(Tape& t, Var x);
  void collect(std::vector<Param*>* out);
};

// Linear stack with ReLU between layers and none after the last.
struct Mlp {
  std::vector<Linear> layers;

  Mlp() = default;
  Mlp(const std::string& name, const std::vector<int>& dims, Rng& rng,
      bool zero_last = false);

  Var apply(Tape& t, Var x);
  void collect(std::vector<Param*>* out);
};

// Adam with bias correction. Parameter order is fixed at construction; the
// update is single-threaded, so training is deterministic for a fixed seed.
class Adam {
 public:
  Adam(std::vector<Param*> params, double lr, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);

  void step();
  void zero_grad();
  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }

 private:
  std::vector<Param*> params_;
  std::vector<Eigen::MatrixXd> m_;
  std::vector<Eigen::MatrixXd> v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

}  // namespace semfield::nn

#endif  // SEMFIELD_NN_MODULES_HPP_
