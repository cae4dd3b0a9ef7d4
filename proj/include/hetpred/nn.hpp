// Copyright 2026 The hetpred Authors
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

#ifndef HETPRED_NN_HPP_
#define HETPRED_NN_HPP_

#include "hetpred/ops.hpp"
#include "hetpred/params.hpp"

#include <string>

namespace hetpred::nn
{

/// Affine map W x + b. Used both as a plain projection and, followed by a
/// ReLU, as an embedding.
struct LinearParams
{
  ParamId weight;  // out_dim x in_dim
  ParamId bias;    // out_dim
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
};
using EmbeddingParams = LinearParams;

/// Gate rows are stacked in the order input, forget, candidate, output; each
/// block is `hidden_size` rows tall.
struct LstmCellParams
{
  ParamId w_input;   // 4H x input_size
  ParamId w_hidden;  // 4H x H
  ParamId bias;      // 4H
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
};

struct LstmState
{
  ad::Var h;
  ad::Var c;
};

LinearParams add_linear(ParameterStore & store, const std::string & name, std::size_t in_dim, std::size_t out_dim);
LstmCellParams add_lstm(ParameterStore & store, const std::string & name, std::size_t input_size, std::size_t hidden_size);

/// W x + b.
ad::Var linear(ParamBinding & params, const LinearParams & p, ad::Var x);
/// ReLU(W x + b).
ad::Var embed(ParamBinding & params, const EmbeddingParams & p, ad::Var x);

LstmState zero_state(ad::Tape & tape, std::size_t hidden_size);

/// One LSTM recurrence step. Returns a fresh state; `state` is untouched.
LstmState lstm_step(ParamBinding & params, const LstmCellParams & p, const LstmState & state, ad::Var input);

}  // namespace hetpred::nn

#endif  // HETPRED_NN_HPP_
