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

#include "hetpred/nn.hpp"

#include "hetpred/errors.hpp"

namespace hetpred::nn
{

LinearParams add_linear(ParameterStore & store, const std::string & name, std::size_t in_dim, std::size_t out_dim)
{
  if (in_dim == 0 || out_dim == 0) {
    throw ConfigError("linear '" + name + "' needs positive dimensions");
  }
  LinearParams p;
  p.weight = store.add(name + ".weight", {out_dim, in_dim}, in_dim);
  p.bias = store.add(name + ".bias", {out_dim}, in_dim);
  p.in_dim = in_dim;
  p.out_dim = out_dim;
  return p;
}

LstmCellParams add_lstm(ParameterStore & store, const std::string & name, std::size_t input_size, std::size_t hidden_size)
{
  if (input_size == 0 || hidden_size == 0) {
    throw ConfigError("lstm '" + name + "' needs positive dimensions");
  }
  LstmCellParams p;
  p.w_input = store.add(name + ".w_input", {4 * hidden_size, input_size}, input_size + hidden_size);
  p.w_hidden = store.add(name + ".w_hidden", {4 * hidden_size, hidden_size}, input_size + hidden_size);
  p.bias = store.add(name + ".bias", {4 * hidden_size}, input_size + hidden_size, ParamInit::lstm_bias);
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  return p;
}

ad::Var linear(ParamBinding & params, const LinearParams & p, ad::Var x)
{
  if (x.size() != p.in_dim || x.shape().size() != 1) {
    throw DimensionError(
      "linear expects a vector of length " + std::to_string(p.in_dim) + ", got " +
      ad::shape_string(x.shape()));
  }
  return ad::add(ad::matvec(params(p.weight), x), params(p.bias));
}

ad::Var embed(ParamBinding & params, const EmbeddingParams & p, ad::Var x)
{
  return ad::relu(linear(params, p, x));
}

LstmState zero_state(ad::Tape & tape, std::size_t hidden_size)
{
  return LstmState{
    tape.constant(ad::Tensor::zeros({hidden_size})),
    tape.constant(ad::Tensor::zeros({hidden_size}))};
}

LstmState lstm_step(ParamBinding & params, const LstmCellParams & p, const LstmState & state, ad::Var input)
{
  const std::size_t h = p.hidden_size;
  if (input.shape() != ad::Shape{p.input_size}) {
    throw DimensionError(
      "lstm_step input " + ad::shape_string(input.shape()) + ", expected [" +
      std::to_string(p.input_size) + "]");
  }
  if (state.h.shape() != ad::Shape{h} || state.c.shape() != ad::Shape{h}) {
    throw DimensionError("lstm_step state does not match hidden size " + std::to_string(h));
  }
  const ad::Var gates = ad::add(
    ad::add(ad::matvec(params(p.w_input), input), ad::matvec(params(p.w_hidden), state.h)),
    params(p.bias));
  const ad::Var i = ad::sigmoid(ad::slice(gates, 0, h));
  const ad::Var f = ad::sigmoid(ad::slice(gates, h, h));
  const ad::Var g = ad::tanh(ad::slice(gates, 2 * h, h));
  const ad::Var o = ad::sigmoid(ad::slice(gates, 3 * h, h));
  const ad::Var c = ad::add(ad::mul(f, state.c), ad::mul(i, g));
  const ad::Var hn = ad::mul(o, ad::tanh(c));
  return LstmState{hn, c};
}

}  // namespace hetpred::nn
