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

#include "hetpred/tape.hpp"

#include "hetpred/errors.hpp"

#include <string>

namespace hetpred::ad
{

const Tensor & Var::value() const
{
  if (!tape) {
    throw UsageError("Var is not attached to a tape");
  }
  return tape->value(*this);
}

const Tape::Node & Tape::node(Var v) const
{
  if (v.tape != this || v.id >= nodes_.size()) {
    throw UsageError("Var does not belong to this tape");
  }
  return nodes_[v.id];
}

Var Tape::push(Node n)
{
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::constant(Tensor value)
{
  Node n;
  n.owned = std::move(value);
  return push(std::move(n));
}

Var Tape::variable(Tensor value)
{
  Node n;
  n.owned = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::leaf(const Tensor & external)
{
  Node n;
  n.external = &external;
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::record(
  std::string_view op, Tensor value, std::initializer_list<Var> inputs, BackwardFn fn)
{
  return record(op, std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
    std::move(fn));
}

Var Tape::record(std::string_view op, Tensor value, std::span<const Var> inputs, BackwardFn fn)
{
  if (!value.all_finite()) {
    throw NumericDomainError(std::string(op) + " produced a non-finite value");
  }
  Node n;
  n.owned = std::move(value);
  for (const Var & in : inputs) {
    if (node(in).requires_grad) {
      n.requires_grad = true;
      break;
    }
  }
  if (n.requires_grad) {
    n.backward = std::move(fn);
  }
  return push(std::move(n));
}

Tensor Tape::grad(Var v) const
{
  const Node & n = node(v);
  if (!n.has_grad) {
    return Tensor::zeros_like(n.value());
  }
  return n.grad;
}

Tensor & Tape::grad_buffer(std::uint32_t id)
{
  Node & n = nodes_[id];
  if (!n.has_grad) {
    n.grad = Tensor::zeros_like(n.value());
    n.has_grad = true;
  }
  return n.grad;
}

void Tape::backward(Var loss)
{
  const Node & root = node(loss);
  if (root.value().size() != 1) {
    throw UsageError(
      "backward() needs a scalar loss, got shape " + shape_string(root.value().shape()));
  }
  if (!root.requires_grad) {
    return;
  }
  grad_buffer(loss.id).fill(1.0);
  for (std::uint32_t id = loss.id + 1; id-- > 0;) {
    Node & n = nodes_[id];
    if (n.has_grad && n.backward) {
      n.backward(*this, id);
    }
  }
}

void Tape::zero_grad()
{
  for (Node & n : nodes_) {
    n.has_grad = false;
    n.grad = Tensor();
  }
}

}  // namespace hetpred::ad
