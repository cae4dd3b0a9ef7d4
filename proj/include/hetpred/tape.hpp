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

#ifndef HETPRED_TAPE_HPP_
#define HETPRED_TAPE_HPP_

#include "hetpred/tensor.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <string_view>

namespace hetpred::ad
{

class Tape;

/// Handle to a value recorded on a tape. Cheap to copy; only valid while
/// the owning tape is alive.
struct Var
{
  Tape * tape = nullptr;
  std::uint32_t id = 0;

  const Tensor & value() const;
  const Shape & shape() const { return value().shape(); }
  std::size_t size() const { return value().size(); }
};

/// Reverse-mode recording of a computation. Node ids grow monotonically, so
/// creation order is a topological order and backward just walks ids down.
///
/// One tape per forward pass; tapes share nothing, so separate windows can
/// be differentiated on separate threads.
class Tape
{
public:
  using BackwardFn = std::function<void(Tape &, std::uint32_t self)>;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape & operator=(const Tape &) = delete;

  /// Value that never receives a gradient.
  Var constant(Tensor value);
  /// Owned value that receives a gradient.
  Var variable(Tensor value);
  /// Gradient-receiving leaf that aliases storage owned elsewhere (model
  /// parameters). The storage must outlive the tape and stay unmodified.
  Var leaf(const Tensor & external);

  /// Append an operation output. `inputs` decides whether the node needs a
  /// gradient; `fn` is skipped entirely when none of them do.
  Var record(
    std::string_view op, Tensor value, std::initializer_list<Var> inputs, BackwardFn fn);
  Var record(std::string_view op, Tensor value, std::span<const Var> inputs, BackwardFn fn);

  const Tensor & value(Var v) const { return node(v).value(); }
  const Tensor & value(std::uint32_t id) const { return nodes_[id].value(); }
  bool requires_grad(Var v) const { return node(v).requires_grad; }
  bool requires_grad(std::uint32_t id) const { return nodes_[id].requires_grad; }

  /// Gradient accumulated into `v` by the last backward(); zeros when the
  /// value did not influence the loss.
  Tensor grad(Var v) const;
  bool has_grad(Var v) const { return node(v).has_grad; }

  /// Mutable gradient buffer, allocated as zeros on first touch. Used by
  /// backward functions.
  Tensor & grad_buffer(std::uint32_t id);

  /// Propagate d(loss)/d(node) to every node that requires a gradient.
  void backward(Var loss);
  void zero_grad();

  std::size_t size() const { return nodes_.size(); }

private:
  struct Node
  {
    Tensor owned;
    const Tensor * external = nullptr;
    Tensor grad;
    bool has_grad = false;
    bool requires_grad = false;
    BackwardFn backward;

    const Tensor & value() const { return external ? *external : owned; }
  };

  const Node & node(Var v) const;
  Var push(Node n);

  std::deque<Node> nodes_;
};

}  // namespace hetpred::ad

#endif  // HETPRED_TAPE_HPP_
