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

#ifndef HETPRED_OPS_HPP_
#define HETPRED_OPS_HPP_

#include "hetpred/tape.hpp"

#include <span>

// Differentiable primitives. Binary elementwise ops require identical shapes;
// the only broadcast is an explicit scalar-times-tensor `scale`. Every op
// throws DimensionError on a shape mismatch and NumericDomainError when its
// result would not be finite.
namespace hetpred::ad
{

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var div(Var a, Var b);
Var neg(Var a);
Var scale(Var a, double s);
/// `s` must hold exactly one element.
Var scale(Var s, Var a);
Var add_scalar(Var a, double s);

Var tanh(Var a);
Var sigmoid(Var a);
Var exp(Var a);
/// Throws NumericDomainError unless every element is strictly positive.
Var log(Var a);
Var relu(Var a);
Var square(Var a);
/// Elementwise clamp to [lo, hi]; zero gradient outside the interval.
Var clamp(Var a, double lo, double hi);

/// [m x k] * [k x n] -> [m x n]
Var matmul(Var a, Var b);
/// [m x k] * [k] -> [m]
Var matvec(Var w, Var x);
/// [n] * [n x k] -> [k], i.e. w^T M.
Var vecmat(Var w, Var m);

/// Numerically stable (max-subtracted) softmax of a non-empty vector.
Var softmax(Var x);

Var concat(Var a, Var b);
Var slice(Var x, std::size_t offset, std::size_t length);
/// Element `i` of a vector as a rank-0 scalar.
Var pick(Var x, std::size_t i);
/// Stack equally shaped scalars into a vector, or vectors into matrix rows.
Var stack(std::span<const Var> parts);

Var sum(Var x);
Var dot(Var a, Var b);
Var add_n(std::span<const Var> parts);
Var mean_n(std::span<const Var> parts);

}  // namespace hetpred::ad

#endif  // HETPRED_OPS_HPP_
