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

#include "hetpred/ops.hpp"

#include "hetpred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hetpred::ad
{
namespace
{

Tape & tape_of(Var a)
{
  if (!a.tape) {
    throw UsageError("Var is not attached to a tape");
  }
  return *a.tape;
}

Tape & tape_of(Var a, Var b)
{
  if (a.tape != b.tape) {
    throw UsageError("operands recorded on different tapes");
  }
  return tape_of(a);
}

void require_same_shape(std::string_view op, const Tensor & a, const Tensor & b)
{
  if (a.shape() != b.shape()) {
    throw DimensionError(
      std::string(op) + ": shape " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
}

void require_rank(std::string_view op, const Tensor & a, std::size_t rank)
{
  if (a.rank() != rank) {
    throw DimensionError(
      std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
      shape_string(a.shape()));
  }
}

// Records y = f(a) where dy/da depends only on (a, y) elementwise.
template <class Forward, class Derivative>
Var unary(std::string_view op, Var a, Forward f, Derivative df)
{
  Tape & tape = tape_of(a);
  const Tensor & av = tape.value(a);
  Tensor out = Tensor::zeros_like(av);
  for (std::size_t i = 0; i < av.size(); ++i) {
    out[i] = f(av[i]);
  }
  const std::uint32_t ai = a.id;
  return tape.record(op, std::move(out), {a}, [ai, df](Tape & t, std::uint32_t self) {
    const Tensor & x = t.value(ai);
    const Tensor & y = t.value(self);
    const Tensor & gy = t.grad_buffer(self);
    Tensor & gx = t.grad_buffer(ai);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      gx[i] += gy[i] * df(x[i], y[i]);
    }
  });
}

}  // namespace

Var add(Var a, Var b)
{
  Tape & tape = tape_of(a, b);
  const Tensor & av = tape.value(a);
  const Tensor & bv = tape.value(b);
  require_same_shape("add", av, bv);
  Tensor out = av;
  out.add_in_place(bv);
  const std::uint32_t ai = a.id;
  const std::uint32_t bi = b.id;
  return tape.record("add", std::move(out), {a, b}, [ai, bi](Tape & t, std::uint32_t self) {
    const Tensor & gy = t.grad_buffer(self);
    if (t.requires_grad(ai)) {
      t.grad_buffer(ai).add_in_place(gy);
    }
    if (t.requires_grad(bi)) {
      t.grad_buffer(bi).add_in_place(gy);
    }
  });
}

Var sub(Var a, Var b)
{
  Tape & tape = tape_of(a, b);
  const Tensor & av = tape.value(a);
  const Tensor & bv = tape.value(b);
  require_same_shape("sub", av, bv);
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] -= bv[i];
  }
  const std::uint32_t ai = a.id;
  const std::uint32_t bi = b.id;
  return tape.record("sub", std::move(out), {a, b}, [ai, bi](Tape & t, std::uint32_t self) {
    const Tensor & gy = t.grad_buffer(self);
    if (t.requires_grad(ai)) {
      t.grad_buffer(ai).add_in_place(gy);
    }
    if (t.requires_grad(bi)) {
      Tensor & gb = t.grad_buffer(bi);
      for (std::size_t i = 0; i < gb.size(); ++i) {
        gb[i] -= gy[i];
      }
    }
  });
}

Var mul(Var a, Var b)
{
  Tape & tape = tape_of(a, b);
  const Tensor & av = tape.value(a);
  const Tensor & bv = tape.value(b);
  require_same_shape("mul", av, bv);
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] *= bv[i];
  }
  const std::uint32_t ai = a.id;
  const std::uint32_t bi = b.id;
  return tape.record("mul", std::move(out), {a, b}, [ai, bi](Tape & t, std::uint32_t self) {
    const Tensor & gy = t.grad_buffer(self);
    if (t.requires_grad(ai)) {
      const Tensor & bv = t.value(bi);
      Tensor & ga = t.grad_buffer(ai);
      for (std::size_t i = 0; i < ga.size(); ++i) {
        ga[i] += gy[i] * bv[i];
      }
    }
    if (t.requires_grad(bi)) {
      const Tensor & av = t.value(ai);
      Tensor & gb = t.grad_buffer(bi);
      for (std::size_t i = 0; i < gb.size(); ++i) {
        gb[i] += gy[i] * av[i];
      }
    }
  });
}

Var div(Var a, Var b)
{
  Tape & tape = tape_of(a, b);
  const Tensor & av = tape.value(a);
  const Tensor & bv = tape.value(b);
  require_same_shape("div", av, bv);
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (bv[i] == 0.0) {
      throw NumericDomainError("div: division by zero");
    }
    out[i] /= bv[i];
  }
  const std::uint32_t ai = a.id;
  const std::uint32_t bi = b.id;
  return tape.record("div", std::move(out), {a, b}, [ai, bi](Tape & t, std::uint32_t self) {
    const Tensor & gy = t.grad_buffer(self);
    const Tensor & bv = t.value(bi);
    if (t.requires_grad(ai)) {
      Tensor & ga = t.grad_buffer(ai);
      for (std::size_t i = 0; i < ga.size(); ++i) {
        ga[i] += gy[i] / bv[i];
      }
    }
    if (t.requires_grad(bi)) {
      const Tensor & y = t.value(self);
      Tensor & gb = t.grad_buffer(bi);
      for (std::size_t i = 0; i < gb.size(); ++i) {
        gb[i] -= gy[i] * y[i] / bv[i];
      }
    }
  });
}

Var neg(Var a) { return scale(a, -1.0); }

Var scale(Var a, double s)
{
  return unary(
    "scale", a, [s](double x) { return s * x; }, [s](double, double) { return s; });
}

Var scale(Var s, Var a)
{
  Tape & tape = tape_of(s, a);
  const double sv = tape.value(s).item();
  Tensor out = tape.value(a);
  for (double & v : out.values()) {
    v *= sv;
  }
  const std::uint32_t si = s.id;
  const std::uint32_t ai = a.id;
  return tape.record("scale", std::move(out), {s, a}, [si, ai](Tape & t, std::uint32_t self) {
    const Tensor & gy = t.grad_buffer(self);
    const Tensor & av = t.value(ai);
    if (t.requires_grad(si)) {
      double acc = 0.0;
      for (std::size_t i = 0; i < gy.size(); ++i) {
        acc += gy[i] * av[i];
      }
      t.grad_buffer(si)[0] += acc;
    }
    if (t.requires_grad(ai)) {
      const double sv = t.value(si)[0];
      Tensor & ga = t.grad_buffer(ai);
      for (std::size_t i = 0; i < ga.size(); ++i) {
        ga[i] += sv * gy[i];
      }
    }
  });
}

Var add_scalar(Var a, double s)
{
  return unary(
    "add_scalar", a, [s](double x) { return x + s; }, [](double, double) { return 1.0; });
}

Var tanh(Var a)
{
  return unary(
    "tanh", a, [](double x) { return std::tanh(x); },
    [](double, double y) { return 1.0 - y * y; });
}

Var sigmoid(Var a)
{
  return unary(
    "sigmoid", a,
    [](double x) {
      // Split by sign so exp never overflows.
      if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
      }
      const double e = std::exp(x);
      return e / (1.0 + e);
    },
    [](double, double y) { return y * (1.0 - y); });
}

Var exp(Var a)
{
  return unary(
    "exp", a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var log(Var a)
{
  for (double v : tape_of(a).value(a).values()) {
    if (!(v > 0.0)) {
      throw NumericDomainError("log of non-positive value " + std::to_string(v));
    }
  }
  return unary(
    "log", a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var relu(Var a)
{
  return unary(
    "relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
    [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var square(Var a)
{
  return unary(
    "square", a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Var clamp(Var a, double lo, double hi)
{
  return unary(
    "clamp", a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
    [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Var matmul(Var a, Var b)
{
  Tape & tape = tape_of(a, b);
  const Tensor & av = tape.value(a);
  const Tensor & bv = tape.value(b);
  require_rank("matmul", av, 2);
  require_rank("matmul", bv, 2);
  const std::size_t m = av.shape()[0];
  const std::size_t k = av.shape()[1];
  const std::size_t n = bv.shape()[1];
  if (bv.shape()[0] != k) {
    throw DimensionError(
      "matmul: inner dimensions " + shape_string(av.shape()) + " x " + shape_string(bv.shape()));
  }
  Tensor out(Shape{m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av.data()[i * k + p];
      const double * brow = bv.data() + p * n;
      double * orow = out.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        orow[j] += aip * brow[j];
      }
    }
  }
  const std::uint32_t ai = a.id;
  const std::uint32_t bi = b.id;
  return tape.record(
    "matmul", std::move(out), {a, b}, [ai, bi, m, k, n](Tape & t, std::uint32_t self) {
      const Tensor & gy = t.grad_buffer(self);
      const Tensor & av = t.value(ai);
      const Tensor & bv = t.value(bi);
      if (t.requires_grad(ai)) {
        // dA = dC * B^T
        Tensor & ga = t.grad_buffer(ai);
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              acc += gy.data()[i * n + j] * bv.data()[p * n + j];
            }
            ga.data()[i * k + p] += acc;
          }
        }
      }
      if (t.requires_grad(bi)) {
        // dB = A^T * dC
        Tensor & gb = t.grad_buffer(bi);
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            const double aip = av.data()[i * k + p];
            for (std::size_t j = 0; j < n; ++j) {
              gb.data()[p * n + j] += aip * gy.data()[i * n + j];
            }
          }
        }
      }
    });
}

Var matvec(Var w, Var x)
{
  Tape & tape = tape_of(w, x);
  const Tensor & wv = tape.value(w);
  const Tensor & xv = tape.value(x);
  require_rank("matvec", wv, 2);
  require_rank("matvec", xv, 1);
  const std::size_t m = wv.shape()[0];
  const std::size_t k = wv.shape()[1];
  if (xv.size() != k) {
    throw DimensionError(
      "matvec: " + shape_string(wv.shape()) + " x " + shape_string(xv.shape()));
  }
  Tensor out(Shape{m});
  const double * xd = xv.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double * row = wv.data() + i * k;
    double acc = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      acc += row[p] * xd[p];
    }
    out[i] = acc;
  }
  const std::uint32_t wi = w.id;
  const std::uint32_t xi = x.id;
  return tape.record("matvec", std::move(out), {w, x}, [wi, xi, m, k](Tape & t, std::uint32_t self) {
    const Tensor & gy = t.grad_buffer(self);
    const Tensor & wv = t.value(wi);
    const Tensor & xv = t.value(xi);
    if (t.requires_grad(wi)) {
      // dW += dy x^T
      double * gw = t.grad_buffer(wi).data();
      for (std::size_t i = 0; i < m; ++i) {
        const double g = gy[i];
        if (g == 0.0) {
          continue;
        }
        double * row = gw + i * k;
        for (std::size_t p = 0; p < k; ++p) {
          row[p] += g * xv.data()[p];
        }
      }
    }
    if (t.requires_grad(xi)) {
      // dx += W^T dy
      double * gx = t.grad_buffer(xi).data();
      for (std::size_t i = 0; i < m; ++i) {
        const double g = gy[i];
        if (g == 0.0) {
          continue;
        }
        const double * row = wv.data() + i * k;
        for (std::size_t p = 0; p < k; ++p) {
          gx[p] += g * row[p];
        }
      }
    }
  });
}

Var vecmat(Var w, Var m)
{
  Tape & tape = tape_of(w, m);
  const Tensor & wv = tape.value(w);
  const Tensor & mv = tape.value(m);
  require_rank("vecmat", wv, 1);
  require_rank("vecmat", mv, 2);
  const std::size_t n = mv.shape()[0];
  const std::size_t k = mv.shape()[1];
  if (wv.size() != n) {
    throw DimensionError(
      "vecmat: " + shape_string(wv.shape()) + " x " + shape_string(mv.shape()));
  }
  Tensor out(Shape{k});
  for (std::size_t j = 0; j < n; ++j) {
    const double wj = wv[j];
    const double * row = mv.data() + j * k;
    for (std::size_t c = 0; c < k; ++c) {
      out[c] += wj * row[c];
    }
  }
  const std::uint32_t wi = w.id;
  const std::uint32_t mi = m.id;
  return tape.record("vecmat", std::move(out), {w, m}, [wi, mi, n, k](Tape & t, std::uint32_t self) {
    const Tensor & gy = t.grad_buffer(self);
    if (t.requires_grad(wi)) {
      const Tensor & mv = t.value(mi);
      Tensor & gw = t.grad_buffer(wi);
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          acc += gy[c] * mv.data()[j * k + c];
        }
        gw[j] += acc;
      }
    }
    if (t.requires_grad(mi)) {
      const Tensor & wv = t.value(wi);
      Tensor & gm = t.grad_buffer(mi);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t c = 0; c < k; ++c) {
          gm.data()[j * k + c] += wv[j] * gy[c];
        }
      }
    }
  });
}

Var softmax(Var x)
{
  Tape & tape = tape_of(x);
  const Tensor & xv = tape.value(x);
  require_rank("softmax", xv, 1);
  if (xv.size() == 0) {
    throw DimensionError("softmax of an empty vector");
  }
  const double mx = *std::max_element(xv.values().begin(), xv.values().end());
  Tensor out = Tensor::zeros_like(xv);
  double total = 0.0;
  for (std::size_t i = 0; i < xv.size(); ++i) {
    out[i] = std::exp(xv[i] - mx);
    total += out[i];
  }
  for (double & v : out.values()) {
    v /= total;
  }
  const std::uint32_t xi = x.id;
  return tape.record("softmax", std::move(out), {x}, [xi](Tape & t, std::uint32_t self) {
    const Tensor & gy = t.grad_buffer(self);
    const Tensor & y = t.value(self);
    double inner = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      inner += gy[i] * y[i];
    }
    Tensor & gx = t.grad_buffer(xi);
    for (std::size_t i = 0; i < y.size(); ++i) {
      gx[i] += y[i] * (gy[i] - inner);
    }
  });
}

Var concat(Var a, Var b)
{
  Tape & tape = tape_of(a, b);
  const Tensor & av = tape.value(a);
  const Tensor & bv = tape.value(b);
  require_rank("concat", av, 1);
  require_rank("concat", bv, 1);
  const std::size_t na = av.size();
  std::vector<double> vals;
  vals.reserve(na + bv.size());
  vals.insert(vals.end(), av.values().begin(), av.values().end());
  vals.insert(vals.end(), bv.values().begin(), bv.values().end());
  const std::uint32_t ai = a.id;
  const std::uint32_t bi = b.id;
  return tape.record(
    "concat", Tensor::vector(std::move(vals)), {a, b}, [ai, bi, na](Tape & t, std::uint32_t self) {
      const Tensor & gy = t.grad_buffer(self);
      if (t.requires_grad(ai)) {
        Tensor & ga = t.grad_buffer(ai);
        for (std::size_t i = 0; i < na; ++i) {
          ga[i] += gy[i];
        }
      }
      if (t.requires_grad(bi)) {
        Tensor & gb = t.grad_buffer(bi);
        for (std::size_t i = 0; i < gb.size(); ++i) {
          gb[i] += gy[na + i];
        }
      }
    });
}

Var slice(Var x, std::size_t offset, std::size_t length)
{
  Tape & tape = tape_of(x);
  const Tensor & xv = tape.value(x);
  require_rank("slice", xv, 1);
  if (offset + length > xv.size()) {
    throw DimensionError(
      "slice [" + std::to_string(offset) + ", +" + std::to_string(length) + ") of " +
      shape_string(xv.shape()));
  }
  std::vector<double> vals(xv.values().begin() + offset, xv.values().begin() + offset + length);
  const std::uint32_t xi = x.id;
  return tape.record(
    "slice", Tensor::vector(std::move(vals)), {x}, [xi, offset](Tape & t, std::uint32_t self) {
      const Tensor & gy = t.grad_buffer(self);
      Tensor & gx = t.grad_buffer(xi);
      for (std::size_t i = 0; i < gy.size(); ++i) {
        gx[offset + i] += gy[i];
      }
    });
}

Var pick(Var x, std::size_t i)
{
  Tape & tape = tape_of(x);
  const Tensor & xv = tape.value(x);
  require_rank("pick", xv, 1);
  if (i >= xv.size()) {
    throw DimensionError("pick index " + std::to_string(i) + " of " + shape_string(xv.shape()));
  }
  const std::uint32_t xi = x.id;
  return tape.record("pick", Tensor::scalar(xv[i]), {x}, [xi, i](Tape & t, std::uint32_t self) {
    t.grad_buffer(xi)[i] += t.grad_buffer(self)[0];
  });
}

Var stack(std::span<const Var> parts)
{
  if (parts.empty()) {
    throw DimensionError("stack of zero parts");
  }
  Tape & tape = tape_of(parts.front());
  const Shape inner = tape.value(parts.front()).shape();
  if (inner.size() > 1) {
    throw DimensionError("stack expects scalars or vectors, got " + shape_string(inner));
  }
  const std::size_t width = shape_size(inner);
  std::vector<double> vals;
  vals.reserve(parts.size() * width);
  std::vector<std::uint32_t> ids;
  ids.reserve(parts.size());
  for (const Var & p : parts) {
    const Tensor & pv = tape_of(parts.front(), p).value(p);
    if (pv.shape() != inner) {
      throw DimensionError(
        "stack: part shape " + shape_string(pv.shape()) + " vs " + shape_string(inner));
    }
    vals.insert(vals.end(), pv.values().begin(), pv.values().end());
    ids.push_back(p.id);
  }
  Shape out_shape = inner.empty() ? Shape{parts.size()} : Shape{parts.size(), width};
  return tape.record(
    "stack", Tensor(std::move(out_shape), std::move(vals)), parts,
    [ids = std::move(ids), width](Tape & t, std::uint32_t self) {
      const Tensor & gy = t.grad_buffer(self);
      for (std::size_t r = 0; r < ids.size(); ++r) {
        if (!t.requires_grad(ids[r])) {
          continue;
        }
        Tensor & g = t.grad_buffer(ids[r]);
        for (std::size_t c = 0; c < width; ++c) {
          g[c] += gy[r * width + c];
        }
      }
    });
}

Var sum(Var x)
{
  Tape & tape = tape_of(x);
  double acc = 0.0;
  for (double v : tape.value(x).values()) {
    acc += v;
  }
  const std::uint32_t xi = x.id;
  return tape.record("sum", Tensor::scalar(acc), {x}, [xi](Tape & t, std::uint32_t self) {
    const double g = t.grad_buffer(self)[0];
    for (double & v : t.grad_buffer(xi).values()) {
      v += g;
    }
  });
}

Var dot(Var a, Var b)
{
  Tape & tape = tape_of(a, b);
  const Tensor & av = tape.value(a);
  const Tensor & bv = tape.value(b);
  require_same_shape("dot", av, bv);
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    acc += av[i] * bv[i];
  }
  const std::uint32_t ai = a.id;
  const std::uint32_t bi = b.id;
  return tape.record("dot", Tensor::scalar(acc), {a, b}, [ai, bi](Tape & t, std::uint32_t self) {
    const double g = t.grad_buffer(self)[0];
    if (t.requires_grad(ai)) {
      const Tensor & bv = t.value(bi);
      Tensor & ga = t.grad_buffer(ai);
      for (std::size_t i = 0; i < ga.size(); ++i) {
        ga[i] += g * bv[i];
      }
    }
    if (t.requires_grad(bi)) {
      const Tensor & av = t.value(ai);
      Tensor & gb = t.grad_buffer(bi);
      for (std::size_t i = 0; i < gb.size(); ++i) {
        gb[i] += g * av[i];
      }
    }
  });
}

Var add_n(std::span<const Var> parts)
{
  if (parts.empty()) {
    throw DimensionError("add_n of zero parts");
  }
  Tape & tape = tape_of(parts.front());
  Tensor out = tape.value(parts.front());
  std::vector<std::uint32_t> ids{parts.front().id};
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const Tensor & pv = tape_of(parts.front(), parts[i]).value(parts[i]);
    require_same_shape("add_n", out, pv);
    out.add_in_place(pv);
    ids.push_back(parts[i].id);
  }
  return tape.record(
    "add_n", std::move(out), parts, [ids = std::move(ids)](Tape & t, std::uint32_t self) {
      const Tensor & gy = t.grad_buffer(self);
      for (std::uint32_t id : ids) {
        if (t.requires_grad(id)) {
          t.grad_buffer(id).add_in_place(gy);
        }
      }
    });
}

Var mean_n(std::span<const Var> parts)
{
  return scale(add_n(parts), 1.0 / static_cast<double>(parts.size()));
}

}  // namespace hetpred::ad
