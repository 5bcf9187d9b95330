#include <array>
#include <cmath>

#include "hydrolax/kernels.hpp"

namespace hydrolax::kernels::serial {

std::optional<SampleError> sample(const Expr& e, const GridSpec& g,
                                  const std::optional<Complex>& lambda,
                                  std::span<Complex> out) {
  const std::size_t n = g.size();
  std::array<Complex, 9> coords{};
  std::span<Complex> cs(coords.data(), static_cast<size_t>(g.dim()));
  for (std::size_t i = 0; i < n; ++i) {
    g.node_complex(i, cs);
    try {
      out[i] = e.eval(cs, lambda);
    } catch (const DivisionByZero&) {
      return SampleError{EvalStatus::DivZero, i};
    } catch (const UnboundVariable&) {
      return SampleError{EvalStatus::Unbound, i};
    }
  }
  return std::nullopt;
}

void add(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
}

void sub(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
}

void mul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

std::optional<SampleError> div(std::span<const Complex> a, std::span<const Complex> b,
                               std::span<Complex> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (b[i] == Complex(0.0, 0.0)) return SampleError{EvalStatus::DivZero, i};
    out[i] = a[i] / b[i];
  }
  return std::nullopt;
}

void neg(std::span<const Complex> a, std::span<Complex> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -a[i];
}

void sqrt_ew(std::span<const Complex> a, std::span<Complex> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = principal_sqrt(a[i]);
}

void scale(Complex s, std::span<const Complex> a, std::span<Complex> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i];
}

void fd_partial(std::span<const Complex> in, const GridSpec& g, int axis,
                std::span<Complex> out) {
  const std::size_t n = g.size();
  const std::size_t s = g.stride(axis);
  const int count = g.axis(axis).count;
  const double inv2h = 1.0 / (2.0 * g.spacing(axis));
  // Boundary rows use the one-sided second-order 4-point stencil (the
  // central stencil with a cubic-extrapolated ghost node): its leading
  // h^2 error constant matches the interior stencil, so error fields
  // stay smooth and repeated differentiation keeps second order.
  const bool wide = count >= 4;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = static_cast<int>((i / s) % static_cast<std::size_t>(count));
    if (k == 0) {
      out[i] = wide ? (-4.0 * in[i] + 7.0 * in[i + s] - 4.0 * in[i + 2 * s] +
                       in[i + 3 * s]) *
                          inv2h
                    : (-3.0 * in[i] + 4.0 * in[i + s] - in[i + 2 * s]) * inv2h;
    } else if (k == count - 1) {
      out[i] = wide ? (4.0 * in[i] - 7.0 * in[i - s] + 4.0 * in[i - 2 * s] -
                       in[i - 3 * s]) *
                          inv2h
                    : (3.0 * in[i] - 4.0 * in[i - s] + in[i - 2 * s]) * inv2h;
    } else {
      out[i] = (in[i + s] - in[i - s]) * inv2h;
    }
  }
}

Extreme max_abs(std::span<const Complex> vals) {
  Extreme best{-1.0, 0};
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double v = std::abs(vals[i]);
    if (v > best.value) best = {v, i};
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

Extreme max_abs_weighted(std::span<const Complex> vals, std::span<const double> weights) {
  Extreme best{-1.0, 0};
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double v = std::abs(vals[i]) * weights[i];
    if (v > best.value) best = {v, i};
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

Extreme min_abs(std::span<const Complex> vals) {
  Extreme best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double v = std::abs(vals[i]);
    if (v < best.value) best = {v, i};
  }
  return best;
}

void accumulate_abs2(std::span<const Complex> vals, std::span<double> acc) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(vals[i]);
}

} // namespace hydrolax::kernels::serial
