#include <array>
#include <cmath>
#include <limits>

#include "hydrolax/kernels.hpp"

// OpenMP counterparts of the serial reference kernels. Loops are
// elementwise over disjoint indices, and reductions merge per-thread
// results with a lowest-index tie break, so results are bit-identical to
// the serial versions at any thread count. Tiny arrays stay on one thread
// via the if clause.

namespace hydrolax::kernels::par {

namespace {
constexpr std::size_t kGrain = 2048;
constexpr std::size_t kNoError = std::numeric_limits<std::size_t>::max();
} // namespace

std::optional<SampleError> sample(const Expr& e, const GridSpec& g,
                                  const std::optional<Complex>& lambda,
                                  std::span<Complex> out) {
  const std::size_t n = g.size();
  std::size_t err_node = kNoError;
  EvalStatus err_status = EvalStatus::Ok;
#pragma omp parallel if (n >= kGrain)
  {
    std::array<Complex, 9> coords{};
    std::span<Complex> cs(coords.data(), static_cast<size_t>(g.dim()));
    std::size_t local_node = kNoError;
    EvalStatus local_status = EvalStatus::Ok;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      g.node_complex(idx, cs);
      try {
        out[idx] = e.eval(cs, lambda);
      } catch (const DivisionByZero&) {
        if (idx < local_node) {
          local_node = idx;
          local_status = EvalStatus::DivZero;
        }
      } catch (const UnboundVariable&) {
        if (idx < local_node) {
          local_node = idx;
          local_status = EvalStatus::Unbound;
        }
      }
    }
#pragma omp critical(hydrolax_sample_err)
    {
      if (local_node < err_node) {
        err_node = local_node;
        err_status = local_status;
      }
    }
  }
  if (err_node != kNoError) return SampleError{err_status, err_node};
  return std::nullopt;
}

void add(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  const std::size_t n = out.size();
#pragma omp parallel for schedule(static) if (n >= kGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[static_cast<std::size_t>(i)] =
        a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
}

void sub(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  const std::size_t n = out.size();
#pragma omp parallel for schedule(static) if (n >= kGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[static_cast<std::size_t>(i)] =
        a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
}

void mul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  const std::size_t n = out.size();
#pragma omp parallel for schedule(static) if (n >= kGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[static_cast<std::size_t>(i)] =
        a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
}

std::optional<SampleError> div(std::span<const Complex> a, std::span<const Complex> b,
                               std::span<Complex> out) {
  const std::size_t n = out.size();
  std::size_t err_node = kNoError;
#pragma omp parallel if (n >= kGrain)
  {
    std::size_t local_node = kNoError;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (b[idx] == Complex(0.0, 0.0)) {
        if (idx < local_node) local_node = idx;
      } else {
        out[idx] = a[idx] / b[idx];
      }
    }
#pragma omp critical(hydrolax_div_err)
    {
      if (local_node < err_node) err_node = local_node;
    }
  }
  if (err_node != kNoError) return SampleError{EvalStatus::DivZero, err_node};
  return std::nullopt;
}

void neg(std::span<const Complex> a, std::span<Complex> out) {
  const std::size_t n = out.size();
#pragma omp parallel for schedule(static) if (n >= kGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[static_cast<std::size_t>(i)] = -a[static_cast<std::size_t>(i)];
}

void sqrt_ew(std::span<const Complex> a, std::span<Complex> out) {
  const std::size_t n = out.size();
#pragma omp parallel for schedule(static) if (n >= kGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[static_cast<std::size_t>(i)] = principal_sqrt(a[static_cast<std::size_t>(i)]);
}

void scale(Complex s, std::span<const Complex> a, std::span<Complex> out) {
  const std::size_t n = out.size();
#pragma omp parallel for schedule(static) if (n >= kGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[static_cast<std::size_t>(i)] = s * a[static_cast<std::size_t>(i)];
}

void fd_partial(std::span<const Complex> in, const GridSpec& g, int axis,
                std::span<Complex> out) {
  const std::size_t n = g.size();
  const std::size_t s = g.stride(axis);
  const int count = g.axis(axis).count;
  const double inv2h = 1.0 / (2.0 * g.spacing(axis));
  const bool wide = count >= 4; // see the serial reference for the stencil choice
#pragma omp parallel for schedule(static) if (n >= kGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const int k = static_cast<int>((idx / s) % static_cast<std::size_t>(count));
    if (k == 0) {
      out[idx] = wide ? (-4.0 * in[idx] + 7.0 * in[idx + s] - 4.0 * in[idx + 2 * s] +
                         in[idx + 3 * s]) *
                            inv2h
                      : (-3.0 * in[idx] + 4.0 * in[idx + s] - in[idx + 2 * s]) * inv2h;
    } else if (k == count - 1) {
      out[idx] = wide ? (4.0 * in[idx] - 7.0 * in[idx - s] + 4.0 * in[idx - 2 * s] -
                         in[idx - 3 * s]) *
                            inv2h
                      : (3.0 * in[idx] - 4.0 * in[idx - s] + in[idx - 2 * s]) * inv2h;
    } else {
      out[idx] = (in[idx + s] - in[idx - s]) * inv2h;
    }
  }
}

Extreme max_abs(std::span<const Complex> vals) {
  const std::size_t n = vals.size();
  Extreme best{-1.0, 0};
#pragma omp parallel if (n >= kGrain)
  {
    Extreme local{-1.0, 0};
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const double v = std::abs(vals[idx]);
      if (v > local.value || (v == local.value && idx < local.index)) local = {v, idx};
    }
#pragma omp critical(hydrolax_max_abs)
    {
      if (local.value > best.value ||
          (local.value == best.value && local.index < best.index))
        best = local;
    }
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

Extreme max_abs_weighted(std::span<const Complex> vals, std::span<const double> weights) {
  const std::size_t n = vals.size();
  Extreme best{-1.0, 0};
#pragma omp parallel if (n >= kGrain)
  {
    Extreme local{-1.0, 0};
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const double v = std::abs(vals[idx]) * weights[idx];
      if (v > local.value || (v == local.value && idx < local.index)) local = {v, idx};
    }
#pragma omp critical(hydrolax_max_absw)
    {
      if (local.value > best.value ||
          (local.value == best.value && local.index < best.index))
        best = local;
    }
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

Extreme min_abs(std::span<const Complex> vals) {
  const std::size_t n = vals.size();
  Extreme best{std::numeric_limits<double>::infinity(), 0};
#pragma omp parallel if (n >= kGrain)
  {
    Extreme local{std::numeric_limits<double>::infinity(), 0};
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const double v = std::abs(vals[idx]);
      if (v < local.value || (v == local.value && idx < local.index)) local = {v, idx};
    }
#pragma omp critical(hydrolax_min_abs)
    {
      if (local.value < best.value ||
          (local.value == best.value && local.index < best.index))
        best = local;
    }
  }
  return best;
}

void accumulate_abs2(std::span<const Complex> vals, std::span<double> acc) {
  const std::size_t n = acc.size();
#pragma omp parallel for schedule(static) if (n >= kGrain)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    acc[static_cast<std::size_t>(i)] += std::norm(vals[static_cast<std::size_t>(i)]);
}

} // namespace hydrolax::kernels::par
