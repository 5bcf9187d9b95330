#include <atomic>

#include "hydrolax/kernels.hpp"

namespace hydrolax::kernels {

namespace {
std::atomic<Exec> g_policy{Exec::Parallel};
} // namespace

Exec execution_policy() { return g_policy.load(std::memory_order_relaxed); }
void set_execution_policy(Exec e) { g_policy.store(e, std::memory_order_relaxed); }

namespace {
bool parallel() { return execution_policy() == Exec::Parallel; }
} // namespace

std::optional<SampleError> sample(const Expr& e, const GridSpec& g,
                                  const std::optional<Complex>& lambda,
                                  std::span<Complex> out) {
  return parallel() ? par::sample(e, g, lambda, out) : serial::sample(e, g, lambda, out);
}

void add(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  parallel() ? par::add(a, b, out) : serial::add(a, b, out);
}

void sub(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  parallel() ? par::sub(a, b, out) : serial::sub(a, b, out);
}

void mul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  parallel() ? par::mul(a, b, out) : serial::mul(a, b, out);
}

std::optional<SampleError> div(std::span<const Complex> a, std::span<const Complex> b,
                               std::span<Complex> out) {
  return parallel() ? par::div(a, b, out) : serial::div(a, b, out);
}

void neg(std::span<const Complex> a, std::span<Complex> out) {
  parallel() ? par::neg(a, out) : serial::neg(a, out);
}

void sqrt_ew(std::span<const Complex> a, std::span<Complex> out) {
  parallel() ? par::sqrt_ew(a, out) : serial::sqrt_ew(a, out);
}

void scale(Complex s, std::span<const Complex> a, std::span<Complex> out) {
  parallel() ? par::scale(s, a, out) : serial::scale(s, a, out);
}

void fd_partial(std::span<const Complex> in, const GridSpec& g, int axis,
                std::span<Complex> out) {
  parallel() ? par::fd_partial(in, g, axis, out) : serial::fd_partial(in, g, axis, out);
}

Extreme max_abs(std::span<const Complex> vals) {
  return parallel() ? par::max_abs(vals) : serial::max_abs(vals);
}

Extreme max_abs_weighted(std::span<const Complex> vals, std::span<const double> weights) {
  return parallel() ? par::max_abs_weighted(vals, weights)
                    : serial::max_abs_weighted(vals, weights);
}

Extreme min_abs(std::span<const Complex> vals) {
  return parallel() ? par::min_abs(vals) : serial::min_abs(vals);
}

void accumulate_abs2(std::span<const Complex> vals, std::span<double> acc) {
  parallel() ? par::accumulate_abs2(vals, acc) : serial::accumulate_abs2(vals, acc);
}

} // namespace hydrolax::kernels
