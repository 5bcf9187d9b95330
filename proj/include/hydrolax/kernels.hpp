#ifndef HYDROLAX_KERNELS_HPP
#define HYDROLAX_KERNELS_HPP

#include <cstdint>
#include <optional>
#include <span>

#include "hydrolax/grid.hpp"

namespace hydrolax::kernels {

/// Runtime switch between the serial reference kernels and the
/// OpenMP-parallel ones. Both produce bit-identical results: the maps are
/// elementwise and reductions break ties on the lowest flat index.
enum class Exec { Serial, Parallel };

Exec execution_policy();
void set_execution_policy(Exec e);

/// Scoped policy override for tests.
class ExecGuard {
public:
  explicit ExecGuard(Exec e) : saved_(execution_policy()) { set_execution_policy(e); }
  ~ExecGuard() { set_execution_policy(saved_); }

private:
  Exec saved_;
};

enum class EvalStatus : std::uint8_t { Ok = 0, Unbound = 1, DivZero = 2 };

struct SampleError {
  EvalStatus status;
  std::size_t node;
};

struct Extreme {
  double value;
  std::size_t index;
};

// Serial reference implementations.
namespace serial {
std::optional<SampleError> sample(const Expr& e, const GridSpec& g,
                                  const std::optional<Complex>& lambda,
                                  std::span<Complex> out);
void add(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
void sub(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
void mul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
std::optional<SampleError> div(std::span<const Complex> a, std::span<const Complex> b,
                               std::span<Complex> out);
void neg(std::span<const Complex> a, std::span<Complex> out);
void sqrt_ew(std::span<const Complex> a, std::span<Complex> out);
void scale(Complex s, std::span<const Complex> a, std::span<Complex> out);
void fd_partial(std::span<const Complex> in, const GridSpec& g, int axis,
                std::span<Complex> out);
Extreme max_abs(std::span<const Complex> vals);
Extreme max_abs_weighted(std::span<const Complex> vals, std::span<const double> weights);
Extreme min_abs(std::span<const Complex> vals);
void accumulate_abs2(std::span<const Complex> vals, std::span<double> acc);
} // namespace serial

// OpenMP implementations of the same contracts.
namespace par {
std::optional<SampleError> sample(const Expr& e, const GridSpec& g,
                                  const std::optional<Complex>& lambda,
                                  std::span<Complex> out);
void add(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
void sub(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
void mul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
std::optional<SampleError> div(std::span<const Complex> a, std::span<const Complex> b,
                               std::span<Complex> out);
void neg(std::span<const Complex> a, std::span<Complex> out);
void sqrt_ew(std::span<const Complex> a, std::span<Complex> out);
void scale(Complex s, std::span<const Complex> a, std::span<Complex> out);
void fd_partial(std::span<const Complex> in, const GridSpec& g, int axis,
                std::span<Complex> out);
Extreme max_abs(std::span<const Complex> vals);
Extreme max_abs_weighted(std::span<const Complex> vals, std::span<const double> weights);
Extreme min_abs(std::span<const Complex> vals);
void accumulate_abs2(std::span<const Complex> vals, std::span<double> acc);
} // namespace par

// Dispatching entry points, routed by execution_policy().
std::optional<SampleError> sample(const Expr& e, const GridSpec& g,
                                  const std::optional<Complex>& lambda,
                                  std::span<Complex> out);
void add(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
void sub(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
void mul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
std::optional<SampleError> div(std::span<const Complex> a, std::span<const Complex> b,
                               std::span<Complex> out);
void neg(std::span<const Complex> a, std::span<Complex> out);
void sqrt_ew(std::span<const Complex> a, std::span<Complex> out);
void scale(Complex s, std::span<const Complex> a, std::span<Complex> out);
void fd_partial(std::span<const Complex> in, const GridSpec& g, int axis,
                std::span<Complex> out);
Extreme max_abs(std::span<const Complex> vals);
Extreme max_abs_weighted(std::span<const Complex> vals, std::span<const double> weights);
Extreme min_abs(std::span<const Complex> vals);
void accumulate_abs2(std::span<const Complex> vals, std::span<double> acc);

} // namespace hydrolax::kernels

#endif
