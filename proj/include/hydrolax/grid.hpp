#ifndef HYDROLAX_GRID_HPP
#define HYDROLAX_GRID_HPP

#include <span>
#include <vector>

#include "hydrolax/expr.hpp"

namespace hydrolax {

/// One axis of a rectangular tensor-product grid with uniform nodes.
struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  int count = 3;
  bool operator==(const AxisSpec&) const = default;
};

/// Rectangular tensor-product grid. Axis 0 is the slowest index in the
/// flat node order. Node counts are >= 3 per axis (required by the
/// second-order stencils) and endpoints are hit exactly.
class GridSpec {
public:
  GridSpec() = default;
  explicit GridSpec(std::vector<AxisSpec> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  std::size_t size() const { return total_; }
  const AxisSpec& axis(int a) const { return axes_[static_cast<size_t>(a)]; }
  double spacing(int a) const;
  double max_spacing() const;
  std::size_t stride(int a) const { return strides_[static_cast<size_t>(a)]; }

  double coord(int a, int i) const;
  std::size_t flatten(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> idx) const;
  std::vector<double> node(std::size_t flat) const;
  void node_complex(std::size_t flat, std::span<Complex> out) const;

  /// Same box with spacing halved (count -> 2*count - 1 per axis).
  GridSpec refined() const;
  /// Same box with every axis forced to m nodes.
  GridSpec with_count(int m) const;

  bool operator==(const GridSpec&) const = default;

private:
  std::vector<AxisSpec> axes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

/// "a,b,c" with %.6g components, used by every report line.
std::string format_coords(std::span<const double> coords);

} // namespace hydrolax

#endif
