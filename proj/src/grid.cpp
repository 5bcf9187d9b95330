#include "hydrolax/grid.hpp"

#include <cstdio>

namespace hydrolax {

GridSpec::GridSpec(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw ConfigError("grid must have at least one axis");
  strides_.assign(axes_.size(), 1);
  total_ = 1;
  for (const auto& ax : axes_) {
    if (!(ax.hi > ax.lo)) throw ConfigError("grid axis upper bound must exceed lower bound");
    if (ax.count < 3) throw ConfigError("grid axis needs at least 3 nodes");
    total_ *= static_cast<std::size_t>(ax.count);
  }
  for (int a = dim() - 2; a >= 0; --a)
    strides_[static_cast<size_t>(a)] =
        strides_[static_cast<size_t>(a) + 1] * static_cast<std::size_t>(axes_[static_cast<size_t>(a) + 1].count);
}

double GridSpec::spacing(int a) const {
  const auto& ax = axes_[static_cast<size_t>(a)];
  return (ax.hi - ax.lo) / static_cast<double>(ax.count - 1);
}

double GridSpec::max_spacing() const {
  double h = 0.0;
  for (int a = 0; a < dim(); ++a) h = std::max(h, spacing(a));
  return h;
}

double GridSpec::coord(int a, int i) const {
  const auto& ax = axes_[static_cast<size_t>(a)];
  if (i == ax.count - 1) return ax.hi;
  return ax.lo + static_cast<double>(i) * spacing(a);
}

std::size_t GridSpec::flatten(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim(); ++a)
    flat += static_cast<std::size_t>(idx[static_cast<size_t>(a)]) * strides_[static_cast<size_t>(a)];
  return flat;
}

void GridSpec::unflatten(std::size_t flat, std::span<int> idx) const {
  for (int a = 0; a < dim(); ++a) {
    idx[static_cast<size_t>(a)] = static_cast<int>(flat / strides_[static_cast<size_t>(a)]);
    flat %= strides_[static_cast<size_t>(a)];
  }
}

std::vector<double> GridSpec::node(std::size_t flat) const {
  std::vector<int> idx(static_cast<size_t>(dim()));
  unflatten(flat, idx);
  std::vector<double> out(static_cast<size_t>(dim()));
  for (int a = 0; a < dim(); ++a) out[static_cast<size_t>(a)] = coord(a, idx[static_cast<size_t>(a)]);
  return out;
}

void GridSpec::node_complex(std::size_t flat, std::span<Complex> out) const {
  for (int a = 0; a < dim(); ++a) {
    const int i = static_cast<int>(flat / strides_[static_cast<size_t>(a)]);
    flat %= strides_[static_cast<size_t>(a)];
    out[static_cast<size_t>(a)] = Complex(coord(a, i), 0.0);
  }
}

GridSpec GridSpec::refined() const {
  std::vector<AxisSpec> axes = axes_;
  for (auto& ax : axes) ax.count = 2 * ax.count - 1;
  return GridSpec(std::move(axes));
}

GridSpec GridSpec::with_count(int m) const {
  std::vector<AxisSpec> axes = axes_;
  for (auto& ax : axes) ax.count = m;
  return GridSpec(std::move(axes));
}

std::string format_coords(std::span<const double> coords) {
  std::string out;
  char buf[32];
  for (size_t i = 0; i < coords.size(); ++i) {
    if (i > 0) out += ',';
    std::snprintf(buf, sizeof buf, "%.6g", coords[i]);
    out += buf;
  }
  return out;
}

} // namespace hydrolax
