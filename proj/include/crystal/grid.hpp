#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "crystal/geometry.hpp"

namespace crystal {

enum class BoundaryMode {
  Periodic,
  // A frozen frame of ghost nodes holding `pad_value` on every side.
  Pad,
  // Zero difference across the high edge of each direction.
  Neumann,
};

// Scalar field on square cells. Node (i, j) sits at origin + spacing * (i, j) and is
// stored at index j * width + i. A direction of extent 1 carries no differences.
class GridField {
 public:
  GridField() = default;
  GridField(std::size_t width, std::size_t height, double spacing, Vec2 origin = {},
            BoundaryMode boundary = BoundaryMode::Neumann, double pad_value = 0.0);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return spacing_; }
  Vec2 origin() const { return origin_; }
  BoundaryMode boundary() const { return boundary_; }
  double pad_value() const { return pad_value_; }
  void set_boundary(BoundaryMode mode, double pad_value = 0.0);

  double& at(std::size_t i, std::size_t j) { return values_[j * width_ + i]; }
  double at(std::size_t i, std::size_t j) const { return values_[j * width_ + i]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  Vec2 node(std::size_t i, std::size_t j) const {
    return origin_ + spacing_ * Vec2{static_cast<double>(i), static_cast<double>(j)};
  }
  // Same geometry and boundary, new values from f(node position).
  template <class Fn>
  GridField sampled(Fn&& f) const {
    GridField g = *this;
    for (std::size_t j = 0; j < height_; ++j)
      for (std::size_t i = 0; i < width_; ++i) g.at(i, j) = f(node(i, j));
    return g;
  }

  // Throws InvalidArgument on non-finite values.
  void validate() const;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  double spacing_ = 1.0;
  Vec2 origin_{};
  BoundaryMode boundary_ = BoundaryMode::Neumann;
  double pad_value_ = 0.0;
  std::vector<double> values_;
};

// Grid over the box [lo, hi] with the given node count along x; the y count follows
// from the spacing.
GridField grid_over(Vec2 lo, Vec2 hi, std::size_t nodes_x, BoundaryMode boundary = BoundaryMode::Neumann,
                    double pad_value = 0.0);

void write_binary(const GridField& g, const std::filesystem::path& path);
GridField read_binary(const std::filesystem::path& path);
// One line per grid row, lowest y first.
void write_csv(const GridField& g, const std::filesystem::path& path);

}  // namespace crystal
