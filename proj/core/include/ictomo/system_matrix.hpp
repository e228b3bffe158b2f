#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ictomo/geometry.hpp"

namespace ictomo::forward {

struct RaySegment {
    std::uint32_t voxel = 0;
    double length = 0.0;  // um
};

/// Exact ray/voxel intersection lengths by incremental parametric traversal
/// of the grid. Segments come out in order along the ray; rays that miss the
/// grid give an empty list.
[[nodiscard]] std::vector<RaySegment> trace_ray(const VoxelGrid& grid, const Ray& ray);

/// Length of the ray inside the grid's bounding box (slab method).
[[nodiscard]] double box_chord_length(const VoxelGrid& grid, const Ray& ray);

/// Sparse ray-by-voxel path-length matrix in compressed-row form.
class SystemMatrix {
public:
    SystemMatrix() = default;
    SystemMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                 std::vector<std::uint32_t> col_idx, std::vector<double> values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t nnz() const noexcept { return values_.size(); }

    [[nodiscard]] std::span<const std::uint32_t> row_columns(std::size_t row) const noexcept {
        return {col_idx_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
    }
    [[nodiscard]] std::span<const double> row_values(std::size_t row) const noexcept {
        return {values_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
    }
    [[nodiscard]] double row_sum(std::size_t row) const noexcept;

    /// out = A x
    void apply(std::span<const double> x, std::span<double> out) const;
    /// out = A^T y
    void apply_transpose(std::span<const double> y, std::span<double> out) const;
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
    [[nodiscard]] std::vector<double> apply_transpose(std::span<const double> y) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::uint32_t> col_idx_;
    std::vector<double> values_;
};

/// One row per (tilt, pixel) in Geometry::ray_index order.
[[nodiscard]] SystemMatrix build_system_matrix(const Geometry& geometry, unsigned workers = 1);

}  // namespace ictomo::forward
