#include "ictomo/system_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ictomo/errors.hpp"
#include "ictomo/parallel.hpp"

namespace ictomo::forward {

namespace {

struct Interval {
    double enter = 0.0;
    double exit = 0.0;
    [[nodiscard]] bool empty() const noexcept { return !(exit > enter); }
};

Interval clip_to_box(const VoxelGrid& grid, const Ray& ray) {
    const Vec3 lo = grid.lower();
    const Vec3 hi = grid.upper();
    Interval iv{0.0, ray.length};
    for (int axis = 0; axis < 3; ++axis) {
        const double o = ray.origin[axis];
        const double d = ray.direction[axis];
        if (d == 0.0) {
            if (o < lo[axis] || o > hi[axis]) return {0.0, 0.0};
            continue;
        }
        double t0 = (lo[axis] - o) / d;
        double t1 = (hi[axis] - o) / d;
        if (t0 > t1) std::swap(t0, t1);
        iv.enter = std::max(iv.enter, t0);
        iv.exit = std::min(iv.exit, t1);
    }
    return iv;
}

}  // namespace

double box_chord_length(const VoxelGrid& grid, const Ray& ray) {
    const Interval iv = clip_to_box(grid, ray);
    return iv.empty() ? 0.0 : iv.exit - iv.enter;
}

std::vector<RaySegment> trace_ray(const VoxelGrid& grid, const Ray& ray) {
    std::vector<RaySegment> out;
    const Interval iv = clip_to_box(grid, ray);
    if (iv.empty()) return out;

    const Vec3 lo = grid.lower();
    const std::int64_t n[3] = {grid.dims.nx, grid.dims.ny, grid.dims.nz};
    const double size[3] = {grid.voxel_size.x, grid.voxel_size.y, grid.voxel_size.z};

    // Starting voxel from the entry point; a point on a shared face is
    // resolved by the zero-length segment it produces.
    const Vec3 entry = ray.at(iv.enter);
    std::int64_t idx[3];
    int step[3];
    for (int a = 0; a < 3; ++a) {
        const auto k = static_cast<std::int64_t>(std::floor((entry[a] - lo[a]) / size[a]));
        idx[a] = std::clamp<std::int64_t>(k, 0, n[a] - 1);
        const double d = ray.direction[a];
        step[a] = d > 0 ? 1 : (d < 0 ? -1 : 0);
    }

    auto next_crossing = [&](int a) {
        if (step[a] == 0) return std::numeric_limits<double>::infinity();
        const double plane = lo[a] + static_cast<double>(idx[a] + (step[a] > 0 ? 1 : 0)) * size[a];
        return (plane - ray.origin[a]) / ray.direction[a];
    };

    double t = iv.enter;
    while (t < iv.exit) {
        double t_cross[3] = {next_crossing(0), next_crossing(1), next_crossing(2)};
        const int axis = static_cast<int>(std::min_element(t_cross, t_cross + 3) - t_cross);
        const double t_next = std::min(t_cross[axis], iv.exit);
        if (t_next > t) {
            const auto voxel = static_cast<std::uint32_t>(idx[0] + n[0] * (idx[1] + n[1] * idx[2]));
            out.push_back({voxel, t_next - t});
            t = t_next;
        }
        if (t >= iv.exit) break;
        idx[axis] += step[axis];
        if (idx[axis] < 0 || idx[axis] >= n[axis]) break;
    }
    return out;
}

SystemMatrix::SystemMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                           std::vector<std::uint32_t> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
    if (row_ptr_.size() != rows_ + 1 || row_ptr_.back() != values_.size() || col_idx_.size() != values_.size()) {
        throw DomainError("SystemMatrix: inconsistent compressed-row arrays");
    }
}

double SystemMatrix::row_sum(std::size_t row) const noexcept {
    double s = 0.0;
    for (double v : row_values(row)) s += v;
    return s;
}

void SystemMatrix::apply(std::span<const double> x, std::span<double> out) const {
    if (x.size() != cols_ || out.size() != rows_) throw DomainError("SystemMatrix::apply: size mismatch");
    for (std::size_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[col_idx_[k]];
        out[r] = acc;
    }
}

void SystemMatrix::apply_transpose(std::span<const double> y, std::span<double> out) const {
    if (y.size() != rows_ || out.size() != cols_) throw DomainError("SystemMatrix::apply_transpose: size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out[col_idx_[k]] += values_[k] * yr;
    }
}

std::vector<double> SystemMatrix::apply(std::span<const double> x) const {
    std::vector<double> out(rows_);
    apply(x, out);
    return out;
}

std::vector<double> SystemMatrix::apply_transpose(std::span<const double> y) const {
    std::vector<double> out(cols_);
    apply_transpose(y, out);
    return out;
}

SystemMatrix build_system_matrix(const Geometry& geometry, unsigned workers) {
    geometry.validate();
    const VoxelGrid grid = geometry.grid();
    const std::size_t n_angles = geometry.n_angles();

    // Trace per angle, then concatenate in ray_index order.
    std::vector<std::vector<std::vector<RaySegment>>> per_angle(n_angles);
    parallel_for(n_angles, workers, [&](std::size_t a) {
        auto& rows = per_angle[a];
        rows.resize(geometry.rays_per_angle());
        for (std::uint32_t iv = 0; iv < geometry.detector_nv; ++iv) {
            for (std::uint32_t iu = 0; iu < geometry.detector_nu; ++iu) {
                rows[static_cast<std::size_t>(iv) * geometry.detector_nu + iu] =
                    trace_ray(grid, geometry.pixel_ray(a, iu, iv));
            }
        }
    });

    std::vector<std::size_t> row_ptr{0};
    row_ptr.reserve(geometry.n_rays() + 1);
    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
    for (const auto& rows : per_angle) {
        for (const auto& segs : rows) {
            for (const auto& s : segs) {
                cols.push_back(s.voxel);
                vals.push_back(s.length);
            }
            row_ptr.push_back(vals.size());
        }
    }
    return {geometry.n_rays(), geometry.dims.size(), std::move(row_ptr), std::move(cols), std::move(vals)};
}

}  // namespace ictomo::forward
