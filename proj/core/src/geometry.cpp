#include "ictomo/geometry.hpp"

#include <cmath>
#include <numbers>

#include "ictomo/errors.hpp"

namespace ictomo::forward {

double Vec3::norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }

Vec3 VoxelGrid::lower() const noexcept {
    return {-0.5 * dims.nx * voxel_size.x, -0.5 * dims.ny * voxel_size.y, -0.5 * dims.nz * voxel_size.z};
}

Vec3 VoxelGrid::upper() const noexcept {
    return {0.5 * dims.nx * voxel_size.x, 0.5 * dims.ny * voxel_size.y, 0.5 * dims.nz * voxel_size.z};
}

double VoxelGrid::space_diagonal() const noexcept { return (upper() - lower()).norm(); }

std::vector<double> Geometry::default_tilts() {
    std::vector<double> t;
    for (int k = 0; k < 8; ++k) t.push_back(-30.0 + 7.5 * k);
    return t;
}

void Geometry::validate() const {
    if (!(voxel_size.x > 0 && voxel_size.y > 0 && voxel_size.z > 0)) throw ConfigError("voxel size must be positive");
    if (dims.size() == 0) throw ConfigError("volume dims must be positive");
    if (!(source_sample_distance > 0)) throw ConfigError("source-sample distance must be positive");
    if (!(magnification > 1)) throw ConfigError("magnification must exceed 1");
    if (detector_nu == 0 || detector_nv == 0) throw ConfigError("detector must have pixels");
    if (!(pixel_pitch > 0)) throw ConfigError("pixel pitch must be positive");
    if (tilt_degrees.empty()) throw ConfigError("at least one tilt angle is required");
    for (double t : tilt_degrees) {
        if (!std::isfinite(t)) throw ConfigError("tilt angles must be finite");
    }
    // The source must sit outside the rotated object.
    const double half_diag_xy = 0.5 * std::hypot(dims.nx * voxel_size.x, dims.ny * voxel_size.y);
    if (source_sample_distance <= half_diag_xy) throw ConfigError("source lies inside the object");
}

Ray Geometry::pixel_ray(std::size_t angle, double iu, double iv) const {
    const double theta = tilt_degrees.at(angle) * std::numbers::pi / 180.0;
    const double u = (iu - 0.5 * (detector_nu - 1.0)) * pixel_pitch;
    const double v = (iv - 0.5 * (detector_nv - 1.0)) * pixel_pitch;

    const Vec3 source_lab{0.0, -source_sample_distance, 0.0};
    const Vec3 pixel_lab{u, source_detector_distance() - source_sample_distance, v};

    // Object rotated by +theta about z  <=>  lab points rotated by -theta.
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto to_object = [c, s](Vec3 p) { return Vec3{c * p.x + s * p.y, -s * p.x + c * p.y, p.z}; };

    const Vec3 a = to_object(source_lab);
    const Vec3 b = to_object(pixel_lab);
    const Vec3 d = b - a;
    const double len = d.norm();
    return {a, (1.0 / len) * d, len};
}

}  // namespace ictomo::forward
