#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ictomo/volume.hpp"

namespace ictomo::forward {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return {s * a.x, s * a.y, s * a.z}; }
    [[nodiscard]] double norm() const noexcept;
    [[nodiscard]] double operator[](int axis) const noexcept { return axis == 0 ? x : (axis == 1 ? y : z); }
};

/// Half-line from `origin` along unit `direction`, limited to t in [0, length].
struct Ray {
    Vec3 origin;
    Vec3 direction;
    double length = 0.0;

    [[nodiscard]] Vec3 at(double t) const noexcept { return origin + t * direction; }
};

/// Axis-aligned voxel grid centred on the origin. Lengths in micrometres.
struct VoxelGrid {
    Dims dims;
    Vec3 voxel_size;

    [[nodiscard]] Vec3 lower() const noexcept;
    [[nodiscard]] Vec3 upper() const noexcept;
    [[nodiscard]] double space_diagonal() const noexcept;
};

/// Cone-beam tomography geometry. The object sits at the origin and is
/// rotated about z by each tilt angle; source and detector are static. At
/// tilt 0 the beam runs along +y and the detector lies in an x-z plane.
/// Detector columns (u, fastest) run along x, rows (v) along z.
struct Geometry {
    Vec3 voxel_size{0.15, 0.15, 0.30};  // um
    Dims dims{16, 16, 8};
    double source_sample_distance = 10.0;  // um
    double magnification = 5000.0;
    std::uint32_t detector_nu = 32;
    std::uint32_t detector_nv = 32;
    double pixel_pitch = 420.0;  // um
    std::vector<double> tilt_degrees = default_tilts();

    /// -30 deg to +22.5 deg in 7.5 deg steps.
    [[nodiscard]] static std::vector<double> default_tilts();

    /// Throws ConfigError on degenerate values.
    void validate() const;

    [[nodiscard]] VoxelGrid grid() const noexcept { return {dims, voxel_size}; }
    [[nodiscard]] double source_detector_distance() const noexcept { return source_sample_distance * magnification; }
    /// Detector pitch referred to the object plane.
    [[nodiscard]] double demagnified_pitch() const noexcept { return pixel_pitch / magnification; }
    [[nodiscard]] std::size_t n_angles() const noexcept { return tilt_degrees.size(); }
    [[nodiscard]] std::size_t rays_per_angle() const noexcept {
        return static_cast<std::size_t>(detector_nu) * detector_nv;
    }
    [[nodiscard]] std::size_t n_rays() const noexcept { return n_angles() * rays_per_angle(); }
    [[nodiscard]] std::size_t ray_index(std::size_t angle, std::uint32_t iu, std::uint32_t iv) const noexcept {
        return (angle * detector_nv + iv) * detector_nu + iu;
    }

    /// Ray from the source to the centre of pixel (iu, iv) at tilt `angle`,
    /// expressed in the object frame.
    [[nodiscard]] Ray pixel_ray(std::size_t angle, double iu, double iv) const;
};

}  // namespace ictomo::forward
