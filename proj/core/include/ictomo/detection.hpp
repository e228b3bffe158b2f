#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ictomo/geometry.hpp"
#include "ictomo/spectrum.hpp"
#include "ictomo/system_matrix.hpp"
#include "ictomo/volume.hpp"

namespace ictomo::forward {

/// Photon counts for every (tilt, pixel), in Geometry::ray_index order.
struct Measurements {
    std::uint32_t n_angles = 0;
    std::uint32_t nu = 0;
    std::uint32_t nv = 0;
    std::vector<double> tilt_degrees;
    std::vector<double> counts;    ///< g: non-negative integers stored as double
    std::vector<double> expected;  ///< g0: noiseless expectation (may be empty when read from file)

    [[nodiscard]] std::size_t size() const noexcept { return counts.size(); }
};

/// g0_i = sum_lines D * n * w * exp(-alpha * p_i) for line integrals p = A f.
[[nodiscard]] std::vector<double> expected_from_projections(std::span<const double> projections,
                                                            const Spectrum& spectrum);

/// Noiseless detector counts for a volume with values in [0, 1].
/// DomainError on negative (or non-finite) voxel values.
[[nodiscard]] std::vector<double> expected_counts(const SystemMatrix& a, std::span<const double> f,
                                                  const Spectrum& spectrum);
[[nodiscard]] std::vector<double> expected_counts(const SystemMatrix& a, const BinaryVolume& f,
                                                  const Spectrum& spectrum);

/// Independent Poisson draws with means g0. Deterministic in seed.
[[nodiscard]] std::vector<double> sample_counts(std::span<const double> g0, std::uint64_t seed);

/// Expected counts plus a Poisson realisation, with geometry metadata.
[[nodiscard]] Measurements sample_measurements(const Geometry& geometry, std::vector<double> g0,
                                               std::uint64_t seed);

/// Convenience: project, attenuate and sample in one go.
[[nodiscard]] Measurements simulate(const Geometry& geometry, const SystemMatrix& a, const BinaryVolume& f,
                                    const Spectrum& spectrum, std::uint64_t seed);

}  // namespace ictomo::forward
