#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ictomo/volume.hpp"

// Synthetic interconnect generator.
//
// Layers alternate along z (1-based i3): i3 = 1 mod 4 carries x-directed
// wires, i3 = 3 mod 4 carries y-directed wires and every even i3 is a via
// layer. Round 1 plants wire seeds at sites whose three 1-based indices are
// all odd. Round 2 is a single sweep in increasing (i3, i2, i1) order that
// extends wires along +i1 on x layers, +i2 on y layers and stacks vias along
// +i3; growth cascades within the sweep.

namespace ictomo::circuit {

struct CircuitParams {
    std::uint32_t nx = 16;
    std::uint32_t ny = 16;
    std::uint32_t nz = 8;
    double p_w = 0.75;  ///< seed probability
    double p_x = 0.8;   ///< x-wire extension probability
    double p_y = 0.8;   ///< y-wire extension probability
    double p_z = 0.5;   ///< via stacking probability
    std::uint64_t seed = 0;

    [[nodiscard]] Dims dims() const noexcept { return {nx, ny, nz}; }
    /// Throws ConfigError on an empty grid or a probability outside [0, 1].
    void validate() const;
};

enum class LayerKind { XWiring, YWiring, Via };

[[nodiscard]] std::string_view to_string(LayerKind kind) noexcept;

/// Layer kind of the 1-based layer index i3; DomainError unless 1 <= i3 <= nz.
[[nodiscard]] LayerKind layer_kind_of(std::int64_t i3, std::uint32_t nz);

/// True when the 1-based coordinates are a round-1 seed site.
[[nodiscard]] constexpr bool is_seed_site(std::int64_t i1, std::int64_t i2, std::int64_t i3) noexcept {
    return (i1 % 2 == 1) && (i2 % 2 == 1) && (i3 % 2 == 1);
}

/// Draws one circuit. Deterministic in params (including params.seed).
[[nodiscard]] BinaryVolume generate_circuit(const CircuitParams& params);

/// Circuits for samples [0, count) with seeds derived from params.seed.
[[nodiscard]] std::vector<BinaryVolume> generate_batch(const CircuitParams& params, std::size_t count,
                                                       unsigned workers = 1);

/// Seed used for sample `index` of a batch rooted at `master_seed`.
[[nodiscard]] std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Every copper voxel is either a seed site or has its layer's predecessor set.
[[nodiscard]] bool obeys_growth_rules(const BinaryVolume& volume);

struct Occupancy {
    double mean = 0.0;
    double std_error = 0.0;
};

struct OccupancySummary {
    std::size_t samples = 0;
    Occupancy overall;
    Occupancy x_wiring;
    Occupancy y_wiring;
    Occupancy wiring;  ///< x and y wiring layers pooled
    Occupancy via;
};

/// Monte-Carlo copper fraction over `samples` generated circuits, overall and
/// per layer kind. Standard errors are across-sample.
[[nodiscard]] OccupancySummary copper_statistics(std::size_t samples, const CircuitParams& params,
                                                 unsigned workers = 1);

}  // namespace ictomo::circuit
