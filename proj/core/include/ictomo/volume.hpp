#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ictomo {

/// Voxel grid extents. Storage order has i1 (x) fastest, then i2 (y), then i3 (z).
struct Dims {
    std::uint32_t nx = 0;
    std::uint32_t ny = 0;
    std::uint32_t nz = 0;

    [[nodiscard]] constexpr std::size_t size() const noexcept {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
    /// Linear index of 0-based storage coordinates.
    [[nodiscard]] constexpr std::size_t index(std::uint32_t i1, std::uint32_t i2, std::uint32_t i3) const noexcept {
        return i1 + static_cast<std::size_t>(nx) * (i2 + static_cast<std::size_t>(ny) * i3);
    }
    friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

/// Ground-truth circuit: one bit per voxel, 1 = copper, 0 = silicon.
///
/// Accessors take 0-based storage coordinates; the domain model's 1-based
/// index i maps to storage index i - 1.
class BinaryVolume {
public:
    BinaryVolume() = default;
    explicit BinaryVolume(Dims dims) : dims_(dims), values_(dims.size(), 0) {}
    BinaryVolume(Dims dims, std::vector<std::uint8_t> values);

    [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    [[nodiscard]] std::uint8_t at(std::uint32_t i1, std::uint32_t i2, std::uint32_t i3) const noexcept {
        return values_[dims_.index(i1, i2, i3)];
    }
    void set(std::uint32_t i1, std::uint32_t i2, std::uint32_t i3, bool copper) noexcept {
        values_[dims_.index(i1, i2, i3)] = copper ? 1 : 0;
    }

    [[nodiscard]] std::span<const std::uint8_t> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t count_ones() const noexcept;
    /// Values widened to double, for feeding the projector.
    [[nodiscard]] std::vector<double> as_real() const;

    friend bool operator==(const BinaryVolume&, const BinaryVolume&) = default;

private:
    Dims dims_{};
    std::vector<std::uint8_t> values_;
};

}  // namespace ictomo
