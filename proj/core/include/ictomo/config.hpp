#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ictomo/circuit.hpp"
#include "ictomo/geometry.hpp"
#include "ictomo/reconstruct.hpp"
#include "ictomo/spectrum.hpp"

namespace ictomo::config {

struct LineSpec {
    double energy_ev = 0.0;
    double weight = 0.0;
    /// Explicit coefficient; when absent it comes from calibrate_alpha.
    std::optional<double> alpha_per_um;
    double detector_efficiency = 1.0;
};

struct SpectrumSpec {
    std::vector<LineSpec> lines{{9362.0, 0.5, std::nullopt, 1.0}, {9442.0, 0.5, std::nullopt, 1.0}};
    forward::MaterialConstants material;

    [[nodiscard]] forward::Spectrum resolve(double photons_per_ray) const;
};

struct DatasetCounts {
    std::size_t train = 1800;
    std::size_t test = 200;
};

/// Everything needed to reproduce a run from a master seed.
struct BenchConfig {
    circuit::CircuitParams circuit;
    forward::Geometry geometry;
    SpectrumSpec spectrum;
    recon::SolverConfig solver;
    DatasetCounts dataset;
    std::uint64_t master_seed = 20211;
    double photons_per_ray = 640.0;
    std::vector<double> photon_budgets{160.0, 320.0, 640.0, 1280.0, 5000.0};
    int repeats = 1;

    /// ConfigError on any inconsistency (including circuit dims that differ
    /// from the geometry's volume dims).
    void validate() const;
};

[[nodiscard]] BenchConfig reference_config();
/// Small counts and budgets so the whole pipeline runs in minutes.
[[nodiscard]] BenchConfig desk_scale_config();

[[nodiscard]] std::string to_json(const BenchConfig& config);
/// Applies the keys present in `text` on top of `base`. ConfigError on
/// malformed JSON or invalid values.
[[nodiscard]] BenchConfig from_json(const std::string& text, const BenchConfig& base = reference_config());
[[nodiscard]] BenchConfig load_config(const std::filesystem::path& path, const BenchConfig& base = reference_config());

/// Digest of the canonicalised physics of one condition: circuit model,
/// geometry, resolved spectrum, photon budget and master seed.
[[nodiscard]] std::string condition_hash(const BenchConfig& config, double photons_per_ray);
/// Digest of the ground-truth recipe (circuit model and master seed).
[[nodiscard]] std::string circuit_hash(const BenchConfig& config);

}  // namespace ictomo::config
