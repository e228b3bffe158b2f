#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ictomo::forward {

struct SpectralLine {
    double energy_ev = 0.0;
    double weight = 0.0;               ///< fraction of incident photons in this line
    double alpha_per_um = 0.0;         ///< linear attenuation of copper
    double detector_efficiency = 1.0;  ///< D(E)
};

/// Discrete source spectrum and photon budget. The energy integral of the
/// detection model becomes an exact sum over lines.
struct Spectrum {
    std::vector<SpectralLine> lines;
    double photons_per_ray = 1.0;  ///< expected incident photons per pixel per tilt, all lines together

    /// Throws ConfigError unless weights are positive and sum to 1, alpha > 0,
    /// efficiencies lie in (0, 1] and photons_per_ray > 0.
    void validate() const;

    /// Pt L-alpha doublet (9362 eV, 9442 eV, equal weights) with calibrated
    /// copper attenuation.
    [[nodiscard]] static Spectrum reference(double photons_per_ray);
};

struct MaterialConstants {
    std::string name = "Cu";
    double density_g_cm3 = 8.960;
    /// Path used to define per-voxel transmission (one voxel width).
    double reference_path_um = 0.15;
    /// Spectrum-weighted transmission over reference_path_um that the
    /// calibrated coefficients reproduce. Empty = raw tabulated values.
    std::optional<double> target_transmission = 0.98;
};

/// Row of the bundled copper attenuation table.
struct AttenuationRow {
    double energy_ev;
    double mass_attenuation_cm2_g;
};

/// The bundled table (copper, just above the K edge).
[[nodiscard]] std::span<const AttenuationRow> copper_attenuation_table() noexcept;

/// Linear attenuation (1/um) from the bundled table, log-log interpolated
/// between rows. ConfigError outside the tabulated energy range.
[[nodiscard]] double tabulated_alpha(double energy_ev, double density_g_cm3);

/// Attenuation coefficients per line. Starts from the tabulated values and,
/// when material.target_transmission is set, applies one common scale so
/// the weighted transmission over reference_path_um hits the target. The
/// energy dependence between lines is preserved.
[[nodiscard]] std::vector<double> calibrate_alpha(std::span<const double> energies_ev, std::span<const double> weights,
                                                  const MaterialConstants& material = {});

/// Weighted transmission sum_l w_l exp(-alpha_l L), weights normalised.
[[nodiscard]] double weighted_transmission(std::span<const double> alphas, std::span<const double> weights,
                                           double path_um);

}  // namespace ictomo::forward
