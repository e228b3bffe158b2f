#include "ictomo/spectrum.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "ictomo/errors.hpp"

namespace ictomo::forward {

namespace {

// Total mass attenuation (coherent + incoherent + photoelectric) of Cu,
// Z = 29, evaluated with xraylib 4.x CS_Total at the two Pt L-alpha lines.
// Cross-check against NIST XCOM: 278.8 cm2/g just above the K edge
// (8979 eV) and 215.9 cm2/g at 10 keV, log-log interpolated, gives 252.5
// and 247.4 cm2/g.
constexpr std::array<AttenuationRow, 2> kCopperTable{{
    {9362.0, 252.543},
    {9442.0, 247.562},
}};

}  // namespace

void Spectrum::validate() const {
    if (lines.empty()) throw ConfigError("spectrum needs at least one line");
    double wsum = 0.0;
    for (const auto& l : lines) {
        if (!(l.weight > 0)) throw ConfigError("spectral line weights must be positive");
        if (!(l.alpha_per_um > 0)) throw ConfigError("attenuation coefficients must be positive");
        if (!(l.detector_efficiency > 0 && l.detector_efficiency <= 1)) {
            throw ConfigError("detector efficiency must lie in (0, 1]");
        }
        wsum += l.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw ConfigError("spectral line weights must sum to 1");
    if (!(photons_per_ray > 0) || !std::isfinite(photons_per_ray)) throw ConfigError("photons per ray must be positive");
}

Spectrum Spectrum::reference(double photons_per_ray) {
    const std::array<double, 2> energies{9362.0, 9442.0};
    const std::array<double, 2> weights{0.5, 0.5};
    const auto alphas = calibrate_alpha(energies, weights);
    Spectrum s;
    for (std::size_t i = 0; i < energies.size(); ++i) s.lines.push_back({energies[i], weights[i], alphas[i], 1.0});
    s.photons_per_ray = photons_per_ray;
    s.validate();
    return s;
}

std::span<const AttenuationRow> copper_attenuation_table() noexcept { return kCopperTable; }

double tabulated_alpha(double energy_ev, double density_g_cm3) {
    if (!(density_g_cm3 > 0)) throw ConfigError("density must be positive");
    const auto table = copper_attenuation_table();
    const double lo = table.front().energy_ev;
    const double hi = table.back().energy_ev;
    if (!(energy_ev >= lo && energy_ev <= hi)) {
        throw ConfigError("energy " + std::to_string(energy_ev) + " eV outside attenuation table [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    std::size_t k = 0;
    while (k + 2 < table.size() && energy_ev > table[k + 1].energy_ev) ++k;
    const auto& a = table[k];
    const auto& b = table[k + 1];
    const double s = std::log(energy_ev / a.energy_ev) / std::log(b.energy_ev / a.energy_ev);
    const double mu_rho = std::exp(std::log(a.mass_attenuation_cm2_g) +
                                   s * (std::log(b.mass_attenuation_cm2_g) - std::log(a.mass_attenuation_cm2_g)));
    return mu_rho * density_g_cm3 * 1e-4;  // cm^-1 -> um^-1
}

double weighted_transmission(std::span<const double> alphas, std::span<const double> weights, double path_um) {
    if (alphas.size() != weights.size()) throw DomainError("alpha/weight count mismatch");
    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    double t = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) t += weights[i] * std::exp(-alphas[i] * path_um);
    return t / wsum;
}

std::vector<double> calibrate_alpha(std::span<const double> energies_ev, std::span<const double> weights,
                                    const MaterialConstants& material) {
    if (energies_ev.empty() || energies_ev.size() != weights.size()) {
        throw ConfigError("calibrate_alpha: need one weight per energy");
    }
    std::vector<double> alphas;
    alphas.reserve(energies_ev.size());
    for (double e : energies_ev) alphas.push_back(tabulated_alpha(e, material.density_g_cm3));
    if (!material.target_transmission) return alphas;

    const double target = *material.target_transmission;
    if (!(target > 0 && target < 1)) throw ConfigError("target transmission must lie in (0, 1)");
    if (!(material.reference_path_um > 0)) throw ConfigError("reference path must be positive");

    // Transmission is strictly decreasing in the common scale; bisect.
    std::vector<double> scaled(alphas.size());
    auto transmission_at = [&](double scale) {
        for (std::size_t i = 0; i < alphas.size(); ++i) scaled[i] = scale * alphas[i];
        return weighted_transmission(scaled, weights, material.reference_path_um);
    };
    double lo = 0.0;
    double hi = 1.0;
    while (transmission_at(hi) > target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (transmission_at(mid) > target ? lo : hi) = mid;
    }
    const double scale = 0.5 * (lo + hi);
    for (auto& a : alphas) a *= scale;
    return alphas;
}

}  // namespace ictomo::forward
