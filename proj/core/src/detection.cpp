#include "ictomo/detection.hpp"

#include <cmath>
#include <random>

#include "ictomo/errors.hpp"

namespace ictomo::forward {

std::vector<double> expected_from_projections(std::span<const double> projections, const Spectrum& spectrum) {
    std::vector<double> g0(projections.size());
    for (std::size_t i = 0; i < projections.size(); ++i) {
        double acc = 0.0;
        for (const auto& line : spectrum.lines) {
            acc += line.detector_efficiency * spectrum.photons_per_ray * line.weight *
                   std::exp(-line.alpha_per_um * projections[i]);
        }
        g0[i] = acc;
    }
    return g0;
}

std::vector<double> expected_counts(const SystemMatrix& a, std::span<const double> f, const Spectrum& spectrum) {
    for (double v : f) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("expected_counts: volume values must be finite and >= 0");
    }
    return expected_from_projections(a.apply(f), spectrum);
}

std::vector<double> expected_counts(const SystemMatrix& a, const BinaryVolume& f, const Spectrum& spectrum) {
    const auto real = f.as_real();
    return expected_counts(a, std::span<const double>(real), spectrum);
}

std::vector<double> sample_counts(std::span<const double> g0, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::vector<double> g(g0.size());
    for (std::size_t i = 0; i < g0.size(); ++i) {
        if (!(g0[i] >= 0.0)) throw DomainError("sample_counts: negative Poisson mean");
        if (g0[i] == 0.0) {
            g[i] = 0.0;
            continue;
        }
        std::poisson_distribution<long long> poisson(g0[i]);
        g[i] = static_cast<double>(poisson(engine));
    }
    return g;
}

Measurements sample_measurements(const Geometry& geometry, std::vector<double> g0, std::uint64_t seed) {
    if (g0.size() != geometry.n_rays()) throw DomainError("sample_measurements: expectation size mismatch");
    Measurements m;
    m.n_angles = static_cast<std::uint32_t>(geometry.n_angles());
    m.nu = geometry.detector_nu;
    m.nv = geometry.detector_nv;
    m.tilt_degrees = geometry.tilt_degrees;
    m.counts = sample_counts(g0, seed);
    m.expected = std::move(g0);
    return m;
}

Measurements simulate(const Geometry& geometry, const SystemMatrix& a, const BinaryVolume& f,
                      const Spectrum& spectrum, std::uint64_t seed) {
    return sample_measurements(geometry, expected_counts(a, f, spectrum), seed);
}

}  // namespace ictomo::forward
