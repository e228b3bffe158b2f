#include "ictomo/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ictomo/errors.hpp"
#include "ictomo/parallel.hpp"
#include "ictomo/rng.hpp"

namespace ictomo {

BinaryVolume::BinaryVolume(Dims dims, std::vector<std::uint8_t> values)
    : dims_(dims), values_(std::move(values)) {
    if (values_.size() != dims_.size()) {
        throw DomainError("BinaryVolume: value count does not match dims");
    }
    for (auto v : values_) {
        if (v > 1) throw DomainError("BinaryVolume: values must be 0 or 1");
    }
}

std::size_t BinaryVolume::count_ones() const noexcept {
    return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::uint8_t{1}));
}

std::vector<double> BinaryVolume::as_real() const {
    return {values_.begin(), values_.end()};
}

}  // namespace ictomo

namespace ictomo::circuit {

namespace {

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Round tags for the decision streams.
constexpr std::uint64_t kSeedRound = 1;
constexpr std::uint64_t kGrowthRound = 2;

double draw(std::uint64_t seed, std::uint32_t i1, std::uint32_t i2, std::uint32_t i3, std::uint64_t round) {
    return rng::to_unit(rng::derive(seed, {i1, i2, i3, round}));
}

}  // namespace

void CircuitParams::validate() const {
    if (nx == 0 || ny == 0 || nz == 0) throw ConfigError("circuit dims must be positive");
    if (!valid_probability(p_w) || !valid_probability(p_x) || !valid_probability(p_y) ||
        !valid_probability(p_z)) {
        throw ConfigError("circuit probabilities must lie in [0, 1]");
    }
}

std::string_view to_string(LayerKind kind) noexcept {
    switch (kind) {
        case LayerKind::XWiring: return "x-wiring";
        case LayerKind::YWiring: return "y-wiring";
        case LayerKind::Via: return "via";
    }
    return "unknown";
}

LayerKind layer_kind_of(std::int64_t i3, std::uint32_t nz) {
    if (i3 < 1 || i3 > static_cast<std::int64_t>(nz)) {
        throw DomainError("layer index " + std::to_string(i3) + " outside [1, " + std::to_string(nz) + "]");
    }
    switch (i3 % 4) {
        case 1: return LayerKind::XWiring;
        case 3: return LayerKind::YWiring;
        default: return LayerKind::Via;
    }
}

BinaryVolume generate_circuit(const CircuitParams& params) {
    params.validate();
    const Dims dims = params.dims();
    BinaryVolume vol(dims);

    // Round 1: Bernoulli seeds on odd-odd-odd sites (even 0-based indices).
    for (std::uint32_t k = 0; k < dims.nz; k += 2) {
        for (std::uint32_t j = 0; j < dims.ny; j += 2) {
            for (std::uint32_t i = 0; i < dims.nx; i += 2) {
                if (draw(params.seed, i, j, k, kSeedRound) < params.p_w) vol.set(i, j, k, true);
            }
        }
    }

    // Round 2: one cascading sweep.
    for (std::uint32_t k = 0; k < dims.nz; ++k) {
        const LayerKind kind = layer_kind_of(k + 1, dims.nz);
        for (std::uint32_t j = 0; j < dims.ny; ++j) {
            for (std::uint32_t i = 0; i < dims.nx; ++i) {
                if (vol.at(i, j, k)) continue;
                bool predecessor = false;
                double p = 0.0;
                switch (kind) {
                    case LayerKind::XWiring:
                        predecessor = i > 0 && vol.at(i - 1, j, k);
                        p = params.p_x;
                        break;
                    case LayerKind::YWiring:
                        predecessor = j > 0 && vol.at(i, j - 1, k);
                        p = params.p_y;
                        break;
                    case LayerKind::Via:
                        predecessor = k > 0 && vol.at(i, j, k - 1);
                        p = params.p_z;
                        break;
                }
                if (predecessor && draw(params.seed, i, j, k, kGrowthRound) < p) vol.set(i, j, k, true);
            }
        }
    }
    return vol;
}

std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return rng::derive(master_seed, {0x63697263ULL /* "circ" */, index});
}

std::vector<BinaryVolume> generate_batch(const CircuitParams& params, std::size_t count, unsigned workers) {
    params.validate();
    std::vector<BinaryVolume> out(count);
    parallel_for(count, workers, [&](std::size_t s) {
        CircuitParams p = params;
        p.seed = sample_seed(params.seed, s);
        out[s] = generate_circuit(p);
    });
    return out;
}

bool obeys_growth_rules(const BinaryVolume& volume) {
    const Dims d = volume.dims();
    for (std::uint32_t k = 0; k < d.nz; ++k) {
        const LayerKind kind = layer_kind_of(k + 1, d.nz);
        for (std::uint32_t j = 0; j < d.ny; ++j) {
            for (std::uint32_t i = 0; i < d.nx; ++i) {
                if (!volume.at(i, j, k)) continue;
                if (is_seed_site(i + 1, j + 1, k + 1)) continue;
                bool predecessor = false;
                switch (kind) {
                    case LayerKind::XWiring: predecessor = i > 0 && volume.at(i - 1, j, k); break;
                    case LayerKind::YWiring: predecessor = j > 0 && volume.at(i, j - 1, k); break;
                    case LayerKind::Via: predecessor = k > 0 && volume.at(i, j, k - 1); break;
                }
                if (!predecessor) return false;
            }
        }
    }
    return true;
}

namespace {

struct RunningMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    [[nodiscard]] Occupancy summary() const {
        if (n == 0) return {};
        const double mean = sum / static_cast<double>(n);
        if (n < 2) return {mean, 0.0};
        const double var = std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(n - 1));
        return {mean, std::sqrt(var / static_cast<double>(n))};
    }
};

struct LayerFractions {
    double overall = 0.0;
    double x = -1.0, y = -1.0, wiring = -1.0, via = -1.0;  // -1: layer kind absent
};

LayerFractions layer_fractions(const BinaryVolume& v) {
    const Dims d = v.dims();
    std::size_t ones[3] = {0, 0, 0};
    std::size_t cells[3] = {0, 0, 0};
    const std::size_t plane = static_cast<std::size_t>(d.nx) * d.ny;
    auto values = v.values();
    for (std::uint32_t k = 0; k < d.nz; ++k) {
        const auto kind = static_cast<std::size_t>(layer_kind_of(k + 1, d.nz));
        auto first = values.begin() + static_cast<std::ptrdiff_t>(k * plane);
        ones[kind] += static_cast<std::size_t>(std::count(first, first + static_cast<std::ptrdiff_t>(plane), 1));
        cells[kind] += plane;
    }
    auto frac = [](std::size_t a, std::size_t b) { return b == 0 ? -1.0 : static_cast<double>(a) / static_cast<double>(b); };
    LayerFractions f;
    f.overall = frac(ones[0] + ones[1] + ones[2], cells[0] + cells[1] + cells[2]);
    f.x = frac(ones[0], cells[0]);
    f.y = frac(ones[1], cells[1]);
    f.wiring = frac(ones[0] + ones[1], cells[0] + cells[1]);
    f.via = frac(ones[2], cells[2]);
    return f;
}

}  // namespace

OccupancySummary copper_statistics(std::size_t samples, const CircuitParams& params, unsigned workers) {
    if (samples == 0) throw DomainError("copper_statistics needs at least one sample");
    params.validate();
    std::vector<LayerFractions> per_sample(samples);
    parallel_for(samples, workers, [&](std::size_t s) {
        CircuitParams p = params;
        p.seed = sample_seed(params.seed, s);
        per_sample[s] = layer_fractions(generate_circuit(p));
    });

    RunningMoments overall, x, y, wiring, via;
    for (const auto& f : per_sample) {
        overall.add(f.overall);
        if (f.x >= 0) x.add(f.x);
        if (f.y >= 0) y.add(f.y);
        if (f.wiring >= 0) wiring.add(f.wiring);
        if (f.via >= 0) via.add(f.via);
    }
    return {samples, overall.summary(), x.summary(), y.summary(), wiring.summary(), via.summary()};
}

}  // namespace ictomo::circuit
