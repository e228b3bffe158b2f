#include "ictomo/config.hpp"

#include "ictomo/errors.hpp"
#include "ictomo/io.hpp"
#include "json.hpp"

namespace ictomo::config {

using nlohmann::json;

forward::Spectrum SpectrumSpec::resolve(double photons_per_ray) const {
    std::vector<double> energies, weights;
    for (const auto& l : lines) {
        energies.push_back(l.energy_ev);
        weights.push_back(l.weight);
    }
    bool need_table = false;
    for (const auto& l : lines) need_table = need_table || !l.alpha_per_um;
    std::vector<double> calibrated;
    if (need_table) calibrated = forward::calibrate_alpha(energies, weights, material);

    forward::Spectrum s;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& l = lines[i];
        s.lines.push_back({l.energy_ev, l.weight, l.alpha_per_um ? *l.alpha_per_um : calibrated[i], l.detector_efficiency});
    }
    s.photons_per_ray = photons_per_ray;
    s.validate();
    return s;
}

void BenchConfig::validate() const {
    circuit.validate();
    geometry.validate();
    solver.validate();
    if (circuit.dims() != geometry.dims) throw ConfigError("circuit dims differ from geometry volume dims");
    (void)spectrum.resolve(photons_per_ray);
    for (double n : photon_budgets) {
        if (!(n > 0)) throw ConfigError("photon budgets must be positive");
    }
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
}

BenchConfig reference_config() { return {}; }

BenchConfig desk_scale_config() {
    BenchConfig c;
    c.dataset = {10, 2};
    c.photon_budgets = {320.0, 5000.0};
    c.solver.max_iterations = 200;
    return c;
}

namespace {

json circuit_json(const circuit::CircuitParams& p) {
    return {{"nx", p.nx}, {"ny", p.ny}, {"nz", p.nz}, {"p_w", p.p_w}, {"p_x", p.p_x}, {"p_y", p.p_y}, {"p_z", p.p_z}};
}

json geometry_json(const forward::Geometry& g) {
    return {{"voxel_size_um", {g.voxel_size.x, g.voxel_size.y, g.voxel_size.z}},
            {"dims", {g.dims.nx, g.dims.ny, g.dims.nz}},
            {"source_sample_distance_um", g.source_sample_distance},
            {"magnification", g.magnification},
            {"detector_pixels", {g.detector_nu, g.detector_nv}},
            {"pixel_pitch_um", g.pixel_pitch},
            {"tilt_degrees", g.tilt_degrees}};
}

json spectrum_json(const SpectrumSpec& s) {
    json lines = json::array();
    for (const auto& l : s.lines) {
        json j{{"energy_ev", l.energy_ev}, {"weight", l.weight}, {"detector_efficiency", l.detector_efficiency}};
        if (l.alpha_per_um) j["alpha_per_um"] = *l.alpha_per_um;
        lines.push_back(j);
    }
    json material{{"name", s.material.name},
                  {"density_g_cm3", s.material.density_g_cm3},
                  {"reference_path_um", s.material.reference_path_um}};
    material["target_transmission"] =
        s.material.target_transmission ? json(*s.material.target_transmission) : json(nullptr);
    return {{"lines", lines}, {"material", material}};
}

json solver_json(const recon::SolverConfig& s) {
    return {{"init_value", s.init_value},
            {"max_iterations", s.max_iterations},
            {"relative_tolerance", s.relative_tolerance},
            {"armijo_c", s.armijo_c},
            {"backtrack_factor", s.backtrack_factor},
            {"max_backtracks", s.max_backtracks},
            {"regularization_weight", s.regularization_weight}};
}

json full_json(const BenchConfig& c) {
    return {{"circuit", circuit_json(c.circuit)},
            {"geometry", geometry_json(c.geometry)},
            {"spectrum", spectrum_json(c.spectrum)},
            {"solver", solver_json(c.solver)},
            {"dataset", {{"train", c.dataset.train}, {"test", c.dataset.test}}},
            {"master_seed", c.master_seed},
            {"photons_per_ray", c.photons_per_ray},
            {"photon_budgets", c.photon_budgets},
            {"repeats", c.repeats}};
}

template <typename T>
void take(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void apply_overrides(const json& j, BenchConfig& c) {
    if (j.contains("circuit")) {
        const auto& k = j["circuit"];
        take(k, "nx", c.circuit.nx);
        take(k, "ny", c.circuit.ny);
        take(k, "nz", c.circuit.nz);
        take(k, "p_w", c.circuit.p_w);
        take(k, "p_x", c.circuit.p_x);
        take(k, "p_y", c.circuit.p_y);
        take(k, "p_z", c.circuit.p_z);
        // Geometry follows the circuit unless given explicitly.
        c.geometry.dims = c.circuit.dims();
    }
    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        if (g.contains("voxel_size_um")) {
            const auto v = g["voxel_size_um"].get<std::vector<double>>();
            if (v.size() != 3) throw ConfigError("geometry.voxel_size_um needs 3 entries");
            c.geometry.voxel_size = {v[0], v[1], v[2]};
        }
        if (g.contains("dims")) {
            const auto d = g["dims"].get<std::vector<std::uint32_t>>();
            if (d.size() != 3) throw ConfigError("geometry.dims needs 3 entries");
            c.geometry.dims = {d[0], d[1], d[2]};
        }
        take(g, "source_sample_distance_um", c.geometry.source_sample_distance);
        take(g, "magnification", c.geometry.magnification);
        if (g.contains("detector_pixels")) {
            const auto p = g["detector_pixels"].get<std::vector<std::uint32_t>>();
            if (p.size() != 2) throw ConfigError("geometry.detector_pixels needs 2 entries");
            c.geometry.detector_nu = p[0];
            c.geometry.detector_nv = p[1];
        }
        take(g, "pixel_pitch_um", c.geometry.pixel_pitch);
        take(g, "tilt_degrees", c.geometry.tilt_degrees);
    }
    if (j.contains("spectrum")) {
        const auto& s = j["spectrum"];
        if (s.contains("lines")) {
            c.spectrum.lines.clear();
            for (const auto& l : s["lines"]) {
                LineSpec line;
                line.energy_ev = l.at("energy_ev");
                line.weight = l.at("weight");
                line.detector_efficiency = l.value("detector_efficiency", 1.0);
                if (l.contains("alpha_per_um") && !l["alpha_per_um"].is_null()) line.alpha_per_um = l["alpha_per_um"].get<double>();
                c.spectrum.lines.push_back(line);
            }
        }
        if (s.contains("material")) {
            const auto& m = s["material"];
            take(m, "name", c.spectrum.material.name);
            take(m, "density_g_cm3", c.spectrum.material.density_g_cm3);
            take(m, "reference_path_um", c.spectrum.material.reference_path_um);
            if (m.contains("target_transmission")) {
                if (m["target_transmission"].is_null()) {
                    c.spectrum.material.target_transmission.reset();
                } else {
                    c.spectrum.material.target_transmission = m["target_transmission"].get<double>();
                }
            }
        }
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        take(s, "init_value", c.solver.init_value);
        take(s, "max_iterations", c.solver.max_iterations);
        take(s, "relative_tolerance", c.solver.relative_tolerance);
        take(s, "armijo_c", c.solver.armijo_c);
        take(s, "backtrack_factor", c.solver.backtrack_factor);
        take(s, "max_backtracks", c.solver.max_backtracks);
        take(s, "regularization_weight", c.solver.regularization_weight);
    }
    if (j.contains("dataset")) {
        take(j["dataset"], "train", c.dataset.train);
        take(j["dataset"], "test", c.dataset.test);
    }
    take(j, "master_seed", c.master_seed);
    take(j, "photons_per_ray", c.photons_per_ray);
    take(j, "photon_budgets", c.photon_budgets);
    take(j, "repeats", c.repeats);
}

}  // namespace

std::string to_json(const BenchConfig& config) { return full_json(config).dump(2); }

BenchConfig from_json(const std::string& text, const BenchConfig& base) {
    BenchConfig c = base;
    try {
        apply_overrides(json::parse(text), c);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

BenchConfig load_config(const std::filesystem::path& path, const BenchConfig& base) {
    std::string text;
    try {
        text = io::read_text(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return from_json(text, base);
}

std::string condition_hash(const BenchConfig& config, double photons_per_ray) {
    const auto spectrum = config.spectrum.resolve(photons_per_ray);
    json lines = json::array();
    for (const auto& l : spectrum.lines) {
        lines.push_back({l.energy_ev, l.weight, l.alpha_per_um, l.detector_efficiency});
    }
    // nlohmann::json objects keep keys sorted, so dump() is canonical.
    const json canonical{{"circuit", circuit_json(config.circuit)},
                         {"geometry", geometry_json(config.geometry)},
                         {"lines", lines},
                         {"photons_per_ray", photons_per_ray},
                         {"master_seed", config.master_seed}};
    return io::digest_hex(canonical.dump());
}

std::string circuit_hash(const BenchConfig& config) {
    const json canonical{{"circuit", circuit_json(config.circuit)}, {"master_seed", config.master_seed}};
    return io::digest_hex(canonical.dump());
}

}  // namespace ictomo::config
