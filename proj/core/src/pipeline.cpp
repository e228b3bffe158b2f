#include "ictomo/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <sstream>

#include "ictomo/circuit.hpp"
#include "ictomo/detection.hpp"
#include "ictomo/errors.hpp"
#include "ictomo/io.hpp"
#include "ictomo/parallel.hpp"
#include "ictomo/reconstruct.hpp"
#include "ictomo/rng.hpp"
#include "ictomo/system_matrix.hpp"
#include "json.hpp"

namespace ictomo::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kMethodTags[] = {"ml", "gen-baseline", "gen-axial", "gen-scatter", "gen-axial-scatter"};

std::string sample_name(std::size_t index, std::string_view ext) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sample_%06zu", index);
    return std::string(buf) + std::string(ext);
}

std::string photons_tag(double photons) {
    std::ostringstream os;
    os << 'n' << photons;
    return os.str();
}

std::uint64_t hash_key(const std::string& hex) { return std::stoull(hex, nullptr, 16); }

json entry_json(const SampleEntry& e) {
    json j{{"index", e.index},
           {"split", std::string(to_string(e.split))},
           {"circuit_seed", e.circuit_seed},
           {"circuit_file", e.circuit_file},
           {"circuit_digest", e.circuit_digest}};
    if (!e.radiograph_file.empty()) {
        j["noise_seed"] = e.noise_seed;
        j["radiograph_file"] = e.radiograph_file;
    }
    if (!e.approximant_file.empty()) j["approximant_file"] = e.approximant_file;
    if (!e.refined_files.empty()) j["refined_files"] = e.refined_files;
    return j;
}

SampleEntry entry_from(const json& j) {
    SampleEntry e;
    e.index = j.at("index");
    e.split = j.at("split").get<std::string>() == "test" ? Split::Test : Split::Train;
    e.circuit_seed = j.at("circuit_seed");
    e.circuit_file = j.at("circuit_file");
    e.circuit_digest = j.at("circuit_digest");
    e.noise_seed = j.value("noise_seed", std::uint64_t{0});
    e.radiograph_file = j.value("radiograph_file", "");
    e.approximant_file = j.value("approximant_file", "");
    if (j.contains("refined_files")) e.refined_files = j["refined_files"].get<std::map<std::string, std::string>>();
    return e;
}

config::BenchConfig checked(const config::BenchConfig& config, int repeat) {
    config.validate();
    return for_repeat(config, repeat);
}

DatasetManifest load_condition(const config::BenchConfig& cfg, const Workspace& ws, double photons) {
    const auto path = ws.condition_manifest(photons);
    if (!fs::exists(path)) throw DomainError("no simulated data at " + path.string() + " (run simulate first)");
    auto manifest = DatasetManifest::load(path);
    if (manifest.condition_hash != config::condition_hash(cfg, photons)) {
        throw DomainError("condition hash mismatch in " + path.string() + "; the data was produced with another config");
    }
    return manifest;
}

void check_measurements(const forward::Geometry& g, const forward::Measurements& m, const std::string& file) {
    if (m.n_angles != g.n_angles() || m.nu != g.detector_nu || m.nv != g.detector_nv) {
        throw ConfigError(file + ": radiograph shape does not match the configured geometry");
    }
}

}  // namespace

std::string_view to_string(Method method) noexcept { return kMethodTags[static_cast<int>(method)]; }

Method parse_method(std::string_view tag) {
    for (int i = 0; i < 5; ++i) {
        if (kMethodTags[i] == tag) return static_cast<Method>(i);
    }
    throw ConfigError("unknown method '" + std::string(tag) + "'");
}

std::string_view to_string(Split split) noexcept { return split == Split::Train ? "train" : "test"; }

SplitSelection parse_split(std::string_view tag) {
    if (tag == "train") return SplitSelection::Train;
    if (tag == "test") return SplitSelection::Test;
    if (tag == "all") return SplitSelection::All;
    throw ConfigError("unknown split '" + std::string(tag) + "' (train | test | all)");
}

void Condition::validate() const {
    config.validate();
    if (!(photons_per_ray > 0)) throw ConfigError("photons per ray must be positive");
    if (config.dataset.train + config.dataset.test == 0) throw ConfigError("condition needs at least one sample");
}

fs::path Workspace::repeat_dir() const { return root_ / ("rep" + std::to_string(repeat_)); }
fs::path Workspace::circuits_manifest() const { return repeat_dir() / "circuits" / "manifest.json"; }
fs::path Workspace::condition_dir(double photons) const { return repeat_dir() / photons_tag(photons); }
fs::path Workspace::condition_manifest(double photons) const { return condition_dir(photons) / "manifest.json"; }

std::uint64_t repeat_seed(std::uint64_t master_seed, int repeat) noexcept {
    if (repeat == 0) return master_seed;
    return rng::derive(master_seed, {0x726570ULL /* "rep" */, static_cast<std::uint64_t>(repeat)});
}

config::BenchConfig for_repeat(const config::BenchConfig& config, int repeat) {
    auto c = config;
    c.master_seed = repeat_seed(config.master_seed, repeat);
    return c;
}

std::vector<SampleEntry*> DatasetManifest::select(SplitSelection which) {
    std::vector<SampleEntry*> out;
    if (which != SplitSelection::Test) for (auto& e : train) out.push_back(&e);
    if (which != SplitSelection::Train) for (auto& e : test) out.push_back(&e);
    return out;
}

std::vector<const SampleEntry*> DatasetManifest::select(SplitSelection which) const {
    std::vector<const SampleEntry*> out;
    if (which != SplitSelection::Test) for (const auto& e : train) out.push_back(&e);
    if (which != SplitSelection::Train) for (const auto& e : test) out.push_back(&e);
    return out;
}

SampleEntry* DatasetManifest::find(std::size_t index) {
    for (auto* e : select(SplitSelection::All)) {
        if (e->index == index) return e;
    }
    return nullptr;
}

std::string DatasetManifest::to_json() const {
    json train_arr = json::array(), test_arr = json::array();
    for (const auto& e : train) train_arr.push_back(entry_json(e));
    for (const auto& e : test) test_arr.push_back(entry_json(e));
    json j{{"format", "ictomo-manifest-1"},
           {"circuit_hash", circuit_hash},
           {"condition_hash", condition_hash},
           {"photons_per_ray", photons_per_ray},
           {"master_seed", master_seed},
           {"train", train_arr},
           {"test", test_arr}};
    return j.dump(2);
}

DatasetManifest DatasetManifest::from_json(const std::string& text) {
    try {
        const auto j = json::parse(text);
        DatasetManifest m;
        m.circuit_hash = j.at("circuit_hash");
        m.condition_hash = j.value("condition_hash", "");
        m.photons_per_ray = j.value("photons_per_ray", 0.0);
        m.master_seed = j.at("master_seed");
        for (const auto& e : j.at("train")) m.train.push_back(entry_from(e));
        for (const auto& e : j.at("test")) m.test.push_back(entry_from(e));
        return m;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
}

void DatasetManifest::save(const fs::path& path) const { io::write_text_atomic(path, to_json()); }

DatasetManifest DatasetManifest::load(const fs::path& path) { return from_json(io::read_text(path)); }

DatasetManifest generate(const config::BenchConfig& config, const Workspace& ws, std::optional<std::size_t> count,
                         const RunOptions& options) {
    const auto cfg = checked(config, ws.repeat());
    const std::size_t configured = cfg.dataset.train + cfg.dataset.test;
    const std::size_t total = count.value_or(configured);
    const std::size_t n_test = configured == 0 ? 0 : total * cfg.dataset.test / configured;
    const std::size_t n_train = total - n_test;

    DatasetManifest m;
    m.circuit_hash = config::circuit_hash(cfg);
    m.master_seed = cfg.master_seed;

    const auto manifest_path = ws.circuits_manifest();
    if (fs::exists(manifest_path)) {
        const auto existing = DatasetManifest::load(manifest_path);
        const bool same = existing.circuit_hash == m.circuit_hash && existing.train.size() == n_train &&
                          existing.test.size() == n_test;
        if (!same && !options.force) {
            throw DomainError("existing ground-truth manifest at " + manifest_path.string() +
                              " does not match this request (use --force to overwrite)");
        }
        if (!same) {
            fs::remove_all(manifest_path.parent_path());
        }
    }

    auto params = cfg.circuit;
    params.seed = cfg.master_seed;
    std::vector<SampleEntry> entries(total);
    parallel_for(total, options.workers, [&](std::size_t s) {
        auto& e = entries[s];
        e.index = s;
        e.split = s < n_train ? Split::Train : Split::Test;
        e.circuit_seed = circuit::sample_seed(params.seed, s);
        auto p = params;
        p.seed = e.circuit_seed;
        const auto bytes = io::encode_cfv(circuit::generate_circuit(p));
        e.circuit_file = "circuits/" + sample_name(s, ".cfv");
        e.circuit_digest = io::digest_hex(bytes);
        io::write_file_atomic(ws.repeat_dir() / e.circuit_file, bytes);
    });
    for (auto& e : entries) (e.split == Split::Train ? m.train : m.test).push_back(std::move(e));

    fs::create_directories(ws.repeat_dir() / "circuits");
    m.save(manifest_path);
    io::write_text_atomic(ws.config_path(), config::to_json(config));
    return m;
}

DatasetManifest simulate(const config::BenchConfig& config, const Workspace& ws, double photons,
                         const RunOptions& options) {
    const auto cfg = checked(config, ws.repeat());
    if (!(photons > 0)) throw ConfigError("photons per ray must be positive");
    if (!fs::exists(ws.circuits_manifest())) throw DomainError("no circuits in " + ws.repeat_dir().string() + " (run gen first)");
    auto m = DatasetManifest::load(ws.circuits_manifest());
    if (m.circuit_hash != config::circuit_hash(cfg)) throw DomainError("ground truth was generated with another config");

    m.condition_hash = config::condition_hash(cfg, photons);
    m.photons_per_ray = photons;
    const auto spectrum = cfg.spectrum.resolve(photons);
    const auto a = forward::build_system_matrix(cfg.geometry, options.workers);
    const std::uint64_t key = hash_key(m.condition_hash);

    auto entries = m.select(SplitSelection::All);
    const auto dir = ws.condition_dir(photons);
    parallel_for(entries.size(), options.workers, [&](std::size_t k) {
        auto& e = *entries[k];
        const auto truth = io::read_cfv(ws.repeat_dir() / e.circuit_file);
        if (truth.dims() != cfg.geometry.dims) {
            throw ConfigError(e.circuit_file + ": circuit dims do not match the configured geometry");
        }
        e.noise_seed = rng::derive(cfg.master_seed, {static_cast<std::uint64_t>(e.index), key});
        const auto meas = forward::simulate(cfg.geometry, a, truth, spectrum, e.noise_seed);
        e.radiograph_file = photons_tag(photons) + "/radiographs/" + sample_name(e.index, ".rad");
        io::write_rad(ws.repeat_dir() / e.radiograph_file, meas);
    });
    fs::create_directories(dir);
    m.save(ws.condition_manifest(photons));
    return m;
}

ReconstructResult reconstruct(const config::BenchConfig& config, const Workspace& ws, double photons,
                              SplitSelection which, const RunOptions& options) {
    const auto cfg = checked(config, ws.repeat());
    ReconstructResult result;
    result.manifest = load_condition(cfg, ws, photons);
    const auto spectrum = cfg.spectrum.resolve(photons);
    const auto a = forward::build_system_matrix(cfg.geometry, options.workers);

    auto entries = result.manifest.select(which);
    std::mutex failures_mutex;
    std::vector<char> ok(entries.size(), 0);
    parallel_for(entries.size(), options.workers, [&](std::size_t k) {
        auto& e = *entries[k];
        try {
            if (e.radiograph_file.empty()) throw DomainError("sample has no radiograph");
            const auto meas = io::read_rad(ws.repeat_dir() / e.radiograph_file);
            check_measurements(cfg.geometry, meas, e.radiograph_file);
            const auto approx = recon::reconstruct_ml(meas, a, spectrum, cfg.geometry.dims, cfg.solver);
            const std::string file = photons_tag(photons) + "/approximants/" + sample_name(e.index, ".rec");
            io::write_rec(ws.repeat_dir() / file, approx.dims, approx.values);
            const json provenance{{"condition_hash", result.manifest.condition_hash},
                                  {"photons_per_ray", photons},
                                  {"index", e.index},
                                  {"split", std::string(to_string(e.split))},
                                  {"circuit_seed", e.circuit_seed},
                                  {"noise_seed", e.noise_seed},
                                  {"iterations", approx.iterations},
                                  {"final_objective", approx.final_objective},
                                  {"converged", approx.converged},
                                  {"stop_reason", approx.stop_reason},
                                  {"solver",
                                   {{"init_value", cfg.solver.init_value},
                                    {"max_iterations", cfg.solver.max_iterations},
                                    {"relative_tolerance", cfg.solver.relative_tolerance},
                                    {"regularization_weight", cfg.solver.regularization_weight}}}};
            io::write_text_atomic(ws.repeat_dir() / (file + ".json"), provenance.dump(2));
            e.approximant_file = file;
            ok[k] = 1;
        } catch (const std::exception& ex) {
            std::lock_guard lock(failures_mutex);
            result.failures.emplace_back(e.index, ex.what());
        }
    });
    result.reconstructed = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    std::sort(result.failures.begin(), result.failures.end());

    const auto failures_path = ws.condition_dir(photons) / "reconstruct_failures.json";
    if (!result.failures.empty()) {
        json arr = json::array();
        for (const auto& [idx, msg] : result.failures) arr.push_back({{"index", idx}, {"error", msg}});
        io::write_text_atomic(failures_path, arr.dump(2));
    } else if (fs::exists(failures_path)) {
        fs::remove(failures_path);
    }
    result.manifest.save(ws.condition_manifest(photons));
    return result;
}

ExportResult export_pairs(const config::BenchConfig& config, const Workspace& ws, double photons,
                          SplitSelection which, const fs::path& out_dir) {
    const auto cfg = checked(config, ws.repeat());
    const auto m = load_condition(cfg, ws, photons);

    std::vector<std::size_t> missing;
    for (const auto* e : m.select(which)) {
        if (e->approximant_file.empty() || !fs::exists(ws.repeat_dir() / e->approximant_file) ||
            !fs::exists(ws.repeat_dir() / e->circuit_file)) {
            missing.push_back(e->index);
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size(); ++i) list += (i ? ", " : "") + std::to_string(missing[i]);
        throw DomainError("incomplete pairs for samples: " + list);
    }

    ExportResult result;
    json splits = json::object();
    auto emit = [&](const std::vector<SampleEntry>& entries, const char* name, std::size_t& counter) {
        json pairs = json::array();
        for (const auto& e : entries) {
            const std::string rec = "approximants/" + sample_name(e.index, ".rec");
            const std::string cfv = "truths/" + sample_name(e.index, ".cfv");
            io::write_file_atomic(out_dir / rec, io::read_file(ws.repeat_dir() / e.approximant_file));
            io::write_file_atomic(out_dir / cfv, io::read_file(ws.repeat_dir() / e.circuit_file));
            pairs.push_back({{"index", e.index}, {"approximant", rec}, {"truth", cfv}});
            ++counter;
        }
        splits[name] = {{"count", pairs.size()}, {"pairs", pairs}};
    };
    if (which != SplitSelection::Test) emit(m.train, "train", result.train_pairs);
    if (which != SplitSelection::Train) emit(m.test, "test", result.test_pairs);

    const auto& d = cfg.geometry.dims;
    const json index{{"format", "ictomo-export-1"},
                     {"condition_hash", m.condition_hash},
                     {"photons_per_ray", photons},
                     {"dims", {d.nx, d.ny, d.nz}},
                     {"splits", splits}};
    result.index_file = out_dir / "index.json";
    io::write_text_atomic(result.index_file, index.dump(2));
    return result;
}

std::size_t import_refined(const config::BenchConfig& config, const Workspace& ws, double photons, Method method,
                           const fs::path& from_dir) {
    if (method == Method::Ml) throw ConfigError("import-refined needs a generative method tag");
    const auto cfg = checked(config, ws.repeat());
    auto m = load_condition(cfg, ws, photons);

    json index;
    try {
        index = json::parse(io::read_text(from_dir / "index.json"));
    } catch (const json::exception& e) {
        throw IoError(std::string("refined index: ") + e.what());
    }
    if (index.value("condition_hash", "") != m.condition_hash) {
        throw DomainError("refined volumes were produced for another condition (hash mismatch)");
    }
    const std::string tag(to_string(method));
    std::vector<std::pair<std::size_t, std::string>> listed;
    try {
        for (const auto& v : index.at("volumes")) listed.emplace_back(v.at("index").get<std::size_t>(), v.at("file").get<std::string>());
    } catch (const json::exception& e) {
        throw IoError(std::string("refined index: ") + e.what());
    }
    std::size_t imported = 0;
    for (const auto& [idx, name] : listed) {
        auto* entry = m.find(idx);
        if (!entry) throw DomainError("refined volume for unknown sample " + std::to_string(idx));
        const auto vol = io::read_rec(from_dir / name);
        if (vol.dims != cfg.geometry.dims) throw DomainError("refined volume " + std::to_string(idx) + " has wrong dims");
        for (double x : vol.values) {
            if (!(x >= 0.0 && x <= 1.0)) throw DomainError("refined volume " + std::to_string(idx) + " leaves [0, 1]");
        }
        const std::string file = photons_tag(photons) + "/refined/" + tag + "/" + sample_name(idx, ".rec");
        io::write_rec(ws.repeat_dir() / file, vol.dims, vol.values);
        entry->refined_files[tag] = file;
        ++imported;
    }
    m.save(ws.condition_manifest(photons));
    return imported;
}

eval::BerReport evaluate(const config::BenchConfig& config, const Workspace& ws, double photons, Method method,
                         Split split) {
    if (split == Split::Train) throw DomainError("refusing to score the training split (train/test leakage)");
    const auto cfg = checked(config, ws.repeat());
    const auto m = load_condition(cfg, ws, photons);
    if (m.test.empty()) throw DomainError("condition has no test samples");

    const std::string tag(to_string(method));
    std::vector<std::vector<double>> volumes;
    std::vector<BinaryVolume> truths;
    for (const auto& e : m.test) {
        std::string file;
        if (method == Method::Ml) {
            file = e.approximant_file;
        } else if (auto it = e.refined_files.find(tag); it != e.refined_files.end()) {
            file = it->second;
        }
        if (file.empty()) throw DomainError("sample " + std::to_string(e.index) + " has no " + tag + " volume");
        auto rec = io::read_rec(ws.repeat_dir() / file);
        truths.push_back(io::read_cfv(ws.repeat_dir() / e.circuit_file));
        if (rec.dims != truths.back().dims()) throw DomainError(file + ": dims differ from ground truth");
        volumes.push_back(std::move(rec.values));
    }

    auto report = eval::score(volumes, truths);
    report.photons_per_ray = photons;
    report.method = tag;
    report.condition_hash = m.condition_hash;
    report.repeat = ws.repeat();
    io::write_text_atomic(ws.condition_dir(photons) / "reports" / (tag + ".json"), eval::report_to_json(report));
    refresh_sweep(ws.root());
    return report;
}

std::vector<eval::SweepRow> refresh_sweep(const fs::path& root) {
    std::vector<eval::BerReport> reports;
    if (fs::exists(root)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(root)) {
            const auto& p = entry.path();
            if (entry.is_regular_file() && p.extension() == ".json" && p.parent_path().filename() == "reports") {
                files.push_back(p);
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) reports.push_back(eval::report_from_json(io::read_text(f)));
    }
    auto rows = eval::sweep_summary(reports);
    io::write_text_atomic(root / "sweep.json", eval::sweep_to_json(rows));
    io::write_text_atomic(root / "sweep.csv", eval::sweep_to_csv(rows));
    return rows;
}

std::vector<eval::SweepRow> load_sweep(const fs::path& sweep_json) {
    std::vector<eval::SweepRow> rows;
    try {
        for (const auto& j : json::parse(io::read_text(sweep_json))) {
            eval::SweepRow r;
            r.photons_per_ray = j.at("photons_per_ray");
            r.method = j.at("method");
            r.mean_ber = j.at("mean_ber");
            r.n_repeats = j.at("n_repeats");
            if (!j.at("stderr").is_null()) r.std_error = j.at("stderr").get<double>();
            rows.push_back(r);
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed sweep table: ") + e.what());
    }
    return rows;
}

PlotData plot_data(std::span<const eval::SweepRow> rows, double single_error_line) {
    PlotData out;
    out.single_error_line = single_error_line;
    for (const auto& r : rows) {
        if (r.n_repeats > 0 && !r.method.empty()) out.rows.push_back(r);
    }
    std::sort(out.rows.begin(), out.rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.method, a.photons_per_ray) < std::tie(b.method, b.photons_per_ray);
    });
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        const auto& prev = out.rows[i - 1];
        const auto& cur = out.rows[i];
        if (prev.method == cur.method && prev.mean_ber > single_error_line && cur.mean_ber <= single_error_line) {
            out.transitions.push_back({cur.method, prev.photons_per_ray, cur.photons_per_ray});
        }
    }
    return out;
}

PlotData write_plot_data(const fs::path& root, std::span<const eval::SweepRow> rows, double single_error_line) {
    auto data = plot_data(rows, single_error_line);

    auto is_transition_end = [&](const eval::SweepRow& r) {
        return std::any_of(data.transitions.begin(), data.transitions.end(),
                           [&](const Transition& t) { return t.method == r.method && t.to_photons == r.photons_per_ray; });
    };

    std::ostringstream csv;
    csv.precision(10);
    csv << "photons_per_ray,method,mean_ber,stderr,n_repeats,single_error_line,crosses_single_error\n";
    json rows_json = json::array();
    for (const auto& r : data.rows) {
        csv << r.photons_per_ray << ',' << r.method << ',' << r.mean_ber << ',';
        if (r.std_error) csv << *r.std_error;
        csv << ',' << r.n_repeats << ',' << single_error_line << ',' << (is_transition_end(r) ? 1 : 0) << '\n';
        rows_json.push_back({{"photons_per_ray", r.photons_per_ray},
                             {"method", r.method},
                             {"mean_ber", r.mean_ber},
                             {"stderr", r.std_error ? json(*r.std_error) : json(nullptr)},
                             {"n_repeats", r.n_repeats}});
    }
    json transitions = json::array();
    for (const auto& t : data.transitions) {
        transitions.push_back({{"method", t.method}, {"from_photons", t.from_photons}, {"to_photons", t.to_photons}});
    }
    const json doc{{"single_error_line", single_error_line}, {"rows", rows_json}, {"transitions", transitions}};
    io::write_text_atomic(root / "plot.csv", csv.str());
    io::write_text_atomic(root / "plot.json", doc.dump(2));
    return data;
}

PlotData run_sweep(const config::BenchConfig& config, const fs::path& root, const SweepOptions& sweep,
                   const RunOptions& options) {
    config.validate();
    if (sweep.repeats < 1) throw ConfigError("sweep needs at least one repeat");
    const auto budgets = sweep.photon_budgets.empty() ? config.photon_budgets : sweep.photon_budgets;
    for (int r = 0; r < sweep.repeats; ++r) {
        const Workspace ws(root, r);
        const auto cfg_r = for_repeat(config, r);
        bool fresh = true;
        if (fs::exists(ws.circuits_manifest())) {
            const auto existing = DatasetManifest::load(ws.circuits_manifest());
            fresh = existing.circuit_hash != config::circuit_hash(cfg_r) ||
                    existing.train.size() != config.dataset.train || existing.test.size() != config.dataset.test;
        }
        if (fresh) (void)generate(config, ws, std::nullopt, options);
        for (double n : budgets) {
            (void)simulate(config, ws, n, options);
            const auto rec = reconstruct(config, ws, n, sweep.reconstruct_train ? SplitSelection::All : SplitSelection::Test,
                                         options);
            if (!rec.failures.empty()) {
                throw DomainError(std::to_string(rec.failures.size()) + " reconstructions failed at " +
                                  std::to_string(n) + " photons/ray");
            }
            (void)evaluate(config, ws, n, Method::Ml);
        }
    }
    const auto rows = refresh_sweep(root);
    return write_plot_data(root, rows, eval::single_error_line(config.geometry.dims));
}

}  // namespace ictomo::pipeline
