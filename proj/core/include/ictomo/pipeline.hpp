#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ictomo/config.hpp"
#include "ictomo/evaluate.hpp"

// Workspace layout (paths in manifests are relative to the repeat directory):
//
//   <root>/config.json                      resolved configuration
//   <root>/sweep.{csv,json}  plot.{csv,json}
//   <root>/rep<k>/circuits/manifest.json    ground truth, shared by all budgets
//   <root>/rep<k>/circuits/sample_NNNNNN.cfv
//   <root>/rep<k>/n<photons>/manifest.json  condition manifest
//   <root>/rep<k>/n<photons>/radiographs/sample_NNNNNN.rad
//   <root>/rep<k>/n<photons>/approximants/sample_NNNNNN.rec (+ .json provenance)
//   <root>/rep<k>/n<photons>/refined/<method>/sample_NNNNNN.rec
//   <root>/rep<k>/n<photons>/reports/<method>.json

namespace ictomo::pipeline {

enum class Method { Ml, GenBaseline, GenAxial, GenScatter, GenAxialScatter };

[[nodiscard]] std::string_view to_string(Method method) noexcept;
/// ConfigError for tags outside ml | gen-baseline | gen-axial | gen-scatter | gen-axial-scatter.
[[nodiscard]] Method parse_method(std::string_view tag);

enum class Split { Train, Test };
enum class SplitSelection { Train, Test, All };

[[nodiscard]] std::string_view to_string(Split split) noexcept;
[[nodiscard]] SplitSelection parse_split(std::string_view tag);

/// One imaging condition: photon budget plus everything in the config.
struct Condition {
    config::BenchConfig config;
    double photons_per_ray = 640.0;
    Method method = Method::Ml;

    void validate() const;
    [[nodiscard]] std::string hash() const { return config::condition_hash(config, photons_per_ray); }
};

struct RunOptions {
    unsigned workers = 1;
    bool force = false;
};

class Workspace {
public:
    explicit Workspace(std::filesystem::path root, int repeat = 0) : root_(std::move(root)), repeat_(repeat) {}

    [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }
    [[nodiscard]] int repeat() const noexcept { return repeat_; }
    [[nodiscard]] std::filesystem::path repeat_dir() const;
    [[nodiscard]] std::filesystem::path circuits_manifest() const;
    [[nodiscard]] std::filesystem::path condition_dir(double photons_per_ray) const;
    [[nodiscard]] std::filesystem::path condition_manifest(double photons_per_ray) const;
    [[nodiscard]] std::filesystem::path config_path() const { return root_ / "config.json"; }

private:
    std::filesystem::path root_;
    int repeat_ = 0;
};

/// Master seed of repeat k (repeat 0 keeps the configured seed).
[[nodiscard]] std::uint64_t repeat_seed(std::uint64_t master_seed, int repeat) noexcept;
/// Config with the repeat's master seed substituted.
[[nodiscard]] config::BenchConfig for_repeat(const config::BenchConfig& config, int repeat);

struct SampleEntry {
    std::size_t index = 0;
    Split split = Split::Train;
    std::uint64_t circuit_seed = 0;
    std::string circuit_file;
    std::string circuit_digest;
    std::uint64_t noise_seed = 0;
    std::string radiograph_file;
    std::string approximant_file;
    std::map<std::string, std::string> refined_files;  ///< method tag -> file
};

struct DatasetManifest {
    std::string circuit_hash;
    std::string condition_hash;  ///< empty for the ground-truth manifest
    double photons_per_ray = 0.0;
    std::uint64_t master_seed = 0;
    std::vector<SampleEntry> train;
    std::vector<SampleEntry> test;

    [[nodiscard]] std::vector<SampleEntry*> select(SplitSelection which);
    [[nodiscard]] std::vector<const SampleEntry*> select(SplitSelection which) const;
    [[nodiscard]] SampleEntry* find(std::size_t index);

    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] static DatasetManifest from_json(const std::string& text);
    void save(const std::filesystem::path& path) const;
    [[nodiscard]] static DatasetManifest load(const std::filesystem::path& path);
};

/// Writes `count` circuits (default train + test) and the ground-truth
/// manifest. Rerunning with the same config rewrites identical bytes; a
/// different existing manifest is refused unless options.force.
DatasetManifest generate(const config::BenchConfig& config, const Workspace& ws,
                         std::optional<std::size_t> count = std::nullopt, const RunOptions& options = {});

/// One radiograph per circuit at the given photon budget.
DatasetManifest simulate(const config::BenchConfig& config, const Workspace& ws, double photons_per_ray,
                         const RunOptions& options = {});

struct ReconstructResult {
    DatasetManifest manifest;
    std::size_t reconstructed = 0;
    std::vector<std::pair<std::size_t, std::string>> failures;  ///< sample index, message
};

/// One Approximant per selected sample. Per-sample solver failures are
/// collected and the remaining samples still run.
ReconstructResult reconstruct(const config::BenchConfig& config, const Workspace& ws, double photons_per_ray,
                              SplitSelection which = SplitSelection::All, const RunOptions& options = {});

struct ExportResult {
    std::filesystem::path index_file;
    std::size_t train_pairs = 0;
    std::size_t test_pairs = 0;
};

/// Copies (approximant, ground truth) pairs into `out_dir` with an
/// index.json split descriptor. DomainError lists samples lacking either file.
ExportResult export_pairs(const config::BenchConfig& config, const Workspace& ws, double photons_per_ray,
                          SplitSelection which, const std::filesystem::path& out_dir);

/// Imports refined REC1 volumes described by `from_dir`/index.json:
///   {"condition_hash": "...", "volumes": [{"index": 1800, "file": "x.rec"}, ...]}
/// Refuses a hash mismatch, wrong dims or values outside [0, 1].
std::size_t import_refined(const config::BenchConfig& config, const Workspace& ws, double photons_per_ray,
                           Method method, const std::filesystem::path& from_dir);

/// Scores the test split for `method`, writes the report and refreshes the
/// workspace sweep tables. Asking for the training split is a leakage error.
eval::BerReport evaluate(const config::BenchConfig& config, const Workspace& ws, double photons_per_ray, Method method,
                         Split split = Split::Test);

/// Re-aggregates every report under the workspace root into sweep.{csv,json}.
std::vector<eval::SweepRow> refresh_sweep(const std::filesystem::path& root);
[[nodiscard]] std::vector<eval::SweepRow> load_sweep(const std::filesystem::path& sweep_json);

struct Transition {
    std::string method;
    double from_photons = 0.0;  ///< last budget above the single-error line
    double to_photons = 0.0;    ///< first budget at or below it
};

struct PlotData {
    double single_error_line = 0.0;
    std::vector<eval::SweepRow> rows;
    std::vector<Transition> transitions;
};

[[nodiscard]] PlotData plot_data(std::span<const eval::SweepRow> rows, double single_error_line);
/// Writes plot.csv and plot.json next to the sweep tables.
PlotData write_plot_data(const std::filesystem::path& root, std::span<const eval::SweepRow> rows,
                         double single_error_line);

struct SweepOptions {
    std::vector<double> photon_budgets;
    int repeats = 1;
    bool reconstruct_train = false;
};

/// gen -> simulate -> reconstruct -> eval (ml) for every budget and repeat,
/// then plot data.
PlotData run_sweep(const config::BenchConfig& config, const std::filesystem::path& root, const SweepOptions& sweep,
                   const RunOptions& options = {});

}  // namespace ictomo::pipeline
