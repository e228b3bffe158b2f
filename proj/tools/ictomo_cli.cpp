// ictomo: synthetic-circuit limited-angle tomography bench.
//
// Exit codes: 0 success, 1 domain / data error, 2 configuration error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ictomo/config.hpp"
#include "ictomo/errors.hpp"
#include "ictomo/evaluate.hpp"
#include "ictomo/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ictomo;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitConfig = 2;

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    bool desk_scale = false;
    std::string workspace = "workspace";
    int repeat = 0;
};

config::BenchConfig resolve_config(const GlobalOptions& g, bool prefer_workspace) {
    const auto base = g.desk_scale ? config::desk_scale_config() : config::reference_config();
    config::BenchConfig cfg = base;
    const pipeline::Workspace ws(g.workspace);
    if (!g.config_path.empty()) {
        cfg = config::load_config(g.config_path, base);
    } else if (prefer_workspace && fs::exists(ws.config_path())) {
        cfg = config::load_config(ws.config_path(), base);
    }
    if (g.seed) cfg.master_seed = *g.seed;
    cfg.validate();
    return cfg;
}

void print_report(const eval::BerReport& r) {
    std::printf("method=%s photons=%g eta0=%.6g eta1=%.6g p0=%.4f p1=%.4f t=%.4f eta_avg=%.6g "
                "errors/sample=%.3f\n",
                r.method.c_str(), r.photons_per_ray, r.eta0, r.eta1, r.p0, r.p1, r.threshold, r.eta_avg,
                r.mean_errors_per_sample());
}

void print_plot(const pipeline::PlotData& d) {
    std::printf("%-18s %12s %14s %14s %8s\n", "method", "photons", "mean_ber", "stderr", "repeats");
    for (const auto& r : d.rows) {
        std::printf("%-18s %12g %14.6g %14s %8zu\n", r.method.c_str(), r.photons_per_ray, r.mean_ber,
                    r.std_error ? std::to_string(*r.std_error).c_str() : "-", r.n_repeats);
    }
    std::printf("single-error line: %.6g\n", d.single_error_line);
    for (const auto& t : d.transitions) {
        std::printf("transition (%s): between %g and %g photons/ray\n", t.method.c_str(), t.from_photons, t.to_photons);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limited-angle X-ray tomography bench for synthetic IC interconnect"};
    app.require_subcommand(1);
    // Global options may follow the subcommand name.
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON config (keys override the reference config)");
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--workers", g.workers, "Worker threads (0 = all cores)");
    app.add_flag("--desk-scale", g.desk_scale, "Start from the small desk-scale profile");
    app.add_option("-w,--workspace", g.workspace, "Workspace directory");
    app.add_option("--repeat", g.repeat, "Repeat index (independent circuit set)")->check(CLI::NonNegativeNumber);

    auto* gen = app.add_subcommand("gen", "Generate ground-truth circuits");
    std::optional<std::size_t> gen_count;
    bool force = false;
    gen->add_option("--count", gen_count, "Number of circuits (default: train + test)");
    gen->add_flag("--force", force, "Overwrite a non-matching existing manifest");

    double photons = 0.0;
    auto add_photons = [&](CLI::App* sub) {
        sub->add_option("-n,--photons", photons, "Photons per ray (default from config)");
    };

    auto* sim = app.add_subcommand("simulate", "Simulate noisy radiographs for every circuit");
    add_photons(sim);

    auto* rec = app.add_subcommand("reconstruct", "Maximum-likelihood reconstruction of every radiograph");
    add_photons(rec);
    std::string rec_split = "all";
    rec->add_option("--split", rec_split, "train | test | all");

    auto* exp = app.add_subcommand("export", "Export (approximant, truth) pairs for prior training");
    add_photons(exp);
    std::string exp_split = "all";
    std::string exp_out;
    exp->add_option("--split", exp_split, "train | test | all");
    exp->add_option("--out", exp_out, "Output directory")->required();

    auto* imp = app.add_subcommand("import-refined", "Import refined volumes for scoring");
    add_photons(imp);
    std::string imp_method;
    std::string imp_from;
    imp->add_option("--method", imp_method, "gen-baseline | gen-axial | gen-scatter | gen-axial-scatter")->required();
    imp->add_option("--from", imp_from, "Directory holding index.json and REC1 volumes")->required();

    auto* ev = app.add_subcommand("eval", "Bit error rate of the test split");
    add_photons(ev);
    std::string ev_method = "ml";
    std::string ev_split = "test";
    ev->add_option("--method", ev_method, "ml | gen-baseline | gen-axial | gen-scatter | gen-axial-scatter");
    ev->add_option("--split", ev_split, "Only 'test' is scorable");

    auto* plot = app.add_subcommand("plotdata", "BER-vs-photons table for plotting");
    std::string plot_sweep;
    plot->add_option("--sweep", plot_sweep, "sweep.json to read (default: <workspace>/sweep.json)");

    auto* sw = app.add_subcommand("sweep", "gen + simulate + reconstruct + eval over photon budgets");
    std::vector<double> sw_budgets;
    int sw_repeats = 0;
    bool sw_train = false;
    sw->add_option("--photons", sw_budgets, "Photon budgets (default from config)")->delimiter(',');
    sw->add_option("--repeats", sw_repeats, "Independent circuit sets (default from config)");
    sw->add_flag("--reconstruct-train", sw_train, "Also reconstruct the training split");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const pipeline::RunOptions run{g.workers, force};
        const pipeline::Workspace ws(g.workspace, g.repeat);

        if (gen->parsed()) {
            const auto cfg = resolve_config(g, false);
            const auto m = pipeline::generate(cfg, ws, gen_count, run);
            std::printf("wrote %zu train + %zu test circuits to %s (hash %s)\n", m.train.size(), m.test.size(),
                        ws.repeat_dir().string().c_str(), m.circuit_hash.c_str());
            return 0;
        }

        const auto cfg = resolve_config(g, true);
        const double n = photons > 0 ? photons : cfg.photons_per_ray;

        if (sim->parsed()) {
            const auto m = pipeline::simulate(cfg, ws, n, run);
            std::printf("simulated %zu radiographs at %g photons/ray (condition %s)\n", m.train.size() + m.test.size(),
                        n, m.condition_hash.c_str());
        } else if (rec->parsed()) {
            const auto r = pipeline::reconstruct(cfg, ws, n, pipeline::parse_split(rec_split), run);
            std::printf("reconstructed %zu samples at %g photons/ray, %zu failures\n", r.reconstructed, n,
                        r.failures.size());
            for (const auto& [idx, msg] : r.failures) std::fprintf(stderr, "sample %zu: %s\n", idx, msg.c_str());
            return r.failures.empty() ? 0 : kExitDomain;
        } else if (exp->parsed()) {
            const auto r = pipeline::export_pairs(cfg, ws, n, pipeline::parse_split(exp_split), exp_out);
            std::printf("exported %zu train + %zu test pairs to %s\n", r.train_pairs, r.test_pairs,
                        r.index_file.string().c_str());
        } else if (imp->parsed()) {
            const auto count = pipeline::import_refined(cfg, ws, n, pipeline::parse_method(imp_method), imp_from);
            std::printf("imported %zu refined volumes\n", count);
        } else if (ev->parsed()) {
            const auto split = pipeline::parse_split(ev_split);
            if (split != pipeline::SplitSelection::Test) {
                throw DomainError("refusing to score the training split (train/test leakage)");
            }
            print_report(pipeline::evaluate(cfg, ws, n, pipeline::parse_method(ev_method)));
        } else if (plot->parsed()) {
            const auto rows = plot_sweep.empty() ? pipeline::refresh_sweep(ws.root()) : pipeline::load_sweep(plot_sweep);
            print_plot(pipeline::write_plot_data(ws.root(), rows, eval::single_error_line(cfg.geometry.dims)));
        } else if (sw->parsed()) {
            pipeline::SweepOptions opts;
            opts.photon_budgets = sw_budgets;
            opts.repeats = sw_repeats > 0 ? sw_repeats : cfg.repeats;
            opts.reconstruct_train = sw_train;
            print_plot(pipeline::run_sweep(cfg, ws.root(), opts, run));
        }
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    }
}
