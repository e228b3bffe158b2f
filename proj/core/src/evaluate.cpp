#include "ictomo/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

#include "ictomo/errors.hpp"
#include "json.hpp"

namespace ictomo::eval {

double Gaussian::pdf(double x) const noexcept {
    const double z = (x - mean) / stddev;
    return std::exp(-0.5 * z * z) / (stddev * std::sqrt(2.0 * std::numbers::pi));
}

double Gaussian::cdf(double x) const noexcept {
    return 0.5 * std::erfc(-(x - mean) / (stddev * std::numbers::sqrt2));
}

namespace {

std::size_t bin_of(double x, std::size_t bins, double width) {
    const double clamped = std::clamp(x, 0.0, 1.0);
    return std::min(bins - 1, static_cast<std::size_t>(clamped / width));
}

void check_shapes(std::span<const std::vector<double>> approximants, std::span<const BinaryVolume> truths) {
    if (approximants.size() != truths.size()) throw DomainError("approximant and ground-truth counts differ");
    if (approximants.empty()) throw DomainError("empty evaluation set");
    for (std::size_t s = 0; s < truths.size(); ++s) {
        if (approximants[s].size() != truths[s].size()) {
            throw DomainError("sample " + std::to_string(s) + ": approximant and ground-truth sizes differ");
        }
    }
}

}  // namespace

double ClassPdfModel::density(int cls, double x) const noexcept {
    if (kind == PdfKind::Gaussian) return cls == 0 ? class0.pdf(x) : class1.pdf(x);
    const auto& h = cls == 0 ? hist0 : hist1;
    if (h.empty() || x < 0.0 || x > 1.0) return 0.0;
    return h[bin_of(x, h.size(), bin_width)];
}

ClassPdfModel fit_class_pdfs(std::span<const std::vector<double>> approximants, std::span<const BinaryVolume> truths,
                             PdfKind kind, double bin_width) {
    check_shapes(approximants, truths);
    if (!(bin_width > 0 && bin_width <= 1)) throw ConfigError("histogram bin width must lie in (0, 1]");

    ClassPdfModel m;
    m.kind = kind;
    m.bin_width = bin_width;
    double sum[2] = {0, 0}, sum_sq[2] = {0, 0};
    std::size_t n[2] = {0, 0};
    const auto bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width - 1e-9));
    std::vector<double> counts[2] = {std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0)};

    for (std::size_t s = 0; s < truths.size(); ++s) {
        const auto truth = truths[s].values();
        const auto& values = approximants[s];
        for (std::size_t j = 0; j < values.size(); ++j) {
            const int c = truth[j];
            sum[c] += values[j];
            sum_sq[c] += values[j] * values[j];
            ++n[c];
            counts[c][bin_of(values[j], bins, bin_width)] += 1.0;
        }
    }

    auto fit = [&](int c) {
        Gaussian g;
        if (n[c] == 0) return g;
        g.mean = sum[c] / static_cast<double>(n[c]);
        const double var = n[c] > 1 ? (sum_sq[c] - sum[c] * g.mean) / static_cast<double>(n[c] - 1) : 0.0;
        g.stddev = std::max(kStdFloor, std::sqrt(std::max(0.0, var)));
        return g;
    };
    m.class0 = fit(0);
    m.class1 = fit(1);
    m.n0 = n[0];
    m.n1 = n[1];
    const double total = static_cast<double>(n[0] + n[1]);
    m.p0 = static_cast<double>(n[0]) / total;
    m.p1 = static_cast<double>(n[1]) / total;
    m.degenerate = n[0] == 0 || n[1] == 0;
    if (n[0] == 0) m.class0.mean = 0.0;
    if (n[1] == 0) m.class1.mean = 1.0;

    for (int c = 0; c < 2; ++c) {
        auto& h = c == 0 ? m.hist0 : m.hist1;
        h = counts[c];
        if (n[c] > 0) {
            for (auto& v : h) v /= static_cast<double>(n[c]) * bin_width;
        }
    }
    return m;
}

Decision decision_threshold(const ClassPdfModel& model) {
    Decision d;
    const double m0 = model.class0.mean;
    const double m1 = model.class1.mean;
    const double s0 = model.class0.stddev;
    const double s1 = model.class1.stddev;

    if (model.degenerate) {
        // One class absent: the posterior always favours the other.
        d.threshold = 0.5;
        d.interior_root = false;
        return d;
    }

    const bool identical = model.kind == PdfKind::Gaussian ? (m0 == m1 && s0 == s1) : (model.hist0 == model.hist1);
    if (identical) {
        d.threshold = 0.5;
        d.interior_root = false;
        d.constant_label = model.p1 > model.p0 ? 1 : 0;
        return d;
    }

    const double lo = std::min(m0, m1);
    const double hi = std::max(m0, m1);
    d.ones_above = m1 >= m0;

    if (model.kind == PdfKind::Histogram) {
        const std::size_t bins = model.hist0.size();
        for (std::size_t b = 0; b < bins; ++b) {
            const double centre = (static_cast<double>(b) + 0.5) * model.bin_width;
            if (centre < lo || centre > hi) continue;
            if (model.p1 * model.hist1[b] >= model.p0 * model.hist0[b]) {
                d.threshold = static_cast<double>(b) * model.bin_width;
                return d;
            }
        }
        d.threshold = 0.5;
        d.interior_root = false;
        return d;
    }

    // log(p1 N(t; m1, s1)) - log(p0 N(t; m0, s0)) = a t^2 + b t + c
    const double a = 0.5 / (s0 * s0) - 0.5 / (s1 * s1);
    const double b = m1 / (s1 * s1) - m0 / (s0 * s0);
    const double c = 0.5 * m0 * m0 / (s0 * s0) - 0.5 * m1 * m1 / (s1 * s1) +
                     std::log(model.p1 * s0 / (model.p0 * s1));

    std::vector<double> roots;
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    if (std::abs(a) <= 1e-12 * scale) {
        if (b != 0.0) roots.push_back(-c / b);
    } else {
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0) {
            const double sq = std::sqrt(disc);
            // Numerically stable pair.
            const double q = -0.5 * (b + std::copysign(sq, b));
            if (q != 0.0) roots.push_back(c / q);
            roots.push_back(q / a);
        }
    }
    const double mid = 0.5 * (lo + hi);
    std::optional<double> best;
    for (double r : roots) {
        if (r >= lo && r <= hi && (!best || std::abs(r - mid) < std::abs(*best - mid))) best = r;
    }
    if (best) {
        d.threshold = *best;
    } else {
        d.threshold = 0.5;
        d.interior_root = false;
    }
    return d;
}

double model_error_rate(const ClassPdfModel& model, double t) {
    double eta0 = 0.0;
    double eta1 = 0.0;
    if (model.kind == PdfKind::Gaussian) {
        eta0 = 1.0 - model.class0.cdf(t);
        eta1 = model.class1.cdf(t);
    } else {
        for (std::size_t b = 0; b < model.hist0.size(); ++b) {
            const double lo = static_cast<double>(b) * model.bin_width;
            const double hi = lo + model.bin_width;
            // Fraction of the bin on each side of t.
            const double above = std::clamp((hi - t) / model.bin_width, 0.0, 1.0);
            eta0 += model.hist0[b] * model.bin_width * above;
            eta1 += model.hist1[b] * model.bin_width * (1.0 - above);
        }
    }
    if (model.n0 == 0) eta0 = 0.0;
    if (model.n1 == 0) eta1 = 0.0;
    return model.p0 * eta0 + model.p1 * eta1;
}

double BerReport::mean_errors_per_sample() const noexcept {
    if (errors_per_sample.empty()) return 0.0;
    double s = 0.0;
    for (auto e : errors_per_sample) s += static_cast<double>(e);
    return s / static_cast<double>(errors_per_sample.size());
}

double BerReport::sample_std_error() const noexcept {
    const std::size_t n = errors_per_sample.size();
    if (n < 2 || voxels_per_sample == 0) return 0.0;
    const double denom = static_cast<double>(voxels_per_sample);
    double mean = 0.0;
    for (auto e : errors_per_sample) mean += static_cast<double>(e) / denom;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (auto e : errors_per_sample) ss += std::pow(static_cast<double>(e) / denom - mean, 2);
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

BerReport error_rates(std::span<const std::vector<double>> approximants, std::span<const BinaryVolume> truths,
                      const ClassPdfModel& model, const Decision& decision) {
    check_shapes(approximants, truths);
    BerReport r;
    r.p0 = model.p0;
    r.p1 = model.p1;
    r.threshold = decision.threshold;
    r.degenerate = model.degenerate;
    r.voxels_per_sample = truths.front().size();
    r.errors_per_sample.reserve(truths.size());

    std::size_t wrong[2] = {0, 0};
    std::size_t total[2] = {0, 0};
    for (std::size_t s = 0; s < truths.size(); ++s) {
        const auto truth = truths[s].values();
        std::size_t errors = 0;
        for (std::size_t j = 0; j < truth.size(); ++j) {
            const int c = truth[j];
            ++total[c];
            if (decision.classify(approximants[s][j]) != c) {
                ++wrong[c];
                ++errors;
            }
        }
        r.errors_per_sample.push_back(errors);
    }
    r.eta0 = total[0] ? static_cast<double>(wrong[0]) / static_cast<double>(total[0]) : 0.0;
    r.eta1 = total[1] ? static_cast<double>(wrong[1]) / static_cast<double>(total[1]) : 0.0;
    r.eta_avg = r.eta0 * r.p0 + r.eta1 * r.p1;
    r.model_eta_avg = decision.constant_label ? std::min(model.p0, model.p1) : model_error_rate(model, decision.threshold);
    return r;
}

BerReport score(std::span<const std::vector<double>> approximants, std::span<const BinaryVolume> truths,
                PdfKind kind) {
    const auto model = fit_class_pdfs(approximants, truths, kind);
    return error_rates(approximants, truths, model, decision_threshold(model));
}

std::vector<SweepRow> sweep_summary(std::span<const BerReport> reports) {
    std::map<std::tuple<std::string, double>, std::vector<double>> groups;
    for (const auto& r : reports) groups[{r.method, r.photons_per_ray}].push_back(r.eta_avg);

    std::vector<SweepRow> rows;
    for (const auto& [key, values] : groups) {
        SweepRow row;
        row.method = std::get<0>(key);
        row.photons_per_ray = std::get<1>(key);
        row.n_repeats = values.size();
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        row.mean_ber = mean;
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) ss += (v - mean) * (v - mean);
            const double n = static_cast<double>(values.size());
            row.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

nlohmann::json row_json(const SweepRow& r) {
    nlohmann::json j{{"photons_per_ray", r.photons_per_ray},
                     {"method", r.method},
                     {"mean_ber", r.mean_ber},
                     {"n_repeats", r.n_repeats}};
    j["stderr"] = r.std_error ? nlohmann::json(*r.std_error) : nlohmann::json(nullptr);
    return j;
}

}  // namespace

std::string report_to_json(const BerReport& r) {
    nlohmann::json j{{"eta0", r.eta0},
                     {"eta1", r.eta1},
                     {"p0", r.p0},
                     {"p1", r.p1},
                     {"threshold", r.threshold},
                     {"eta_avg", r.eta_avg},
                     {"model_eta_avg", r.model_eta_avg},
                     {"degenerate", r.degenerate},
                     {"voxels_per_sample", r.voxels_per_sample},
                     {"errors_per_sample", r.errors_per_sample},
                     {"photons_per_ray", r.photons_per_ray},
                     {"method", r.method},
                     {"condition_hash", r.condition_hash},
                     {"repeat", r.repeat}};
    return j.dump(2);
}

BerReport report_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        BerReport r;
        r.eta0 = j.at("eta0");
        r.eta1 = j.at("eta1");
        r.p0 = j.at("p0");
        r.p1 = j.at("p1");
        r.threshold = j.at("threshold");
        r.eta_avg = j.at("eta_avg");
        r.model_eta_avg = j.value("model_eta_avg", 0.0);
        r.degenerate = j.value("degenerate", false);
        r.voxels_per_sample = j.at("voxels_per_sample");
        r.errors_per_sample = j.at("errors_per_sample").get<std::vector<std::size_t>>();
        r.photons_per_ray = j.at("photons_per_ray");
        r.method = j.at("method");
        r.condition_hash = j.value("condition_hash", "");
        r.repeat = j.value("repeat", 0);
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed BER report: ") + e.what());
    }
}

std::string sweep_to_json(std::span<const SweepRow> rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    return arr.dump(2);
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
    std::ostringstream os;
    os << "photons_per_ray,method,mean_ber,stderr,n_repeats\n";
    os << std::setprecision(10);
    for (const auto& r : rows) {
        os << r.photons_per_ray << ',' << r.method << ',' << r.mean_ber << ',';
        if (r.std_error) os << *r.std_error;
        os << ',' << r.n_repeats << '\n';
    }
    return os.str();
}

}  // namespace ictomo::eval
