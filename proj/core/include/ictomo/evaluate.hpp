#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ictomo/volume.hpp"

// Bit-error-rate scoring of continuous reconstructions against binary truth.
//
// 1. Pool voxel values by true class and fit a class-conditional density
//    p(value | class) for each, with class priors p0, p1 taken from the
//    evaluation set itself.
// 2. Threshold where p1 * p(value | 1) = p0 * p(value | 0), i.e. where the
//    two posteriors cross between the class means.
// 3. Class error rates eta0, eta1 are the misclassified fractions.
// 4. eta_avg = eta0 * p0 + eta1 * p1.

namespace ictomo::eval {

inline constexpr double kStdFloor = 1e-6;

enum class PdfKind { Gaussian, Histogram };

struct Gaussian {
    double mean = 0.0;
    double stddev = kStdFloor;

    [[nodiscard]] double pdf(double x) const noexcept;
    [[nodiscard]] double cdf(double x) const noexcept;
};

struct ClassPdfModel {
    PdfKind kind = PdfKind::Gaussian;
    Gaussian class0;
    Gaussian class1;
    /// Histogram alternative: densities over [0, 1] in bins of bin_width.
    double bin_width = 0.02;
    std::vector<double> hist0;
    std::vector<double> hist1;
    double p0 = 0.5;
    double p1 = 0.5;
    std::size_t n0 = 0;
    std::size_t n1 = 0;
    /// A class had no voxels; its error rate is reported as 0.
    bool degenerate = false;

    [[nodiscard]] double density(int cls, double x) const noexcept;
};

/// Pools voxels by ground-truth class. Throws DomainError on shape mismatch
/// or an empty evaluation set.
[[nodiscard]] ClassPdfModel fit_class_pdfs(std::span<const std::vector<double>> approximants,
                                           std::span<const BinaryVolume> truths, PdfKind kind = PdfKind::Gaussian,
                                           double bin_width = 0.02);

struct Decision {
    double threshold = 0.5;
    /// Set when both class densities coincide: every voxel gets the prior
    /// majority label.
    std::optional<int> constant_label;
    /// False when no posterior crossing lies between the class means and the
    /// 0.5 fallback is in use.
    bool interior_root = true;
    /// Class 1 sits above the threshold (false only when the class-1 mean
    /// falls below the class-0 mean).
    bool ones_above = true;

    [[nodiscard]] int classify(double value) const noexcept {
        if (constant_label) return *constant_label;
        return (value >= threshold) == ones_above ? 1 : 0;
    }
};

[[nodiscard]] Decision decision_threshold(const ClassPdfModel& model);

/// Error rate the fitted model predicts for a plain threshold at t
/// (tail masses of the class densities weighted by the priors).
[[nodiscard]] double model_error_rate(const ClassPdfModel& model, double t);

struct BerReport {
    double eta0 = 0.0;
    double eta1 = 0.0;
    double p0 = 0.0;
    double p1 = 0.0;
    double threshold = 0.5;
    double eta_avg = 0.0;
    double model_eta_avg = 0.0;  ///< fitted-density prediction at the same threshold
    bool degenerate = false;
    std::size_t voxels_per_sample = 0;
    std::vector<std::size_t> errors_per_sample;

    // Condition metadata.
    double photons_per_ray = 0.0;
    std::string method;
    std::string condition_hash;
    int repeat = 0;

    [[nodiscard]] double mean_errors_per_sample() const noexcept;
    /// Across-sample standard error of the per-sample error fraction (0 for a single sample).
    [[nodiscard]] double sample_std_error() const noexcept;
};

[[nodiscard]] BerReport error_rates(std::span<const std::vector<double>> approximants,
                                    std::span<const BinaryVolume> truths, const ClassPdfModel& model,
                                    const Decision& decision);

/// fit_class_pdfs + decision_threshold + error_rates.
[[nodiscard]] BerReport score(std::span<const std::vector<double>> approximants, std::span<const BinaryVolume> truths,
                              PdfKind kind = PdfKind::Gaussian);

/// BER of exactly one misclassified voxel per sample.
[[nodiscard]] constexpr double single_error_line(const Dims& dims) noexcept {
    return 1.0 / static_cast<double>(dims.size());
}

struct SweepRow {
    double photons_per_ray = 0.0;
    std::string method;
    double mean_ber = 0.0;
    std::optional<double> std_error;  ///< absent with a single repeat
    std::size_t n_repeats = 0;
};

/// Groups reports by (photons_per_ray, method) and averages eta_avg over
/// repeats. Rows come out sorted by method, then photon budget.
[[nodiscard]] std::vector<SweepRow> sweep_summary(std::span<const BerReport> reports);

[[nodiscard]] std::string report_to_json(const BerReport& report);
[[nodiscard]] BerReport report_from_json(const std::string& text);
[[nodiscard]] std::string sweep_to_json(std::span<const SweepRow> rows);
/// Columns: photons_per_ray,method,mean_ber,stderr,n_repeats (stderr empty when absent).
[[nodiscard]] std::string sweep_to_csv(std::span<const SweepRow> rows);

}  // namespace ictomo::eval
