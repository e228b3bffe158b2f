#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ictomo/detection.hpp"
#include "ictomo/spectrum.hpp"
#include "ictomo/system_matrix.hpp"
#include "ictomo/volume.hpp"

// Poisson maximum-likelihood transmission reconstruction.
//
// The objective is the negative log-likelihood with the data-only ln(g!)
// term dropped,
//
//   L(f) = sum_i [ g0_i(f) - g_i ln g0_i(f) ],   g0 = expected_counts(A, f),
//
// optionally plus weight * sum over neighbouring voxel pairs (f_j - f_k)^2.
// It is minimised over the box [0, 1]^N.

namespace ictomo::recon {

struct SolverConfig {
    double init_value = 0.5;
    int max_iterations = 500;
    /// Stop when the accepted decrease, relative to the objective's excess
    /// over the saturated (g0 = g) likelihood, falls below this.
    double relative_tolerance = 1e-8;
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    int max_backtracks = 60;
    double regularization_weight = 0.0;

    /// ConfigError if tolerance <= 0, max_iterations < 1 or a line-search
    /// parameter is outside its open interval.
    void validate() const;
};

/// Continuous reconstruction in [0, 1]^N plus solver provenance.
struct Approximant {
    Dims dims;
    std::vector<double> values;
    int iterations = 0;
    double final_objective = 0.0;
    bool converged = false;
    std::string stop_reason;
    std::vector<double> objective_trace;  ///< objective after init and after every accepted step
};

/// sum_i [g0_i - g_i ln g0_i]. DomainError when g0_i = 0 with g_i > 0.
[[nodiscard]] double poisson_nll(std::span<const double> counts, std::span<const double> g0);

/// Objective and gradient over a fixed system matrix, counts and spectrum.
class PoissonObjective {
public:
    PoissonObjective(const forward::SystemMatrix& a, std::span<const double> counts, const forward::Spectrum& spectrum,
                     Dims dims, double regularization_weight = 0.0);

    /// Objective value; +inf where the likelihood is undefined.
    [[nodiscard]] double value(std::span<const double> f) const;
    /// Objective value; writes the gradient into `grad`.
    double value_and_gradient(std::span<const double> f, std::span<double> grad) const;
    /// Objective at g0 = g (a lower bound on the data term).
    [[nodiscard]] double saturated_value() const noexcept { return saturated_; }

private:
    double data_term(std::span<const double> projections, std::span<double> dldp) const;

    const forward::SystemMatrix& a_;
    std::span<const double> counts_;
    const forward::Spectrum& spectrum_;
    Dims dims_;
    double reg_weight_;
    double saturated_ = 0.0;
    mutable std::vector<double> proj_;
    mutable std::vector<double> dldp_;
};

/// Data term for a volume. DomainError under the same condition as poisson_nll.
[[nodiscard]] double neg_log_likelihood(std::span<const double> f, std::span<const double> counts,
                                        const forward::SystemMatrix& a, const forward::Spectrum& spectrum);

/// Analytic gradient of neg_log_likelihood with respect to f.
[[nodiscard]] std::vector<double> nll_gradient(std::span<const double> f, std::span<const double> counts,
                                               const forward::SystemMatrix& a, const forward::Spectrum& spectrum);

/// sum over face-adjacent voxel pairs of (f_j - f_k)^2.
[[nodiscard]] double smoothness_penalty(std::span<const double> f, Dims dims);
/// grad += weight * d(smoothness_penalty)/df
void add_smoothness_gradient(std::span<const double> f, Dims dims, double weight, std::span<double> grad);

/// Projected gradient descent with Barzilai-Borwein trial steps and Armijo
/// backtracking along the projection arc. Accepted objectives never
/// increase. `warm_start`, when given, replaces the uniform init_value.
/// DomainError if the objective is not finite at the start.
[[nodiscard]] Approximant reconstruct_ml(const forward::Measurements& measurements, const forward::SystemMatrix& a,
                                         const forward::Spectrum& spectrum, Dims dims, const SolverConfig& config = {},
                                         std::optional<std::span<const double>> warm_start = std::nullopt);

}  // namespace ictomo::recon
