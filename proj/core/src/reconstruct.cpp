#include "ictomo/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ictomo/errors.hpp"

namespace ictomo::recon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void SolverConfig::validate() const {
    if (!(relative_tolerance > 0)) throw ConfigError("solver tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("solver needs at least one iteration");
    if (!(armijo_c > 0 && armijo_c < 1)) throw ConfigError("Armijo constant must lie in (0, 1)");
    if (!(backtrack_factor > 0 && backtrack_factor < 1)) throw ConfigError("backtrack factor must lie in (0, 1)");
    if (max_backtracks < 1) throw ConfigError("need at least one backtracking step");
    if (!(regularization_weight >= 0)) throw ConfigError("regularization weight must be >= 0");
    if (!(init_value >= 0 && init_value <= 1)) throw ConfigError("init value must lie in [0, 1]");
}

double poisson_nll(std::span<const double> counts, std::span<const double> g0) {
    if (counts.size() != g0.size()) throw DomainError("poisson_nll: size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            if (!(g0[i] > 0)) throw DomainError("zero expected count under a positive measurement (ray " + std::to_string(i) + ")");
            total += g0[i] - counts[i] * std::log(g0[i]);
        } else {
            total += g0[i];
        }
    }
    return total;
}

PoissonObjective::PoissonObjective(const forward::SystemMatrix& a, std::span<const double> counts,
                                   const forward::Spectrum& spectrum, Dims dims, double regularization_weight)
    : a_(a), counts_(counts), spectrum_(spectrum), dims_(dims), reg_weight_(regularization_weight),
      proj_(a.rows()), dldp_(a.rows()) {
    if (counts.size() != a.rows()) throw DomainError("measurement count does not match system matrix rows");
    if (dims.size() != a.cols()) throw DomainError("volume dims do not match system matrix columns");
    for (double g : counts) {
        if (!(g >= 0)) throw DomainError("photon counts must be non-negative");
        if (g > 0) saturated_ += g - g * std::log(g);
    }
}

double PoissonObjective::data_term(std::span<const double> projections, std::span<double> dldp) const {
    const double n = spectrum_.photons_per_ray;
    double total = 0.0;
    for (std::size_t i = 0; i < projections.size(); ++i) {
        double g0 = 0.0;
        double dg0 = 0.0;  // d g0 / d p
        for (const auto& line : spectrum_.lines) {
            const double term = line.detector_efficiency * n * line.weight * std::exp(-line.alpha_per_um * projections[i]);
            g0 += term;
            dg0 -= line.alpha_per_um * term;
        }
        const double g = counts_[i];
        if (g > 0) {
            if (!(g0 > 0)) return kInf;
            total += g0 - g * std::log(g0);
            if (!dldp.empty()) dldp[i] = (1.0 - g / g0) * dg0;
        } else {
            total += g0;
            if (!dldp.empty()) dldp[i] = dg0;
        }
    }
    return total;
}

double PoissonObjective::value(std::span<const double> f) const {
    a_.apply(f, proj_);
    double v = data_term(proj_, {});
    if (reg_weight_ > 0) v += reg_weight_ * smoothness_penalty(f, dims_);
    return v;
}

double PoissonObjective::value_and_gradient(std::span<const double> f, std::span<double> grad) const {
    a_.apply(f, proj_);
    double v = data_term(proj_, dldp_);
    if (!std::isfinite(v)) return v;
    a_.apply_transpose(dldp_, grad);
    if (reg_weight_ > 0) {
        v += reg_weight_ * smoothness_penalty(f, dims_);
        add_smoothness_gradient(f, dims_, reg_weight_, grad);
    }
    return v;
}

double neg_log_likelihood(std::span<const double> f, std::span<const double> counts, const forward::SystemMatrix& a,
                          const forward::Spectrum& spectrum) {
    return poisson_nll(counts, forward::expected_counts(a, f, spectrum));
}

std::vector<double> nll_gradient(std::span<const double> f, std::span<const double> counts,
                                 const forward::SystemMatrix& a, const forward::Spectrum& spectrum) {
    // Validates inputs and raises the documented domain error.
    (void)neg_log_likelihood(f, counts, a, spectrum);
    Dims flat{static_cast<std::uint32_t>(a.cols()), 1, 1};
    PoissonObjective objective(a, counts, spectrum, flat);
    std::vector<double> grad(a.cols());
    objective.value_and_gradient(f, grad);
    return grad;
}

double smoothness_penalty(std::span<const double> f, Dims d) {
    double s = 0.0;
    for (std::uint32_t k = 0; k < d.nz; ++k) {
        for (std::uint32_t j = 0; j < d.ny; ++j) {
            for (std::uint32_t i = 0; i < d.nx; ++i) {
                const double v = f[d.index(i, j, k)];
                if (i + 1 < d.nx) s += std::pow(v - f[d.index(i + 1, j, k)], 2);
                if (j + 1 < d.ny) s += std::pow(v - f[d.index(i, j + 1, k)], 2);
                if (k + 1 < d.nz) s += std::pow(v - f[d.index(i, j, k + 1)], 2);
            }
        }
    }
    return s;
}

void add_smoothness_gradient(std::span<const double> f, Dims d, double weight, std::span<double> grad) {
    auto pair = [&](std::size_t p, std::size_t q) {
        const double diff = 2.0 * weight * (f[p] - f[q]);
        grad[p] += diff;
        grad[q] -= diff;
    };
    for (std::uint32_t k = 0; k < d.nz; ++k) {
        for (std::uint32_t j = 0; j < d.ny; ++j) {
            for (std::uint32_t i = 0; i < d.nx; ++i) {
                const std::size_t p = d.index(i, j, k);
                if (i + 1 < d.nx) pair(p, d.index(i + 1, j, k));
                if (j + 1 < d.ny) pair(p, d.index(i, j + 1, k));
                if (k + 1 < d.nz) pair(p, d.index(i, j, k + 1));
            }
        }
    }
}

Approximant reconstruct_ml(const forward::Measurements& measurements, const forward::SystemMatrix& a,
                           const forward::Spectrum& spectrum, Dims dims, const SolverConfig& config,
                           std::optional<std::span<const double>> warm_start) {
    config.validate();
    spectrum.validate();
    const PoissonObjective objective(a, measurements.counts, spectrum, dims, config.regularization_weight);
    const std::size_t n = dims.size();

    Approximant out;
    out.dims = dims;
    std::vector<double> x(n, config.init_value);
    if (warm_start) {
        if (warm_start->size() != n) throw DomainError("warm start has the wrong size");
        for (std::size_t j = 0; j < n; ++j) x[j] = std::clamp((*warm_start)[j], 0.0, 1.0);
    }

    std::vector<double> grad(n), trial(n), trial_grad(n);
    double f = objective.value_and_gradient(x, grad);
    if (!std::isfinite(f)) {
        throw DomainError("solver: objective is not finite at the initial volume");
    }
    out.objective_trace.push_back(f);
    const double floor_value = objective.saturated_value();

    auto project_step = [&](double step) {
        for (std::size_t j = 0; j < n; ++j) trial[j] = std::clamp(x[j] - step * grad[j], 0.0, 1.0);
    };

    // First trial step moves the steepest voxel by at most the full box width.
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    double step = gmax > 0 ? 1.0 / gmax : 1.0;

    out.stop_reason = "max_iterations";
    int it = 0;
    for (; it < config.max_iterations; ++it) {
        bool accepted = false;
        bool stationary = false;
        double f_trial = f;
        for (int bt = 0; bt < config.max_backtracks; ++bt) {
            project_step(step);
            double descent = 0.0;  // grad . (trial - x)
            for (std::size_t j = 0; j < n; ++j) descent += grad[j] * (trial[j] - x[j]);
            if (!(descent < 0)) {
                stationary = true;
                break;
            }
            f_trial = objective.value(trial);
            if (f_trial <= f + config.armijo_c * descent) {
                accepted = true;
                break;
            }
            step *= config.backtrack_factor;
        }
        if (stationary) {
            out.converged = true;
            out.stop_reason = "stationary";
            break;
        }
        if (!accepted) {
            out.converged = true;
            out.stop_reason = "line_search_stalled";
            break;
        }

        f_trial = objective.value_and_gradient(trial, trial_grad);
        double ss = 0.0, sy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = trial[j] - x[j];
            ss += s * s;
            sy += s * (trial_grad[j] - grad[j]);
        }
        const double decrease = f - f_trial;
        x.swap(trial);
        grad.swap(trial_grad);
        f = f_trial;
        out.objective_trace.push_back(f);

        const double excess = std::max(f - floor_value, std::numeric_limits<double>::min());
        if (decrease / excess < config.relative_tolerance) {
            ++it;
            out.converged = true;
            out.stop_reason = "relative_tolerance";
            break;
        }
        // Barzilai-Borwein step for the next trial.
        step = sy > 0 ? std::clamp(ss / sy, 1e-30, 1e30) : step * 2.0;
    }

    out.iterations = it;
    out.final_objective = f;
    out.values = std::move(x);
    return out;
}

}  // namespace ictomo::recon
