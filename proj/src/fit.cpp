#include "polariton/fit.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace polariton {

namespace {

// Residual evaluator with the points grouped by cavity frequency so each
// candidate needs one eigen-solve per distinct omega_c.
class Objective {
public:
    Objective(std::span<const Frequency> omegas, std::span<const BranchPoint> points,
              const HopfieldOptions& options)
        : points_(points.begin(), points.end()), options_(options)
    {
        if (points_.empty()) {
            throw DomainError("residual: no branch points");
        }
        std::map<double, std::size_t> index;
        for (const auto& p : points_) {
            if (!(p.omega_c > 0.0) || !(p.omega_meas > 0.0)) {
                throw DomainError("residual: branch point frequencies must be positive");
            }
            if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) {
                throw DomainError("residual: weights must be finite and non-negative");
            }
            total_weight_ += p.weight;
            auto [it, inserted] = index.try_emplace(p.omega_c, cavities_.size());
            if (inserted) {
                cavities_.push_back(p.omega_c);
            }
            group_.push_back(it->second);
            if (p.branch) {
                const int count = static_cast<int>(omegas.size()) + 1;
                if (*p.branch >= count || *p.branch < -count) {
                    throw DomainError("residual: branch hint " + std::to_string(*p.branch) + " out of range for " +
                                      std::to_string(count) + " branches");
                }
            }
        }
        if (!(total_weight_ > 0.0)) {
            throw DomainError("residual: total weight must be positive");
        }
        modes_.reserve(omegas.size());
        for (std::size_t l = 0; l < omegas.size(); ++l) {
            modes_.push_back(PhononMode{"m" + std::to_string(l), omegas[l], Frequency(0.0), Frequency(0.0)});
        }
        validate_modes(modes_);
    }

    std::size_t size() const { return points_.size(); }

    /// Weighted mean-square error; fills per-point data when asked.
    double mean_square(std::span<const double> nu, std::vector<double>* errors = nullptr,
                       std::vector<int>* branches = nullptr, std::vector<double>* margins = nullptr)
    {
        for (std::size_t l = 0; l < modes_.size(); ++l) {
            if (!(nu[l] >= 0.0)) {
                throw DomainError("residual: candidate nu must be non-negative");
            }
            modes_[l].nu = Frequency(nu[l]);
        }
        spectra_.resize(cavities_.size());
        for (std::size_t c = 0; c < cavities_.size(); ++c) {
            spectra_[c] = polariton_frequencies(Frequency(cavities_[c]), modes_, options_);
        }

        double sum = 0.0;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto& p = points_[i];
            const auto& predicted = spectra_[group_[i]];
            int chosen = 0;
            double margin = std::numeric_limits<double>::infinity();
            if (p.branch) {
                const int count = static_cast<int>(predicted.size());
                chosen = *p.branch < 0 ? count + *p.branch : *p.branch;
            } else {
                double best = std::numeric_limits<double>::infinity();
                double second = std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < predicted.size(); ++k) {
                    const double d = std::abs(predicted[k] - p.omega_meas);
                    if (d < best) {
                        second = best;
                        best = d;
                        chosen = static_cast<int>(k);
                    } else if (d < second) {
                        second = d;
                    }
                }
                margin = second - best;
            }
            const double e = predicted[static_cast<std::size_t>(chosen)] - p.omega_meas;
            sum += p.weight * e * e;
            if (errors) {
                errors->push_back(e);
            }
            if (branches) {
                branches->push_back(chosen);
            }
            if (margins) {
                margins->push_back(margin);
            }
        }
        return sum / total_weight_;
    }

private:
    std::vector<BranchPoint> points_;
    HopfieldOptions options_;
    std::vector<PhononMode> modes_;
    std::vector<double> cavities_;
    std::vector<std::size_t> group_;
    std::vector<std::vector<double>> spectra_;
    double total_weight_ = 0.0;
};

std::vector<BranchPoint> decimate(std::span<const BranchPoint> points, std::size_t count)
{
    if (points.size() <= count || count < 2) {
        return {points.begin(), points.end()};
    }
    std::vector<BranchPoint> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(points[k * (points.size() - 1) / (count - 1)]);
    }
    return out;
}

std::vector<double> coarse_ratios(const FitOptions& options)
{
    std::vector<double> ratios(static_cast<std::size_t>(options.coarse_steps));
    const double lo = options.coarse_lo;
    const double hi = options.coarse_hi;
    for (int k = 0; k < options.coarse_steps; ++k) {
        const double t = options.coarse_steps > 1 ? static_cast<double>(k) / (options.coarse_steps - 1) : 0.0;
        ratios[static_cast<std::size_t>(k)] = lo * std::pow(hi / lo, t);
    }
    return ratios;
}

std::vector<double> coarse_start(Objective& objective, std::span<const double> omegas,
                                 double nu_max, const FitOptions& options)
{
    const std::size_t n = omegas.size();
    const auto ratios = coarse_ratios(options);
    const std::size_t steps = ratios.size();
    auto nu_at = [&](std::size_t mode, std::size_t k) {
        return std::min(nu_max, 2.0 * ratios[k] * omegas[mode]);
    };

    std::vector<double> best(n);
    for (std::size_t l = 0; l < n; ++l) {
        best[l] = nu_at(l, steps / 2);
    }
    double best_value = objective.mean_square(best);

    if (n <= options.full_grid_max_modes) {
        std::vector<std::size_t> idx(n, 0);
        std::vector<double> candidate(n);
        while (true) {
            for (std::size_t l = 0; l < n; ++l) {
                candidate[l] = nu_at(l, idx[l]);
            }
            const double value = objective.mean_square(candidate);
            if (value < best_value) {
                best_value = value;
                best = candidate;
            }
            std::size_t l = 0;
            while (l < n && ++idx[l] == steps) {
                idx[l] = 0;
                ++l;
            }
            if (l == n) {
                break;
            }
        }
        return best;
    }

    // Too many modes for the tensor grid: cyclic one-dimensional scans.
    for (int pass = 0; pass < 3; ++pass) {
        for (std::size_t l = 0; l < n; ++l) {
            std::vector<double> candidate = best;
            for (std::size_t k = 0; k < steps; ++k) {
                candidate[l] = nu_at(l, k);
                const double value = objective.mean_square(candidate);
                if (value < best_value) {
                    best_value = value;
                    best = candidate;
                }
            }
        }
    }
    return best;
}

} // namespace

double residual(std::span<const double> nu_candidate, std::span<const Frequency> fixed_omegas,
                std::span<const BranchPoint> points, const HopfieldOptions& options)
{
    if (nu_candidate.size() != fixed_omegas.size()) {
        throw DomainError("residual: candidate size does not match mode count");
    }
    Objective objective(fixed_omegas, points, options);
    return std::sqrt(objective.mean_square(nu_candidate));
}

FitResult fit_couplings(std::span<const BranchPoint> points, std::span<const PhononMode> fixed,
                        const FitOptions& options)
{
    const std::size_t n = fixed.size();
    if (points.size() < n || points.empty()) {
        throw DomainError("fit: under-determined (" + std::to_string(points.size()) + " points for " +
                          std::to_string(n) + " couplings)");
    }
    if (options.coarse_steps < 1 || !(options.coarse_lo > 0.0) || !(options.coarse_hi >= options.coarse_lo)) {
        throw DomainError("fit: invalid coarse grid options");
    }

    FitResult result;
    std::vector<Frequency> omegas;
    for (const auto& mode : fixed) {
        result.labels.push_back(mode.label);
        result.omegas.push_back(mode.omega.thz());
        omegas.push_back(mode.omega);
    }
    double nu_max = 0.0;
    for (const double w : result.omegas) {
        nu_max = std::max(nu_max, 2.0 * w);
    }
    if (options.nu_max) {
        nu_max = *options.nu_max;
    }

    Objective full(omegas, points, options.hopfield);
    std::vector<double> x(n, 0.0);
    if (n > 0) {
        const auto subset = decimate(points, options.coarse_points);
        Objective coarse(omegas, subset, options.hopfield);
        x = coarse_start(coarse, result.omegas, nu_max, options);
    }

    // Coordinate-wise quadratic refinement of the mean-square error. Moves are
    // only accepted when they lower the objective, so the history is monotone.
    const double spacing = options.coarse_steps > 1
                               ? std::pow(options.coarse_hi / options.coarse_lo, 1.0 / (options.coarse_steps - 1)) - 1.0
                               : 0.5;
    std::vector<double> step(n);
    for (std::size_t l = 0; l < n; ++l) {
        step[l] = std::max(x[l] * spacing, 1e-3 * result.omegas[l]);
    }
    double f = full.mean_square(x);
    result.history.push_back(std::sqrt(f));

    auto clamp_nu = [&](double v) { return std::clamp(v, 0.0, nu_max); };
    int iter = 0;
    bool converged = (n == 0);
    while (!converged && iter < options.max_iterations) {
        ++iter;
        const double f_start = f;
        const std::vector<double> x_start = x;
        for (std::size_t l = 0; l < n; ++l) {
            const double h = step[l];
            std::vector<double> trial = x;
            const double x0 = x[l];
            const double xm = clamp_nu(x0 - h);
            const double xp = clamp_nu(x0 + h);
            trial[l] = xm;
            const double fm = xm != x0 ? full.mean_square(trial) : f;
            trial[l] = xp;
            const double fp = xp != x0 ? full.mean_square(trial) : f;

            double best_x = x0;
            double best_f = f;
            bool at_edge = false;
            if (fm < best_f) {
                best_f = fm;
                best_x = xm;
                at_edge = true;
            }
            if (fp < best_f) {
                best_f = fp;
                best_x = xp;
                at_edge = true;
            }
            // vertex of the parabola through (xm, fm), (x0, f), (xp, fp)
            if (xm < x0 && x0 < xp) {
                const double a = (x0 - xm) * (f - fp);
                const double b = (x0 - xp) * (f - fm);
                const double denom = a - b;
                if (denom != 0.0 && (fm - f) / (x0 - xm) + (fp - f) / (xp - x0) > 0.0) {
                    const double xv = clamp_nu(std::clamp(
                        x0 - 0.5 * ((x0 - xm) * a - (x0 - xp) * b) / denom, x0 - 4.0 * h, x0 + 4.0 * h));
                    if (xv != x0 && xv != xm && xv != xp) {
                        trial[l] = xv;
                        const double fv = full.mean_square(trial);
                        if (fv < best_f) {
                            best_f = fv;
                            best_x = xv;
                            at_edge = false;
                        }
                    }
                }
            }

            if (best_f < f) {
                const double moved = std::abs(best_x - x0);
                x[l] = best_x;
                f = best_f;
                step[l] = at_edge ? 2.0 * h : std::max(moved, 0.25 * h);
            } else {
                step[l] = 0.25 * h;
            }
        }

        // pattern move along the net displacement of this sweep
        if (n > 1) {
            std::vector<double> trial(n);
            bool differs = false;
            for (std::size_t l = 0; l < n; ++l) {
                trial[l] = clamp_nu(2.0 * x[l] - x_start[l]);
                differs = differs || trial[l] != x[l];
            }
            if (differs) {
                const double ft = full.mean_square(trial);
                if (ft < f) {
                    f = ft;
                    x = trial;
                }
            }
        }

        result.history.push_back(std::sqrt(f));
        const double improvement = std::sqrt(f_start) - std::sqrt(f);
        const double largest_step = *std::max_element(step.begin(), step.end());
        converged = improvement < options.tolerance && largest_step < options.tolerance;
    }

    std::vector<double> margins;
    const double ms = full.mean_square(x, &result.per_point_residuals, &result.assigned_branch, &margins);
    result.rms_residual = std::sqrt(ms);
    result.ambiguous.resize(margins.size());
    for (std::size_t i = 0; i < margins.size(); ++i) {
        result.ambiguous[i] = margins[i] < options.ambiguity_margin;
    }
    result.nu = x;
    for (std::size_t l = 0; l < n; ++l) {
        result.normalized_couplings.push_back(
            normalized_coupling_at_resonance(Frequency(x[l]), Frequency(result.omegas[l])));
    }
    result.iterations = iter;
    result.converged = converged;
    return result;
}

PhaseComparison compare_phases(const FitResult& fit_high, const FitResult& fit_low)
{
    if (!fit_high.converged || !fit_low.converged) {
        throw DomainError("compare_phases: both fits must have converged");
    }
    auto check_unique = [](const FitResult& fit) {
        std::set<std::string> seen(fit.labels.begin(), fit.labels.end());
        if (seen.size() != fit.labels.size()) {
            throw DomainError("compare_phases: duplicate mode labels");
        }
        if (fit.nu.size() != fit.labels.size() || fit.normalized_couplings.size() != fit.labels.size()) {
            throw DomainError("compare_phases: inconsistent fit result");
        }
    };
    check_unique(fit_high);
    check_unique(fit_low);

    PhaseComparison report;
    for (std::size_t i = 0; i < fit_high.labels.size(); ++i) {
        const auto it = std::find(fit_low.labels.begin(), fit_low.labels.end(), fit_high.labels[i]);
        if (it == fit_low.labels.end()) {
            report.only_high.push_back(fit_high.labels[i]);
            continue;
        }
        const auto j = static_cast<std::size_t>(it - fit_low.labels.begin());
        CouplingChange c;
        c.label = fit_high.labels[i];
        c.g_over_omega_high = fit_high.normalized_couplings[i];
        c.g_over_omega_low = fit_low.normalized_couplings[j];
        c.nu_high = fit_high.nu[i];
        c.nu_low = fit_low.nu[j];
        c.relative_change_g_over_omega = (c.g_over_omega_low - c.g_over_omega_high) / c.g_over_omega_high;
        c.relative_change_nu = (c.nu_low - c.nu_high) / c.nu_high;
        report.shared.push_back(c);
    }
    for (const auto& label : fit_low.labels) {
        if (std::find(fit_high.labels.begin(), fit_high.labels.end(), label) == fit_high.labels.end()) {
            report.only_low.push_back(label);
        }
    }
    if (report.shared.empty()) {
        throw DomainError("compare_phases: the fits share no mode labels");
    }
    return report;
}

std::vector<BranchPoint> synthesize_points(std::span<const PhononMode> modes,
                                           std::span<const double> omega_c,
                                           const HopfieldOptions& options)
{
    std::vector<BranchPoint> points;
    for (const double wc : omega_c) {
        for (const double w : polariton_frequencies(Frequency(wc), modes, options)) {
            points.push_back(BranchPoint{wc, w, 1.0, std::nullopt});
        }
    }
    return points;
}

} // namespace polariton
