#pragma once

#include "polariton/hopfield.hpp"
#include "polariton/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polariton {

/// A measured polariton peak at a given cavity frequency.
struct BranchPoint {
    double omega_c = 0.0;     // THz
    double omega_meas = 0.0;  // THz
    double weight = 1.0;
    std::optional<int> branch;  // ascending branch index, 0 = lowest, -1 = highest
};

struct FitOptions {
    /// Upper bound for every nu; defaults to 2 * max(omega_l).
    std::optional<double> nu_max;
    /// Coarse initialization: log-spaced nu/omega values in [lo, hi].
    double coarse_lo = 0.05;
    double coarse_hi = 1.0;
    int coarse_steps = 20;
    /// Coarse stage evaluates at most this many points (evenly decimated).
    std::size_t coarse_points = 16;
    /// Above this many modes the coarse stage scans one coordinate at a time.
    std::size_t full_grid_max_modes = 3;
    /// Stop when a sweep improves the rms residual by less than this (THz)
    /// and every coordinate step has shrunk below it.
    double tolerance = 1e-6;
    int max_iterations = 500;
    /// Points whose two nearest branches are closer than this are flagged.
    double ambiguity_margin = 0.02;
    HopfieldOptions hopfield;
};

struct FitResult {
    std::vector<std::string> labels;
    std::vector<double> omegas;
    std::vector<double> nu;
    std::vector<double> normalized_couplings;  // nu / (2 omega): g/omega at resonance
    double rms_residual = 0.0;
    std::vector<double> per_point_residuals;   // predicted - measured, THz
    std::vector<int> assigned_branch;
    std::vector<bool> ambiguous;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;  // rms residual after each refinement sweep
};

/// Weighted rms distance between measured peaks and the model branches they
/// are assigned to (hint if given, otherwise nearest). Throws DomainError on
/// empty point sets or negative candidates.
double residual(std::span<const double> nu_candidate, std::span<const Frequency> fixed_omegas,
                std::span<const BranchPoint> points, const HopfieldOptions& options = {});

/// Fits nu for each phonon (omega and labels taken from `fixed`, nu ignored).
FitResult fit_couplings(std::span<const BranchPoint> points, std::span<const PhononMode> fixed,
                        const FitOptions& options = {});

/// Relative change of one mode's coupling between two fits.
struct CouplingChange {
    std::string label;
    double g_over_omega_high = 0.0;
    double g_over_omega_low = 0.0;
    double nu_high = 0.0;
    double nu_low = 0.0;
    double relative_change_g_over_omega = 0.0;  // (low - high) / high
    double relative_change_nu = 0.0;
};

struct PhaseComparison {
    std::vector<CouplingChange> shared;
    std::vector<std::string> only_high;  // present above the transition only
    std::vector<std::string> only_low;   // present below the transition only
};

/// Compares fits above (high) and below (low) the transition, matching modes
/// by label. Throws DomainError if either fit did not converge, a fit carries
/// duplicate labels, or no label is shared.
PhaseComparison compare_phases(const FitResult& fit_high, const FitResult& fit_low);

/// Synthetic branch points: every model branch at every omega_c.
std::vector<BranchPoint> synthesize_points(std::span<const PhononMode> modes,
                                           std::span<const double> omega_c,
                                           const HopfieldOptions& options = {});

} // namespace polariton
