#pragma once

#include "polariton/hopfield.hpp"
#include "polariton/model.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace polariton {

/// Polariton frequencies and compositions over a cavity-frequency grid.
///
/// Within each grid point the modes are stored in ascending frequency order.
/// `labels(i, k)` is the connected branch label of the k-th ascending mode at
/// grid point i; labels follow eigenvector character across the sweep.
struct DispersionMap {
    std::vector<double> omega_c_grid;
    std::vector<PhononMode> modes;
    std::vector<std::vector<PolaritonMode>> points;
    Eigen::MatrixXi labels;            // grid x (N+1)
    std::vector<bool> ambiguous;       // per grid point: fell back to frequency matching

    std::size_t size() const { return omega_c_grid.size(); }
    std::size_t branch_count() const { return modes.size() + 1; }

    /// grid x (N+1), ascending within each row.
    Eigen::MatrixXd branches() const;

    /// Frequencies of connected branch `label` along the grid.
    std::vector<double> branch_by_label(int label) const;
    /// Polariton mode carrying `label` at grid point i.
    const PolaritonMode& mode_by_label(std::size_t i, int label) const;
};

struct SweepOptions {
    HopfieldOptions hopfield;
    /// Minimum Bogoliubov overlap accepted for eigenvector-based labelling.
    double overlap_threshold = 0.5;
};

DispersionMap sweep(std::span<const PhononMode> modes, std::span<const double> omega_c_grid,
                    const SweepOptions& options = {});

/// Relabels branches by maximizing the Bogoliubov overlap of coefficient
/// vectors between neighbouring grid points. Points where the best match has
/// overlap below the threshold fall back to nearest-frequency matching and are
/// flagged ambiguous.
DispersionMap connect_branches(DispersionMap map, double overlap_threshold = 0.5);

/// Positive roots of the secular equation
///
///   Omega^2 (1 - sum_l nu_l^2 / (Omega^2 - w_l^2)) = omega_c^2,
///
/// found by bisection between the poles w_l^2. Shares no code with the
/// dynamical-matrix route and serves as its oracle. Ascending.
std::vector<double> secular_roots(std::span<const PhononMode> modes, Frequency omega_c);

/// One row of a temperature scan.
struct TemperatureSample {
    double t_kelvin = 0.0;
    Phase phase = Phase::Tetragonal;
    std::vector<double> branches;  // ascending
};

struct ChangePoint {
    double t_before = 0.0;
    double t_after = 0.0;
    std::size_t count_before = 0;
    std::size_t count_after = 0;
};

struct TemperatureScan {
    Frequency omega_c;
    std::vector<TemperatureSample> samples;

    /// Grid temperatures at which the branch count differs from the previous sample.
    std::vector<ChangePoint> change_points() const;
};

TemperatureScan scan_temperature(const MaterialModel& material, Frequency omega_c,
                                 std::span<const double> t_grid,
                                 const HopfieldOptions& options = {});

/// Evenly spaced inclusive grid lo, lo+step, ..., hi (hi kept if within step/2).
std::vector<double> linear_grid(double lo, double hi, double step);

} // namespace polariton
