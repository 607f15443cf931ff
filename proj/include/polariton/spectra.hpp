#pragma once

// Classical damped response of the cavity-phonon system. The coupled
// transmittance is |1/D(w)|^2 with
//
//   D(w) = w^2 + i kappa w - wc^2 - sum_l nu_l^2 w^2 / (w^2 - w_l^2 + i gamma_l w),
//
// whose zeros at kappa = gamma = 0 are exactly the polariton frequencies.

#include "polariton/fit.hpp"
#include "polariton/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polariton {

struct DampingSet {
    Frequency kappa;                 // cavity linewidth
    std::vector<Frequency> gammas;   // one per phonon mode

    /// kappa = 0.1 THz, gamma = 0.05 THz for every mode.
    static DampingSet defaults(std::size_t mode_count);
    /// Uses each mode's own gamma.
    static DampingSet from_modes(std::span<const PhononMode> modes, Frequency kappa);
};

struct FilmParameters {
    double eps_inf = 5.0;
    double thickness_nm = 200.0;
    double substrate_index = 2.1;  // crystalline quartz at THz frequencies
};

struct SpectrumMetadata {
    std::string kind;  // "coupled" or "film"
    std::optional<double> omega_c;
    std::optional<double> temperature;
    bool thin_film_warning = false;
};

struct Spectrum {
    std::vector<double> omega;
    std::vector<double> transmittance;  // max-normalized to 1
    SpectrumMetadata metadata;
};

/// Normalized transmittance on a (rows = omega, cols = omega_c) grid.
struct TransmittanceMap {
    std::vector<double> omega_grid;
    std::vector<double> omega_c_grid;
    Eigen::MatrixXd values;

    Spectrum column(std::size_t j) const;
};

Spectrum coupled_transmittance(std::span<const PhononMode> modes, Frequency omega_c,
                               const DampingSet& damping, std::span<const double> omega_grid);

/// Bare film on a substrate; dampings are taken from the modes.
Spectrum bare_film_transmittance(std::span<const PhononMode> modes, const FilmParameters& film,
                                 std::span<const double> omega_grid);

TransmittanceMap synth_map(std::span<const PhononMode> modes, std::span<const double> omega_c_grid,
                           const DampingSet& damping, std::span<const double> omega_grid);

/// Local maxima with topographic prominence >= min_prominence (relative to the
/// max-normalized spectrum), refined by 3-point parabolic interpolation. Ascending.
std::vector<double> extract_peaks(const Spectrum& spectrum, double min_prominence);

/// Runs extract_peaks on every map column and returns fit-ready branch points.
std::vector<BranchPoint> extract_branch_points(const TransmittanceMap& map, double min_prominence);

} // namespace polariton
