#include "polariton/spectra.hpp"

#include "polariton/errors.hpp"
#include "polariton/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polariton {

namespace {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

void check_grid(std::span<const double> grid, const char* what)
{
    if (grid.empty()) {
        throw DomainError(std::string(what) + " grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
            throw DomainError(std::string(what) + " grid must be positive");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw DomainError(std::string(what) + " grid must be strictly increasing");
        }
    }
}

struct OscillatorArrays {
    std::vector<double> omega2;
    std::vector<double> nu2;
    std::vector<double> gamma;

    kernels::Oscillators view() const { return {omega2, nu2, gamma}; }
};

OscillatorArrays pack(std::span<const PhononMode> modes, std::span<const Frequency> gammas)
{
    OscillatorArrays osc;
    for (std::size_t l = 0; l < modes.size(); ++l) {
        osc.omega2.push_back(modes[l].omega.thz() * modes[l].omega.thz());
        osc.nu2.push_back(modes[l].nu.thz() * modes[l].nu.thz());
        osc.gamma.push_back(gammas[l].thz());
    }
    return osc;
}

void normalize_max(std::span<double> values)
{
    const double peak = *std::max_element(values.begin(), values.end());
    if (!(peak > 0.0) || !std::isfinite(peak)) {
        throw NumericalError("spectrum has no finite positive maximum");
    }
    for (double& v : values) {
        v /= peak;
    }
}

void check_damping(std::span<const PhononMode> modes, const DampingSet& damping)
{
    if (damping.gammas.size() != modes.size()) {
        throw DomainError("damping set needs one gamma per phonon mode");
    }
    bool any_positive = damping.kappa.thz() > 0.0;
    if (!(damping.kappa.thz() >= 0.0)) {
        throw DomainError("cavity damping must be non-negative");
    }
    for (const auto g : damping.gammas) {
        if (!(g.thz() >= 0.0)) {
            throw DomainError("phonon dampings must be non-negative");
        }
        any_positive = any_positive || g.thz() > 0.0;
    }
    if (!any_positive) {
        throw DomainError("all dampings are zero: transmittance peaks are undefined");
    }
}

} // namespace

DampingSet DampingSet::defaults(std::size_t mode_count)
{
    return DampingSet{Frequency(0.1), std::vector<Frequency>(mode_count, Frequency(0.05))};
}

DampingSet DampingSet::from_modes(std::span<const PhononMode> modes, Frequency kappa)
{
    DampingSet d{kappa, {}};
    for (const auto& mode : modes) {
        d.gammas.push_back(mode.gamma);
    }
    return d;
}

Spectrum TransmittanceMap::column(std::size_t j) const
{
    Spectrum s;
    s.omega = omega_grid;
    s.transmittance.resize(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        s.transmittance[i] = values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    s.metadata.kind = "coupled";
    s.metadata.omega_c = omega_c_grid[j];
    return s;
}

Spectrum coupled_transmittance(std::span<const PhononMode> modes, Frequency omega_c,
                               const DampingSet& damping, std::span<const double> omega_grid)
{
    validate_modes(modes);
    check_damping(modes, damping);
    check_grid(omega_grid, "frequency");
    if (!(omega_c.thz() > 0.0)) {
        throw DomainError("cavity frequency must be positive");
    }

    const OscillatorArrays osc = pack(modes, damping.gammas);
    Spectrum s;
    s.omega.assign(omega_grid.begin(), omega_grid.end());
    s.transmittance.resize(omega_grid.size());
    kernels::coupled_response(omega_grid, omega_c.thz(), damping.kappa.thz(), osc.view(), s.transmittance);
    normalize_max(s.transmittance);
    s.metadata.kind = "coupled";
    s.metadata.omega_c = omega_c.thz();
    return s;
}

Spectrum bare_film_transmittance(std::span<const PhononMode> modes, const FilmParameters& film,
                                 std::span<const double> omega_grid)
{
    validate_modes(modes);
    check_grid(omega_grid, "frequency");
    if (!(film.thickness_nm > 0.0) || !(film.substrate_index > 0.0) || !(film.eps_inf > 0.0)) {
        throw DomainError("film thickness, substrate index and eps_inf must be positive");
    }
    std::vector<Frequency> gammas;
    for (const auto& mode : modes) {
        if (mode.nu.thz() > 0.0 && !(mode.gamma.thz() > 0.0)) {
            throw DomainError("phonon '" + mode.label + "' needs a positive damping for film spectra");
        }
        gammas.push_back(mode.gamma);
    }

    const OscillatorArrays osc = pack(modes, gammas);
    const double k_per_thz = 2.0 * std::numbers::pi * film.thickness_nm * 1e-9 * 1e12 / kSpeedOfLight;

    Spectrum s;
    s.omega.assign(omega_grid.begin(), omega_grid.end());
    s.transmittance.resize(omega_grid.size());
    kernels::film_transmittance(omega_grid, film.eps_inf, k_per_thz, film.substrate_index, osc.view(),
                                s.transmittance);
    normalize_max(s.transmittance);
    s.metadata.kind = "film";

    // thin-film formula assumes d << wavelength in the film
    const double shortest_wavelength_nm = kSpeedOfLight / (omega_grid.back() * 1e12) * 1e9;
    s.metadata.thin_film_warning = film.thickness_nm > shortest_wavelength_nm / 10.0;
    return s;
}

TransmittanceMap synth_map(std::span<const PhononMode> modes, std::span<const double> omega_c_grid,
                           const DampingSet& damping, std::span<const double> omega_grid)
{
    check_grid(omega_c_grid, "cavity-frequency");
    TransmittanceMap map;
    map.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    map.omega_c_grid.assign(omega_c_grid.begin(), omega_c_grid.end());
    map.values.resize(static_cast<Eigen::Index>(omega_grid.size()),
                      static_cast<Eigen::Index>(omega_c_grid.size()));
    for (std::size_t j = 0; j < omega_c_grid.size(); ++j) {
        const Spectrum s = coupled_transmittance(modes, Frequency(omega_c_grid[j]), damping, omega_grid);
        map.values.col(static_cast<Eigen::Index>(j)) =
            Eigen::Map<const Eigen::VectorXd>(s.transmittance.data(), static_cast<Eigen::Index>(s.transmittance.size()));
    }
    return map;
}

std::vector<double> extract_peaks(const Spectrum& spectrum, double min_prominence)
{
    if (!(min_prominence > 0.0 && min_prominence < 1.0)) {
        throw DomainError("min_prominence must lie in (0, 1)");
    }
    const auto& x = spectrum.omega;
    const auto& y = spectrum.transmittance;
    if (x.size() != y.size()) {
        throw DomainError("spectrum grid and values differ in length");
    }
    const std::size_t n = y.size();
    std::vector<double> peaks;
    if (n < 3) {
        return peaks;
    }

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) {
            continue;
        }
        // plateau: step to its right edge and require a descent there
        std::size_t right_edge = i;
        while (right_edge + 1 < n && y[right_edge + 1] == y[i]) {
            ++right_edge;
        }
        if (right_edge + 1 >= n) {
            break;
        }
        if (y[right_edge + 1] > y[i]) {
            i = right_edge;
            continue;
        }

        double left_min = y[i];
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] > y[i]) {
                break;
            }
            left_min = std::min(left_min, y[j]);
        }
        double right_min = y[i];
        for (std::size_t j = right_edge + 1; j < n; ++j) {
            if (y[j] > y[i]) {
                break;
            }
            right_min = std::min(right_min, y[j]);
        }
        const double prominence = y[i] - std::max(left_min, right_min);
        if (prominence >= min_prominence) {
            if (right_edge != i) {
                peaks.push_back(0.5 * (x[i] + x[right_edge]));
            } else {
                const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
                const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
                const double a = (x1 - x0) * (y1 - y2);
                const double b = (x1 - x2) * (y1 - y0);
                const double denom = a - b;
                double vertex = x1;
                if (denom != 0.0) {
                    vertex = x1 - 0.5 * ((x1 - x0) * a - (x1 - x2) * b) / denom;
                    vertex = std::clamp(vertex, x0, x2);
                }
                peaks.push_back(vertex);
            }
        }
        i = right_edge;
    }
    return peaks;
}

std::vector<BranchPoint> extract_branch_points(const TransmittanceMap& map, double min_prominence)
{
    std::vector<BranchPoint> points;
    for (std::size_t j = 0; j < map.omega_c_grid.size(); ++j) {
        for (const double peak : extract_peaks(map.column(j), min_prominence)) {
            points.push_back(BranchPoint{map.omega_c_grid[j], peak, 1.0, std::nullopt});
        }
    }
    return points;
}

} // namespace polariton
