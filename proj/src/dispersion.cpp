#include "polariton/dispersion.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace polariton {

namespace {

constexpr std::size_t kBruteForceLimit = 8;

// Finds the assignment label -> mode index maximizing total score.
std::vector<int> best_assignment(const Eigen::MatrixXd& score)
{
    const auto n = static_cast<int>(score.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);

    if (static_cast<std::size_t>(n) <= kBruteForceLimit) {
        std::vector<int> best = perm;
        double best_total = -std::numeric_limits<double>::infinity();
        do {
            double total = 0.0;
            for (int r = 0; r < n; ++r) {
                total += score(r, perm[static_cast<std::size_t>(r)]);
            }
            if (total > best_total + 1e-15) {
                best_total = total;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    // Greedy: repeatedly take the globally best remaining pair.
    std::vector<int> out(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int step = 0; step < n; ++step) {
        double best = -std::numeric_limits<double>::infinity();
        int br = -1;
        int bc = -1;
        for (int r = 0; r < n; ++r) {
            if (out[static_cast<std::size_t>(r)] >= 0) {
                continue;
            }
            for (int c = 0; c < n; ++c) {
                if (!used[static_cast<std::size_t>(c)] && score(r, c) > best) {
                    best = score(r, c);
                    br = r;
                    bc = c;
                }
            }
        }
        out[static_cast<std::size_t>(br)] = bc;
        used[static_cast<std::size_t>(bc)] = true;
    }
    return out;
}

} // namespace

Eigen::MatrixXd DispersionMap::branches() const
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(branch_count()));
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t k = 0; k < branch_count(); ++k) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = points[i][k].omega.thz();
        }
    }
    return out;
}

const PolaritonMode& DispersionMap::mode_by_label(std::size_t i, int label) const
{
    for (std::size_t k = 0; k < branch_count(); ++k) {
        if (labels(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) == label) {
            return points[i][k];
        }
    }
    throw DomainError("no branch with label " + std::to_string(label));
}

std::vector<double> DispersionMap::branch_by_label(int label) const
{
    std::vector<double> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        out.push_back(mode_by_label(i, label).omega.thz());
    }
    return out;
}

DispersionMap sweep(std::span<const PhononMode> modes, std::span<const double> omega_c_grid,
                    const SweepOptions& options)
{
    for (std::size_t i = 0; i < omega_c_grid.size(); ++i) {
        if (!(omega_c_grid[i] > 0.0)) {
            throw DomainError("cavity-frequency grid must be positive");
        }
        if (i > 0 && !(omega_c_grid[i] > omega_c_grid[i - 1])) {
            throw DomainError("cavity-frequency grid must be strictly increasing");
        }
    }
    validate_modes(modes);

    DispersionMap map;
    map.omega_c_grid.assign(omega_c_grid.begin(), omega_c_grid.end());
    map.modes.assign(modes.begin(), modes.end());
    map.points.reserve(omega_c_grid.size());
    for (const double wc : omega_c_grid) {
        try {
            map.points.push_back(
                diagonalize(build_dynamical_matrix(Frequency(wc), modes, options.hopfield)));
        } catch (const InstabilityError& e) {
            std::ostringstream msg;
            msg << "at omega_c = " << wc << " THz: " << e.what();
            throw InstabilityError(msg.str());
        }
    }
    return connect_branches(std::move(map), options.overlap_threshold);
}

DispersionMap connect_branches(DispersionMap map, double overlap_threshold)
{
    const auto rows = static_cast<Eigen::Index>(map.size());
    const auto cols = static_cast<Eigen::Index>(map.branch_count());
    map.labels.resize(rows, cols);
    map.ambiguous.assign(map.size(), false);
    if (rows == 0) {
        return map;
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
        map.labels(0, k) = static_cast<int>(k);
    }

    for (Eigen::Index i = 1; i < rows; ++i) {
        const auto& prev = map.points[static_cast<std::size_t>(i - 1)];
        const auto& cur = map.points[static_cast<std::size_t>(i)];

        // previous modes indexed by label
        std::vector<std::size_t> prev_of_label(static_cast<std::size_t>(cols));
        for (Eigen::Index k = 0; k < cols; ++k) {
            prev_of_label[static_cast<std::size_t>(map.labels(i - 1, k))] = static_cast<std::size_t>(k);
        }

        Eigen::MatrixXd overlap(cols, cols);
        for (Eigen::Index lab = 0; lab < cols; ++lab) {
            const auto& p = prev[prev_of_label[static_cast<std::size_t>(lab)]];
            for (Eigen::Index k = 0; k < cols; ++k) {
                overlap(lab, k) = std::abs(bogoliubov_overlap(p, cur[static_cast<std::size_t>(k)]));
            }
        }
        std::vector<int> assign = best_assignment(overlap);
        double weakest = std::numeric_limits<double>::infinity();
        for (Eigen::Index lab = 0; lab < cols; ++lab) {
            weakest = std::min(weakest, overlap(lab, assign[static_cast<std::size_t>(lab)]));
        }

        if (weakest < overlap_threshold) {
            Eigen::MatrixXd closeness(cols, cols);
            for (Eigen::Index lab = 0; lab < cols; ++lab) {
                const double wp = prev[prev_of_label[static_cast<std::size_t>(lab)]].omega.thz();
                for (Eigen::Index k = 0; k < cols; ++k) {
                    closeness(lab, k) = -std::abs(wp - cur[static_cast<std::size_t>(k)].omega.thz());
                }
            }
            assign = best_assignment(closeness);
            map.ambiguous[static_cast<std::size_t>(i)] = true;
        }
        for (Eigen::Index lab = 0; lab < cols; ++lab) {
            map.labels(i, assign[static_cast<std::size_t>(lab)]) = static_cast<int>(lab);
        }
    }
    return map;
}

std::vector<double> secular_roots(std::span<const PhononMode> modes, Frequency omega_c)
{
    if (!(omega_c.thz() > 0.0)) {
        throw DomainError("secular_roots: cavity frequency must be positive");
    }
    validate_modes(modes);

    std::vector<double> roots;

    // Decoupled oscillators are roots by themselves; coupled oscillators that
    // share a frequency collapse into one pole with summed strength, leaving
    // (multiplicity - 1) decoupled roots at that frequency.
    std::vector<std::pair<double, double>> poles;  // (w^2, sum nu^2)
    for (const auto& mode : modes) {
        const double w = mode.omega.thz();
        const double nu = mode.nu.thz();
        if (nu == 0.0) {
            roots.push_back(w);
            continue;
        }
        auto it = std::find_if(poles.begin(), poles.end(),
                               [&](const auto& p) { return p.first == w * w; });
        if (it == poles.end()) {
            poles.emplace_back(w * w, nu * nu);
        } else {
            it->second += nu * nu;
            roots.push_back(w);
        }
    }
    std::sort(poles.begin(), poles.end());

    const double wc2 = omega_c.thz() * omega_c.thz();
    auto secular = [&](double u) {
        double s = 0.0;
        for (const auto& [p, strength] : poles) {
            s += strength / (u - p);
        }
        return u * (1.0 - s) - wc2;
    };

    // Between consecutive poles the secular function increases strictly from
    // -inf to +inf, so each interval holds exactly one root.
    auto bisect = [&](double lo, double hi) {
        for (int iter = 0; iter < 4000; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            if (secular(mid) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    double upper = wc2;
    for (const auto& [p, strength] : poles) {
        upper += p + strength;
    }
    upper *= 1.0 + 1e-9;
    upper += 1e-300;
    if (!(secular(upper) >= 0.0)) {
        std::ostringstream msg;
        msg << "secular_roots: failed to bracket top root (f(" << upper << ") = " << secular(upper) << ")";
        throw NumericalError(msg.str());
    }

    double lo = 0.0;
    for (const auto& [p, strength] : poles) {
        roots.push_back(std::sqrt(bisect(lo, p)));
        lo = p;
    }
    roots.push_back(std::sqrt(bisect(lo, upper)));

    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<ChangePoint> TemperatureScan::change_points() const
{
    std::vector<ChangePoint> out;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const auto before = samples[i - 1].branches.size();
        const auto after = samples[i].branches.size();
        if (before != after) {
            out.push_back({samples[i - 1].t_kelvin, samples[i].t_kelvin, before, after});
        }
    }
    return out;
}

TemperatureScan scan_temperature(const MaterialModel& material, Frequency omega_c,
                                 std::span<const double> t_grid, const HopfieldOptions& options)
{
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw DomainError("temperature grid must be strictly increasing");
        }
    }
    TemperatureScan scan;
    scan.omega_c = omega_c;
    scan.samples.reserve(t_grid.size());
    for (const double t : t_grid) {
        TemperatureSample sample;
        sample.t_kelvin = t;
        sample.phase = phase_at(material, t);
        sample.branches = polariton_frequencies(omega_c, material.modes(sample.phase), options);
        scan.samples.push_back(std::move(sample));
    }
    return scan;
}

std::vector<double> linear_grid(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(hi >= lo)) {
        throw DomainError("grid needs step > 0 and hi >= lo");
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = lo + static_cast<double>(k) * step;
    }
    return grid;
}

} // namespace polariton
