#include <doctest.h>

#include "oracles.hpp"
#include "polariton/dispersion.hpp"
#include "polariton/errors.hpp"
#include "polariton/presets.hpp"
#include "polariton/spectra.hpp"

#include <algorithm>

using namespace polariton;
using namespace polariton::literals;

namespace {

std::vector<PhononMode> with_gamma(std::vector<PhononMode> modes, double gamma)
{
    for (auto& m : modes) m.gamma = Frequency(gamma);
    return modes;
}

double nearest(const std::vector<double>& xs, double x)
{
    double best = 1e300;
    for (double v : xs) best = std::min(best, std::abs(v - x));
    return best;
}

} // namespace

TEST_CASE("bare cavity gives a single Lorentzian peak")
{
    const auto grid = linear_grid(0.1, 4.0, 0.005);
    const auto s = coupled_transmittance({}, 1.52_THz, DampingSet{0.1_THz, {}}, grid);
    CHECK(*std::max_element(s.transmittance.begin(), s.transmittance.end()) == 1.0);
    const auto peaks = extract_peaks(s, 0.05);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0] - 1.52) <= 0.0025);
    CHECK(s.metadata.kind == "coupled");
}

TEST_CASE("coupled spectrum follows the complex-arithmetic formula")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    const auto grid = linear_grid(0.3, 3.0, 0.01);
    const auto s = coupled_transmittance(tet, 1.3_THz, DampingSet::defaults(2), grid);
    std::vector<oracle::Oscillator> osc;
    for (const auto& m : tet) osc.push_back({m.omega.thz(), m.nu.thz()});
    std::vector<double> ref;
    for (double w : grid) ref.push_back(oracle::coupled_response(w, 1.3, 0.1, osc, {0.05, 0.05}));
    const double peak = *std::max_element(ref.begin(), ref.end());
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(s.transmittance[i] == doctest::Approx(ref[i] / peak).epsilon(1e-12));
}

TEST_CASE("tetragonal peaks sit near the polariton frequencies")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    const auto grid = linear_grid(0.1, 4.0, 0.005);
    const auto s = coupled_transmittance(tet, 1.52_THz, DampingSet{0.05_THz, {0.05_THz, 0.05_THz}}, grid);
    const auto peaks = extract_peaks(s, 0.05);
    const auto omega = polariton_frequencies(1.52_THz, tet);
    REQUIRE(peaks.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(peaks[k] - omega[k]) <= 0.025);
}

TEST_CASE("peaks converge to eigenfrequencies for small damping")
{
    const auto m = mapbi3_preset();
    const auto grid = linear_grid(0.1, 4.0, 0.002);
    for (const auto* set : {&m.tetragonal_modes, &m.orthorhombic_modes}) {
        for (double damp : {0.02, 0.05, 0.1}) {
            DampingSet d{Frequency(damp), std::vector<Frequency>(set->size(), Frequency(damp / 2))};
            for (double wc : linear_grid(0.3, 3.1, 0.4)) {
                const auto peaks = extract_peaks(coupled_transmittance(*set, Frequency(wc), d, grid), 0.05);
                const auto omega = polariton_frequencies(Frequency(wc), *set);
                for (double p : peaks) CHECK(nearest(omega, p) <= 0.05);
            }
        }
    }
}

TEST_CASE("uncoupled phonons leave the cavity peak in place")
{
    const std::vector<PhononMode> ph{{"A", 1.0_THz, 0.0_THz, 0.3_THz}};
    const auto grid = linear_grid(0.1, 4.0, 0.005);
    for (double g : {0.01, 0.3}) {
        const auto s = coupled_transmittance(ph, 2.0_THz, DampingSet{0.1_THz, {Frequency(g)}}, grid);
        const auto peaks = extract_peaks(s, 0.05);
        REQUIRE(peaks.size() == 1);
        CHECK(std::abs(peaks[0] - 2.0) <= 0.0025);
    }
}

TEST_CASE("coupled spectrum input validation")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    const auto grid = linear_grid(0.1, 4.0, 0.01);
    CHECK_THROWS_AS(coupled_transmittance(tet, 1.5_THz, DampingSet{0.0_THz, {0.0_THz, 0.0_THz}}, grid), DomainError);
    CHECK_THROWS_AS(coupled_transmittance(tet, 1.5_THz, DampingSet{0.1_THz, {0.05_THz}}, grid), DomainError);
    CHECK_THROWS_AS(coupled_transmittance(tet, 0.0_THz, DampingSet::defaults(2), grid), DomainError);
    CHECK_THROWS_AS(coupled_transmittance(tet, 1.5_THz, DampingSet::defaults(2), std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(coupled_transmittance(tet, 1.5_THz, DampingSet::defaults(2), std::vector<double>{1.0, 0.5}),
                    DomainError);
    // only the cavity damped is fine
    CHECK_NOTHROW(coupled_transmittance(tet, 1.5_THz, DampingSet{0.1_THz, {0.0_THz, 0.0_THz}}, grid));
}

TEST_CASE("bare film shows dips at the phonon frequencies")
{
    const auto m = mapbi3_preset();
    const auto grid = linear_grid(0.1, 4.0, 0.002);
    for (const auto* set : {&m.tetragonal_modes, &m.orthorhombic_modes}) {
        const auto s = bare_film_transmittance(*set, FilmParameters{}, grid);
        CHECK(s.metadata.kind == "film");
        CHECK(*std::max_element(s.transmittance.begin(), s.transmittance.end()) == 1.0);
        Spectrum inverted = s;
        for (auto& v : inverted.transmittance) v = 1.0 - v;
        const auto dips = extract_peaks(inverted, 0.001);
        REQUIRE(dips.size() == set->size());
        for (std::size_t l = 0; l < set->size(); ++l) {
            std::vector<double> sorted;
            for (const auto& mode : *set) sorted.push_back(mode.omega.thz());
            std::sort(sorted.begin(), sorted.end());
            CHECK(std::abs(dips[l] - sorted[l]) <= 0.025);
        }
    }
}

TEST_CASE("film matches the complex-arithmetic formula")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    const auto grid = linear_grid(0.2, 3.0, 0.01);
    const FilmParameters film{6.0, 350.0, 1.9};
    const auto s = bare_film_transmittance(tet, film, grid);
    std::vector<oracle::Oscillator> osc;
    for (const auto& m : tet) osc.push_back({m.omega.thz(), m.nu.thz()});
    std::vector<double> ref;
    for (double w : grid) ref.push_back(oracle::film_transmittance(w, 6.0, 350.0, 1.9, osc, {0.05, 0.05}));
    const double peak = *std::max_element(ref.begin(), ref.end());
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(s.transmittance[i] == doctest::Approx(ref[i] / peak).epsilon(1e-12));
}

TEST_CASE("film without oscillator strength is flat")
{
    const std::vector<PhononMode> ph{{"A", 1.0_THz, 0.0_THz, 0.05_THz}};
    const auto s = bare_film_transmittance(ph, FilmParameters{}, linear_grid(0.1, 4.0, 0.01));
    for (double v : s.transmittance) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("film dips deepen with oscillator strength")
{
    const auto grid = linear_grid(0.5, 1.5, 0.001);
    double previous = 1.0;
    for (double nu : {0.1, 0.2, 0.4, 0.8}) {
        const std::vector<PhononMode> ph{{"A", 1.0_THz, Frequency(nu), 0.05_THz}};
        const auto s = bare_film_transmittance(ph, FilmParameters{}, grid);
        const double depth = *std::min_element(s.transmittance.begin(), s.transmittance.end());
        CHECK(depth < previous);
        previous = depth;
    }
}

TEST_CASE("film validation and thickness warning")
{
    const std::vector<PhononMode> undamped{{"A", 1.0_THz, 0.5_THz, 0.0_THz}};
    const auto grid = linear_grid(0.1, 4.0, 0.01);
    CHECK_THROWS_AS(bare_film_transmittance(undamped, FilmParameters{}, grid), DomainError);
    const auto tet = mapbi3_preset().tetragonal_modes;
    CHECK(!bare_film_transmittance(tet, FilmParameters{}, grid).metadata.thin_film_warning);
    FilmParameters thick;
    thick.thickness_nm = 20000.0;  // 20 um against a 75 um shortest wavelength
    CHECK(bare_film_transmittance(tet, thick, grid).metadata.thin_film_warning);
    FilmParameters bad;
    bad.thickness_nm = -1.0;
    CHECK_THROWS_AS(bare_film_transmittance(tet, bad, grid), DomainError);
}

TEST_CASE("peak extraction edge cases")
{
    Spectrum flat{linear_grid(0.1, 1.0, 0.1), std::vector<double>(10, 1.0), {}};
    CHECK(extract_peaks(flat, 0.05).empty());
    CHECK_THROWS_AS(extract_peaks(flat, 0.0), DomainError);
    CHECK_THROWS_AS(extract_peaks(flat, 1.0), DomainError);

    // plateau maxima count once, at the plateau centre
    Spectrum plateau{{1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, {0.1, 0.5, 1.0, 1.0, 0.5, 0.1}, {}};
    const auto p = extract_peaks(plateau, 0.05);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == doctest::Approx(3.5));

    // a small bump on the shoulder is rejected by prominence
    Spectrum shoulder{{1, 2, 3, 4, 5, 6, 7}, {0.1, 1.0, 0.6, 0.62, 0.3, 0.2, 0.1}, {}};
    CHECK(extract_peaks(shoulder, 0.05).size() == 1);
    CHECK(extract_peaks(shoulder, 0.01).size() == 2);

    // exact parabola is recovered exactly
    std::vector<double> x, y;
    for (int i = 0; i < 21; ++i) {
        x.push_back(0.1 * i);
        y.push_back(1.0 - (0.1 * i - 1.234) * (0.1 * i - 1.234));
    }
    const auto v = extract_peaks(Spectrum{x, y, {}}, 0.05);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == doctest::Approx(1.234).epsilon(1e-12));
}

TEST_CASE("synthetic map columns equal single spectra")
{
    const auto ort = mapbi3_preset().orthorhombic_modes;
    const auto grid = linear_grid(0.1, 4.0, 0.01);
    const auto wc = linear_grid(0.5, 2.5, 0.5);
    const auto damping = DampingSet::defaults(3);
    const auto map = synth_map(ort, wc, damping, grid);
    CHECK(map.values.rows() == static_cast<Eigen::Index>(grid.size()));
    CHECK(map.values.cols() == static_cast<Eigen::Index>(wc.size()));
    for (std::size_t j = 0; j < wc.size(); ++j) {
        const auto s = coupled_transmittance(ort, Frequency(wc[j]), damping, grid);
        const auto col = map.column(j);
        CHECK(col.metadata.omega_c.value() == wc[j]);
        for (std::size_t i = 0; i < grid.size(); ++i) CHECK(col.transmittance[i] == s.transmittance[i]);
    }
    const auto points = extract_branch_points(map, 0.05);
    CHECK(!points.empty());
    for (const auto& p : points) CHECK(!p.branch.has_value());
}

TEST_CASE("damping presets")
{
    const auto d = DampingSet::defaults(3);
    CHECK(d.kappa.thz() == 0.1);
    REQUIRE(d.gammas.size() == 3);
    CHECK(d.gammas[2].thz() == 0.05);
    const std::vector<PhononMode> ph{{"A", 1.0_THz, 0.5_THz, 0.07_THz}};
    const auto f = DampingSet::from_modes(ph, 0.2_THz);
    CHECK(f.kappa.thz() == 0.2);
    CHECK(f.gammas[0].thz() == 0.07);
}
