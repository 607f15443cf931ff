#include <doctest.h>

#include "oracles.hpp"
#include "polariton/dispersion.hpp"
#include "polariton/errors.hpp"
#include "polariton/presets.hpp"

#include <random>

using namespace polariton;
using namespace polariton::literals;

namespace {

std::vector<PhononMode> random_modes(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> w(0.3, 3.0);
    std::uniform_real_distribution<double> r(0.0, 1.0);
    std::vector<PhononMode> modes;
    for (std::size_t l = 0; l < n; ++l) {
        const double omega = w(rng);
        modes.push_back({"M" + std::to_string(l), Frequency(omega), Frequency(2.0 * r(rng) * omega), 0.0_THz});
    }
    return modes;
}

} // namespace

TEST_CASE("secular roots: reference cases")
{
    const std::vector<PhononMode> one{{"A", 1.0_THz, 0.5_THz, 0.0_THz}};
    const auto r = secular_roots(one, 1.0_THz);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(0.78077640640441514).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(1.28077640640441514).epsilon(1e-14));

    const std::vector<PhononMode> off{{"A", 2.0_THz, 0.0_THz, 0.0_THz}};
    const auto d = secular_roots(off, 1.0_THz);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-14));

    CHECK(secular_roots({}, 1.7_THz) == std::vector<double>{1.7});
}

TEST_CASE("secular roots interlace the bare phonon frequencies")
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        auto ph = random_modes(rng, 1 + trial % 5);
        for (auto& m : ph) m.nu = Frequency(std::max(m.nu.thz(), 0.01));
        std::vector<double> poles;
        for (const auto& m : ph) poles.push_back(m.omega.thz());
        std::sort(poles.begin(), poles.end());
        const auto r = secular_roots(ph, Frequency(0.2 + 0.02 * trial));
        REQUIRE(r.size() == poles.size() + 1);
        CHECK(r[0] < poles[0]);
        for (std::size_t k = 0; k + 1 < poles.size(); ++k) {
            CHECK(r[k + 1] >= poles[k]);
            CHECK(r[k + 1] <= poles[k + 1]);
        }
        CHECK(r.back() > poles.back());
    }
}

TEST_CASE("dynamical-matrix eigenvalues match secular roots on 1000 random sets")
{
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> n(1, 5);
    std::uniform_real_distribution<double> wc(0.2, 4.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto ph = random_modes(rng, n(rng));
        const Frequency c(wc(rng));
        const auto a = polariton_frequencies(c, ph);
        const auto b = secular_roots(ph, c);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]) / b[k]);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("secular roots agree with the companion-matrix oracle")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    std::vector<oracle::Oscillator> osc;
    for (const auto& m : tet) osc.push_back({m.omega.thz(), m.nu.thz()});
    const auto ref = oracle::polynomial_roots(1.52, osc);
    const auto got = secular_roots(tet, 1.52_THz);
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(got[k] == doctest::Approx(ref[k]).epsilon(1e-9));
}

TEST_CASE("sweep over the tetragonal preset")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    const auto grid = linear_grid(0.5, 3.0, 0.01);
    const auto map = sweep(tet, grid);
    CHECK(map.size() == grid.size());
    CHECK(map.branch_count() == 3);
    const auto b = map.branches();
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
        CHECK(b(i, 0) < 0.95);
        CHECK(b(i, 1) > 0.95);
        CHECK(b(i, 1) < 1.78);
        CHECK(b(i, 2) > 1.78);
    }
    // without crossings the ascending order is the connected order
    for (Eigen::Index i = 0; i < map.labels.rows(); ++i)
        for (Eigen::Index k = 0; k < 3; ++k) CHECK(map.labels(i, k) == k);
    for (bool a : map.ambiguous) CHECK(!a);
}

TEST_CASE("branches are continuous along the sweep")
{
    const auto ort = mapbi3_preset().orthorhombic_modes;
    const double step = 0.01;
    const auto map = sweep(ort, linear_grid(0.2, 3.2, step));
    for (int label = 0; label < 4; ++label) {
        const auto br = map.branch_by_label(label);
        for (std::size_t i = 1; i < br.size(); ++i) CHECK(std::abs(br[i] - br[i - 1]) <= step * (1.0 + 1e-9));
    }
}

TEST_CASE("empty mode set reduces to the bare cavity")
{
    const auto grid = linear_grid(0.5, 1.5, 0.25);
    const auto map = sweep({}, grid);
    CHECK(map.branch_count() == 1);
    const auto b = map.branches();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(b(static_cast<Eigen::Index>(i), 0) == doctest::Approx(grid[i]).epsilon(1e-14));
        CHECK(map.points[i][0].photon_fraction == doctest::Approx(1.0));
    }
}

TEST_CASE("asymptotic behaviour far above the phonons")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    const auto far = sweep(tet, std::vector<double>{17.8, 178.0});
    const auto& up = far.points[0].back();
    CHECK(up.photon_fraction > 0.99);
    CHECK(up.omega.thz() >= 17.8);
    // lower branches approach their high-cavity limits
    for (std::size_t k = 0; k + 1 < far.branch_count(); ++k) {
        CHECK(std::abs(far.points[0][k].omega.thz() - far.points[1][k].omega.thz()) < 1e-2);
        CHECK(far.points[1][k].photon_fraction < 1e-3);
    }
}

TEST_CASE("crossing a dark mode keeps character labels")
{
    // B is uncoupled, so the cavity-like branch crosses it
    const std::vector<PhononMode> ph{{"A", 0.6_THz, 0.3_THz, 0.0_THz}, {"B", 1.5_THz, 0.0_THz, 0.0_THz}};
    const auto map = sweep(ph, linear_grid(1.0, 2.0, 0.01));
    const int top_start = map.labels(0, 2);
    const int mid_start = map.labels(0, 1);
    const auto last = static_cast<Eigen::Index>(map.size() - 1);
    // the cavity-like branch starts in the middle and finishes on top
    CHECK(map.labels(last, 2) == mid_start);
    CHECK(map.labels(last, 1) == top_start);
    const auto dark = map.branch_by_label(top_start);
    for (double f : dark) CHECK(f == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("low overlap falls back to frequency order")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    const auto map = sweep(tet, linear_grid(0.5, 1.0, 0.1), SweepOptions{{}, 1.5});
    CHECK(!map.ambiguous[0]);
    for (std::size_t i = 1; i < map.size(); ++i) CHECK(map.ambiguous[i]);
    for (Eigen::Index i = 0; i < map.labels.rows(); ++i)
        for (Eigen::Index k = 0; k < 3; ++k) CHECK(map.labels(i, k) == k);
}

TEST_CASE("sweep input validation")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    CHECK_THROWS_AS(sweep(tet, std::vector<double>{1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(sweep(tet, std::vector<double>{1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(sweep(tet, std::vector<double>{0.0, 0.5}), DomainError);
    const std::vector<PhononMode> strong{{"A", 1.0_THz, 3.0_THz, 0.0_THz}};
    SweepOptions opt;
    opt.hopfield.include_diamagnetic = false;
    try {
        (void)sweep(strong, std::vector<double>{0.5, 1.25}, opt);
        FAIL("expected instability");
    } catch (const InstabilityError& e) {
        CHECK(std::string(e.what()).find("0.5") != std::string::npos);
    }
}

TEST_CASE("temperature scan changes branch count at the transition")
{
    const auto m = mapbi3_preset();
    for (double wc : {1.2, 2.2}) {
        const auto scan = scan_temperature(m, Frequency(wc), linear_grid(140.0, 180.0, 0.5));
        for (const auto& s : scan.samples) CHECK(s.branches.size() == (s.t_kelvin < 162.5 ? 4u : 3u));
        const auto cps = scan.change_points();
        REQUIRE(cps.size() == 1);
        CHECK(cps[0].t_before == 162.0);
        CHECK(cps[0].t_after == 162.5);
        CHECK(cps[0].count_before == 4);
        CHECK(cps[0].count_after == 3);
    }
    const auto below = scan_temperature(m, 1.2_THz, linear_grid(100.0, 160.0, 1.0));
    CHECK(below.change_points().empty());
    CHECK_THROWS_AS(scan_temperature(m, 1.2_THz, std::vector<double>{150.0, 140.0}), DomainError);
}

TEST_CASE("linear grid")
{
    const auto g = linear_grid(0.2, 3.2, 0.01);
    CHECK(g.size() == 301);
    CHECK(g.front() == 0.2);
    CHECK(g.back() == doctest::Approx(3.2).epsilon(1e-14));
    CHECK(linear_grid(1.0, 1.0, 0.1).size() == 1);
    CHECK_THROWS_AS(linear_grid(1.0, 2.0, 0.0), DomainError);
    CHECK_THROWS_AS(linear_grid(2.0, 1.0, 0.1), DomainError);
}
