#include <doctest.h>

#include "polariton/dispersion.hpp"
#include "polariton/io.hpp"
#include "polariton/presets.hpp"

#include <sstream>

using namespace polariton;
using namespace polariton::literals;

TEST_CASE("number formatting")
{
    CHECK(io::format_number(0.0) == "0");
    CHECK(io::format_number(1.52) == "1.52");
    CHECK(io::format_number(-2.5) == "-2.5");
    CHECK(io::format_number(123.456789012) == "123.456789");
    CHECK(io::format_number(1e-4) == "1.00000000e-04");
    CHECK(io::format_number(0.78077640640441514) == "0.780776406");
}

TEST_CASE("csv reader")
{
    std::istringstream in("# comment\n\na,b\n1,2\n\n3,4\n");
    const auto t = io::read_csv(in);
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.line_numbers == std::vector<std::size_t>{4, 6});

    std::istringstream bad("a,b\n1,2\n3\n");
    try {
        (void)io::read_csv(bad);
        FAIL("expected a format error");
    } catch (const io::FormatError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(io::read_csv(empty), io::FormatError);
}

TEST_CASE("branch point reader")
{
    std::istringstream by_length("length_um,omega_meas_thz\n60,0.81\n120,0.9\n");
    const auto a = io::read_branch_points(by_length);
    REQUIRE(a.size() == 2);
    CHECK(a[0].omega_c == doctest::Approx(1.52).epsilon(1e-12));
    CHECK(a[1].omega_c == doctest::Approx(0.76).epsilon(1e-12));
    CHECK(a[0].weight == 1.0);

    std::istringstream hinted("omega_c_thz,omega_meas_thz,weight,branch\n1.5,0.7,2,LP\n1.5,2.4,1,UP\n1.5,1.2,1,2\n");
    const auto b = io::read_branch_points(hinted);
    REQUIRE(b.size() == 3);
    CHECK(b[0].branch == 0);
    CHECK(b[1].branch == -1);
    CHECK(b[2].branch == 2);
    CHECK(b[0].weight == 2.0);

    std::istringstream malformed("omega_c_thz,omega_meas_thz\n1.5,0.7\n1.5,abc\n");
    try {
        (void)io::read_branch_points(malformed);
        FAIL("expected a format error");
    } catch (const io::FormatError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream both("length_um,omega_c_thz,omega_meas_thz\n60,1.52,0.8\n");
    CHECK_THROWS_AS(io::read_branch_points(both), io::FormatError);
    std::istringstream unknown("omega_c_thz,omega_meas_thz,colour\n1,1,red\n");
    CHECK_THROWS_AS(io::read_branch_points(unknown), io::FormatError);
    std::istringstream missing("omega_c_thz\n1\n");
    CHECK_THROWS_AS(io::read_branch_points(missing), io::FormatError);
}

TEST_CASE("branch points round trip")
{
    std::vector<BranchPoint> pts{{1.5, 0.7, 1.0, std::nullopt}, {1.5, 2.4, 0.5, -1}};
    std::stringstream s;
    io::write_branch_points(s, pts);
    const auto back = io::read_branch_points(s);
    REQUIRE(back.size() == 2);
    CHECK(back[1].omega_meas == 2.4);
    CHECK(back[1].weight == 0.5);
    CHECK(back[1].branch == -1);
    CHECK(!back[0].branch);
}

TEST_CASE("fit report round trip")
{
    FitResult fit;
    fit.labels = {"TO1", "TO2"};
    fit.omegas = {0.95, 1.78};
    fit.nu = {0.684, 1.246};
    fit.normalized_couplings = {0.36, 0.35};
    fit.rms_residual = 1.5e-5;
    fit.per_point_residuals = {0.001, -0.002};
    fit.assigned_branch = {0, 2};
    fit.ambiguous = {false, true};
    fit.iterations = 12;
    fit.converged = true;
    std::stringstream s;
    io::write_fit_report(s, fit, "tetragonal");
    const auto back = io::read_fit_report(s);
    CHECK(back.labels == fit.labels);
    CHECK(back.nu == fit.nu);
    CHECK(back.normalized_couplings == fit.normalized_couplings);
    CHECK(back.converged);
    CHECK(back.iterations == 12);
    CHECK(back.rms_residual == 1.5e-5);

    std::istringstream broken("modes = TO1\nomega.TO1 = x\n");
    CHECK_THROWS_AS(io::read_fit_report(broken), io::FormatError);
}

TEST_CASE("map round trip")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    const auto map = synth_map(tet, linear_grid(0.5, 1.5, 0.5), DampingSet::defaults(2), linear_grid(0.1, 2.0, 0.1));
    std::stringstream s;
    io::write_map(s, map);
    const auto back = io::read_map(s);
    CHECK(back.omega_c_grid == map.omega_c_grid);
    REQUIRE(back.values.rows() == map.values.rows());
    for (Eigen::Index i = 0; i < map.values.rows(); ++i)
        for (Eigen::Index j = 0; j < map.values.cols(); ++j)
            CHECK(back.values(i, j) == doctest::Approx(map.values(i, j)).epsilon(1e-8));
}

TEST_CASE("dispersion writer layout")
{
    const auto tet = mapbi3_preset().tetragonal_modes;
    const auto map = sweep(tet, std::vector<double>{1.0, 2.0});
    std::ostringstream out;
    io::write_dispersion(out, map);
    std::istringstream in(out.str());
    const auto t = io::read_csv(in);
    CHECK(t.header == std::vector<std::string>{"omega_c", "branch", "Omega", "F_pt", "F_ph_TO1", "F_ph_TO2"});
    CHECK(t.rows.size() == 6);
}
