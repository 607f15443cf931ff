#include "polariton/hopfield.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polariton {

namespace {

constexpr double kDegeneracyTolerance = 1e-9;
constexpr double kImaginaryTolerance = 1e-8;
constexpr double kNormTolerance = 1e-10;

// Energy form h = eta * M of the quadratic Hamiltonian H = 1/2 v^+ h v.
Eigen::MatrixXcd energy_form(const Eigen::MatrixXcd& m, std::size_t half)
{
    Eigen::MatrixXcd h = m;
    h.bottomRows(static_cast<Eigen::Index>(half)) *= -1.0;
    return h;
}

Eigen::MatrixXcd assemble(double omega_c, std::span<const PhononMode> modes, bool diamagnetic)
{
    const auto n = static_cast<Eigen::Index>(modes.size());
    const Eigen::Index half = n + 1;
    const Eigen::Index a = 0;
    const Eigen::Index ad = half;
    const Complex i(0.0, 1.0);

    double d = 0.0;
    std::vector<double> g(modes.size());
    for (std::size_t l = 0; l < modes.size(); ++l) {
        g[l] = coupling_strength(modes[l].nu, modes[l].omega, Frequency(omega_c)).thz();
        d += g[l] * g[l] / modes[l].omega.thz();
    }
    if (!diamagnetic) {
        d = 0.0;
    }

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * half, 2 * half);
    m(a, a) = omega_c + 2.0 * d;
    m(a, ad) = 2.0 * d;
    m(ad, a) = -2.0 * d;
    m(ad, ad) = -(omega_c + 2.0 * d);
    for (Eigen::Index l = 0; l < n; ++l) {
        const Eigen::Index b = 1 + l;
        const Eigen::Index bd = half + 1 + l;
        const double gl = g[static_cast<std::size_t>(l)];
        const double wl = modes[static_cast<std::size_t>(l)].omega.thz();

        m(a, b) = -i * gl;
        m(a, bd) = i * gl;

        m(b, a) = i * gl;
        m(b, b) = wl;
        m(b, ad) = i * gl;

        m(ad, b) = i * gl;
        m(ad, bd) = -i * gl;

        m(bd, a) = i * gl;
        m(bd, ad) = i * gl;
        m(bd, bd) = -wl;
    }
    return m;
}

void check_frequencies(Frequency omega_c, std::span<const PhononMode> modes)
{
    if (!(omega_c.thz() > 0.0) || !std::isfinite(omega_c.thz())) {
        throw DomainError("cavity frequency must be positive");
    }
    validate_modes(modes);
}

double matrix_scale(double omega_c, std::span<const PhononMode> modes)
{
    double s = omega_c;
    for (const auto& mode : modes) {
        s = std::max({s, mode.omega.thz(), mode.nu.thz()});
    }
    return s;
}

[[noreturn]] void report_instability(const Eigen::MatrixXcd& m, double scale)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        worst = std::max(worst, std::abs(solver.eigenvalues()(k).imag()));
    }
    std::ostringstream msg;
    if (worst > kImaginaryTolerance * scale) {
        msg << "dynamical matrix is unstable: eigenvalue with imaginary part " << worst
            << " THz (couplings too large without the diamagnetic term?)";
    } else {
        msg << "dynamical matrix is unstable: energy form is not positive definite"
               " (zero-frequency mode)";
    }
    throw InstabilityError(msg.str());
}

// Hermitian form <c_i| P |c_j> restricted to the coefficient pair (k, k + half),
// i.e. the resonant-minus-antiresonant weight of one bare mode.
Eigen::MatrixXcd weight_form(const Eigen::MatrixXcd& block, Eigen::Index k, Eigen::Index half)
{
    const Eigen::Index cols = block.cols();
    Eigen::MatrixXcd p(cols, cols);
    for (Eigen::Index i = 0; i < cols; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            p(i, j) = std::conj(block(k, i)) * block(k, j) -
                      std::conj(block(k + half, i)) * block(k + half, j);
        }
    }
    return p;
}

// Fixes the basis of a degenerate block: rotate so the photon weight is
// diagonal (descending), then break remaining ties with each phonon weight in turn.
void resolve_degenerate_block(Eigen::MatrixXcd& block, Eigen::Index form, Eigen::Index half)
{
    if (block.cols() < 2 || form >= half) {
        return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(weight_form(block, form, half));
    const Eigen::Index k = block.cols();
    Eigen::MatrixXcd rotation(k, k);
    Eigen::VectorXd weights(k);
    for (Eigen::Index col = 0; col < k; ++col) {
        rotation.col(col) = solver.eigenvectors().col(k - 1 - col);
        weights(col) = solver.eigenvalues()(k - 1 - col);
    }
    block = (block * rotation).eval();

    Eigen::Index start = 0;
    while (start < k) {
        Eigen::Index stop = start + 1;
        while (stop < k && std::abs(weights(stop) - weights(start)) < kDegeneracyTolerance) {
            ++stop;
        }
        if (stop - start > 1) {
            Eigen::MatrixXcd sub = block.middleCols(start, stop - start);
            resolve_degenerate_block(sub, form + 1, half);
            block.middleCols(start, stop - start) = sub;
        }
        start = stop;
    }
}

void fix_global_phase(Eigen::VectorXcd& c)
{
    const double largest = c.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        if (std::abs(c(k)) > 1e-12 * largest) {
            c *= std::conj(c(k)) / std::abs(c(k));
            c(k) = Complex(c(k).real(), 0.0);
            return;
        }
    }
}

PolaritonMode make_mode(double omega, const Eigen::VectorXcd& c, std::size_t n)
{
    PolaritonMode mode;
    mode.omega = Frequency(omega);
    const auto half = static_cast<Eigen::Index>(n + 1);
    mode.w = c(0);
    mode.y = c(half);
    mode.x.resize(n);
    mode.z.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
        mode.x[l] = c(static_cast<Eigen::Index>(1 + l));
        mode.z[l] = c(half + 1 + static_cast<Eigen::Index>(l));
    }
    mode.photon_fraction = std::norm(mode.w) - std::norm(mode.y);
    mode.phonon_fractions.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
        mode.phonon_fractions[l] = std::norm(mode.x[l]) - std::norm(mode.z[l]);
    }
    return mode;
}

} // namespace

DynamicalMatrix::DynamicalMatrix(Eigen::MatrixXcd entries, Frequency omega_c,
                                 std::vector<PhononMode> modes)
    : entries_(std::move(entries)), omega_c_(omega_c), modes_(std::move(modes))
{
    const auto expected = static_cast<Eigen::Index>(2 * (modes_.size() + 1));
    if (entries_.rows() != expected || entries_.cols() != expected) {
        throw ContractViolation("dynamical matrix dimension does not match 2(N+1)");
    }
}

double DynamicalMatrix::scale() const
{
    return matrix_scale(omega_c_.thz(), modes_);
}

double PolaritonMode::bogoliubov_norm() const
{
    double norm = std::norm(w) - std::norm(y);
    for (std::size_t l = 0; l < x.size(); ++l) {
        norm += std::norm(x[l]) - std::norm(z[l]);
    }
    return norm;
}

Eigen::VectorXcd PolaritonMode::coefficients() const
{
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::VectorXcd c(2 * (n + 1));
    c(0) = w;
    c(n + 1) = y;
    for (Eigen::Index l = 0; l < n; ++l) {
        c(1 + l) = x[static_cast<std::size_t>(l)];
        c(n + 2 + l) = z[static_cast<std::size_t>(l)];
    }
    return c;
}

Frequency diamagnetic_coefficient(Frequency omega_c, std::span<const PhononMode> modes)
{
    double d = 0.0;
    for (const auto& mode : modes) {
        const double g = coupling_strength(mode.nu, mode.omega, omega_c).thz();
        d += g * g / mode.omega.thz();
    }
    return Frequency(d);
}

DynamicalMatrix build_dynamical_matrix(Frequency omega_c, std::span<const PhononMode> modes,
                                       const HopfieldOptions& options)
{
    check_frequencies(omega_c, modes);
    return DynamicalMatrix(assemble(omega_c.thz(), modes, options.include_diamagnetic), omega_c,
                           std::vector<PhononMode>(modes.begin(), modes.end()));
}

std::vector<PolaritonMode> diagonalize(const DynamicalMatrix& matrix)
{
    const std::size_t n = matrix.mode_count();
    const auto half = static_cast<Eigen::Index>(n + 1);
    const double scale = matrix.scale();
    const Eigen::MatrixXcd h = energy_form(matrix.entries(), n + 1);

    if (!h.isApprox(h.adjoint(), 1e-12)) {
        throw ContractViolation("dynamical matrix is not of Bogoliubov form (eta*M not Hermitian)");
    }

    // Colpa: h = L L^+, W = L^+ eta L is Hermitian with the spectrum of M.
    Eigen::LLT<Eigen::MatrixXcd> llt(h);
    if (llt.info() != Eigen::Success) {
        report_instability(matrix.entries(), scale);
    }
    const Eigen::MatrixXcd l = llt.matrixL();
    Eigen::MatrixXcd w = l.adjoint() * energy_form(l, n + 1);
    w = 0.5 * (w + w.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(w);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver failed");
    }
    const Eigen::VectorXd& values = solver.eigenvalues();
    if (!(values(half - 1) < 0.0 && values(half) > 0.0)) {
        report_instability(matrix.entries(), scale);
    }

    // Left eigenvector of M for eigenvalue Omega: c = conj(L psi), norm Omega |psi|^2.
    Eigen::MatrixXcd coeffs(2 * half, half);
    std::vector<double> omegas(static_cast<std::size_t>(half));
    for (Eigen::Index k = 0; k < half; ++k) {
        const double omega = values(half + k);
        omegas[static_cast<std::size_t>(k)] = omega;
        coeffs.col(k) = (l * solver.eigenvectors().col(half + k)).conjugate() / std::sqrt(omega);
    }

    Eigen::Index start = 0;
    while (start < half) {
        Eigen::Index stop = start + 1;
        while (stop < half &&
               omegas[static_cast<std::size_t>(stop)] - omegas[static_cast<std::size_t>(start)] <
                   kDegeneracyTolerance * scale) {
            ++stop;
        }
        if (stop - start > 1) {
            Eigen::MatrixXcd block = coeffs.middleCols(start, stop - start);
            resolve_degenerate_block(block, 0, half);
            coeffs.middleCols(start, stop - start) = block;
        }
        start = stop;
    }

    std::vector<PolaritonMode> modes;
    modes.reserve(static_cast<std::size_t>(half));
    for (Eigen::Index k = 0; k < half; ++k) {
        Eigen::VectorXcd c = coeffs.col(k);
        fix_global_phase(c);
        modes.push_back(make_mode(omegas[static_cast<std::size_t>(k)], c, n));
    }
    return modes;
}

std::vector<double> polariton_frequencies(Frequency omega_c, std::span<const PhononMode> modes,
                                          const HopfieldOptions& options)
{
    check_frequencies(omega_c, modes);
    const std::size_t half = modes.size() + 1;
    const Eigen::MatrixXcd m = assemble(omega_c.thz(), modes, options.include_diamagnetic);
    const Eigen::MatrixXcd h = energy_form(m, half);
    Eigen::LLT<Eigen::MatrixXcd> llt(h);
    if (llt.info() != Eigen::Success) {
        report_instability(m, matrix_scale(omega_c.thz(), modes));
    }
    const Eigen::MatrixXcd l = llt.matrixL();
    Eigen::MatrixXcd w = l.adjoint() * energy_form(l, half);
    w = 0.5 * (w + w.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(w, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& values = solver.eigenvalues();
    std::vector<double> out(half);
    for (std::size_t k = 0; k < half; ++k) {
        out[k] = values(static_cast<Eigen::Index>(half + k));
    }
    return out;
}

Fractions fractions(const PolaritonMode& mode)
{
    if (mode.x.size() != mode.z.size()) {
        throw ContractViolation("polariton mode has mismatched x/z coefficient counts");
    }
    const double norm = mode.bogoliubov_norm();
    if (std::abs(norm - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << "polariton mode is not normalized (Bogoliubov norm " << norm << ")";
        throw ContractViolation(msg.str());
    }
    Fractions f;
    f.photon = std::norm(mode.w) - std::norm(mode.y);
    f.phonon.resize(mode.x.size());
    for (std::size_t l = 0; l < mode.x.size(); ++l) {
        f.phonon[l] = std::norm(mode.x[l]) - std::norm(mode.z[l]);
    }
    return f;
}

Complex bogoliubov_overlap(const PolaritonMode& lhs, const PolaritonMode& rhs)
{
    Complex s = std::conj(lhs.w) * rhs.w - std::conj(lhs.y) * rhs.y;
    for (std::size_t l = 0; l < lhs.x.size() && l < rhs.x.size(); ++l) {
        s += std::conj(lhs.x[l]) * rhs.x[l] - std::conj(lhs.z[l]) * rhs.z[l];
    }
    return s;
}

} // namespace polariton
