#pragma once

// Bogoliubov dynamical matrix of the multimode Hopfield Hamiltonian
//
//   H = wc a^+a + sum_l wl b_l^+ b_l - i sum_l g_l (b_l - b_l^+)(a + a^+)
//       + D (a + a^+)^2,          D = sum_l g_l^2 / wl
//
// in the operator basis v = (a, b_1..b_N, a^+, b_1^+..b_N^+). The Heisenberg
// equations give [v_i, H] = sum_j M_ij v_j, so a polariton annihilation
// operator p = c^T v with [p, H] = Omega p is a *left* eigenvector of M:
// c^T M = Omega c^T. See docs/hopfield-derivation.md.

#include "polariton/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace polariton {

using Complex = std::complex<double>;

struct HopfieldOptions {
    /// Keep the A^2 term. Switching it off makes large couplings unstable.
    bool include_diamagnetic = true;
};

class DynamicalMatrix {
public:
    DynamicalMatrix(Eigen::MatrixXcd entries, Frequency omega_c, std::vector<PhononMode> modes);

    const Eigen::MatrixXcd& entries() const { return entries_; }
    Frequency omega_c() const { return omega_c_; }
    const std::vector<PhononMode>& modes() const { return modes_; }
    std::size_t mode_count() const { return modes_.size(); }
    std::size_t dimension() const { return static_cast<std::size_t>(entries_.rows()); }

    /// Largest frequency scale entering the matrix; used for relative tolerances.
    double scale() const;

private:
    Eigen::MatrixXcd entries_;
    Frequency omega_c_;
    std::vector<PhononMode> modes_;
};

struct PolaritonMode {
    Frequency omega;
    Complex w;               // coefficient of a
    std::vector<Complex> x;  // coefficients of b_l
    Complex y;               // coefficient of a^+
    std::vector<Complex> z;  // coefficients of b_l^+
    double photon_fraction = 0.0;
    std::vector<double> phonon_fractions;

    /// |w|^2 + sum|x|^2 - |y|^2 - sum|z|^2
    double bogoliubov_norm() const;

    /// Coefficients packed in basis order (a, b.., a^+, b^+..).
    Eigen::VectorXcd coefficients() const;
};

struct Fractions {
    double photon = 0.0;
    std::vector<double> phonon;
};

Frequency diamagnetic_coefficient(Frequency omega_c, std::span<const PhononMode> modes);

DynamicalMatrix build_dynamical_matrix(Frequency omega_c, std::span<const PhononMode> modes,
                                       const HopfieldOptions& options = {});

/// Returns the N+1 positive-frequency, positive-norm polaritons sorted by
/// ascending Omega, normalized to bogoliubov_norm() == 1 with w real >= 0.
///
/// Throws InstabilityError when the spectrum is not real.
std::vector<PolaritonMode> diagonalize(const DynamicalMatrix& matrix);

/// Eigenfrequencies only, ascending. Cheaper than diagonalize(); used by the fitter.
std::vector<double> polariton_frequencies(Frequency omega_c, std::span<const PhononMode> modes,
                                          const HopfieldOptions& options = {});

/// Recomputes photon and phonon fractions from the coefficients.
/// Throws ContractViolation if the mode is not normalized.
Fractions fractions(const PolaritonMode& mode);

/// Bogoliubov metric overlap <c1|eta|c2>.
Complex bogoliubov_overlap(const PolaritonMode& lhs, const PolaritonMode& rhs);

} // namespace polariton
