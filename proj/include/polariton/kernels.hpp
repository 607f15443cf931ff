#pragma once

// Grid kernels for the classical spectra. Each kernel has a scalar reference
// implementation and an AVX2/FMA variant selected at runtime; both must agree
// to rounding (see tests/test_kernels.cpp).
//
// Oscillators are passed structure-of-arrays: squared frequencies, squared
// plasma frequencies and dampings, all in THz units.

#include <span>
#include <string>

namespace polariton::kernels {

enum class Backend { Scalar, Avx2 };

std::string to_string(Backend backend);

struct Oscillators {
    std::span<const double> omega2;  // w_l^2
    std::span<const double> nu2;     // nu_l^2
    std::span<const double> gamma;   // gamma_l
};

/// out[i] = 1 / |D(w_i)|^2 with
/// D(w) = w^2 + i kappa w - wc^2 - sum_l nu_l^2 w^2 / (w^2 - w_l^2 + i gamma_l w).
void coupled_response_scalar(std::span<const double> omega, double omega_c, double kappa,
                             const Oscillators& osc, std::span<double> out);

/// Thin film on a substrate, normalized to the same film without oscillators:
/// out[i] = |t(w_i) / t_bg(w_i)|^2, t = (1 + ns) / (1 + ns - i k w (eps(w) - 1)),
/// eps(w) = eps_inf + sum_l nu_l^2 / (w_l^2 - w^2 - i gamma_l w).
/// `k_per_thz` is 2 pi d / c expressed per THz.
void film_transmittance_scalar(std::span<const double> omega, double eps_inf, double k_per_thz,
                               double substrate_index, const Oscillators& osc, std::span<double> out);

/// Only callable when avx2_available(); otherwise they throw std::runtime_error.
void coupled_response_avx2(std::span<const double> omega, double omega_c, double kappa,
                           const Oscillators& osc, std::span<double> out);
void film_transmittance_avx2(std::span<const double> omega, double eps_inf, double k_per_thz,
                             double substrate_index, const Oscillators& osc, std::span<double> out);

/// True when the AVX2 variant was compiled in and the CPU supports AVX2 + FMA.
bool avx2_available();

/// Backend used by the dispatching entry points. Defaults to the best
/// available one; POLARITON_SIMD=scalar in the environment forces scalar.
Backend active_backend();

/// Throws std::runtime_error if the requested backend is unavailable.
void set_backend(Backend backend);

void coupled_response(std::span<const double> omega, double omega_c, double kappa,
                      const Oscillators& osc, std::span<double> out);
void film_transmittance(std::span<const double> omega, double eps_inf, double k_per_thz,
                        double substrate_index, const Oscillators& osc, std::span<double> out);

} // namespace polariton::kernels
