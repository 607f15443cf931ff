#include "polariton/kernels.hpp"

#include <cstddef>

namespace polariton::kernels {

void coupled_response_scalar(std::span<const double> omega, double omega_c, double kappa,
                             const Oscillators& osc, std::span<double> out)
{
    const double wc2 = omega_c * omega_c;
    const std::size_t n = osc.omega2.size();
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w = omega[i];
        const double w2 = w * w;
        double re = w2 - wc2;
        double im = kappa * w;
        for (std::size_t l = 0; l < n; ++l) {
            // nu^2 w^2 / (A + iB) = q (A - iB)
            const double a = w2 - osc.omega2[l];
            const double b = osc.gamma[l] * w;
            const double q = osc.nu2[l] * w2 / (a * a + b * b);
            re -= q * a;
            im += q * b;
        }
        out[i] = 1.0 / (re * re + im * im);
    }
}

void film_transmittance_scalar(std::span<const double> omega, double eps_inf, double k_per_thz,
                               double substrate_index, const Oscillators& osc, std::span<double> out)
{
    const double s = 1.0 + substrate_index;
    const std::size_t n = osc.omega2.size();
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w = omega[i];
        const double w2 = w * w;
        double eps_re = eps_inf;
        double eps_im = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            // nu^2 / (A - iB) = q (A + iB)
            const double a = osc.omega2[l] - w2;
            const double b = osc.gamma[l] * w;
            const double q = osc.nu2[l] / (a * a + b * b);
            eps_re += q * a;
            eps_im += q * b;
        }
        const double x = k_per_thz * w;
        const double den_re = s + x * eps_im;
        const double den_im = -x * (eps_re - 1.0);
        const double bg_im = x * (eps_inf - 1.0);
        out[i] = (s * s + bg_im * bg_im) / (den_re * den_re + den_im * den_im);
    }
}

} // namespace polariton::kernels
