#include "polariton/kernels.hpp"

#include <immintrin.h>

#include <cstddef>

namespace polariton::kernels {

void coupled_response_avx2(std::span<const double> omega, double omega_c, double kappa,
                           const Oscillators& osc, std::span<double> out)
{
    const std::size_t count = omega.size();
    const std::size_t n = osc.omega2.size();
    const __m256d wc2 = _mm256_set1_pd(omega_c * omega_c);
    const __m256d kap = _mm256_set1_pd(kappa);
    const __m256d one = _mm256_set1_pd(1.0);

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d w = _mm256_loadu_pd(omega.data() + i);
        const __m256d w2 = _mm256_mul_pd(w, w);
        __m256d re = _mm256_sub_pd(w2, wc2);
        __m256d im = _mm256_mul_pd(kap, w);
        for (std::size_t l = 0; l < n; ++l) {
            const __m256d a = _mm256_sub_pd(w2, _mm256_set1_pd(osc.omega2[l]));
            const __m256d b = _mm256_mul_pd(_mm256_set1_pd(osc.gamma[l]), w);
            const __m256d mag = _mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b));
            const __m256d q = _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(osc.nu2[l]), w2), mag);
            re = _mm256_fnmadd_pd(q, a, re);
            im = _mm256_fmadd_pd(q, b, im);
        }
        const __m256d mag = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
        _mm256_storeu_pd(out.data() + i, _mm256_div_pd(one, mag));
    }
    if (i < count) {
        coupled_response_scalar(omega.subspan(i), omega_c, kappa, osc, out.subspan(i));
    }
}

void film_transmittance_avx2(std::span<const double> omega, double eps_inf, double k_per_thz,
                             double substrate_index, const Oscillators& osc, std::span<double> out)
{
    const std::size_t count = omega.size();
    const std::size_t n = osc.omega2.size();
    const double s_scalar = 1.0 + substrate_index;
    const __m256d s = _mm256_set1_pd(s_scalar);
    const __m256d s2 = _mm256_set1_pd(s_scalar * s_scalar);
    const __m256d einf = _mm256_set1_pd(eps_inf);
    const __m256d einf_m1 = _mm256_set1_pd(eps_inf - 1.0);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d k = _mm256_set1_pd(k_per_thz);

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d w = _mm256_loadu_pd(omega.data() + i);
        const __m256d w2 = _mm256_mul_pd(w, w);
        __m256d eps_re = einf;
        __m256d eps_im = _mm256_setzero_pd();
        for (std::size_t l = 0; l < n; ++l) {
            const __m256d a = _mm256_sub_pd(_mm256_set1_pd(osc.omega2[l]), w2);
            const __m256d b = _mm256_mul_pd(_mm256_set1_pd(osc.gamma[l]), w);
            const __m256d mag = _mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b));
            const __m256d q = _mm256_div_pd(_mm256_set1_pd(osc.nu2[l]), mag);
            eps_re = _mm256_fmadd_pd(q, a, eps_re);
            eps_im = _mm256_fmadd_pd(q, b, eps_im);
        }
        const __m256d x = _mm256_mul_pd(k, w);
        const __m256d den_re = _mm256_fmadd_pd(x, eps_im, s);
        const __m256d den_im = _mm256_mul_pd(x, _mm256_sub_pd(eps_re, one));
        const __m256d bg_im = _mm256_mul_pd(x, einf_m1);
        const __m256d num = _mm256_fmadd_pd(bg_im, bg_im, s2);
        const __m256d den = _mm256_fmadd_pd(den_re, den_re, _mm256_mul_pd(den_im, den_im));
        _mm256_storeu_pd(out.data() + i, _mm256_div_pd(num, den));
    }
    if (i < count) {
        film_transmittance_scalar(omega.subspan(i), eps_inf, k_per_thz, substrate_index, osc,
                                  out.subspan(i));
    }
}

} // namespace polariton::kernels
