#include "polariton/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace polariton::kernels {

namespace {

bool cpu_has_avx2()
{
#if defined(POLARITON_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend initial_backend()
{
    if (const char* env = std::getenv("POLARITON_SIMD")) {
        if (std::string_view(env) == "scalar") {
            return Backend::Scalar;
        }
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current()
{
    static std::atomic<Backend> backend{initial_backend()};
    return backend;
}

} // namespace

#if !defined(POLARITON_BUILD_AVX2)
void coupled_response_avx2(std::span<const double>, double, double, const Oscillators&, std::span<double>)
{
    throw std::runtime_error("AVX2 kernels were not compiled in");
}

void film_transmittance_avx2(std::span<const double>, double, double, double, const Oscillators&,
                             std::span<double>)
{
    throw std::runtime_error("AVX2 kernels were not compiled in");
}
#endif

std::string to_string(Backend backend)
{
    return backend == Backend::Avx2 ? "avx2" : "scalar";
}

bool avx2_available()
{
    static const bool available = cpu_has_avx2();
    return available;
}

Backend active_backend()
{
    return current().load();
}

void set_backend(Backend backend)
{
    if (backend == Backend::Avx2 && !avx2_available()) {
        throw std::runtime_error("AVX2 backend requested but not available on this CPU/build");
    }
    current().store(backend);
}

void coupled_response(std::span<const double> omega, double omega_c, double kappa,
                      const Oscillators& osc, std::span<double> out)
{
    if (active_backend() == Backend::Avx2) {
        coupled_response_avx2(omega, omega_c, kappa, osc, out);
    } else {
        coupled_response_scalar(omega, omega_c, kappa, osc, out);
    }
}

void film_transmittance(std::span<const double> omega, double eps_inf, double k_per_thz,
                        double substrate_index, const Oscillators& osc, std::span<double> out)
{
    if (active_backend() == Backend::Avx2) {
        film_transmittance_avx2(omega, eps_inf, k_per_thz, substrate_index, osc, out);
    } else {
        film_transmittance_scalar(omega, eps_inf, k_per_thz, substrate_index, osc, out);
    }
}

} // namespace polariton::kernels
