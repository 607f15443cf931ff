#pragma once

// Domain types shared by every module.
//
// Units: all frequencies are ordinary frequencies in THz (not angular). Every
// relation in the Hopfield model is homogeneous in frequency, so using f
// instead of 2*pi*f only rescales results. Temperatures are in K, slot
// lengths in micrometres.

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace polariton {

/// Ordinary frequency in THz.
class Frequency {
public:
    constexpr Frequency() = default;
    constexpr explicit Frequency(double thz) : thz_(thz) {}

    constexpr double thz() const { return thz_; }

    constexpr auto operator<=>(const Frequency&) const = default;

    constexpr Frequency operator*(double s) const { return Frequency(thz_ * s); }
    constexpr Frequency operator/(double s) const { return Frequency(thz_ / s); }
    constexpr double operator/(Frequency other) const { return thz_ / other.thz_; }

private:
    double thz_ = 0.0;
};

constexpr Frequency operator*(double s, Frequency f) { return f * s; }

namespace literals {
constexpr Frequency operator""_THz(long double v) { return Frequency(static_cast<double>(v)); }
constexpr Frequency operator""_THz(unsigned long long v) { return Frequency(static_cast<double>(v)); }
} // namespace literals

/// One transverse-optical phonon oscillator.
struct PhononMode {
    std::string label;
    Frequency omega;  // bare TO frequency
    Frequency nu;     // effective ionic plasma frequency (oscillator strength)
    Frequency gamma;  // damping, only used for spectra
};

enum class Phase { Tetragonal, Orthorhombic };

std::string to_string(Phase phase);
Phase parse_phase(const std::string& text);

/// Phase-resolved phonon sets plus the structural transition temperature.
struct MaterialModel {
    std::string name;
    double tc_kelvin = 0.0;
    std::vector<PhononMode> tetragonal_modes;
    std::vector<PhononMode> orthorhombic_modes;

    const std::vector<PhononMode>& modes(Phase phase) const
    {
        return phase == Phase::Tetragonal ? tetragonal_modes : orthorhombic_modes;
    }
};

/// Empirical slot-length to cavity-frequency law, omega_c = amplitude / length^exponent.
struct CavityCalibration {
    double amplitude = 91.2;  // THz * um^exponent
    double exponent = 1.0;
};

/// Checks a mode set: omega > 0, nu >= 0, gamma >= 0, unique labels.
/// Throws DomainError.
void validate_modes(std::span<const PhononMode> modes);
void validate_material(const MaterialModel& material);

/// g = (nu / 2) sqrt(omega_mode / omega_c).
///
/// nu == 0 is accepted and gives the decoupled limit g = 0; every other
/// argument must be strictly positive.
Frequency coupling_strength(Frequency nu, Frequency omega_mode, Frequency omega_c);

Frequency cavity_frequency(double length_um, const CavityCalibration& cal = {});

/// Inverse of cavity_frequency.
double slot_length(Frequency omega_c, const CavityCalibration& cal = {});

/// T < tc selects the orthorhombic set; T >= tc (boundary included) the tetragonal one.
Phase phase_at(const MaterialModel& material, double t_kelvin);
const std::vector<PhononMode>& mode_set_at(const MaterialModel& material, double t_kelvin);

/// nu such that g / omega_mode equals g_over_omega at resonance (omega_c = omega_mode).
Frequency nu_from_normalized_coupling(double g_over_omega, Frequency omega_mode);

/// g / omega_mode evaluated at resonance: nu / (2 omega_mode).
double normalized_coupling_at_resonance(Frequency nu, Frequency omega_mode);

} // namespace polariton
