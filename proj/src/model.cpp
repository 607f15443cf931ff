#include "polariton/model.hpp"

#include "polariton/errors.hpp"

#include <cmath>
#include <set>

namespace polariton {

std::string to_string(Phase phase)
{
    return phase == Phase::Tetragonal ? "tetragonal" : "orthorhombic";
}

Phase parse_phase(const std::string& text)
{
    if (text == "tetragonal" || text == "high") {
        return Phase::Tetragonal;
    }
    if (text == "orthorhombic" || text == "low") {
        return Phase::Orthorhombic;
    }
    throw DomainError("unknown phase '" + text + "' (expected tetragonal or orthorhombic)");
}

void validate_modes(std::span<const PhononMode> modes)
{
    std::set<std::string> seen;
    for (const auto& mode : modes) {
        if (!(mode.omega.thz() > 0.0) || !std::isfinite(mode.omega.thz())) {
            throw DomainError("phonon '" + mode.label + "': omega must be positive");
        }
        if (!(mode.nu.thz() >= 0.0) || !std::isfinite(mode.nu.thz())) {
            throw DomainError("phonon '" + mode.label + "': nu must be non-negative");
        }
        if (!(mode.gamma.thz() >= 0.0) || !std::isfinite(mode.gamma.thz())) {
            throw DomainError("phonon '" + mode.label + "': gamma must be non-negative");
        }
        if (!seen.insert(mode.label).second) {
            throw DomainError("duplicate phonon label '" + mode.label + "'");
        }
    }
}

void validate_material(const MaterialModel& material)
{
    if (!(material.tc_kelvin > 0.0)) {
        throw DomainError("material '" + material.name + "': tc must be positive");
    }
    validate_modes(material.tetragonal_modes);
    validate_modes(material.orthorhombic_modes);
}

Frequency coupling_strength(Frequency nu, Frequency omega_mode, Frequency omega_c)
{
    if (!(nu.thz() >= 0.0)) {
        throw DomainError("coupling_strength: nu must be non-negative");
    }
    if (!(omega_mode.thz() > 0.0) || !(omega_c.thz() > 0.0)) {
        throw DomainError("coupling_strength: frequencies must be positive");
    }
    return Frequency(0.5 * nu.thz() * std::sqrt(omega_mode.thz() / omega_c.thz()));
}

Frequency cavity_frequency(double length_um, const CavityCalibration& cal)
{
    if (!(length_um > 0.0)) {
        throw DomainError("cavity_frequency: slot length must be positive");
    }
    if (!(cal.amplitude > 0.0) || !(cal.exponent > 0.0)) {
        throw DomainError("cavity_frequency: calibration amplitude and exponent must be positive");
    }
    return Frequency(cal.amplitude / std::pow(length_um, cal.exponent));
}

double slot_length(Frequency omega_c, const CavityCalibration& cal)
{
    if (!(omega_c.thz() > 0.0)) {
        throw DomainError("slot_length: cavity frequency must be positive");
    }
    return std::pow(cal.amplitude / omega_c.thz(), 1.0 / cal.exponent);
}

Phase phase_at(const MaterialModel& material, double t_kelvin)
{
    if (!(t_kelvin > 0.0)) {
        throw DomainError("temperature must be positive");
    }
    return t_kelvin < material.tc_kelvin ? Phase::Orthorhombic : Phase::Tetragonal;
}

const std::vector<PhononMode>& mode_set_at(const MaterialModel& material, double t_kelvin)
{
    return material.modes(phase_at(material, t_kelvin));
}

Frequency nu_from_normalized_coupling(double g_over_omega, Frequency omega_mode)
{
    return Frequency(2.0 * g_over_omega * omega_mode.thz());
}

double normalized_coupling_at_resonance(Frequency nu, Frequency omega_mode)
{
    return nu.thz() / (2.0 * omega_mode.thz());
}

} // namespace polariton
