#include "polariton/presets.hpp"

#include "polariton/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace polariton {

using nlohmann::json;

namespace {

PhononMode make_mode(const char* label, double omega, double g_over_omega)
{
    const Frequency w(omega);
    return PhononMode{label, w, nu_from_normalized_coupling(g_over_omega, w), Frequency(0.05)};
}

std::vector<PhononMode> modes_from_json(const json& phase, const char* phase_name)
{
    if (!phase.contains("modes") || !phase.at("modes").is_array()) {
        throw DomainError(std::string("material: phase '") + phase_name + "' needs a 'modes' array");
    }
    std::vector<PhononMode> modes;
    for (const auto& entry : phase.at("modes")) {
        PhononMode mode;
        mode.label = entry.at("label").get<std::string>();
        mode.omega = Frequency(entry.at("omega").get<double>());
        mode.nu = Frequency(entry.value("nu", 0.0));
        mode.gamma = Frequency(entry.value("gamma", 0.0));
        modes.push_back(std::move(mode));
    }
    return modes;
}

json modes_to_json(const std::vector<PhononMode>& modes)
{
    json out = json::array();
    for (const auto& mode : modes) {
        out.push_back({{"label", mode.label},
                       {"omega", mode.omega.thz()},
                       {"nu", mode.nu.thz()},
                       {"gamma", mode.gamma.thz()}});
    }
    return out;
}

} // namespace

MaterialModel mapbi3_preset()
{
    MaterialModel m;
    m.name = "mapbi3";
    m.tc_kelvin = 162.5;
    m.tetragonal_modes = {make_mode("TO1", 0.95, 0.36), make_mode("TO2", 1.78, 0.35)};
    m.orthorhombic_modes = {make_mode("TO1", 0.98, 0.28), make_mode("TO2", 1.7, 0.36),
                            make_mode("TO3", 0.77, 0.25)};
    return m;
}

std::vector<std::string> preset_names()
{
    return {"mapbi3"};
}

MaterialModel preset(const std::string& name)
{
    if (name == "mapbi3") {
        return mapbi3_preset();
    }
    throw DomainError("unknown preset '" + name + "'");
}

MaterialModel material_from_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("material: invalid JSON: ") + e.what());
    }
    try {
        MaterialModel m;
        m.name = doc.value("name", std::string("custom"));
        m.tc_kelvin = doc.at("tc_kelvin").get<double>();
        const auto& phases = doc.at("phases");
        m.tetragonal_modes = modes_from_json(phases.at("tetragonal"), "tetragonal");
        m.orthorhombic_modes = modes_from_json(phases.at("orthorhombic"), "orthorhombic");
        validate_material(m);
        return m;
    } catch (const json::exception& e) {
        throw DomainError(std::string("material: schema error: ") + e.what());
    }
}

std::string material_to_json(const MaterialModel& material)
{
    json doc;
    doc["name"] = material.name;
    doc["units"] = {{"frequency", "THz"}, {"temperature", "K"}, {"length", "um"}};
    doc["tc_kelvin"] = material.tc_kelvin;
    doc["phases"]["tetragonal"]["modes"] = modes_to_json(material.tetragonal_modes);
    doc["phases"]["orthorhombic"]["modes"] = modes_to_json(material.orthorhombic_modes);
    return doc.dump(2) + "\n";
}

MaterialModel load_material(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open material file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return material_from_json(buffer.str());
}

} // namespace polariton
