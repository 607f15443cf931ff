#include "polariton/cli.hpp"

#include "polariton/dispersion.hpp"
#include "polariton/errors.hpp"
#include "polariton/fit.hpp"
#include "polariton/io.hpp"
#include "polariton/kernels.hpp"
#include "polariton/presets.hpp"
#include "polariton/spectra.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace polariton::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kOutputDirVariable = "POLARITON_OUTPUT_DIR";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MaterialArgs {
    std::string preset;
    std::string material_file;
    std::optional<std::string> modes;
    std::string phase = "tetragonal";
    std::optional<double> temperature;
    double tc = 162.5;
    bool no_diamagnetic = false;
};

struct CavityGridArgs {
    double wc_min = 0.2;
    double wc_max = 3.2;
    double wc_step = 0.01;
    std::vector<double> lengths;
    double cal_amplitude = 91.2;
    double cal_exponent = 1.0;

    CavityCalibration calibration() const { return {cal_amplitude, cal_exponent}; }
};

struct FrequencyGridArgs {
    double omega_min = 0.1;
    double omega_max = 4.0;
    double omega_step = 0.005;
};

void add_material_options(CLI::App* cmd, MaterialArgs& args, bool with_phase)
{
    auto* preset = cmd->add_option("--preset", args.preset, "Built-in material preset (see 'presets')");
    auto* file = cmd->add_option("--material", args.material_file, "Material JSON file");
    auto* modes = cmd->add_option("--modes", args.modes,
                                  "Inline modes 'label:omega:nu[:gamma],...' in THz; '' for none");
    preset->excludes(file)->excludes(modes);
    file->excludes(modes);
    cmd->add_option("--tc", args.tc, "Transition temperature for inline modes (K)")->capture_default_str();
    if (with_phase) {
        auto* phase = cmd->add_option("--phase", args.phase, "tetragonal | orthorhombic")->capture_default_str();
        auto* temp = cmd->add_option("--temperature", args.temperature, "Pick the phase from a temperature (K)");
        phase->excludes(temp);
    }
    cmd->add_flag("--no-diamagnetic", args.no_diamagnetic, "Drop the A^2 term (unstable at large coupling)");
}

void add_calibration_options(CLI::App* cmd, CavityGridArgs& args);

void add_cavity_grid_options(CLI::App* cmd, CavityGridArgs& args)
{
    cmd->add_option("--wc-min", args.wc_min, "Lowest cavity frequency (THz)")->capture_default_str();
    cmd->add_option("--wc-max", args.wc_max, "Highest cavity frequency (THz)")->capture_default_str();
    cmd->add_option("--wc-step", args.wc_step, "Cavity frequency step (THz)")->capture_default_str();
    cmd->add_option("--lengths", args.lengths, "Slot lengths in um instead of a frequency grid")->delimiter(',');
    add_calibration_options(cmd, args);
}

void add_frequency_grid_options(CLI::App* cmd, FrequencyGridArgs& args)
{
    cmd->add_option("--omega-min", args.omega_min, "Lowest probe frequency (THz)")->capture_default_str();
    cmd->add_option("--omega-max", args.omega_max, "Highest probe frequency (THz)")->capture_default_str();
    cmd->add_option("--omega-step", args.omega_step, "Probe frequency step (THz)")->capture_default_str();
}

void add_calibration_options(CLI::App* cmd, CavityGridArgs& args)
{
    cmd->add_option("--calibration-amplitude", args.cal_amplitude, "omega_c = A / length^p: A in THz um^p")
        ->capture_default_str();
    cmd->add_option("--calibration-exponent", args.cal_exponent, "omega_c = A / length^p: p")->capture_default_str();
}

std::vector<PhononMode> parse_inline_modes(const std::string& spec)
{
    std::vector<PhononMode> modes;
    std::istringstream list(spec);
    std::string item;
    while (std::getline(list, item, ',')) {
        if (item.empty()) {
            continue;
        }
        std::vector<std::string> parts;
        std::istringstream fields(item);
        std::string f;
        while (std::getline(fields, f, ':')) {
            parts.push_back(f);
        }
        if (parts.size() < 3 || parts.size() > 4) {
            throw ConfigError("--modes: expected label:omega:nu[:gamma], got '" + item + "'");
        }
        try {
            PhononMode mode;
            mode.label = parts[0];
            mode.omega = Frequency(std::stod(parts[1]));
            mode.nu = Frequency(std::stod(parts[2]));
            mode.gamma = Frequency(parts.size() == 4 ? std::stod(parts[3]) : 0.05);
            modes.push_back(mode);
        } catch (const std::logic_error&) {
            throw ConfigError("--modes: bad number in '" + item + "'");
        }
    }
    validate_modes(modes);
    return modes;
}

MaterialModel resolve_material(const MaterialArgs& args)
{
    const int chosen = (!args.preset.empty() ? 1 : 0) + (!args.material_file.empty() ? 1 : 0) +
                       (args.modes.has_value() ? 1 : 0);
    if (chosen != 1) {
        throw ConfigError("choose exactly one of --preset, --material, --modes");
    }
    if (!args.preset.empty()) {
        return preset(args.preset);
    }
    if (!args.material_file.empty()) {
        return load_material(args.material_file);
    }
    MaterialModel m;
    m.name = "inline";
    m.tc_kelvin = args.tc;
    m.tetragonal_modes = parse_inline_modes(*args.modes);
    m.orthorhombic_modes = m.tetragonal_modes;
    validate_material(m);
    return m;
}

Phase resolve_phase(const MaterialModel& material, const MaterialArgs& args)
{
    if (args.temperature) {
        return phase_at(material, *args.temperature);
    }
    return parse_phase(args.phase);
}

std::vector<double> cavity_grid(const CavityGridArgs& args)
{
    if (args.lengths.empty()) {
        if (!(args.wc_min > 0.0)) {
            throw ConfigError("--wc-min must be positive");
        }
        return linear_grid(args.wc_min, args.wc_max, args.wc_step);
    }
    std::vector<double> grid;
    for (const double l : args.lengths) {
        grid.push_back(cavity_frequency(l, args.calibration()).thz());
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<double> frequency_grid(const FrequencyGridArgs& args)
{
    if (!(args.omega_min > 0.0)) {
        throw ConfigError("--omega-min must be positive");
    }
    return linear_grid(args.omega_min, args.omega_max, args.omega_step);
}

fs::path resolve_output(const std::string& requested, const std::string& fallback)
{
    fs::path path = requested.empty() ? fs::path(fallback) : fs::path(requested);
    if (path.is_relative()) {
        if (const char* dir = std::getenv(kOutputDirVariable); dir && *dir) {
            path = fs::path(dir) / path;
        }
    }
    return path;
}

std::ofstream open_output(const fs::path& path)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    return out;
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path);
    }
    return in;
}

void write_effective_config(const CLI::App& app, const fs::path& output)
{
    auto out = open_output(fs::path(output.string() + ".config.toml"));
    out << app.config_to_str(true, false);
}

std::string single_line(std::string text)
{
    std::replace(text.begin(), text.end(), '\n', ' ');
    std::replace(text.begin(), text.end(), '\r', ' ');
    return text;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multimode Hopfield model of cavity phonon polaritons", "polariton"};
    app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
    app.require_subcommand(1);

    // dispersion
    MaterialArgs disp_material;
    CavityGridArgs disp_grid;
    std::string disp_out;
    auto* dispersion = app.add_subcommand("dispersion", "Polariton branches and fractions vs cavity frequency");
    add_material_options(dispersion, disp_material, true);
    add_cavity_grid_options(dispersion, disp_grid);
    dispersion->add_option("--out", disp_out, "Output CSV (default dispersion.csv)");

    // fit
    MaterialArgs fit_material;
    CavityGridArgs fit_cal;
    std::string fit_points;
    std::string fit_out;
    FitOptions fit_options;
    auto* fit = app.add_subcommand("fit", "Fit plasma frequencies nu to measured branch points");
    add_material_options(fit, fit_material, true);
    add_calibration_options(fit, fit_cal);
    fit->add_option("--points", fit_points, "Branch-point CSV")->required();
    fit->add_option("--out", fit_out, "Report file (default fit_report.txt)");
    fit->add_option("--nu-max", fit_options.nu_max, "Upper bound on nu (THz)");
    fit->add_option("--tolerance", fit_options.tolerance, "Residual-change tolerance (THz)")->capture_default_str();
    fit->add_option("--max-iterations", fit_options.max_iterations, "Refinement sweeps")->capture_default_str();

    // compare
    std::string cmp_high;
    std::string cmp_low;
    std::string cmp_out;
    auto* compare = app.add_subcommand("compare", "Compare fitted couplings across the transition");
    compare->add_option("--high", cmp_high, "Fit report above the transition")->required();
    compare->add_option("--low", cmp_low, "Fit report below the transition")->required();
    compare->add_option("--out", cmp_out, "Comparison file (default comparison.txt)");

    // scan-temperature
    MaterialArgs scan_material;
    double scan_wc = 1.2;
    double t_min = 140.0;
    double t_max = 180.0;
    double t_step = 0.5;
    std::string scan_out;
    auto* scan = app.add_subcommand("scan-temperature", "Branch frequencies vs temperature across the transition");
    add_material_options(scan, scan_material, false);
    scan->add_option("--omega-c", scan_wc, "Cavity frequency (THz)")->capture_default_str();
    scan->add_option("--t-min", t_min, "Lowest temperature (K)")->capture_default_str();
    scan->add_option("--t-max", t_max, "Highest temperature (K)")->capture_default_str();
    scan->add_option("--t-step", t_step, "Temperature step (K)")->capture_default_str();
    scan->add_option("--out", scan_out, "Output CSV (default scan.csv)");

    // synth-map
    MaterialArgs map_material;
    CavityGridArgs map_grid;
    FrequencyGridArgs map_freq;
    double map_kappa = 0.1;
    std::optional<double> map_gamma;
    std::string map_out;
    auto* synth = app.add_subcommand("synth-map", "Normalized transmittance map (rows omega, columns omega_c)");
    add_material_options(synth, map_material, true);
    add_cavity_grid_options(synth, map_grid);
    add_frequency_grid_options(synth, map_freq);
    synth->add_option("--kappa", map_kappa, "Cavity linewidth (THz)")->capture_default_str();
    synth->add_option("--gamma", map_gamma, "Override every phonon linewidth (THz)");
    synth->add_option("--out", map_out, "Output CSV (default map.csv)");

    // extract
    std::string ext_map;
    double ext_prominence = 0.05;
    std::string ext_out;
    auto* extract = app.add_subcommand("extract", "Peak positions of every map column as branch points");
    extract->add_option("--map", ext_map, "Map CSV written by synth-map")->required();
    extract->add_option("--min-prominence", ext_prominence, "Relative peak prominence")->capture_default_str();
    extract->add_option("--out", ext_out, "Output CSV (default points.csv)");

    // spectrum
    MaterialArgs spec_material;
    FrequencyGridArgs spec_freq;
    double spec_wc = 1.52;
    double spec_kappa = 0.1;
    std::optional<double> spec_gamma;
    bool spec_film = false;
    FilmParameters film;
    std::string spec_out;
    auto* spectrum = app.add_subcommand("spectrum", "Single transmittance spectrum (cavity or bare film)");
    add_material_options(spectrum, spec_material, true);
    add_frequency_grid_options(spectrum, spec_freq);
    spectrum->add_option("--omega-c", spec_wc, "Cavity frequency (THz)")->capture_default_str();
    spectrum->add_option("--kappa", spec_kappa, "Cavity linewidth (THz)")->capture_default_str();
    spectrum->add_option("--gamma", spec_gamma, "Override every phonon linewidth (THz)");
    spectrum->add_flag("--film", spec_film, "Bare film on substrate instead of the cavity");
    spectrum->add_option("--eps-inf", film.eps_inf, "Film background permittivity")->capture_default_str();
    spectrum->add_option("--thickness-nm", film.thickness_nm, "Film thickness (nm)")->capture_default_str();
    spectrum->add_option("--substrate-index", film.substrate_index, "Substrate refractive index")
        ->capture_default_str();
    spectrum->add_option("--out", spec_out, "Output CSV (default spectrum.csv)");

    // presets
    std::string show;
    std::string presets_out;
    auto* presets = app.add_subcommand("presets", "List built-in materials or print one as JSON");
    presets->add_option("--show", show, "Preset to print");
    presets->add_option("--out", presets_out, "Write the JSON here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        // subcommand help arrives here as a Success-coded error
        if (e.get_exit_code() == 0) {
            for (const auto* sub : app.get_subcommands()) {
                out << sub->help();
            }
            return kOk;
        }
        err << "polariton: error[config]: " << single_line(e.what()) << '\n';
        return kConfigError;
    }

    try {
        if (dispersion->parsed()) {
            const MaterialModel material = resolve_material(disp_material);
            const Phase phase = resolve_phase(material, disp_material);
            SweepOptions options;
            options.hopfield.include_diamagnetic = !disp_material.no_diamagnetic;
            const auto grid = cavity_grid(disp_grid);
            const DispersionMap map = sweep(material.modes(phase), grid, options);
            const fs::path path = resolve_output(disp_out, "dispersion.csv");
            auto file = open_output(path);
            io::write_dispersion(file, map);
            write_effective_config(app, path);
            const auto flagged = std::count(map.ambiguous.begin(), map.ambiguous.end(), true);
            out << "dispersion: " << to_string(phase) << ", " << map.branch_count() << " branches, "
                << map.size() << " grid points, " << flagged << " ambiguous -> " << path.string() << '\n';
        } else if (fit->parsed()) {
            const MaterialModel material = resolve_material(fit_material);
            const Phase phase = resolve_phase(material, fit_material);
            fit_options.hopfield.include_diamagnetic = !fit_material.no_diamagnetic;
            auto in = open_input(fit_points);
            const auto points = io::read_branch_points(in, fit_cal.calibration());
            const auto& modes = material.modes(phase);
            const FitResult result = fit_couplings(points, modes, fit_options);
            const fs::path path = resolve_output(fit_out, "fit_report.txt");
            auto file = open_output(path);
            io::write_fit_report(file, result, to_string(phase));
            write_effective_config(app, path);
            out << "fit: " << to_string(phase) << ", " << points.size() << " points, rms residual "
                << io::format_number(result.rms_residual) << " THz, "
                << (result.converged ? "converged" : "NOT converged") << " after " << result.iterations
                << " sweeps\n";
            for (std::size_t l = 0; l < result.labels.size(); ++l) {
                out << "  " << result.labels[l] << ": g/omega = " << io::format_number(result.normalized_couplings[l])
                    << "  nu = " << io::format_number(result.nu[l]) << " THz\n";
            }
            out << "report -> " << path.string() << '\n';
        } else if (compare->parsed()) {
            auto high_in = open_input(cmp_high);
            auto low_in = open_input(cmp_low);
            const FitResult high = io::read_fit_report(high_in);
            const FitResult low = io::read_fit_report(low_in);
            const PhaseComparison report = compare_phases(high, low);
            const fs::path path = resolve_output(cmp_out, "comparison.txt");
            auto file = open_output(path);
            io::write_comparison(file, report);
            for (const auto& c : report.shared) {
                out << c.label << ": g/omega " << io::format_number(c.g_over_omega_high) << " -> "
                    << io::format_number(c.g_over_omega_low) << " (" << io::format_number(100.0 * c.relative_change_g_over_omega)
                    << " %), nu " << io::format_number(100.0 * c.relative_change_nu) << " %\n";
            }
            for (const auto& label : report.only_low) {
                out << label << ": only below the transition\n";
            }
            for (const auto& label : report.only_high) {
                out << label << ": only above the transition\n";
            }
        } else if (scan->parsed()) {
            const MaterialModel material = resolve_material(scan_material);
            if (!(t_min > 0.0)) {
                throw ConfigError("--t-min must be positive");
            }
            HopfieldOptions options;
            options.include_diamagnetic = !scan_material.no_diamagnetic;
            const auto t_grid = linear_grid(t_min, t_max, t_step);
            const TemperatureScan result = scan_temperature(material, Frequency(scan_wc), t_grid, options);
            const fs::path path = resolve_output(scan_out, "scan.csv");
            auto file = open_output(path);
            io::write_scan(file, result);
            const auto changes = result.change_points();
            fs::path summary = path;
            summary.replace_extension(".changepoints.csv");
            auto summary_file = open_output(summary);
            io::write_change_points(summary_file, changes);
            write_effective_config(app, path);
            if (changes.empty()) {
                out << "change_points = none\n";
            }
            for (const auto& c : changes) {
                out << "change_point_T = " << io::format_number(c.t_after) << "  (" << c.count_before << " -> "
                    << c.count_after << " branches)\n";
            }
        } else if (synth->parsed()) {
            const MaterialModel material = resolve_material(map_material);
            const Phase phase = resolve_phase(material, map_material);
            const auto& modes = material.modes(phase);
            DampingSet damping = DampingSet::from_modes(modes, Frequency(map_kappa));
            if (map_gamma) {
                damping.gammas.assign(modes.size(), Frequency(*map_gamma));
            }
            const TransmittanceMap map =
                synth_map(modes, cavity_grid(map_grid), damping, frequency_grid(map_freq));
            const fs::path path = resolve_output(map_out, "map.csv");
            auto file = open_output(path);
            io::write_map(file, map);
            write_effective_config(app, path);
            out << "synth-map: " << map.omega_grid.size() << " x " << map.omega_c_grid.size() << " ("
                << kernels::to_string(kernels::active_backend()) << ") -> " << path.string() << '\n';
        } else if (extract->parsed()) {
            auto in = open_input(ext_map);
            const TransmittanceMap map = io::read_map(in);
            const auto points = extract_branch_points(map, ext_prominence);
            const fs::path path = resolve_output(ext_out, "points.csv");
            auto file = open_output(path);
            io::write_branch_points(file, points);
            out << "extract: " << points.size() << " peaks -> " << path.string() << '\n';
        } else if (spectrum->parsed()) {
            const MaterialModel material = resolve_material(spec_material);
            const Phase phase = resolve_phase(material, spec_material);
            std::vector<PhononMode> modes = material.modes(phase);
            if (spec_gamma) {
                for (auto& m : modes) {
                    m.gamma = Frequency(*spec_gamma);
                }
            }
            const auto grid = frequency_grid(spec_freq);
            const Spectrum s = spec_film ? bare_film_transmittance(modes, film, grid)
                                         : coupled_transmittance(modes, Frequency(spec_wc),
                                                                 DampingSet::from_modes(modes, Frequency(spec_kappa)),
                                                                 grid);
            const fs::path path = resolve_output(spec_out, "spectrum.csv");
            auto file = open_output(path);
            io::write_spectrum(file, s);
            write_effective_config(app, path);
            if (s.metadata.thin_film_warning) {
                err << "polariton: warning: film thickness exceeds a tenth of the shortest wavelength\n";
            }
            out << "spectrum: " << s.metadata.kind << ", " << s.omega.size() << " points -> " << path.string() << '\n';
        } else if (presets->parsed()) {
            if (show.empty()) {
                for (const auto& name : preset_names()) {
                    out << name << '\n';
                }
            } else if (presets_out.empty()) {
                out << material_to_json(preset(show));
            } else {
                const fs::path path = resolve_output(presets_out, "");
                auto file = open_output(path);
                file << material_to_json(preset(show));
            }
        }
    } catch (const ConfigError& e) {
        err << "polariton: error[config]: " << single_line(e.what()) << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        err << "polariton: error[config]: " << single_line(e.what()) << '\n';
        return kConfigError;
    } catch (const io::FormatError& e) {
        err << "polariton: error[input]: " << single_line(e.what()) << '\n';
        return kConfigError;
    } catch (const InstabilityError& e) {
        err << "polariton: error[numeric]: " << single_line(e.what()) << '\n';
        return kNumericalError;
    } catch (const NumericalError& e) {
        err << "polariton: error[numeric]: " << single_line(e.what()) << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "polariton: error[internal]: " << single_line(e.what()) << '\n';
        return kUnexpected;
    }
    return kOk;
}

} // namespace polariton::cli
