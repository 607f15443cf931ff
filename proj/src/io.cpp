#include "polariton/io.hpp"

#include "polariton/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace polariton::io {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double parse_double(const std::string& text, std::size_t line, const std::string& column)
{
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value)) {
        throw FormatError("line " + std::to_string(line) + ": column '" + column +
                          "': not a number: '" + text + "'");
    }
    return value;
}

int column_index(const std::vector<std::string>& header, const std::string& name)
{
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

} // namespace

std::string format_number(double x)
{
    if (x == 0.0) {
        return "0";
    }
    char buffer[64];
    if (std::abs(x) < 1e-3) {
        std::snprintf(buffer, sizeof buffer, "%.8e", x);
    } else {
        std::snprintf(buffer, sizeof buffer, "%.9g", x);
    }
    return buffer;
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    std::size_t number = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        auto cells = split(t, ',');
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw FormatError("line " + std::to_string(number) + ": expected " +
                              std::to_string(table.header.size()) + " columns, found " +
                              std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(number);
    }
    if (!have_header) {
        throw FormatError("missing CSV header row");
    }
    return table;
}

void write_dispersion(std::ostream& out, const DispersionMap& map)
{
    out << "omega_c,branch,Omega,F_pt";
    for (const auto& mode : map.modes) {
        out << ",F_ph_" << mode.label;
    }
    out << '\n';
    for (std::size_t i = 0; i < map.size(); ++i) {
        for (std::size_t k = 0; k < map.branch_count(); ++k) {
            const auto& p = map.points[i][k];
            out << format_number(map.omega_c_grid[i]) << ','
                << map.labels(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) << ','
                << format_number(p.omega.thz()) << ',' << format_number(p.photon_fraction);
            for (const double f : p.phonon_fractions) {
                out << ',' << format_number(f);
            }
            out << '\n';
        }
    }
}

void write_scan(std::ostream& out, const TemperatureScan& scan)
{
    out << "T_kelvin,phase,branch,Omega\n";
    for (const auto& sample : scan.samples) {
        for (std::size_t k = 0; k < sample.branches.size(); ++k) {
            out << format_number(sample.t_kelvin) << ',' << to_string(sample.phase) << ',' << k << ','
                << format_number(sample.branches[k]) << '\n';
        }
    }
}

void write_change_points(std::ostream& out, const std::vector<ChangePoint>& points)
{
    out << "T_before,T_after,count_before,count_after\n";
    for (const auto& c : points) {
        out << format_number(c.t_before) << ',' << format_number(c.t_after) << ',' << c.count_before << ','
            << c.count_after << '\n';
    }
}

void write_spectrum(std::ostream& out, const Spectrum& spectrum)
{
    out << "omega,transmittance\n";
    for (std::size_t i = 0; i < spectrum.omega.size(); ++i) {
        out << format_number(spectrum.omega[i]) << ',' << format_number(spectrum.transmittance[i]) << '\n';
    }
}

void write_map(std::ostream& out, const TransmittanceMap& map)
{
    out << "omega";
    for (const double wc : map.omega_c_grid) {
        out << ',' << format_number(wc);
    }
    out << '\n';
    for (std::size_t i = 0; i < map.omega_grid.size(); ++i) {
        out << format_number(map.omega_grid[i]);
        for (std::size_t j = 0; j < map.omega_c_grid.size(); ++j) {
            out << ',' << format_number(map.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        out << '\n';
    }
}

TransmittanceMap read_map(std::istream& in)
{
    const CsvTable table = read_csv(in);
    if (table.header.size() < 2 || table.header.front() != "omega") {
        throw FormatError("map CSV: header must be 'omega,<omega_c>...'");
    }
    TransmittanceMap map;
    for (std::size_t j = 1; j < table.header.size(); ++j) {
        map.omega_c_grid.push_back(parse_double(table.header[j], 1, "header"));
    }
    const auto rows = static_cast<Eigen::Index>(table.rows.size());
    const auto cols = static_cast<Eigen::Index>(map.omega_c_grid.size());
    map.values.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        const std::size_t line = table.line_numbers[static_cast<std::size_t>(i)];
        map.omega_grid.push_back(parse_double(row[0], line, "omega"));
        for (Eigen::Index j = 0; j < cols; ++j) {
            map.values(i, j) = parse_double(row[static_cast<std::size_t>(j + 1)], line, table.header[static_cast<std::size_t>(j + 1)]);
        }
    }
    return map;
}

void write_branch_points(std::ostream& out, const std::vector<BranchPoint>& points)
{
    const bool hints = std::any_of(points.begin(), points.end(), [](const auto& p) { return p.branch.has_value(); });
    out << "omega_c_thz,omega_meas_thz,weight" << (hints ? ",branch" : "") << '\n';
    for (const auto& p : points) {
        out << format_number(p.omega_c) << ',' << format_number(p.omega_meas) << ',' << format_number(p.weight);
        if (hints) {
            out << ',' << (p.branch ? std::to_string(*p.branch) : std::string());
        }
        out << '\n';
    }
}

std::vector<BranchPoint> read_branch_points(std::istream& in, const CavityCalibration& cal)
{
    const CsvTable table = read_csv(in);
    const int length = column_index(table.header, "length_um");
    const int omega_c = column_index(table.header, "omega_c_thz");
    const int meas = column_index(table.header, "omega_meas_thz");
    const int weight = column_index(table.header, "weight");
    const int branch = column_index(table.header, "branch");
    if ((length < 0) == (omega_c < 0)) {
        throw FormatError("branch points: need exactly one of the columns length_um, omega_c_thz");
    }
    if (meas < 0) {
        throw FormatError("branch points: missing column omega_meas_thz");
    }
    for (const auto& name : table.header) {
        if (name != "length_um" && name != "omega_c_thz" && name != "omega_meas_thz" && name != "weight" &&
            name != "branch") {
            throw FormatError("branch points: unknown column '" + name + "'");
        }
    }

    std::vector<BranchPoint> points;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.line_numbers[r];
        BranchPoint p;
        if (length >= 0) {
            const double l = parse_double(row[static_cast<std::size_t>(length)], line, "length_um");
            if (!(l > 0.0)) {
                throw FormatError("line " + std::to_string(line) + ": length_um must be positive");
            }
            p.omega_c = cavity_frequency(l, cal).thz();
        } else {
            p.omega_c = parse_double(row[static_cast<std::size_t>(omega_c)], line, "omega_c_thz");
        }
        p.omega_meas = parse_double(row[static_cast<std::size_t>(meas)], line, "omega_meas_thz");
        if (!(p.omega_c > 0.0) || !(p.omega_meas > 0.0)) {
            throw FormatError("line " + std::to_string(line) + ": frequencies must be positive");
        }
        if (weight >= 0 && !row[static_cast<std::size_t>(weight)].empty()) {
            p.weight = parse_double(row[static_cast<std::size_t>(weight)], line, "weight");
            if (p.weight < 0.0) {
                throw FormatError("line " + std::to_string(line) + ": weight must be non-negative");
            }
        }
        if (branch >= 0 && !row[static_cast<std::size_t>(branch)].empty()) {
            const std::string& b = row[static_cast<std::size_t>(branch)];
            if (b == "LP") {
                p.branch = 0;
            } else if (b == "UP") {
                p.branch = -1;  // resolved against the branch count by the caller
            } else {
                int value = 0;
                const auto [ptr, ec] = std::from_chars(b.data(), b.data() + b.size(), value);
                if (ec != std::errc() || ptr != b.data() + b.size()) {
                    throw FormatError("line " + std::to_string(line) + ": bad branch hint '" + b + "'");
                }
                p.branch = value;
            }
        }
        points.push_back(p);
    }
    return points;
}

void write_fit_report(std::ostream& out, const FitResult& fit, const std::string& phase)
{
    out << "# polariton fit report\n";
    if (!phase.empty()) {
        out << "phase = " << phase << '\n';
    }
    out << "modes = ";
    for (std::size_t l = 0; l < fit.labels.size(); ++l) {
        out << (l ? "," : "") << fit.labels[l];
    }
    out << '\n';
    for (std::size_t l = 0; l < fit.labels.size(); ++l) {
        const auto& label = fit.labels[l];
        out << "omega." << label << " = " << format_number(fit.omegas[l]) << '\n';
        out << "nu." << label << " = " << format_number(fit.nu[l]) << '\n';
        out << "g_over_omega." << label << " = " << format_number(fit.normalized_couplings[l]) << '\n';
    }
    out << "rms_residual = " << format_number(fit.rms_residual) << '\n';
    out << "iterations = " << fit.iterations << '\n';
    out << "converged = " << (fit.converged ? "true" : "false") << '\n';
    out << "points = " << fit.per_point_residuals.size() << '\n';
    std::size_t ambiguous = 0;
    for (std::size_t i = 0; i < fit.per_point_residuals.size(); ++i) {
        out << "residual." << i << " = " << format_number(fit.per_point_residuals[i]) << '\n';
        out << "branch." << i << " = " << fit.assigned_branch[i] << '\n';
        ambiguous += fit.ambiguous[i] ? 1 : 0;
    }
    out << "ambiguous_points = " << ambiguous << '\n';
}

std::map<std::string, std::string> read_key_values(std::istream& in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw FormatError("line " + std::to_string(number) + ": expected 'key = value'");
        }
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

FitResult read_fit_report(std::istream& in)
{
    const auto kv = read_key_values(in);
    auto get = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw FormatError("fit report: missing key '" + key + "'");
        }
        return it->second;
    };
    FitResult fit;
    for (const auto& label : split(get("modes"), ',')) {
        if (label.empty()) {
            continue;
        }
        fit.labels.push_back(label);
        fit.omegas.push_back(parse_double(get("omega." + label), 0, "omega." + label));
        fit.nu.push_back(parse_double(get("nu." + label), 0, "nu." + label));
        fit.normalized_couplings.push_back(parse_double(get("g_over_omega." + label), 0, "g_over_omega." + label));
    }
    fit.rms_residual = parse_double(get("rms_residual"), 0, "rms_residual");
    fit.iterations = static_cast<int>(parse_double(get("iterations"), 0, "iterations"));
    fit.converged = get("converged") == "true";
    return fit;
}

void write_comparison(std::ostream& out, const PhaseComparison& comparison)
{
    out << "# coupling change from the high-temperature to the low-temperature phase\n";
    out << "# g/omega = nu / (2 omega) also moves with omega, so the two relative changes differ\n";
    for (const auto& c : comparison.shared) {
        out << "g_over_omega_high." << c.label << " = " << format_number(c.g_over_omega_high) << '\n';
        out << "g_over_omega_low." << c.label << " = " << format_number(c.g_over_omega_low) << '\n';
        out << "relative_change_g_over_omega." << c.label << " = " << format_number(c.relative_change_g_over_omega)
            << '\n';
        out << "relative_change_nu." << c.label << " = " << format_number(c.relative_change_nu) << '\n';
    }
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += (i ? "," : "") + v[i];
        }
        return s;
    };
    out << "only_high = " << join(comparison.only_high) << '\n';
    out << "only_low = " << join(comparison.only_low) << '\n';
}

} // namespace polariton::io
