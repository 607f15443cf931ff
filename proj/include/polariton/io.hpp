#pragma once

// CSV and key/value file formats. Every writer uses format_number so output
// is byte-for-byte reproducible; every reader checks the header and reports
// the offending line number on malformed rows.

#include "polariton/dispersion.hpp"
#include "polariton/fit.hpp"
#include "polariton/spectra.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace polariton::io {

/// 9 significant digits; lowercase scientific notation when 0 < |x| < 1e-3.
std::string format_number(double x);

/// Thrown for unreadable or malformed input files.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// Comma-separated, '#' comment lines and blank lines skipped, first
/// remaining line is the header. Rows must match the header width.
CsvTable read_csv(std::istream& in);

/// omega_c,branch,Omega,F_pt,F_ph_<label>...
void write_dispersion(std::ostream& out, const DispersionMap& map);

/// T_kelvin,phase,branch,Omega
void write_scan(std::ostream& out, const TemperatureScan& scan);
/// T_before,T_after,count_before,count_after
void write_change_points(std::ostream& out, const std::vector<ChangePoint>& points);

/// omega,transmittance
void write_spectrum(std::ostream& out, const Spectrum& spectrum);

/// Gridded map: header "omega,<omega_c_1>,...", one row per omega.
void write_map(std::ostream& out, const TransmittanceMap& map);
TransmittanceMap read_map(std::istream& in);

/// omega_c_thz,omega_meas_thz,weight
void write_branch_points(std::ostream& out, const std::vector<BranchPoint>& points);

/// Columns: length_um or omega_c_thz, omega_meas_thz, optional weight,
/// optional branch (integer index, negative counts from the top, or LP / UP).
/// Lengths are converted with `cal`.
std::vector<BranchPoint> read_branch_points(std::istream& in, const CavityCalibration& cal = {});

/// "key = value" lines; '#' comments.
void write_fit_report(std::ostream& out, const FitResult& fit, const std::string& phase);
FitResult read_fit_report(std::istream& in);

void write_comparison(std::ostream& out, const PhaseComparison& comparison);

std::map<std::string, std::string> read_key_values(std::istream& in);

} // namespace polariton::io
