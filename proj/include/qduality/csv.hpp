// csv.hpp - fixed-schema CSV output of a thermodynamic trace
//
// Columns: t, E_g, E_I, E_1..E_N, W_g, W_1..W_N, Q_g, Q_1..Q_N, Q_l, S_g,
// S_1..S_N, I_g, F_g, Wdis_g, Wdis_l, Wdis_delta, F_delta, W_delta,
// sum_rule_residual, bound_margin. LF line endings, '.' decimal separator,
// 17 significant digits.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qduality/ledger.hpp"

namespace qduality {

std::vector<std::string> csv_header(int n_qubits);

/// sum_rule_residual holds the T(t)-generalized residual, which is the
/// plain residual when the temperature is constant.
void write_csv(std::ostream& out, const ThermoTrace& trace);
/// Writes via a temporary sibling file and renames it into place.
void write_csv_file(const std::string& path, const ThermoTrace& trace);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace qduality
