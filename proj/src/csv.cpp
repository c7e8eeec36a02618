#include "qduality/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qduality {

std::vector<std::string> csv_header(int n) {
    std::vector<std::string> h{"t", "E_g", "E_I"};
    auto per_site = [&](const std::string& prefix) {
        for (int i = 1; i <= n; ++i) h.push_back(prefix + std::to_string(i));
    };
    per_site("E_");
    h.push_back("W_g");
    per_site("W_");
    h.push_back("Q_g");
    per_site("Q_");
    h.push_back("Q_l");
    h.push_back("S_g");
    per_site("S_");
    for (const char* name : {"I_g", "F_g", "Wdis_g", "Wdis_l", "Wdis_delta", "F_delta", "W_delta",
                             "sum_rule_residual", "bound_margin"})
        h.emplace_back(name);
    return h;
}

namespace {

void put(std::string& line, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    line.append(buf, res.ptr);
}

}  // namespace

void write_csv(std::ostream& out, const ThermoTrace& trace) {
    const auto header = csv_header(trace.model.n_qubits);
    std::string line;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (k) line += ',';
        line += header[k];
    }
    line += '\n';
    out << line;

    const auto residual = generalized_sum_rule_residual(trace);
    const auto margin = bound_check(trace);
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
        const ThermoSample& s = trace.samples[k];
        line.clear();
        std::vector<double> row{s.t, s.E_g, s.E_I};
        row.insert(row.end(), s.E_i.begin(), s.E_i.end());
        row.push_back(s.W_g);
        row.insert(row.end(), s.W_i.begin(), s.W_i.end());
        row.push_back(s.Q_g);
        row.insert(row.end(), s.Q_i.begin(), s.Q_i.end());
        row.push_back(s.Q_l);
        row.push_back(s.S_g);
        row.insert(row.end(), s.S_i.begin(), s.S_i.end());
        for (double v : {s.I_g, s.F_g, s.Wdis_g, s.Wdis_l, s.Wdis_delta, s.F_delta, s.W_delta, residual[k], margin[k]})
            row.push_back(v);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += ',';
            put(line, row[c]);
        }
        line += '\n';
        out << line;
    }
}

void write_csv_file(const std::string& path, const ThermoTrace& trace) {
    const std::string tmp = path + ".partial";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
            write_csv(out, trace);
            out.flush();
            if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
        }
        if (std::rename(tmp.c_str(), path.c_str()) != 0)
            throw std::runtime_error("cannot move CSV into place at '" + path + "'");
    } catch (...) {
        std::remove(tmp.c_str());
        throw;
    }
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("CSV is empty");
    for (std::size_t pos = 0;;) {
        const auto comma = line.find(',', pos);
        table.header.push_back(line.substr(pos, comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p <= end) {
            double v = 0;
            auto [ptr, ec] = std::from_chars(p, end, v);
            if (ec != std::errc()) throw std::runtime_error("CSV: malformed number in row " +
                                                            std::to_string(table.rows.size() + 1));
            row.push_back(v);
            if (ptr == end) break;
            if (*ptr != ',') throw std::runtime_error("CSV: expected ',' separator");
            p = ptr + 1;
        }
        if (row.size() != table.header.size()) throw std::runtime_error("CSV: row width differs from header");
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace qduality
