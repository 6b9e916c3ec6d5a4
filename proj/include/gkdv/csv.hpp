#ifndef GKDV_CSV_HPP
#define GKDV_CSV_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gkdv/config.hpp"
#include "gkdv/energy.hpp"

namespace gkdv {

// Energy CSV schema, one row per time record, time-ascending, reals with
// 17 significant digits.
inline constexpr const char* kEnergyCsvHeader =
    "t,l2_sq,w1,w2,h1x,w1x,trace0,ut_w1,ut_l2,sup_u_sq,"
    "int_eps_trace0,int_h1x,int_w1x,int_eps_uxx,int_uxt";

inline void emit_energy_csv(const std::vector<EnergyRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("emit_energy_csv: cannot open '" + path + "' for writing");
    out << kEnergyCsvHeader << "\n";
    for (const auto& r : records) {
        out << format_real(r.t) << ',' << format_real(r.l2_sq) << ',' << format_real(r.w1) << ','
            << format_real(r.w2) << ',' << format_real(r.h1x) << ',' << format_real(r.w1x) << ','
            << format_real(r.trace0) << ',' << format_real(r.ut_w1) << ',' << format_real(r.ut_l2)
            << ',' << format_real(r.sup_u_sq) << ',' << format_real(r.int_eps_trace0) << ','
            << format_real(r.int_h1x) << ',' << format_real(r.int_w1x) << ','
            << format_real(r.int_eps_uxx) << ',' << format_real(r.int_uxt) << "\n";
    }
    if (!out) throw ConfigError("emit_energy_csv: write failure on '" + path + "'");
}

inline void emit_estimate_csv(const EstimateReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("emit_estimate_csv: cannot open '" + path + "' for writing");
    out << "estimate,lhs,rhs,margin,worst_time,pass,aux\n";
    for (const auto& e : report.entries) {
        out << e.name << ',' << format_real(e.lhs) << ',' << format_real(e.rhs) << ','
            << format_real(e.margin) << ',' << format_real(e.worst_time) << ','
            << (e.pass ? 1 : 0) << ',' << format_real(e.aux) << "\n";
    }
    if (!out) throw ConfigError("emit_estimate_csv: write failure on '" + path + "'");
}

} // namespace gkdv

#endif
