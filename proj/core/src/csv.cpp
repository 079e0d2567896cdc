#include "stbclab/csv.hpp"
#include "stbclab/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace stbclab::csvio {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sim_csv(const SimResult& result) {
    std::string out = "snr_db,trials,symbol_errors,block_errors,ser,bler,ci95\n";
    for (const auto& p : result.points) {
        out += format_real(p.snr_db);
        out += ',' + std::to_string(p.trials);
        out += ',' + std::to_string(p.symbol_errors);
        out += ',' + std::to_string(p.block_errors);
        out += ',' + format_real(p.ser);
        out += ',' + format_real(p.bler);
        out += ',' + format_real(p.ci95);
        out += '\n';
    }
    return out;
}

std::string theta_csv(const std::vector<ThetaSweepPoint>& table) {
    std::string out = "theta,cg,cg_lo,cg_hi,slope\n";
    for (const auto& p : table) {
        out += format_real(p.theta);
        out += ',' + format_real(p.cg);
        out += ',' + format_real(p.cg_lo);
        out += ',' + format_real(p.cg_hi);
        out += ',' + format_real(p.slope);
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open " + path + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f)
        throw Error("failed writing " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace stbclab::csvio
