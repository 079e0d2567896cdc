#ifndef STBCLAB_CSV_HPP
#define STBCLAB_CSV_HPP

#include <string>
#include <vector>

#include "stbclab/simulator.hpp"

// CSV emission: LF line endings, '.' decimal separator, 17 significant
// digits for reals. Strings are assembled fully and written in binary mode
// so output is byte-stable across platforms and worker counts.

namespace stbclab::csvio {

std::string format_real(double v);

// header: snr_db,trials,symbol_errors,block_errors,ser,bler,ci95
std::string sim_csv(const SimResult& result);

// header: theta,cg,cg_lo,cg_hi,slope
std::string theta_csv(const std::vector<ThetaSweepPoint>& table);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace stbclab::csvio

#endif
