#ifndef STBCLAB_CODES_HPP
#define STBCLAB_CODES_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stbclab/types.hpp"
#include "stbclab/errors.hpp"
#include "stbclab/grouping.hpp"
#include "stbclab/constellation.hpp"

namespace stbclab {

enum class SlotType { Plain, Conjugate, Mixed };

// Linear dispersion STBC: X = energy_scale * sum_i (x_i A_i + x_i^* B_i),
// with each time slot carrying either only plain symbols or only conjugated
// ones. Codes whose printed codeword matrix breaks that per-slot rule are
// carried "direct-only": a generator h -> G(h) for one receive antenna
// replaces the dispersion matrices.
class LinearDispersionCode {
public:
    // t x n raw equivalent-channel block for one receive antenna; h has
    // length n_t. Entries must be linear in h and h^*.
    using DirectGenerator = std::function<CMatrix(const CVector&)>;

    LinearDispersionCode(std::string label, int n_t, int t,
                         std::vector<CMatrix> A, std::vector<CMatrix> B,
                         GroupingScheme default_grouping);

    LinearDispersionCode(std::string label, int n_t, int t, int n,
                         DirectGenerator gen, GroupingScheme default_grouping);

    const std::string& label() const { return label_; }
    int n_t() const { return n_t_; }
    int t() const { return t_; }
    int n() const { return n_; }
    double rate() const { return static_cast<double>(n_) / t_; }
    bool direct_only() const { return static_cast<bool>(gen_); }

    const std::vector<CMatrix>& A() const { return A_; }
    const std::vector<CMatrix>& B() const { return B_; }
    const std::vector<SlotType>& slot_types() const { return slot_types_; }
    const GroupingScheme& default_grouping() const { return default_grouping_; }

    // Codeword normalization so that tr(E{X^H X}) = t*n_t under unit-energy
    // i.i.d. symbols; closed form from the dispersion-matrix norms.
    double energy_scale() const { return energy_scale_; }

    // Total factor applied to the raw equivalent-channel entries so that
    // E{||G(h)x||^2} = t per receive antenna (the transmit normalization
    // 1/sqrt(n_t) is absorbed here for dispersion codes).
    double channel_gain() const { return channel_gain_; }

    const DirectGenerator& generator() const { return gen_; }

    // X = energy_scale * sum_i (x_i A_i + x_i^* B_i). Throws DirectOnlyCode
    // when the code has no dispersion matrices.
    CMatrix encode(const CVector& x) const;

private:
    std::string label_;
    int n_t_, t_, n_;
    std::vector<CMatrix> A_, B_;
    std::vector<SlotType> slot_types_;
    double energy_scale_ = 1.0;
    double channel_gain_ = 1.0;
    DirectGenerator gen_;
    GroupingScheme default_grouping_;
};

// theta maximizing the coding gain of the rotated-pair construction:
// (1/2) arctan(2).
double default_theta();

LinearDispersionCode make_alamouti();
LinearDispersionCode make_qostbc_tbh();
// Rotated quasi-orthogonal code; alpha = exp(i*alpha_arg).
LinearDispersionCode make_qostbc_rot(double alpha_arg = 0.7853981633974483);
// 2 transmit antennas, 3 time slots, rate 4/3.
LinearDispersionCode make_code_2x3(double theta = default_theta());
// 4 transmit antennas, 6 time slots, rate 4/3 (direct equivalent channel).
LinearDispersionCode make_code_4x6(double theta = default_theta());
// 3 by 8 overlapped Alamouti code (direct equivalent channel).
LinearDispersionCode make_oac_3x8();
// Uncoded transmission: X = x, t = 1, n = n_t.
LinearDispersionCode make_uncoded(int n_t);

std::map<std::string, LinearDispersionCode> build_registry();

// Construct a registry code with explicit parameters: theta (radians),
// alpha (radians), nt. Unknown labels or parameters throw Error.
LinearDispersionCode make_code(const std::string& label,
                               const std::map<std::string, double>& params = {});

// "label" or "label:key=value[,key=value]"; same keys as make_code.
LinearDispersionCode parse_code_spec(const std::string& spec);
std::pair<std::string, std::map<std::string, double>>
split_code_spec(const std::string& spec);

// Monte Carlo estimate of tr(E{X^H X}) under symbols drawn uniformly from
// the given point set. Dispersion-defined codes only.
double verify_energy_normalization(const LinearDispersionCode& code,
                                   const std::vector<Complex>& points,
                                   long trials, uint64_t seed = 1);
double verify_energy_normalization(const LinearDispersionCode& code,
                                   const Constellation& A,
                                   long trials, uint64_t seed = 1);

} // namespace stbclab

#endif
