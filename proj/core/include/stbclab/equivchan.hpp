#ifndef STBCLAB_EQUIVCHAN_HPP
#define STBCLAB_EQUIVCHAN_HPP

#include <string>
#include <utility>

#include "stbclab/types.hpp"
#include "stbclab/codes.hpp"
#include "stbclab/grouping.hpp"

namespace stbclab {

// Equivalent channel G(h): the m x n complex matrix with m = t*n_r turning
// the matrix channel into y = sqrt(SNR) G x + w. The transmit normalization
// 1/sqrt(n_t) and the code's energy scale are absorbed into G, so the same
// SNR convention holds for every code.
struct EquivalentChannel {
    CMatrix G;
    CVector h;          // vec(H), receive-antenna major
    std::string code_label;
    int n_r = 1;
    int n_t = 1;
    int t = 1;

    int m() const { return static_cast<int>(G.rows()); }
    int n() const { return static_cast<int>(G.cols()); }
};

// Rows are ordered receive-antenna major, time-slot minor. Throws
// InvalidColumnType if a dispersion slot mixes plain and conjugated symbols.
EquivalentChannel build_equivalent_channel(const LinearDispersionCode& code,
                                           const CMatrix& H);

// y with entry (r, tau) equal to Y(r, tau) for plain slots and its conjugate
// for conjugate slots, stacked consistently with build_equivalent_channel.
// Only defined for dispersion codes (throws DirectOnlyCode otherwise).
CVector receive_transform(const LinearDispersionCode& code, const CMatrix& Y);

// (G_{I_k}, G^c_{I_k}): the group's columns in within-group order, and the
// remaining columns in group order with group k removed.
std::pair<CMatrix, CMatrix> group_columns(const CMatrix& G,
                                          const GroupingScheme& scheme, int k);
std::pair<CMatrix, CMatrix> group_columns(const EquivalentChannel& E,
                                          const GroupingScheme& scheme, int k);

// Max over random (H, x1, x2) of | ||H dX||_F / sqrt(n_t) - ||G dx|| |, the
// norm identity between the codeword-domain and vector-domain models. The
// codeword side carries the transmit normalization from the channel model.
double verify_norm_identity(const LinearDispersionCode& code, long trials,
                            int n_r = 1, uint64_t seed = 1);

} // namespace stbclab

#endif
