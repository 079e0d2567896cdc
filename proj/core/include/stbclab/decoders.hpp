#ifndef STBCLAB_DECODERS_HPP
#define STBCLAB_DECODERS_HPP

#include <string>
#include <vector>

#include "stbclab/types.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/equivchan.hpp"
#include "stbclab/grouping.hpp"

// Decoder family for y = sqrt(SNR) G x + w: exhaustive ML, linear ZF and
// unbiased MMSE, projection-based group decoding (PIC), whitening-based
// group decoding (AO), and their successive-cancellation variants.
//
// All exhaustive searches enumerate candidates in lexicographic symbol-index
// order and keep the strictly best metric, so ties resolve to the lowest
// index everywhere; the cross-decoder equality properties rely on that shared
// rule. Decoders are pure functions.

namespace stbclab {

struct DecodeResult {
    std::vector<int> symbol_indices; // one index into A per symbol
    double metric = 0.0;             // final objective value
    std::vector<int> group_order;    // decoding order, SIC variants only
};

// Hard cap on exhaustive-search size: n_k * log2|A| bits.
inline constexpr int kMaxSearchBits = 24;

DecodeResult ml_decode(const EquivalentChannel& E, const CVector& y,
                       const Constellation& A, double snr);

DecodeResult zf_decode(const EquivalentChannel& E, const CVector& y,
                       const Constellation& A, double snr);

// Symbol-wise unbiased MMSE: slice g_k^H K_k^-1 y / (sqrt(SNR) g_k^H K_k^-1 g_k).
DecodeResult mmse_decode(const EquivalentChannel& E, const CVector& y,
                         const Constellation& A, double snr);

DecodeResult pic_decode(const EquivalentChannel& E, const CVector& y,
                        const GroupingScheme& scheme, const Constellation& A,
                        double snr);

DecodeResult pic_sic_decode(const EquivalentChannel& E, const CVector& y,
                            const GroupingScheme& scheme, const Constellation& A,
                            double snr, const std::vector<int>& ordering = {});

DecodeResult ao_decode(const EquivalentChannel& E, const CVector& y,
                       const GroupingScheme& scheme, const Constellation& A,
                       double snr);

DecodeResult ao_sic_decode(const EquivalentChannel& E, const CVector& y,
                           const GroupingScheme& scheme, const Constellation& A,
                           double snr, const std::vector<int>& ordering = {});

// Groups sorted by descending sigma_min of the projected group matrix
// P_{I_k} G_{I_k} (computed against all other groups); ties keep the lower
// group index.
std::vector<int> default_ordering(const EquivalentChannel& E,
                                  const GroupingScheme& scheme);

// Dispatch by name: "ml", "zf", "mmse", "pic", "pic-sic", "ao", "ao-sic".
DecodeResult decode(const std::string& name, const EquivalentChannel& E,
                    const CVector& y, const GroupingScheme& scheme,
                    const Constellation& A, double snr,
                    const std::vector<int>& ordering = {});

bool is_decoder_name(const std::string& name);

} // namespace stbclab

#endif
