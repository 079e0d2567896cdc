#ifndef STBCLAB_NUMERICS_HPP
#define STBCLAB_NUMERICS_HPP

#include "stbclab/types.hpp"
#include "stbclab/errors.hpp"

// Complex-matrix kernel: orthogonal projectors, pseudo-inverse, Hermitian
// inverse square root and the rank tests everything downstream relies on.
// All functions are pure and safe to call concurrently.

namespace stbclab::numerics {

// A matrix counts as full column rank iff sigma_min/sigma_max > kRankTol
// (and sigma_max > 0). Chosen with a safety margin for double precision.
inline constexpr double kRankTol = 1e-9;

// sigma_min / sigma_max of M; 0 for an empty or all-zero matrix.
double rank_ratio(const CMatrix& M);

bool has_full_column_rank(const CMatrix& M, double tol = kRankTol);

// Q = M (M^H M)^-1 M^H, the orthogonal projector onto the column space of M.
// Computed through a Hermitian (LDLT) solve of the Gram system rather than an
// explicit inverse. M empty (0 columns) gives Q = 0.
// Throws RankDeficient if M fails the rank-tolerance test.
CMatrix column_space_projector(const CMatrix& M, double tol = kRankTol);

// P = I - Q, the projector onto the orthogonal complement of span(M).
// M empty gives P = I. Same factorization as column_space_projector, so
// P + Q = I holds exactly.
CMatrix complement_projector(const CMatrix& M, double tol = kRankTol);

// Projector onto the orthogonal complement of span(M) computed through a
// rank-revealing SVD. Unlike complement_projector this never throws on rank
// deficiency: the span is truncated at the singular-value tolerance. Used by
// the criteria checks that probe degenerate channel samples.
CMatrix complement_projector_svd(const CMatrix& M, double tol = kRankTol);

// G^+ = (G^H G)^-1 G^H for a full-column-rank G (n <= m); G^+ G = I_n.
CMatrix pseudo_inverse(const CMatrix& G, double tol = kRankTol);

// Hermitian S with S K S = I for Hermitian positive definite K, via
// eigendecomposition. Throws NotPositiveDefinite if an eigenvalue falls at or
// below the tolerance (relative to the largest one).
CMatrix inverse_sqrt_hermitian(const CMatrix& K, double tol = 1e-12);

} // namespace stbclab::numerics

#endif
