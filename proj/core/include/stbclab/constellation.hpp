#ifndef STBCLAB_CONSTELLATION_HPP
#define STBCLAB_CONSTELLATION_HPP

#include <string>
#include <vector>

#include "stbclab/types.hpp"
#include "stbclab/errors.hpp"

namespace stbclab {

// Finite complex signal set with unit average energy.
class Constellation {
public:
    // Raw-points constructor. Enforces: mean |a|^2 == 1 within 1e-12, points
    // pairwise distinct, size a power of two.
    Constellation(std::vector<Complex> points, std::string label);

    const std::vector<Complex>& points() const { return points_; }
    const Complex& point(int k) const { return points_[static_cast<size_t>(k)]; }
    int size() const { return static_cast<int>(points_.size()); }
    int bits_per_symbol() const { return bits_per_symbol_; }
    const std::string& label() const { return label_; }

    // Index of the point nearest to z; ties go to the lowest index.
    int slice(Complex z) const;

private:
    std::vector<Complex> points_;
    int bits_per_symbol_;
    std::string label_;
};

// Square QAM on the Gaussian-integer grid {+-1, +-3, ...}^2, scaled to unit
// average energy. order must be one of 4, 16, 64, 256; anything else throws
// UnsupportedOrder. Indexing is row-major over the grid: index = a*side + b
// with real level a and imaginary level b, levels ascending.
Constellation make_qam(int order);

// Lookup by name: "qam4", "qam16", "qam64", "qam256".
Constellation constellation_by_name(const std::string& name);

// All pairwise differences a - a~ (including 0), deduplicated.
std::vector<Complex> difference_set(const Constellation& A);

} // namespace stbclab

#endif
