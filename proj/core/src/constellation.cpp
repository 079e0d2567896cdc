#include "stbclab/constellation.hpp"

#include <algorithm>
#include <cmath>

namespace stbclab {

namespace {

bool is_power_of_two(size_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

} // namespace

Constellation::Constellation(std::vector<Complex> points, std::string label)
    : points_(std::move(points)), label_(std::move(label)) {
    if (!is_power_of_two(points_.size()))
        throw Error("constellation size must be a power of two");
    double energy = 0.0;
    for (const auto& p : points_) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
            throw Error("constellation point not finite");
        energy += std::norm(p);
    }
    energy /= static_cast<double>(points_.size());
    if (std::abs(energy - 1.0) > 1e-12)
        throw Error("constellation average energy is not 1");
    for (size_t i = 0; i < points_.size(); ++i)
        for (size_t j = i + 1; j < points_.size(); ++j)
            if (points_[i] == points_[j])
                throw Error("constellation points not pairwise distinct");
    bits_per_symbol_ = 0;
    for (size_t s = points_.size(); s > 1; s >>= 1)
        ++bits_per_symbol_;
}

int Constellation::slice(Complex z) const {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error("slice: input not finite");
    int best = 0;
    double best_d = std::norm(z - points_[0]);
    for (size_t k = 1; k < points_.size(); ++k) {
        double d = std::norm(z - points_[k]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

Constellation make_qam(int order) {
    if (order != 4 && order != 16 && order != 64 && order != 256)
        throw UnsupportedOrder("make_qam: order must be 4, 16, 64 or 256");
    const int side = static_cast<int>(std::lround(std::sqrt(double(order))));
    // unnormalized grid {+-1,+-3,...}^2 has mean |a|^2 = 2(side^2-1)/3
    const double scale = 1.0 / std::sqrt(2.0 * (side * side - 1) / 3.0);
    std::vector<Complex> pts;
    pts.reserve(static_cast<size_t>(order));
    for (int a = 0; a < side; ++a)
        for (int b = 0; b < side; ++b)
            pts.emplace_back(scale * (2 * a - side + 1), scale * (2 * b - side + 1));
    return Constellation(std::move(pts), "qam" + std::to_string(order));
}

Constellation constellation_by_name(const std::string& name) {
    if (name == "qam4") return make_qam(4);
    if (name == "qam16") return make_qam(16);
    if (name == "qam64") return make_qam(64);
    if (name == "qam256") return make_qam(256);
    throw UnsupportedOrder("unknown constellation: " + name);
}

std::vector<Complex> difference_set(const Constellation& A) {
    std::vector<Complex> diffs;
    diffs.reserve(static_cast<size_t>(A.size()) * A.size());
    double dmax = 0.0;
    for (const auto& a : A.points())
        for (const auto& b : A.points()) {
            diffs.push_back(a - b);
            dmax = std::max(dmax, std::abs(diffs.back()));
        }
    // dedupe with a tolerance; grid differences are only equal up to rounding.
    // After sorting by (re, im) a duplicate can hide behind entries with a
    // bit-different real part, so scan back through the real-window.
    const double tol = 1e-9 * std::max(dmax, 1.0);
    std::sort(diffs.begin(), diffs.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    std::vector<Complex> out;
    for (const auto& d : diffs) {
        bool dup = false;
        for (auto it = out.rbegin(); it != out.rend() && d.real() - it->real() <= tol; ++it) {
            if (std::abs(d - *it) <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup)
            out.push_back(d);
    }
    return out;
}

} // namespace stbclab
