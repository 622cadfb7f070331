#pragma once

#include "splab/models.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace splab {

//! Multi-index over up to three coordinates.
struct MultiIndex {
    std::array<int, 3> e{};

    [[nodiscard]] int order() const noexcept { return e[0] + e[1] + e[2]; }
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

//! Derivative orders for the two slots of a two-point kernel: alpha acts on
//! the first point (u or x), beta on the second (v or y).
struct DerivOrder {
    MultiIndex alpha;
    MultiIndex beta;

    [[nodiscard]] int total() const noexcept { return alpha.order() + beta.order(); }
    friend bool operator==(const DerivOrder&, const DerivOrder&) = default;
};

inline constexpr int kMaxDerivOrder = 4;

//! Throws OrderError when the total order exceeds kMaxDerivOrder or an
//! index is set beyond the model dimension.
void check_order(const DerivOrder& d, int dim);

//! All multi-indices in `dim` variables with |index| == order, in
//! lexicographic order (largest first component first).
[[nodiscard]] std::vector<MultiIndex> multi_indices(int dim, int order);

//! "1:0" style label used in CSV/JSON output and configs.
[[nodiscard]] std::string format_multi_index(const MultiIndex& a, int dim);
[[nodiscard]] MultiIndex parse_multi_index(const std::string& text, int dim);

//! Central-difference derivative of f(s, t), s and t in R^dim, at (s0, t0),
//! with one Richardson extrapolation level: (4 D(h/2) - D(h)) / 3 where D is
//! the nested central difference over every requested direction.
template<class F>
double central_difference(const F& f, int dim, const Vec3& s0, const Vec3& t0, const DerivOrder& d,
                          double h)
{
    // Expand the multi-indices into a list of (slot, axis) directions.
    std::vector<std::pair<int, int>> dirs;
    for (int i = 0; i < dim; ++i) {
        for (int r = 0; r < d.alpha.e[i]; ++r) {
            dirs.emplace_back(0, i);
        }
        for (int r = 0; r < d.beta.e[i]; ++r) {
            dirs.emplace_back(1, i);
        }
    }
    if (dirs.empty()) {
        return f(s0, t0);
    }
    const std::size_t count = dirs.size();

    auto nested = [&](double step) {
        double acc = 0.0;
        for (std::uint32_t mask = 0; mask < (1u << count); ++mask) {
            Vec3 s = s0;
            Vec3 t = t0;
            double sign = 1.0;
            for (std::size_t j = 0; j < count; ++j) {
                const double offset = (mask >> j) & 1u ? -step : step;
                if ((mask >> j) & 1u) {
                    sign = -sign;
                }
                (dirs[j].first == 0 ? s : t)[dirs[j].second] += offset;
            }
            acc += sign * f(s, t);
        }
        return acc / std::pow(2.0 * step, static_cast<double>(count));
    };

    return (4.0 * nested(0.5 * h) - nested(h)) / 3.0;
}

} // namespace splab
