#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace splab {

//! Streaming pairwise summation.
//!
//! Terms are summed naively in leaf blocks of kLeaf, and leaf sums are
//! combined like a binary counter, so the result equals recursive pairwise
//! summation over the insertion order. Error grows as O(log N) ulps instead
//! of O(N). The result depends only on the order of add() calls.
class PairwiseAccumulator {
  public:
    static constexpr std::size_t kLeaf = 64;

    void add(double x) noexcept
    {
        leaf_ += x;
        if (++in_leaf_ == kLeaf) {
            push(leaf_);
            leaf_ = 0.0;
            in_leaf_ = 0;
        }
    }

    [[nodiscard]] double sum() const noexcept
    {
        double s = leaf_;
        // Lowest level holds the most recent (smallest) partial sums.
        for (std::size_t level = 0; level < kLevels; ++level) {
            if (occupied_ & (std::size_t{1} << level)) {
                s = levels_[level] + s;
            }
        }
        return s;
    }

  private:
    static constexpr std::size_t kLevels = 48;

    void push(double s) noexcept
    {
        std::size_t level = 0;
        while (occupied_ & (std::size_t{1} << level)) {
            s = levels_[level] + s;
            occupied_ &= ~(std::size_t{1} << level);
            ++level;
        }
        levels_[level] = s;
        occupied_ |= std::size_t{1} << level;
    }

    std::array<double, kLevels> levels_{};
    std::size_t occupied_ = 0;
    double leaf_ = 0.0;
    std::size_t in_leaf_ = 0;
};

[[nodiscard]] inline double pairwise_sum(std::span<const double> xs) noexcept
{
    PairwiseAccumulator acc;
    for (double x : xs) {
        acc.add(x);
    }
    return acc.sum();
}

} // namespace splab
