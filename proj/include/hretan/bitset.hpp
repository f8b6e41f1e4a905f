#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hretan {

/// Fixed-width bit rows packed into 64-bit words. Used for closure rows and
/// per-feature instance masks.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64),
          data_(rows * words_per_row_, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t words_per_row() const noexcept { return words_per_row_; }

    bool test(std::size_t r, std::size_t c) const noexcept {
        return (data_[r * words_per_row_ + c / 64] >> (c % 64)) & 1U;
    }
    void set(std::size_t r, std::size_t c) noexcept {
        data_[r * words_per_row_ + c / 64] |= std::uint64_t{1} << (c % 64);
    }

    std::span<const std::uint64_t> row(std::size_t r) const noexcept {
        return {data_.data() + r * words_per_row_, words_per_row_};
    }
    std::span<std::uint64_t> row(std::size_t r) noexcept {
        return {data_.data() + r * words_per_row_, words_per_row_};
    }

    /// row(dst) |= row(src)
    void or_row(std::size_t dst, std::size_t src) noexcept {
        auto d = row(dst);
        auto s = row(src);
        for (std::size_t w = 0; w < words_per_row_; ++w) d[w] |= s[w];
    }

    std::size_t count(std::size_t r) const noexcept {
        std::size_t n = 0;
        for (auto w : row(r)) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    std::vector<std::size_t> members(std::size_t r) const {
        std::vector<std::size_t> out;
        auto words = row(r);
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t bits = words[w];
            while (bits) {
                out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> data_;
};

inline std::size_t popcount_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) noexcept {
    std::size_t n = 0;
    for (std::size_t w = 0; w < a.size(); ++w) n += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
    return n;
}

} // namespace hretan
