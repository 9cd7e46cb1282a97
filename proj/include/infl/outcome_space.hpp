#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace infl {

/// Mixed-radix index space over a tuple of finite-cardinality variables.
/// Flat indices are row-major in declared variable order: the first
/// variable is the most significant digit.
class OutcomeSpace {
public:
    OutcomeSpace() = default;

    explicit OutcomeSpace(std::vector<int> cardinalities)
        : cards_(std::move(cardinalities)) {
        strides_.resize(cards_.size());
        std::uint64_t size = 1;
        for (std::size_t i = cards_.size(); i-- > 0;) {
            if (cards_[i] <= 0) throw std::invalid_argument("cardinality must be positive");
            strides_[i] = size;
            const std::uint64_t next = size * static_cast<std::uint64_t>(cards_[i]);
            if (cards_[i] != 0 && next / static_cast<std::uint64_t>(cards_[i]) != size)
                throw std::overflow_error("outcome space too large for 64-bit index");
            size = next;
        }
        size_ = size;
    }

    std::uint64_t size() const { return size_; }
    std::size_t rank() const { return cards_.size(); }
    const std::vector<int>& cardinalities() const { return cards_; }
    int cardinality(std::size_t i) const { return cards_[i]; }

    std::uint64_t encode(std::span<const int> digits) const {
        std::uint64_t flat = 0;
        for (std::size_t i = 0; i < cards_.size(); ++i)
            flat += static_cast<std::uint64_t>(digits[i]) * strides_[i];
        return flat;
    }

    void decode(std::uint64_t flat, std::span<int> digits) const {
        for (std::size_t i = 0; i < cards_.size(); ++i) {
            digits[i] = static_cast<int>(flat / strides_[i]);
            flat %= strides_[i];
        }
    }

    std::vector<int> decode(std::uint64_t flat) const {
        std::vector<int> digits(cards_.size());
        decode(flat, digits);
        return digits;
    }

    /// Advances a digit tuple in row-major order. Returns false after the last tuple.
    bool next(std::span<int> digits) const {
        for (std::size_t i = cards_.size(); i-- > 0;) {
            if (++digits[i] < cards_[i]) return true;
            digits[i] = 0;
        }
        return false;
    }

private:
    std::vector<int> cards_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t size_ = 1;
};

}  // namespace infl
