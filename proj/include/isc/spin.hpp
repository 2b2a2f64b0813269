#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "isc/errors.hpp"

namespace isc {

// Canonical bit order, used everywhere: bit i of a state's integer index is
// set iff spin i equals +1. Index bit 0 is the least significant bit.

/// A point of the hypercube {-1,+1}^d.
class SpinState {
public:
    SpinState() = default;

    explicit SpinState(std::vector<int8_t> bits) : bits_(std::move(bits)) {
        for (int8_t b : bits_) {
            if (b != -1 && b != 1) throw std::invalid_argument("spin entries must be -1 or +1");
        }
    }

    explicit SpinState(const std::vector<int>& bits) {
        bits_.reserve(bits.size());
        for (int b : bits) {
            if (b != -1 && b != 1) throw std::invalid_argument("spin entries must be -1 or +1");
            bits_.push_back(static_cast<int8_t>(b));
        }
    }

    static SpinState from_index(int dim, std::uint64_t index) {
        if (dim < 0 || dim > 63) throw std::invalid_argument("spin dimension out of range");
        if (dim < 64 && (index >> dim) != 0) throw std::invalid_argument("state index out of range");
        SpinState s;
        s.bits_.resize(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) s.bits_[i] = (index >> i & 1u) ? int8_t{1} : int8_t{-1};
        return s;
    }

    int dim() const { return static_cast<int>(bits_.size()); }

    /// Spin value at coordinate i, either -1 or +1.
    int operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }

    std::uint64_t index() const {
        std::uint64_t idx = 0;
        for (int i = 0; i < dim(); ++i)
            if (bits_[static_cast<std::size_t>(i)] > 0) idx |= std::uint64_t{1} << i;
        return idx;
    }

    SpinState flipped(int i) const {
        if (i < 0 || i >= dim()) throw std::invalid_argument("flip coordinate out of range");
        SpinState s = *this;
        s.bits_[static_cast<std::size_t>(i)] = static_cast<int8_t>(-s.bits_[static_cast<std::size_t>(i)]);
        return s;
    }

    /// First `count` coordinates as a state of their own.
    SpinState prefix(int count) const {
        if (count < 0 || count > dim()) throw std::invalid_argument("prefix length out of range");
        return SpinState(std::vector<int8_t>(bits_.begin(), bits_.begin() + count));
    }

    SpinState suffix(int count) const {
        if (count < 0 || count > dim()) throw std::invalid_argument("suffix length out of range");
        return SpinState(std::vector<int8_t>(bits_.end() - count, bits_.end()));
    }

    friend SpinState concat(const SpinState& a, const SpinState& b) {
        std::vector<int8_t> bits = a.bits_;
        bits.insert(bits.end(), b.bits_.begin(), b.bits_.end());
        return SpinState(std::move(bits));
    }

    friend bool operator==(const SpinState& a, const SpinState& b) = default;

    std::string to_string() const {
        std::string out = "(";
        for (int i = 0; i < dim(); ++i) {
            if (i) out += ",";
            out += bits_[static_cast<std::size_t>(i)] > 0 ? "+1" : "-1";
        }
        out += ")";
        return out;
    }

private:
    std::vector<int8_t> bits_;
};

inline int hamming_distance(const SpinState& a, const SpinState& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("hamming distance needs equal dimensions");
    return std::popcount(a.index() ^ b.index());
}

/// All 2^d states in canonical index order. Intended for small d.
inline std::vector<SpinState> all_states(int d) {
    if (d < 0 || d > 20) throw BudgetError("state enumeration limited to d <= 20");
    std::vector<SpinState> out;
    out.reserve(std::size_t{1} << d);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << d); ++i) out.push_back(SpinState::from_index(d, i));
    return out;
}

} // namespace isc
