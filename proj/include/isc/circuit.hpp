#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "isc/lp.hpp"
#include "isc/spin.hpp"

namespace isc {

/// A total Boolean function {-1,+1}^n -> {-1,+1}^m, given by its value on
/// every input in canonical index order.
class Circuit {
public:
    Circuit(int n, int m, std::vector<SpinState> table) : n_(n), m_(m), table_(std::move(table)) {
        if (n < 0 || n > 20 || m < 0 || m > 62) throw std::invalid_argument("circuit shape out of range");
        if (table_.size() != (std::size_t{1} << n)) throw std::invalid_argument("truth table must have 2^n rows");
        for (const auto& s : table_)
            if (s.dim() != m) throw std::invalid_argument("truth table entry has wrong output dimension");
    }

    template <typename F>
    static Circuit from_function(int n, int m, F&& f) {
        std::vector<SpinState> table;
        table.reserve(std::size_t{1} << n);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
            SpinState out = f(SpinState::from_index(n, x));
            if (out.dim() != m) throw std::invalid_argument("function output has wrong dimension");
            table.push_back(std::move(out));
        }
        return Circuit(n, m, std::move(table));
    }

    /// Inverse of canonical_index(): row x holds output digit x, the row-0
    /// digit in the least significant m bits.
    static Circuit from_index(int n, int m, std::uint64_t circuit_index) {
        if (m <= 0 || n < 0 || m * (std::int64_t{1} << n) > 62)
            throw std::invalid_argument("circuit index space exceeds 62 bits");
        std::vector<SpinState> table;
        table.reserve(std::size_t{1} << n);
        const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
            table.push_back(SpinState::from_index(m, (circuit_index >> (m * x)) & mask));
        return Circuit(n, m, std::move(table));
    }

    int inputs() const { return n_; }
    int outputs() const { return m_; }
    std::uint64_t rows() const { return std::uint64_t{1} << n_; }

    const SpinState& value(std::uint64_t x_index) const { return table_.at(x_index); }
    const SpinState& value(const SpinState& x) const {
        if (x.dim() != n_) throw std::invalid_argument("input dimension mismatch");
        return table_[x.index()];
    }

    std::uint64_t canonical_index() const {
        if (m_ * (std::int64_t{1} << n_) > 62) throw BudgetError("circuit index space exceeds 62 bits");
        std::uint64_t idx = 0;
        for (std::uint64_t x = 0; x < rows(); ++x) idx |= table_[x].index() << (m_ * x);
        return idx;
    }

    friend bool operator==(const Circuit&, const Circuit&) = default;

private:
    int n_;
    int m_;
    std::vector<SpinState> table_;
};

/// The shape (n,1) circuit computing output bit i.
inline Circuit component(const Circuit& c, int i) {
    if (i < 0 || i >= c.outputs()) throw std::invalid_argument("component index out of range");
    std::vector<SpinState> table;
    table.reserve(c.rows());
    for (std::uint64_t x = 0; x < c.rows(); ++x)
        table.push_back(SpinState(std::vector<int8_t>{static_cast<int8_t>(c.value(x)[i])}));
    return Circuit(c.inputs(), 1, std::move(table));
}

/// Product circuit: outputs of c1 followed by outputs of c2 on the shared
/// input space.
inline Circuit glue(const Circuit& c1, const Circuit& c2) {
    if (c1.inputs() != c2.inputs()) throw std::invalid_argument("glue requires matching input arity");
    std::vector<SpinState> table;
    table.reserve(c1.rows());
    for (std::uint64_t x = 0; x < c1.rows(); ++x) table.push_back(concat(c1.value(x), c2.value(x)));
    return Circuit(c1.inputs(), c1.outputs() + c2.outputs(), std::move(table));
}

enum class Convention { spin, boolean };

inline int boolean_to_spin_value(int b) { return 2 * b - 1; }
inline int spin_to_boolean_value(int s) { return (s + 1) / 2; }

// --- enumeration -----------------------------------------------------------

inline constexpr std::uint64_t default_enumeration_cap = 80;

inline std::uint64_t circuit_count(int n, int m, std::uint64_t cap = default_enumeration_cap) {
    if (n < 0 || m <= 0) throw std::invalid_argument("bad circuit shape");
    const std::uint64_t cost = static_cast<std::uint64_t>(n) * (std::uint64_t{1} << n) * static_cast<std::uint64_t>(m);
    if (cost > cap)
        throw BudgetError("enumeration budget exceeded: n*2^n*m = " + std::to_string(cost) +
                          " > cap " + std::to_string(cap));
    const std::int64_t bits = m * (std::int64_t{1} << n);
    if (bits > 62) throw BudgetError("circuit index space exceeds 62 bits");
    return std::uint64_t{1} << bits;
}

/// Walks every total function of the shape exactly once, in canonical index
/// order.
class CircuitEnumerator {
public:
    CircuitEnumerator(int n, int m, std::uint64_t cap = default_enumeration_cap)
        : n_(n), m_(m), count_(circuit_count(n, m, cap)) {}

    bool done() const { return next_ >= count_; }
    std::uint64_t count() const { return count_; }

    Circuit next() {
        if (done()) throw std::out_of_range("enumeration exhausted");
        return Circuit::from_index(n_, m_, next_++);
    }

private:
    int n_;
    int m_;
    std::uint64_t count_;
    std::uint64_t next_ = 0;
};

// --- threshold test --------------------------------------------------------

struct ThresholdWitness {
    double bias = 0.0;              // w0
    std::vector<double> weights;    // w
};

namespace detail {

// Margin-1 single-output system over (h, W): each row demands
// -2 f(x) (h + W . x) >= 1, the feasibility condition for one output.
inline std::vector<std::vector<double>> threshold_rows(const Circuit& c) {
    if (c.outputs() != 1) throw std::invalid_argument("threshold test requires a single output");
    const int n = c.inputs();
    std::vector<std::vector<double>> rows;
    rows.reserve(c.rows());
    for (std::uint64_t xi = 0; xi < c.rows(); ++xi) {
        const SpinState x = SpinState::from_index(n, xi);
        const double fx = c.value(xi)[0];
        std::vector<double> row(static_cast<std::size_t>(n) + 1);
        row[0] = -2.0 * fx;
        for (int k = 0; k < n; ++k) row[static_cast<std::size_t>(k) + 1] = -2.0 * fx * x[k];
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

/// Margin-1 separating hyperplane for a single-output circuit, if one
/// exists: f(x) * (w0 + w . x) >= 1 for every input. Decided by the same
/// linear program that decides single-output feasibility.
inline std::optional<ThresholdWitness> threshold_witness(const Circuit& c, double feas_tol = lp_default_feas_tol,
                                                         double pivot_tol = lp_default_pivot_tol) {
    const std::vector<std::vector<double>> rows = detail::threshold_rows(c);
    const L1Result sol = l1_minimize(rows, std::vector<double>(rows.size(), 1.0), feas_tol, pivot_tol);
    if (!sol.feasible) return std::nullopt;
    ThresholdWitness w;
    w.bias = -2.0 * sol.u[0];
    w.weights.resize(static_cast<std::size_t>(c.inputs()));
    for (int k = 0; k < c.inputs(); ++k)
        w.weights[static_cast<std::size_t>(k)] = -2.0 * sol.u[static_cast<std::size_t>(k) + 1];
    return w;
}

inline bool is_threshold(const Circuit& c, double feas_tol = lp_default_feas_tol,
                         double pivot_tol = lp_default_pivot_tol) {
    const std::vector<std::vector<double>> rows = detail::threshold_rows(c);
    return feasible_system(rows, std::vector<double>(rows.size(), 1.0), feas_tol, pivot_tol);
}

} // namespace isc
