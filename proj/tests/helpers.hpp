#pragma once

// Shared fixtures: named circuits, the reference two-output instance, and
// dyadic-grid random draws. Grid coefficients are multiples of 1/8 with
// small magnitude, so products and sums stay exact in double arithmetic and
// equality assertions need no tolerance.

#include <random>
#include <vector>

#include "isc/isc.hpp"

namespace fixtures {

inline isc::Circuit xor2() {
    return isc::Circuit::from_function(2, 1, [](const isc::SpinState& x) {
        return isc::SpinState(std::vector<int>{-x[0] * x[1]});
    });
}

inline isc::Circuit neg_xor2() {
    return isc::Circuit::from_function(2, 1, [](const isc::SpinState& x) {
        return isc::SpinState(std::vector<int>{x[0] * x[1]});
    });
}

inline isc::Circuit and2() {
    return isc::Circuit::from_function(2, 1, [](const isc::SpinState& x) {
        return isc::SpinState(std::vector<int>{x[0] > 0 && x[1] > 0 ? 1 : -1});
    });
}

inline isc::Circuit copy1() {
    return isc::Circuit::from_function(1, 1, [](const isc::SpinState& x) {
        return isc::SpinState(std::vector<int>{x[0]});
    });
}

inline isc::Circuit constant2(int value) {
    return isc::Circuit::from_function(2, 1, [value](const isc::SpinState&) {
        return isc::SpinState(std::vector<int>{value});
    });
}

inline isc::Circuit identity_n(int n) {
    return isc::Circuit::from_function(n, n, [](const isc::SpinState& x) { return x; });
}

inline isc::Circuit xor_and() { return isc::glue(xor2(), and2()); }

inline isc::Circuit xor_xor() { return isc::glue(xor2(), xor2()); }

/// The reference two-output hamiltonian: A(x) = [[-0.3,-0.5],[-1,-1]] x +
/// (0.5, 1) with J12 = 1. Encodes XOR x AND.
inline isc::Hamiltonian reference_xor_and_hamiltonian() {
    isc::Hamiltonian H(2, 2);
    H.bias(0) = 0.5;
    H.bias(1) = 1.0;
    H.input_coupling(0, 0) = -0.3;
    H.input_coupling(1, 0) = -0.5;
    H.input_coupling(0, 1) = -1.0;
    H.input_coupling(1, 1) = -1.0;
    H.output_coupling(0, 1) = 1.0;
    return H;
}

inline isc::AffineMap reference_xor_and_affine() {
    isc::AffineMap a;
    a.in_dim = 2;
    a.out_dim = 2;
    a.linear = {-0.3, -0.5, -1.0, -1.0};
    a.offset = {0.5, 1.0};
    return a;
}

/// Builds a circuit from boolean-convention rows (x..., f...) matched by
/// value, independent of row listing order.
inline isc::Circuit circuit_from_boolean_rows(int n, int m, const std::vector<std::vector<int>>& rows) {
    return isc::Circuit::from_function(n, m, [&](const isc::SpinState& x) {
        for (const auto& row : rows) {
            bool match = true;
            for (int k = 0; k < n && match; ++k)
                if (isc::boolean_to_spin_value(row[static_cast<std::size_t>(k)]) != x[k]) match = false;
            if (match) {
                std::vector<int> out;
                for (int i = 0; i < m; ++i)
                    out.push_back(isc::boolean_to_spin_value(row[static_cast<std::size_t>(n + i)]));
                return isc::SpinState(out);
            }
        }
        throw std::logic_error("boolean row not found");
    });
}

/// The type-2 feasible three-output table.
inline isc::Circuit type2_feasible_33() {
    return circuit_from_boolean_rows(3, 3,
                                     {{0, 0, 0, 0, 0, 0},
                                      {0, 0, 1, 0, 0, 0},
                                      {0, 1, 0, 0, 0, 0},
                                      {0, 1, 1, 0, 1, 1},
                                      {1, 0, 0, 0, 0, 0},
                                      {1, 0, 1, 1, 0, 1},
                                      {1, 1, 0, 1, 1, 1},
                                      {1, 1, 1, 0, 0, 0}});
}

/// The type-2 feasible four-input two-output table.
inline isc::Circuit type2_feasible_42() {
    return circuit_from_boolean_rows(4, 2,
                                     {{0, 0, 0, 0, 0, 0},
                                      {0, 0, 0, 1, 0, 0},
                                      {0, 0, 1, 0, 0, 0},
                                      {0, 0, 1, 1, 0, 0},
                                      {0, 1, 0, 0, 0, 0},
                                      {0, 1, 0, 1, 0, 0},
                                      {0, 1, 1, 0, 0, 0},
                                      {0, 1, 1, 1, 0, 1},
                                      {1, 0, 0, 0, 0, 0},
                                      {1, 0, 0, 1, 0, 0},
                                      {1, 0, 1, 0, 0, 1},
                                      {1, 0, 1, 1, 0, 1},
                                      {1, 1, 0, 0, 0, 0},
                                      {1, 1, 0, 1, 1, 0},
                                      {1, 1, 1, 0, 1, 0},
                                      {1, 1, 1, 1, 0, 1}});
}

/// Multiple of 1/8 in [-8, 8].
inline double dyadic(std::mt19937_64& gen) {
    return (static_cast<double>(isc::uniform_below(gen, 129)) - 64.0) / 8.0;
}

inline isc::Hamiltonian random_dyadic_hamiltonian(int n, int m, std::mt19937_64& gen) {
    isc::Hamiltonian H(n, m);
    for (int i = 0; i < m; ++i) H.bias(i) = dyadic(gen);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < m; ++i) H.input_coupling(k, i) = dyadic(gen);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) H.output_coupling(i, j) = dyadic(gen);
    return H;
}

inline isc::SpinState random_state(int d, std::mt19937_64& gen) {
    return isc::SpinState::from_index(d, isc::uniform_below(gen, std::uint64_t{1} << d));
}

} // namespace fixtures
