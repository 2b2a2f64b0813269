#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "isc/oracle.hpp"
#include "isc/rng.hpp"

namespace isc {

enum class TerminalReason { local_min, step_cap };

struct Trajectory {
    SpinState input;
    std::vector<SpinState> states;   // visited output states, start first
    std::vector<double> energies;    // matching conditional energies
    TerminalReason terminal = TerminalReason::local_min;
};

/// Zero-temperature descent: hop to the single-flip neighbor with the
/// lowest energy while that strictly improves, ties to the lowest state
/// index, and stop in a local minimum.
inline Trajectory greedy_descend(const Hamiltonian& H, const SpinState& x, const SpinState& y0,
                                 std::uint64_t step_cap = 0) {
    const int m = H.outputs();
    if (y0.dim() != m) throw std::invalid_argument("start state dimension mismatch");
    if (step_cap == 0) step_cap = std::uint64_t{1} << m;
    const std::vector<double> e = level_energies(H, x);

    Trajectory traj;
    traj.input = x;
    std::uint64_t cur = y0.index();
    traj.states.push_back(y0);
    traj.energies.push_back(e[cur]);
    for (std::uint64_t step = 0; step < step_cap; ++step) {
        std::uint64_t best = cur;
        for (int i = 0; i < m; ++i) {
            const std::uint64_t zi = cur ^ (std::uint64_t{1} << i);
            if (e[zi] < e[best] || (best != cur && e[zi] == e[best] && zi < best)) best = zi;
        }
        if (best == cur || !(e[best] < e[cur])) {
            traj.terminal = TerminalReason::local_min;
            return traj;
        }
        cur = best;
        traj.states.push_back(SpinState::from_index(m, cur));
        traj.energies.push_back(e[cur]);
    }
    traj.terminal = TerminalReason::step_cap;
    return traj;
}

struct GlauberResult {
    Trajectory trajectory;                  // state after every attempted flip
    std::vector<std::uint64_t> occupancy;   // post-burn-in visit counts per output state
    std::uint64_t accepted_flips = 0;
};

/// Single-spin-flip dynamics at inverse temperature beta: pick a uniform
/// output spin and flip it with probability 1/(1+exp(beta * dE)). Seeded
/// and reproducible.
inline GlauberResult glauber_sample(const Hamiltonian& H, const SpinState& x, const SpinState& y0,
                                    double beta, std::uint64_t steps, std::uint64_t seed,
                                    std::uint64_t burn_in = 0) {
    const int m = H.outputs();
    if (y0.dim() != m) throw std::invalid_argument("start state dimension mismatch");
    if (beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
    const std::vector<double> e = level_energies(H, x);

    std::mt19937_64 gen(seed);
    GlauberResult out;
    out.trajectory.input = x;
    out.occupancy.assign(std::size_t{1} << m, 0);
    std::uint64_t cur = y0.index();
    out.trajectory.states.reserve(steps + 1);
    out.trajectory.states.push_back(y0);
    out.trajectory.energies.push_back(e[cur]);
    for (std::uint64_t step = 0; step < steps; ++step) {
        const int i = static_cast<int>(uniform_below(gen, static_cast<std::uint64_t>(m)));
        const std::uint64_t flipped = cur ^ (std::uint64_t{1} << i);
        const double delta = e[flipped] - e[cur];
        const double accept = 1.0 / (1.0 + std::exp(beta * delta));
        if (uniform_unit(gen) < accept) {
            cur = flipped;
            ++out.accepted_flips;
        }
        out.trajectory.states.push_back(SpinState::from_index(m, cur));
        out.trajectory.energies.push_back(e[cur]);
        if (step >= burn_in) ++out.occupancy[cur];
    }
    out.trajectory.terminal = TerminalReason::step_cap;
    return out;
}

} // namespace isc
