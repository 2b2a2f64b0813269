#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace isc;

namespace {

AffineEmbedding and_embedding() {
    AffineEmbedding e;
    e.n = 2;
    e.m = 1;
    e.t = {0.5, 0.5};
    e.b = {0.5, 0.5};
    return e;
}

AffineEmbedding identity_embedding(int n) {
    AffineEmbedding e;
    e.n = n;
    e.m = n;
    e.t.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) e.t_at(k, k) = 1.0;
    e.b.assign(static_cast<std::size_t>(n), 0.0);
    return e;
}

} // namespace

TEST_CASE("two sites split space along the perpendicular bisector") {
    const std::vector<std::vector<double>> sites{{0.0, 0.0}, {1.0, 0.0}};
    REQUIRE(voronoi_cell_membership(sites, 0, std::vector<double>{0.4, 7.0}));
    REQUIRE_FALSE(voronoi_cell_membership(sites, 0, std::vector<double>{0.6, -7.0}));
    REQUIRE(voronoi_cell_membership(sites, 1, std::vector<double>{0.6, -7.0}));
    // Equidistant points belong to no cell.
    REQUIRE_FALSE(voronoi_cell_membership(sites, 0, std::vector<double>{0.5, 2.0}));
    REQUIRE_FALSE(voronoi_cell_membership(sites, 1, std::vector<double>{0.5, 2.0}));
}

TEST_CASE("half-space membership equals the distance comparison") {
    std::mt19937_64 gen(101);
    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = 1 + static_cast<int>(uniform_below(gen, 3));
        const std::size_t count = 2 + uniform_below(gen, 5);
        std::vector<std::vector<double>> sites(count, std::vector<double>(static_cast<std::size_t>(dim)));
        for (auto& s : sites)
            for (double& v : s) v = normal_unit(gen);
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (double& v : x) v = normal_unit(gen);
        const std::size_t p = uniform_below(gen, count);
        bool closest = true;
        for (std::size_t q = 0; q < count; ++q) {
            if (q == p) continue;
            if (!(squared_distance(x, sites[p]) < squared_distance(x, sites[q]))) closest = false;
        }
        REQUIRE(voronoi_cell_membership(sites, p, x) == closest);
    }
}

TEST_CASE("the AND embedding is a voronoi solution") {
    REQUIRE(is_voronoi_solution(fixtures::and2(), and_embedding()));
}

TEST_CASE("the identity embedding solves the identity circuit") {
    for (int n : {1, 2, 3}) {
        REQUIRE(is_voronoi_solution(fixtures::identity_n(n), identity_embedding(n)));
        const Hamiltonian H = hamiltonian_from_voronoi(fixtures::identity_n(n), identity_embedding(n));
        REQUIRE(encodes(H, fixtures::identity_n(n), 1e-9));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) REQUIRE(H.output_coupling(i, j) == 0.0);
    }
}

TEST_CASE("no sampled embedding solves XOR") {
    const Circuit c = fixtures::xor2();
    std::mt19937_64 gen(103);
    for (int trial = 0; trial < 1000; ++trial) {
        AffineEmbedding e;
        e.n = 2;
        e.m = 1;
        e.t = {normal_unit(gen), normal_unit(gen)};
        e.b = {normal_unit(gen), normal_unit(gen)};
        REQUIRE_FALSE(is_voronoi_solution(c, e));
    }
    REQUIRE_FALSE(search_voronoi_solution(c, 103, 1000).has_value());
}

TEST_CASE("the seeded search finds embeddings for feasible circuits") {
    const auto found = search_voronoi_solution(fixtures::and2(), 7, 500);
    REQUIRE(found.has_value());
    REQUIRE(is_voronoi_solution(fixtures::and2(), *found));
}

TEST_CASE("perturbation leaves injective solutions untouched") {
    const AffineEmbedding e = and_embedding();
    const AffineEmbedding p = perturb_to_injective(fixtures::and2(), e, 5);
    REQUIRE(p.t == e.t);
    REQUIRE(p.b == e.b);
}

TEST_CASE("perturbation separates collided images and keeps the solution") {
    // Constant circuit; with equal columns the images of (+1,-1) and
    // (-1,+1) collide at -4 while the circuit value's image sits alone at 0,
    // so the solution is strict yet not injective.
    const Circuit c = Circuit::from_function(1, 2, [](const SpinState&) {
        return SpinState::from_index(2, 0b00);
    });
    AffineEmbedding e;
    e.n = 1;
    e.m = 2;
    e.t = {-2.0, -2.0};
    e.b = {-4.0};
    REQUIRE(is_voronoi_solution(c, e));
    REQUIRE_FALSE(e.injective_on_outputs());
    const AffineEmbedding fixed = perturb_to_injective(c, e, 11);
    REQUIRE(fixed.injective_on_outputs());
    REQUIRE(is_voronoi_solution(c, fixed));
    REQUIRE(voronoi_margin(c, fixed) > 0.0);
    const Hamiltonian H = hamiltonian_from_voronoi(c, fixed);
    REQUIRE(encodes(H, c, 1e-12));
}

TEST_CASE("perturbation rejects non-solutions") {
    REQUIRE_THROWS_AS(perturb_to_injective(fixtures::xor2(), AffineEmbedding{2, 1, {1.0, 1.0}, {0.0, 0.0}}, 1),
                      std::invalid_argument);
}

TEST_CASE("the AND embedding builds the textbook hamiltonian") {
    const Hamiltonian H = hamiltonian_from_voronoi(fixtures::and2(), and_embedding());
    REQUIRE(H.bias(0) == Catch::Approx(0.5));
    REQUIRE(H.input_coupling(0, 0) == Catch::Approx(-0.5));
    REQUIRE(H.input_coupling(1, 0) == Catch::Approx(-0.5));
    REQUIRE(encodes(H, fixtures::and2(), 1e-9));
}

TEST_CASE("norm differences of embedded outputs match twice the coupling pairing") {
    std::mt19937_64 gen(107);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(uniform_below(gen, 4));
        const int m = 1 + static_cast<int>(uniform_below(gen, 5));
        AffineEmbedding e;
        e.n = n;
        e.m = m;
        e.t.resize(static_cast<std::size_t>(n) * m);
        e.b.assign(static_cast<std::size_t>(n), 0.0);
        for (double& v : e.t) v = fixtures::dyadic(gen);
        const SpinState y = fixtures::random_state(m, gen);
        const SpinState z = fixtures::random_state(m, gen);
        // |Tz|^2 - |Ty|^2 against 2 <J_T, z tensor2 - y tensor2>.
        std::vector<double> ty(static_cast<std::size_t>(n), 0.0), tz(static_cast<std::size_t>(n), 0.0);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < m; ++i) {
                ty[static_cast<std::size_t>(k)] += e.t_at(k, i) * y[i];
                tz[static_cast<std::size_t>(k)] += e.t_at(k, i) * z[i];
            }
        double norm_diff = 0.0;
        for (int k = 0; k < n; ++k)
            norm_diff += tz[static_cast<std::size_t>(k)] * tz[static_cast<std::size_t>(k)] -
                         ty[static_cast<std::size_t>(k)] * ty[static_cast<std::size_t>(k)];
        double pairing = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                double jt = 0.0;
                for (int k = 0; k < n; ++k) jt += e.t_at(k, i) * e.t_at(k, j);
                pairing += jt * (z[i] * z[j] - y[i] * y[j]);
            }
        REQUIRE(norm_diff == Catch::Approx(2.0 * pairing).margin(1e-9));
    }
}

TEST_CASE("pseudo-adjoint maps voronoi half-space verdicts to cell half-space verdicts") {
    std::mt19937_64 gen(109);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(uniform_below(gen, 3));
        const int m = 1 + static_cast<int>(uniform_below(gen, 3));
        AffineEmbedding e;
        e.n = n;
        e.m = m;
        e.t.resize(static_cast<std::size_t>(n) * m);
        e.b.resize(static_cast<std::size_t>(n));
        for (double& v : e.t) v = normal_unit(gen);
        for (double& v : e.b) v = normal_unit(gen);
        if (!e.injective_on_outputs()) continue;

        ResidualPartition p(m);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                double jt = 0.0;
                for (int k = 0; k < n; ++k) jt += e.t_at(k, i) * e.t_at(k, j);
                p.coupling(i, j) = jt;
            }

        const std::vector<std::vector<double>> sites = e.all_sites();
        std::vector<double> x(static_cast<std::size_t>(n));
        for (double& v : x) v = normal_unit(gen);
        std::vector<double> pulled = e.pseudo_adjoint(x);
        for (double& v : pulled) v = -v;

        // Each voronoi half-space functional equals the matching cell
        // half-space functional at the pulled-back point, so the verdicts
        // coincide away from the boundary.
        double closest_to_boundary = std::numeric_limits<double>::infinity();
        for (std::uint64_t yi = 0; yi < sites.size(); ++yi) {
            const SpinState y = SpinState::from_index(m, yi);
            for (std::uint64_t zi = 0; zi < sites.size(); ++zi) {
                if (zi == yi) continue;
                const SpinState z = SpinState::from_index(m, zi);
                double lhs = 0.0;
                for (int k = 0; k < n; ++k)
                    lhs += (sites[yi][static_cast<std::size_t>(k)] - sites[zi][static_cast<std::size_t>(k)]) *
                           x[static_cast<std::size_t>(k)];
                for (int k = 0; k < n; ++k)
                    lhs += 0.5 * (sites[zi][static_cast<std::size_t>(k)] * sites[zi][static_cast<std::size_t>(k)] -
                                  sites[yi][static_cast<std::size_t>(k)] * sites[yi][static_cast<std::size_t>(k)]);
                double rhs = p.frobenius_difference(z, y);
                for (int i = 0; i < m; ++i) rhs += pulled[static_cast<std::size_t>(i)] * (z[i] - y[i]);
                REQUIRE(lhs == Catch::Approx(rhs).margin(1e-9));
                closest_to_boundary = std::min(closest_to_boundary, std::abs(lhs));
            }
        }
        if (closest_to_boundary > 1e-6) {
            for (std::uint64_t yi = 0; yi < sites.size(); ++yi) {
                const SpinState y = SpinState::from_index(m, yi);
                REQUIRE(voronoi_cell_membership(sites, yi, x) == in_cell(p, y, pulled));
            }
        }
    }
}

TEST_CASE("random voronoi instances always certify") {
    for (int trial = 0; trial < 100; ++trial) {
        std::mt19937_64 g(splitmix64(9000 + static_cast<std::uint64_t>(trial)));
        const int n = 1 + static_cast<int>(uniform_below(g, 3));
        const int m = 1 + static_cast<int>(uniform_below(g, 3));
        const auto [c, e] = random_voronoi_instance(n, m, 77000 + static_cast<std::uint64_t>(trial));
        REQUIRE(is_voronoi_solution(c, e));
        REQUIRE(e.injective_on_outputs());
        const Hamiltonian H = hamiltonian_from_voronoi(c, e);
        REQUIRE(encodes(H, c, 1e-9));
    }
}
