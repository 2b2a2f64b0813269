#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace isc;

namespace {

double row_dot(const std::vector<double>& row, const std::vector<double>& u) {
    double acc = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) acc += row[t] * u[t];
    return acc;
}

} // namespace

TEST_CASE("copy-circuit rows come out in canonical order with the expanded coordinates") {
    const ConstraintSystem sys = global_min_rows(fixtures::copy1());
    REQUIRE(sys.rows.size() == 2);
    REQUIRE(sys.rows[0] == std::vector<double>{2.0, -2.0});  // x = -1, competitor +1
    REQUIRE(sys.rows[1] == std::vector<double>{-2.0, -2.0}); // x = +1, competitor -1
    REQUIRE(sys.rhs == std::vector<double>{1.0, 1.0});
}

TEST_CASE("a two-by-two shape yields twelve global rows") {
    REQUIRE(global_min_rows(fixtures::xor_and()).rows.size() == 12);
}

TEST_CASE("global rows reproduce energy differences exactly on the dyadic grid") {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(uniform_below(gen, 2));
        const int m = 1 + static_cast<int>(uniform_below(gen, 2));
        const Circuit c = Circuit::from_index(n, m, uniform_below(gen, circuit_count(n, m)));
        const Hamiltonian H = fixtures::random_dyadic_hamiltonian(n, m, gen);
        const std::vector<double> u = pack(H);
        const ConstraintSystem sys = global_min_rows(c);
        for (std::size_t r = 0; r < sys.rows.size(); ++r) {
            const SpinState x = SpinState::from_index(n, sys.tags[r].input);
            const SpinState y = SpinState::from_index(m, sys.tags[r].state_a);
            const double diff = evaluate(H, x, y) - evaluate(H, x, c.value(sys.tags[r].input));
            REQUIRE(row_dot(sys.rows[r], u) == diff);
        }
    }
}

TEST_CASE("local-minimum-free rows equal global rows plus the coupling correction") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(uniform_below(gen, 2));
        const int m = 1 + static_cast<int>(uniform_below(gen, 2));
        const Circuit c = Circuit::from_index(n, m, uniform_below(gen, circuit_count(n, m)));
        const Hamiltonian H = fixtures::random_dyadic_hamiltonian(n, m, gen);
        const std::vector<double> u = pack(H);
        const ResidualPartition p = ResidualPartition::from_hamiltonian(H);
        const ConstraintSystem sys = local_min_free_rows(c);
        for (std::size_t r = 0; r < sys.rows.size(); ++r) {
            const SpinState x = SpinState::from_index(n, sys.tags[r].input);
            const SpinState y = SpinState::from_index(m, sys.tags[r].state_a);
            const SpinState fx = c.value(sys.tags[r].input);
            // <J,(f-y) tensor^2> over i<j; entries of f-y are 0 or +-2.
            double correction = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    correction += H.output_coupling(i, j) * (fx[i] - y[i]) * (fx[j] - y[j]);
            const double expected = evaluate(H, x, y) - evaluate(H, x, fx) + correction;
            REQUIRE(row_dot(sys.rows[r], u) == expected); // exact on the dyadic grid
        }
    }
}

TEST_CASE("with one output the correction is empty and the row families coincide") {
    const ConstraintSystem g = global_min_rows(fixtures::xor2());
    const ConstraintSystem l = local_min_free_rows(fixtures::xor2());
    REQUIRE(g.rows == l.rows);
}

TEST_CASE("the correction adds four to the coupling coordinate for opposite corners") {
    // f(x) = (1,1) versus y = (-1,-1): (f-y) tensor product entry is 4.
    const Circuit c = Circuit::from_function(2, 2, [](const SpinState&) {
        return SpinState::from_index(2, 0b11);
    });
    const ConstraintSystem g = global_min_rows(c);
    const ConstraintSystem l = local_min_free_rows(c);
    const int j_coord = coefficient_count(2, 2) - 1;
    for (std::size_t r = 0; r < g.rows.size(); ++r) {
        if (l.tags[r].state_a != 0b00) continue;
        REQUIRE(l.rows[r][static_cast<std::size_t>(j_coord)] ==
                g.rows[r][static_cast<std::size_t>(j_coord)] + 4.0);
    }
}

TEST_CASE("frobenius pairing with the upper triangle matches the symmetric half") {
    std::mt19937_64 gen(37);
    for (int trial = 0; trial < 100; ++trial) {
        Hamiltonian H(0, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) H.output_coupling(i, j) = fixtures::dyadic(gen);
        const SpinState y = fixtures::random_state(4, gen);
        double ut = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) ut += H.output_coupling(i, j) * y[i] * y[j];
        double sym = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) sym += H.sym_coupling(i, j) * y[i] * y[j];
        REQUIRE(ut == sym); // exact on the dyadic grid
    }
}

TEST_CASE("constraint dumps carry one row per line with provenance") {
    const ConstraintSystem sys = global_min_rows(fixtures::copy1());
    const std::string dump = dump_constraints(sys);
    REQUIRE(dump == "2 -2 >= 1  # x=0 a=1 b=0 kind=global\n-2 -2 >= 1  # x=1 a=0 b=1 kind=global\n");
}

TEST_CASE("local-minimum-free feasibility implies global feasibility on every two-by-two circuit") {
    CircuitEnumerator en(2, 2);
    while (!en.done()) {
        const Circuit c = en.next();
        const ConstraintSystem l = local_min_free_rows(c);
        if (!feasible_system(l.rows, l.rhs)) continue;
        const ConstraintSystem g = global_min_rows(c);
        REQUIRE(feasible_system(g.rows, g.rhs));
    }
}

TEST_CASE("spanning-tree validation accepts the unique single-output tree") {
    const Circuit c = fixtures::copy1();
    std::vector<EnergyGraph> trees;
    for (std::uint64_t xi = 0; xi < 2; ++xi) {
        EnergyGraph t;
        t.input = SpinState::from_index(1, xi);
        t.output_dim = 1;
        t.edges = {{c.value(xi).index() ^ 1u, c.value(xi).index()}};
        trees.push_back(t);
    }
    const ConstraintSystem sys = tree_rows(c, trees);
    REQUIRE(sys.rows == global_min_rows(c).rows);
}

TEST_CASE("a valid two-output tree produces one row per edge") {
    const Circuit c = Circuit::from_function(2, 2, [](const SpinState&) {
        return SpinState::from_index(2, 0b11);
    });
    std::vector<EnergyGraph> trees;
    for (std::uint64_t xi = 0; xi < 4; ++xi) {
        EnergyGraph t;
        t.input = SpinState::from_index(2, xi);
        t.output_dim = 2;
        t.edges = {{0b01, 0b11}, {0b10, 0b11}, {0b00, 0b01}};
        t.sort_edges();
        REQUIRE(is_spanning_tree(t, 0b11));
        trees.push_back(t);
    }
    REQUIRE(tree_rows(c, trees).rows.size() == 12);
}

TEST_CASE("broken trees are rejected before any row is emitted") {
    const Circuit c = Circuit::from_function(2, 2, [](const SpinState&) {
        return SpinState::from_index(2, 0b11);
    });
    EnergyGraph bad;
    bad.input = SpinState::from_index(2, 0);
    bad.output_dim = 2;
    bad.edges = {{0b00, 0b11}, {0b01, 0b11}, {0b10, 0b11}}; // 00 -> 11 is not a single flip
    bad.sort_edges();
    REQUIRE_FALSE(is_spanning_tree(bad, 0b11));
    std::vector<EnergyGraph> trees(4, bad);
    for (std::uint64_t xi = 0; xi < 4; ++xi) trees[xi].input = SpinState::from_index(2, xi);
    REQUIRE_THROWS_AS(tree_rows(c, trees), std::invalid_argument);
}

TEST_CASE("decode round-trips packed vectors") {
    REQUIRE(decode(std::vector<double>(2, 0.0), 1, 1) == Hamiltonian(1, 1));
    const Hamiltonian copy_solution = decode(std::vector<double>{0.0, -0.5}, 1, 1);
    REQUIRE(copy_solution.bias(0) == 0.0);
    REQUIRE(copy_solution.input_coupling(0, 0) == -0.5);
    std::mt19937_64 gen(43);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = static_cast<int>(uniform_below(gen, 4));
        const int m = 1 + static_cast<int>(uniform_below(gen, 4));
        std::vector<double> u(static_cast<std::size_t>(coefficient_count(n, m)));
        for (double& v : u) v = uniform_range(gen, -5.0, 5.0);
        REQUIRE(pack(decode(u, n, m)) == u);
    }
    REQUIRE_THROWS_AS(decode(std::vector<double>(3, 0.0), 2, 2), std::invalid_argument);
}
