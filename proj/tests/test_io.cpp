#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace isc;

TEST_CASE("truth tables round-trip in both conventions") {
    const Circuit c = fixtures::xor_and();
    for (Convention conv : {Convention::spin, Convention::boolean}) {
        const TruthTable t = TruthTable::from_circuit(c, conv);
        const std::string text = serialize_truth_table(t);
        const TruthTable back = parse_truth_table(text);
        REQUIRE(back == t);
        REQUIRE(back.to_circuit() == c);
    }
}

TEST_CASE("the serialized spin table lists rows in canonical order") {
    const std::string text = serialize_truth_table(TruthTable::from_circuit(fixtures::copy1()));
    REQUIRE(text == "shape 1 1 spin\n-1 -> -1\n1 -> 1\n");
}

TEST_CASE("conversion relabels single rows as expected") {
    TruthTable t;
    t.n = 2;
    t.m = 1;
    t.conv = Convention::spin;
    t.rows = {{{-1, -1}, {-1}}, {{1, -1}, {1}}, {{-1, 1}, {1}}, {{1, 1}, {-1}}};
    const TruthTable b = convert(t, Convention::boolean);
    REQUIRE(b.rows[0] == std::pair<std::vector<int>, std::vector<int>>{{0, 0}, {0}});
    REQUIRE(convert(b, Convention::spin) == t);
}

TEST_CASE("boolean rows of the three-output type-2 table relabel to the matching spin rows") {
    // (0,1,1 -> 0,1,1) relabels to ((-1,1,1) -> (-1,1,1)).
    const Circuit c33 = fixtures::type2_feasible_33();
    const TruthTable spin = TruthTable::from_circuit(c33, Convention::spin);
    const TruthTable boolean = convert(spin, Convention::boolean);
    for (std::size_t r = 0; r < spin.rows.size(); ++r) {
        if (boolean.rows[r].first == std::vector<int>{0, 1, 1}) {
            REQUIRE(boolean.rows[r].second == std::vector<int>{0, 1, 1});
            REQUIRE(spin.rows[r].first == std::vector<int>{-1, 1, 1});
            REQUIRE(spin.rows[r].second == std::vector<int>{-1, 1, 1});
        }
    }
}

TEST_CASE("conversion is an involution on every two-by-two circuit") {
    CircuitEnumerator en(2, 2);
    while (!en.done()) {
        const TruthTable t = TruthTable::from_circuit(en.next());
        REQUIRE(convert(convert(t, Convention::boolean), Convention::spin) == t);
    }
}

TEST_CASE("parser rejects duplicate and missing rows") {
    REQUIRE_THROWS_AS(parse_truth_table("shape 1 1 spin\n-1 -> -1\n-1 -> 1\n"), FormatError);
    REQUIRE_THROWS_AS(parse_truth_table("shape 1 1 spin\n-1 -> -1\n"), FormatError);
    const TruthTable dup = {1, 1, Convention::spin, {{{-1}, {-1}}, {{-1}, {1}}}};
    REQUIRE_THROWS_AS(dup.to_circuit(), FormatError);
}

TEST_CASE("parser rejects malformed headers, tokens and shapes") {
    REQUIRE_THROWS_AS(parse_truth_table("shap 1 1 spin\n"), FormatError);
    REQUIRE_THROWS_AS(parse_truth_table("shape 1 1 ternary\n-1 -> -1\n1 -> 1\n"), FormatError);
    REQUIRE_THROWS_AS(parse_truth_table("shape 1 1 spin\n-1 -> 0\n1 -> 1\n"), FormatError);
    REQUIRE_THROWS_AS(parse_truth_table("shape 1 1 bool\n0 -> -1\n1 -> 1\n"), FormatError);
    REQUIRE_THROWS_AS(parse_truth_table("shape 1 1 spin\n-1 -1 -> -1\n1 -> 1\n"), FormatError);
}

TEST_CASE("rows may arrive out of canonical order") {
    const TruthTable t = parse_truth_table("shape 1 1 spin\n1 -> 1\n-1 -> -1\n");
    REQUIRE(t.to_circuit() == fixtures::copy1());
}

TEST_CASE("hamiltonians round-trip at full precision") {
    std::mt19937_64 gen(127);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(uniform_below(gen, 3));
        const int m = 1 + static_cast<int>(uniform_below(gen, 3));
        Hamiltonian H(n, m);
        for (int i = 0; i < m; ++i) H.bias(i) = normal_unit(gen);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < m; ++i) H.input_coupling(k, i) = normal_unit(gen);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) H.output_coupling(i, j) = normal_unit(gen);
        REQUIRE(parse_hamiltonian(serialize_hamiltonian(H)) == H);
    }
}

TEST_CASE("omitted hamiltonian coefficients default to zero") {
    const Hamiltonian H = parse_hamiltonian("ham 2 2\nj 0 1 0.25\n");
    REQUIRE(H.output_coupling(0, 1) == 0.25);
    REQUIRE(H.bias(0) == 0.0);
    REQUIRE(H.input_coupling(1, 1) == 0.0);
}

TEST_CASE("hamiltonian parser rejects bad indexes and tokens") {
    REQUIRE_THROWS_AS(parse_hamiltonian("ham 1 1\nh 1 0.5\n"), FormatError);
    REQUIRE_THROWS_AS(parse_hamiltonian("ham 1 2\nj 1 0 0.5\n"), FormatError);
    REQUIRE_THROWS_AS(parse_hamiltonian("ham 1 1\nh 0 zero\n"), FormatError);
    REQUIRE_THROWS_AS(parse_hamiltonian("spam 1 1\n"), FormatError);
}

TEST_CASE("embeddings round-trip") {
    std::mt19937_64 gen(131);
    AffineEmbedding e;
    e.n = 3;
    e.m = 2;
    e.t.resize(6);
    e.b.resize(3);
    for (double& v : e.t) v = normal_unit(gen);
    for (double& v : e.b) v = normal_unit(gen);
    const AffineEmbedding back = parse_embedding(serialize_embedding(e));
    REQUIRE(back.n == e.n);
    REQUIRE(back.m == e.m);
    REQUIRE(back.t == e.t);
    REQUIRE(back.b == e.b);
    REQUIRE_THROWS_AS(parse_embedding("emb 2 1\n0.5\n0.5\n"), FormatError);
}

TEST_CASE("trajectory and energy-graph dumps are line-oriented") {
    const Hamiltonian H = fixtures::reference_xor_and_hamiltonian();
    const SpinState x = SpinState::from_index(2, 0b11);
    const std::string traj = dump_trajectory(greedy_descend(H, x, SpinState::from_index(2, 0b11)));
    std::istringstream lines(traj);
    std::string header;
    std::getline(lines, header);
    REQUIRE(header == "# input 3 terminal local_min");
    int step = 0;
    std::uint64_t state = 0;
    double energy = 0.0;
    REQUIRE((lines >> step >> state >> energy).good());
    REQUIRE(step == 0);
    REQUIRE(state == 3);
    REQUIRE(energy == Catch::Approx(-0.3));
    lines >> step >> state >> energy;
    REQUIRE(step == 1);
    REQUIRE(state == 2);
    REQUIRE(energy == Catch::Approx(-1.7));
    const std::string graph = dump_energy_graph(energy_graph(H, x));
    REQUIRE(graph.rfind("# input 3 outputs 2\n", 0) == 0);
    REQUIRE(std::count(graph.begin(), graph.end(), '\n') >= 5);
}

TEST_CASE("rasters serialize deterministically with the documented palette") {
    ResidualPartition p(2);
    p.coupling(0, 1) = 1.0;
    const RasterGrid grid = rasterize(p, 3.0, 9);
    const std::string ppm = raster_to_ppm(grid);
    REQUIRE(ppm.rfind("P3\n9 9\n255\n", 0) == 0);
    REQUIRE(ppm == raster_to_ppm(rasterize(p, 3.0, 9)));
    const std::string legend = raster_legend(grid);
    REQUIRE(legend.find("cell 0 state (-1,-1) color 255 165 0") != std::string::npos);
    REQUIRE(legend.find("boundary color 0 0 0") != std::string::npos);
}
