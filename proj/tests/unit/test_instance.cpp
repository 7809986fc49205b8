#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ails/instance.hpp"
#include "doctest.h"
#include "unit/oracles.hpp"

using namespace ails;

TEST_CASE("euclidean distance rounding") {
    CHECK(euclidean_distance({0, 0}, {0, 0}) == 0);
    CHECK(euclidean_distance({0, 0}, {3, 4}) == 5);
    CHECK(euclidean_distance({0, 0}, {1, 1}) == 1);  // 1.414...
    CHECK(euclidean_distance({0, 0}, {0.5, 0}) == 1);  // ties round away from zero
    CHECK(euclidean_distance({0, 0}, {1.4, 0}) == 1);
    CHECK(euclidean_distance({-3, -4}, {0, 0}) == 5);
}

TEST_CASE("parse six-node fixture field by field") {
    Instance inst = parse_instance("tests/fixtures/six_nodes.vrp");
    CHECK(inst.name() == "six-nodes");
    CHECK(inst.num_nodes() == 6);
    CHECK(inst.capacity() == 10);
    CHECK(inst.coord(0) == Coord{0, 0});
    CHECK(inst.coord(1) == Coord{10, 0});
    CHECK(inst.coord(3) == Coord{30, 0});
    CHECK(inst.coord(5) == Coord{0, 20});
    CHECK(inst.demand(0) == 0);
    CHECK(inst.demand(1) == 3);
    CHECK(inst.demand(4) == 4);
    CHECK(inst.total_demand() == 17);
}

TEST_CASE("parse minimal two-node instance") {
    Instance inst = parse_instance("tests/fixtures/two_nodes.vrp");
    CHECK(inst.num_nodes() == 2);
    CHECK(inst.num_customers() == 1);
    CHECK(inst.demand(1) == 5);
    CHECK(inst.min_routes() == 1);
}

TEST_CASE("depot is remapped to index 0") {
    Instance inst = parse_instance("tests/fixtures/depot_mid.vrp");
    CHECK(inst.coord(0) == Coord{1, 1});
    CHECK(inst.demand(0) == 0);
    // Remaining nodes keep file order.
    CHECK(inst.coord(1) == Coord{5, 0});
    CHECK(inst.demand(1) == 2);
    CHECK(inst.coord(2) == Coord{9, 9});
    CHECK(inst.coord(3) == Coord{0, 4});
    CHECK(inst.demand(3) == 4);
}

TEST_CASE("parse errors are specific") {
    const std::string base =
        "NAME : x\nTYPE : CVRP\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nCAPACITY : 5\n"
        "NODE_COORD_SECTION\n1 0 0\n2 1 1\nDEMAND_SECTION\n1 0\n2 5\nDEPOT_SECTION\n1\n-1\nEOF\n";

    CHECK_NOTHROW(parse_instance_text(base));

    SUBCASE("wrong TYPE") {
        std::string t = base;
        t.replace(t.find("CVRP"), 4, "TSP ");
        CHECK_THROWS_WITH_AS(parse_instance_text(t), doctest::Contains("TYPE"), ParseError);
    }
    SUBCASE("unsupported EDGE_WEIGHT_TYPE") {
        std::string t = base;
        t.replace(t.find("EUC_2D"), 6, "GEO   ");
        CHECK_THROWS_WITH_AS(parse_instance_text(t), doctest::Contains("EUC_2D"), ParseError);
    }
    SUBCASE("demand exceeding capacity") {
        std::string t = base;
        t.replace(t.find("2 5\n"), 4, "2 6\n");
        CHECK_THROWS_WITH_AS(parse_instance_text(t), doctest::Contains("capacity"), ParseError);
    }
    SUBCASE("missing depot section") {
        std::string t = base.substr(0, base.find("DEPOT_SECTION")) + "EOF\n";
        CHECK_THROWS_WITH_AS(parse_instance_text(t), doctest::Contains("DEPOT_SECTION"),
                             ParseError);
    }
    SUBCASE("malformed coordinate names the line") {
        std::string t = base;
        t.replace(t.find("1 0 0"), 5, "1 0 z");
        try {
            parse_instance_text(t);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 7);
        }
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(parse_instance("tests/fixtures/does_not_exist.vrp"), ParseError);
    }
}

TEST_CASE("min_routes") {
    auto make = [](std::vector<int> demands, long long cap) {
        std::vector<Coord> coords(demands.size() + 1);
        demands.insert(demands.begin(), 0);
        return Instance("t", coords, demands, cap);
    };
    CHECK(make({3, 3, 3}, 5).min_routes() == 2);
    CHECK(make({5}, 5).min_routes() == 1);
    CHECK(make({1, 1}, 100).min_routes() == 1);
}

TEST_CASE("serialize then parse is the identity") {
    for (const char* path : {"tests/fixtures/six_nodes.vrp", "tests/fixtures/two_nodes.vrp",
                             "tests/fixtures/depot_mid.vrp", "tests/fixtures/eight_customers.vrp"}) {
        CAPTURE(path);
        Instance a = parse_instance(path);
        std::ostringstream s1;
        a.serialize(s1);
        Instance b = parse_instance_text(s1.str());
        CHECK(a.num_nodes() == b.num_nodes());
        CHECK(a.capacity() == b.capacity());
        CHECK(a.coords() == b.coords());
        CHECK(a.demands() == b.demands());
        std::ostringstream s2;
        b.serialize(s2);
        CHECK(s1.str() == s2.str());
    }
}

TEST_CASE("distance oracle: matrix and on-demand agree") {
    Instance inst = oracles::random_instance(7, 30);
    DistanceOracle full(inst, 1000);
    DistanceOracle lazy(inst, 0);
    CHECK(full.stores_full_matrix());
    CHECK(!lazy.stores_full_matrix());
    for (int i = 0; i < inst.num_nodes(); ++i)
        for (int j = 0; j < inst.num_nodes(); ++j) {
            CHECK(full(i, j) == lazy(i, j));
            CHECK(full(i, j) == full(j, i));
        }
}

TEST_CASE("knn: collinear order is forced") {
    std::vector<Coord> coords{{50, 50}, {0, 0}, {1, 0}, {2, 0}};
    std::vector<int> demands{0, 1, 1, 1};
    Instance inst("line", coords, demands, 10);
    DistanceOracle oracle(inst);
    NeighborLists knn = NeighborLists::build(inst, oracle);
    CHECK(knn.k() == 3);
    auto l = knn.of(1);  // node at (0,0): nearest (1,0), then (2,0), then depot
    CHECK(l[0] == 2);
    CHECK(l[1] == 3);
    CHECK(l[2] == 0);
}

TEST_CASE("knn: n=2 gives single-entry lists") {
    Instance inst = parse_instance("tests/fixtures/two_nodes.vrp");
    DistanceOracle oracle(inst);
    NeighborLists knn = NeighborLists::build(inst, oracle);
    CHECK(knn.k() == 1);
    CHECK(knn.of(0)[0] == 1);
    CHECK(knn.of(1)[0] == 0);
}

TEST_CASE("knn matches brute-force sort on random instances up to n=50") {
    for (uint64_t seed : {11u, 12u, 13u, 14u}) {
        Instance inst = oracles::random_instance(seed, static_cast<int>(seed) * 3 + 5);
        DistanceOracle oracle(inst);
        NeighborLists knn = NeighborLists::build(inst, oracle);
        auto expect = oracles::knn_bruteforce(inst, knn.k());
        for (int i = 0; i < inst.num_nodes(); ++i) {
            auto got = knn.of(i);
            REQUIRE(got.size() == expect[i].size());
            for (size_t j = 0; j < got.size(); ++j) CHECK(got[j] == expect[i][j]);
        }
    }
}

TEST_CASE("knn distances are nondecreasing and exclude self") {
    Instance inst = oracles::random_instance(99, 12);
    DistanceOracle oracle(inst);
    NeighborLists knn = NeighborLists::build(inst, oracle);
    for (int i = 0; i < inst.num_nodes(); ++i) {
        auto ids = knn.of(i);
        auto ds = knn.dist_of(i);
        for (size_t j = 0; j < ids.size(); ++j) {
            CHECK(ids[j] != i);
            CHECK(ds[j] == oracle(i, ids[j]));
            if (j > 0) CHECK(ds[j] >= ds[j - 1]);
        }
    }
}

TEST_CASE("parse_solution reads the two-route fixture") {
    Instance inst = parse_instance("tests/fixtures/six_nodes.vrp");
    ParsedSolution sol = parse_solution("tests/fixtures/two_routes.sol", inst);
    REQUIRE(sol.routes.size() == 2);
    CHECK(sol.routes[0] == std::vector<int>{1, 2, 3});
    CHECK(sol.routes[1] == std::vector<int>{4, 5});
    CHECK(*sol.declared_cost == 100);
    CHECK(sol.warnings.empty());  // declared cost matches the recomputation
}

TEST_CASE("parse_solution error and warning paths") {
    Instance inst = parse_instance("tests/fixtures/six_nodes.vrp");
    SUBCASE("empty route line") {
        CHECK_THROWS_WITH_AS(parse_solution("tests/fixtures/empty_route.sol", inst),
                             doctest::Contains("empty route"), ParseError);
    }
    SUBCASE("cost mismatch warns with both values") {
        ParsedSolution sol = parse_solution("tests/fixtures/bad_cost.sol", inst);
        REQUIRE(sol.warnings.size() == 1);
        CHECK(sol.warnings[0] == "declared cost 90 differs from recomputed cost 100");
    }
    SUBCASE("unknown node id") {
        CHECK_THROWS_WITH_AS(parse_solution_text("Route #1: 1 9\nCost 1\n", inst),
                             doctest::Contains("unknown node id"), ParseError);
    }
    SUBCASE("customer visited twice") {
        CHECK_THROWS_WITH_AS(parse_solution_text("Route #1: 1 2\nRoute #2: 2\nCost 1\n", inst),
                             doctest::Contains("twice"), ParseError);
    }
    SUBCASE("missing cost line") {
        CHECK_THROWS_WITH_AS(parse_solution_text("Route #1: 1 2 3 4 5\n", inst),
                             doctest::Contains("Cost"), ParseError);
    }
    SUBCASE("missing customers produce a warning") {
        ParsedSolution sol = parse_solution_text("Route #1: 1 2\nCost 40\n", inst);
        REQUIRE(!sol.warnings.empty());
        CHECK(sol.warnings.back() == "customers not visited: 3 4 5");
    }
}

TEST_CASE("min_routes regression on X-n101-k25 when the benchmark file is present") {
    const char* dir = std::getenv("AILS_CVRPLIB_DIR");
    std::string path = std::string(dir ? dir : "data/cvrplib") + "/X-n101-k25.vrp";
    std::ifstream probe(path);
    if (!probe) {
        MESSAGE("skipped: ", path, " not available in this environment");
        return;
    }
    Instance inst = parse_instance(path);
    CHECK(inst.num_nodes() == 101);
    CHECK(inst.min_routes() == 25);
}
