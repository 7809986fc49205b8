#include <sstream>

#include "ails/solution.hpp"
#include "doctest.h"
#include "unit/oracles.hpp"

using namespace ails;

namespace {

struct Fix {
    Instance inst;
    DistanceOracle oracle;
    Fix(const char* path) : inst(parse_instance(path)), oracle(inst) {}
    LinkedSolution sol(const std::vector<std::vector<int>>& routes) {
        LinkedSolution s(inst, oracle);
        s.set_routes(routes);
        return s;
    }
};

}  // namespace

TEST_CASE("cost: single route with symmetric legs") {
    std::vector<Coord> coords{{0, 0}, {7, 0}};
    Instance inst("t", coords, {0, 1}, 5);
    DistanceOracle oracle(inst);
    LinkedSolution s(inst, oracle);
    s.set_routes({{1}});
    CHECK(s.cost() == 14);
    CHECK(s.cost_recompute() == 14);
}

TEST_CASE("cost: empty solution is zero") {
    Fix f("tests/fixtures/six_nodes.vrp");
    LinkedSolution s(f.inst, f.oracle, 3);
    CHECK(s.cost() == 0);
    CHECK(s.cost_recompute() == 0);
    CHECK(s.nonempty_routes() == 0);
}

TEST_CASE("cost: eight-customer fixture equals explicit edge enumeration") {
    Fix f("tests/fixtures/eight_customers.vrp");
    std::vector<std::vector<int>> routes{{1, 6, 8}, {3, 5, 2}, {4, 7}};
    LinkedSolution s = f.sol(routes);
    CHECK(s.cost() == oracles::routes_cost(f.inst, routes));
    CHECK(s.cost() == s.cost_recompute());
    s.validate();
}

TEST_CASE("remove_node") {
    Fix f("tests/fixtures/six_nodes.vrp");

    SUBCASE("only customer of a route; delta is -2*d(0,v)") {
        LinkedSolution s = f.sol({{1}, {4, 5}});
        long long delta = s.remove_node(1);
        CHECK(delta == -2 * f.oracle(0, 1));
        CHECK(s.route_size(0) == 0);
        CHECK(!s.in_route(1));
        CHECK(s.cost() == s.cost_recompute());
    }
    SUBCASE("middle of a 3-customer route matches recompute difference") {
        LinkedSolution s = f.sol({{1, 2, 3}, {4, 5}});
        long long before = s.cost_recompute();
        long long delta = s.remove_node(2);
        CHECK(s.cost_recompute() - before == delta);
        CHECK(s.cost() == s.cost_recompute());
    }
    SUBCASE("removing an unrouted node throws") {
        LinkedSolution s = f.sol({{1, 2}});
        CHECK_THROWS_AS(s.remove_node(4), std::invalid_argument);
        s.remove_node(1);
        CHECK_THROWS_AS(s.remove_node(1), std::invalid_argument);
    }
    SUBCASE("removing the depot throws") {
        LinkedSolution s = f.sol({{1, 2}});
        CHECK_THROWS_AS(s.remove_node(0), std::invalid_argument);
    }
}

TEST_CASE("insert_node mirrors remove_node") {
    Fix f("tests/fixtures/eight_customers.vrp");
    LinkedSolution s = f.sol({{1, 6, 8}, {3, 5, 2}, {4, 7}});

    SUBCASE("remove then insert at the same position restores cost and structure") {
        auto routes_before = s.to_routes();
        long long cost_before = s.cost();
        int anchor = s.prev(5);
        long long d1 = s.remove_node(5);
        long long d2 = s.insert_node(5, anchor);
        CHECK(d1 + d2 == 0);
        CHECK(s.cost() == cost_before);
        CHECK(s.to_routes() == routes_before);
        s.validate();
    }
    SUBCASE("insert delta matches recompute difference") {
        s.remove_node(6);
        long long before = s.cost_recompute();
        long long delta = s.insert_node(6, 4);
        CHECK(s.cost_recompute() - before == delta);
        CHECK(s.cost() == s.cost_recompute());
    }
    SUBCASE("inserting an already-routed node throws") {
        CHECK_THROWS_AS(s.insert_node(1, 3), std::invalid_argument);
    }
}

TEST_CASE("cached cost stays exact under random remove/insert sequences") {
    Instance inst = oracles::random_instance(42, 20);
    DistanceOracle oracle(inst);
    LinkedSolution s(inst, oracle, 4);
    Rng rng(7);
    for (int v = 1; v < inst.num_nodes(); ++v)
        s.insert_node(v, s.sentinel(rng.next_int(0, 4)));

    for (int step = 0; step < 2000; ++step) {
        int v = rng.next_int(1, inst.num_nodes());
        if (s.in_route(v)) {
            if (s.routed_customers() > 1 && rng.next_double() < 0.5) s.remove_node(v);
        } else {
            // insert after a random routed node or sentinel
            int anchor;
            do {
                anchor = rng.next_double() < 0.2 ? s.sentinel(rng.next_int(0, s.num_routes()))
                                                 : rng.next_int(1, inst.num_nodes());
            } while (!s.is_sentinel(anchor) && !s.in_route(anchor));
            s.insert_node(v, anchor);
        }
    }
    CHECK(s.cost() == s.cost_recompute());
    s.validate();
}

TEST_CASE("solution_distance") {
    Fix f("tests/fixtures/six_nodes.vrp");

    SUBCASE("identity is zero") {
        LinkedSolution s = f.sol({{1, 2, 3}, {4, 5}});
        CHECK(solution_distance(s, s) == 0);
    }
    SUBCASE("two single-route orderings; value from explicit edge sets") {
        // [1,2,3]: edges {01,12,23,03}; [2,1,3]: edges {02,12,13,03}
        // shared {12,03} -> symmetric difference 4
        LinkedSolution a = f.sol({{1, 2, 3}});
        LinkedSolution b = f.sol({{2, 1, 3}});
        CHECK(solution_distance(a, b) == 4);
        CHECK(solution_distance(a, b) ==
              oracles::edge_distance_bruteforce({{1, 2, 3}}, {{2, 1, 3}}));
    }
    SUBCASE("adjacent intra-route swap matches brute-force edge enumeration") {
        std::vector<std::vector<int>> ra{{1, 2, 3, 4, 5}};
        std::vector<std::vector<int>> rb{{1, 3, 2, 4, 5}};
        LinkedSolution a = f.sol(ra);
        LinkedSolution b = f.sol(rb);
        CHECK(solution_distance(a, b) == oracles::edge_distance_bruteforce(ra, rb));
    }
    SUBCASE("symmetry on random pairs") {
        Instance inst = oracles::random_instance(5, 12);
        DistanceOracle oracle(inst);
        Rng rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            auto random_routes = [&] {
                std::vector<std::vector<int>> r(3);
                for (int v = 1; v < inst.num_nodes(); ++v)
                    r[rng.next_int(0, 3)].push_back(v);
                return r;
            };
            LinkedSolution a(inst, oracle), b(inst, oracle);
            auto ra = random_routes(), rb = random_routes();
            a.set_routes(ra);
            b.set_routes(rb);
            CHECK(solution_distance(a, b) == solution_distance(b, a));
            CHECK(solution_distance(a, b) == oracles::edge_distance_bruteforce(ra, rb));
            CHECK(solution_distance(a, a) == 0);
        }
    }
    SUBCASE("depot edges count with multiplicity") {
        // Two single-customer routes vs one two-customer route.
        LinkedSolution a = f.sol({{1}, {2}});
        LinkedSolution b = f.sol({{1, 2}});
        // a: {01,01,02,02}; b: {01,12,02} -> difference {01,02,12} = 3
        CHECK(solution_distance(a, b) == 3);
    }
    SUBCASE("mismatched instances throw") {
        Instance other = oracles::random_instance(9, 9);
        DistanceOracle oracle2(other);
        LinkedSolution s1 = f.sol({{1}});
        LinkedSolution s2(other, oracle2);
        CHECK_THROWS_AS(solution_distance(s1, s2), std::invalid_argument);
    }
}

TEST_CASE("violation") {
    Fix f("tests/fixtures/six_nodes.vrp");  // capacity 10, demands 3 3 3 4 4

    SUBCASE("feasible fixture is zero") {
        LinkedSolution s = f.sol({{1, 2, 3}, {4, 5}});
        CHECK(s.violation().total_excess == 0);
        CHECK(s.violation().infeasible_routes == 0);
        CHECK(s.violation().feasible());
    }
    SUBCASE("route at load c+3 has excess 3") {
        LinkedSolution s = f.sol({{1, 2, 3, 4}, {5}});  // 13 vs 10
        CHECK(s.violation().total_excess == 3);
        CHECK(s.violation().infeasible_routes == 1);
    }
    SUBCASE("multi-route excess sums per-route hand computation") {
        LinkedSolution s = f.sol({{1, 2, 3, 4}, {5}, {}});      // 13, 4, 0
        LinkedSolution t = f.sol({{1, 2, 3, 4, 5}});            // 17
        CHECK(s.violation().total_excess == 3);
        CHECK(t.violation().total_excess == 7);
        CHECK(t.violation().infeasible_routes == 1);
    }
}

TEST_CASE("write_sol round-trips through parse_solution") {
    Fix f("tests/fixtures/six_nodes.vrp");
    LinkedSolution s = f.sol({{1, 2, 3}, {4, 5}});
    std::ostringstream out;
    s.write_sol(out);
    ParsedSolution parsed = parse_solution_text(out.str(), f.inst);
    CHECK(parsed.routes == s.to_routes());
    CHECK(*parsed.declared_cost == s.cost());
    CHECK(parsed.warnings.empty());
}

TEST_CASE("prune_empty_routes keeps only populated routes") {
    Fix f("tests/fixtures/six_nodes.vrp");
    LinkedSolution s = f.sol({{}, {1, 2}, {}, {3, 4, 5}, {}});
    CHECK(s.num_routes() == 5);
    s.prune_empty_routes();
    CHECK(s.num_routes() == 2);
    CHECK(s.to_routes() == std::vector<std::vector<int>>{{1, 2}, {3, 4, 5}});
    CHECK(s.cost() == s.cost_recompute());
}
