#ifndef AILS_LOCAL_SEARCH_HPP
#define AILS_LOCAL_SEARCH_HPP

#include <optional>

#include "ails/instance.hpp"
#include "ails/solution.hpp"

namespace ails {

enum class MoveKind { InterShift, SwapStar, TwoOptStar, IntraShift, IntraSwap, IntraTwoOpt };

struct Move {
    MoveKind kind;
    int v = -1;         // primary operand (cut anchor for TwoOptStar, may be a sentinel)
    int w = -1;         // secondary operand / second cut anchor
    int anchor_v = -1;  // insert-after anchor for v
    int anchor_w = -1;  // insert-after anchor for w (SwapStar)
    long long delta_cost = 0;
    long long delta_excess = 0;
};

struct LocalSearchConfig {
    // Operand pairs (v, w) are restricted to w in N_K(v). Tests lift the
    // restriction by building neighbor lists with K = n - 1.
    bool granular = true;
};

// Inter-route and intra-route descent operators plus the feasibility repair
// loop. Moves are accepted only if they do not increase the total excess
// load and strictly improve cost + penalty * excess.
class LocalSearch {
public:
    LocalSearch(const Instance& inst, const DistanceOracle& oracle, const NeighborLists& knn,
                LocalSearchConfig cfg = {});

    // Operator queries. Each returns the best accepted move for the given
    // operands, or nullopt when none improves.
    std::optional<Move> inter_shift(const LinkedSolution& s, int v, int target_route,
                                    long long penalty = 0) const;
    std::optional<Move> swap_star(const LinkedSolution& s, int v, int w,
                                  long long penalty = 0) const;
    std::optional<Move> two_opt_star(const LinkedSolution& s, int a, int b,
                                     long long penalty = 0) const;
    std::optional<Move> intra_shift(const LinkedSolution& s, int v, int anchor,
                                    long long penalty = 0) const;
    std::optional<Move> intra_swap(const LinkedSolution& s, int i, int j,
                                   long long penalty = 0) const;
    std::optional<Move> intra_two_opt(const LinkedSolution& s, int i, int j,
                                      long long penalty = 0) const;

    void apply(LinkedSolution& s, const Move& m) const;

    // Drives the six operators until all routes are capacity-feasible.
    void repair(LinkedSolution& s) const;

    // Descends to a local optimum of the feasible neighborhood and prunes
    // empty routes. Scan order: routes in index order, nodes in route order,
    // first improvement within an operator, operators round-robin until a
    // full quiet cycle.
    void descend(LinkedSolution& s) const;

    const NeighborLists& neighbors() const { return *knn_; }

private:
    bool operator_pass(LinkedSolution& s, MoveKind kind, long long penalty) const;
    bool one_cycle(LinkedSolution& s, long long penalty) const;
    std::optional<Move> best_move_for(const LinkedSolution& s, MoveKind kind, int v,
                                      long long penalty) const;

    const Instance* inst_;
    const DistanceOracle* oracle_;
    const NeighborLists* knn_;
    LocalSearchConfig cfg_;
};

}  // namespace ails

#endif
