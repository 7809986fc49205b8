#ifndef AILS_SOLUTION_HPP
#define AILS_SOLUTION_HPP

#include <iosfwd>
#include <vector>

#include "ails/instance.hpp"

namespace ails {

struct ViolationMeasure {
    long long total_excess = 0;
    int infeasible_routes = 0;
    bool feasible() const { return total_excess == 0; }
};

// Doubly-linked route representation. Each route r owns a depot sentinel
// with id n + r; customer ids are 0 < v < n. An empty route points its
// sentinel at itself. Unrouted customers have next/prev/route set to -1.
//
// Cost is cached and maintained incrementally by remove/insert; it always
// equals cost_recompute() exactly (all distances are integers).
class LinkedSolution {
public:
    LinkedSolution(const Instance& inst, const DistanceOracle& oracle, int num_routes = 0);

    const Instance& instance() const { return *inst_; }
    const DistanceOracle& oracle() const { return *oracle_; }

    int num_nodes() const { return n_; }
    int num_routes() const { return static_cast<int>(route_load_.size()); }
    int nonempty_routes() const;
    int sentinel(int route) const { return n_ + route; }
    bool is_sentinel(int id) const { return id >= n_; }
    int route_of_sentinel(int id) const { return id - n_; }

    int next(int id) const { return next_[id]; }
    int prev(int id) const { return prev_[id]; }
    int route_of(int id) const { return route_[id]; }
    bool in_route(int v) const { return route_[v] >= 0; }
    long long route_load(int r) const { return route_load_[r]; }
    int route_size(int r) const { return route_size_[r]; }
    long long cost() const { return cost_; }
    int routed_customers() const { return routed_customers_; }

    // Distance between two node ids where sentinels count as the depot.
    int dist(int a, int b) const {
        return (*oracle_)(a >= n_ ? 0 : a, b >= n_ ? 0 : b);
    }

    int add_route();

    // Unlinks customer v. Returns the (non-positive in metric spaces) cost delta.
    long long remove_node(int v);

    // Splices unrouted customer v after `after` (customer id or sentinel).
    // Returns the cost delta.
    long long insert_node(int v, int after);

    long long cost_recompute() const;
    ViolationMeasure violation() const;
    void prune_empty_routes();

    std::vector<std::vector<int>> to_routes() const;
    void set_routes(const std::vector<std::vector<int>>& routes);

    // Writes the CVRPLib ".sol" convention.
    void write_sol(std::ostream& out) const;

    // Structural self-check; throws std::logic_error on broken invariants.
    void validate() const;

private:
    const Instance* inst_;
    const DistanceOracle* oracle_;
    int n_;
    int routed_customers_ = 0;
    long long cost_ = 0;
    std::vector<int32_t> next_, prev_, route_;
    std::vector<long long> route_load_;
    std::vector<int32_t> route_size_;
};

// Number of differing undirected edges |E(a) symdiff E(b)|; depot edges are
// counted with multiplicity across routes.
long long solution_distance(const LinkedSolution& a, const LinkedSolution& b);

}  // namespace ails

#endif
