#ifndef AILS_ENGINE_HPP
#define AILS_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "ails/instance.hpp"
#include "ails/local_search.hpp"
#include "ails/ruin.hpp"
#include "ails/solution.hpp"

namespace ails {

struct AilsParams {
    double d_min = 10.0;
    double d_max = 50.0;
    int gamma = 30;
    double eta = 0.1;
    double omega0 = 50.0;  // defaults to round(d_max)
    int k_neighbors = 0;   // 0 = min(100, n - 1)
    int dist_matrix_threshold = 5000;
    uint64_t seed = 1;

    // Budget: wall-clock seconds (<= 0 disables), iteration count (< 0
    // disables), or both; the first limit hit wins.
    double time_limit_s = 0.0;
    long long max_iterations = -1;

    void validate() const;
};

struct ConvergenceRow {
    double elapsed_s = 0.0;
    long long iteration = 0;
    long long best_cost = 0;
};

struct IterationTraceRow {
    long long iteration = 0;
    long long cost = 0;
    double omega = 0.0;
    double d_r = 0.0;
    double d_k = 0.0;
    long long dist = 0;
    bool accepted = false;
};

struct RunResult {
    std::vector<std::vector<int>> best_routes;
    long long best_cost = 0;
    long long iterations = 0;
    double wall_s = 0.0;
    std::vector<ConvergenceRow> convergence;
    SanitizeStats sanitize;
};

// Adaptive parameter updates. Pure functions, exposed for testing.
double update_omega(double omega, double d_r, double d_k, int n);
double update_dr(double d_r, double d_min, double d_max, long long it);
double update_dk(double d_k, long long dist, long long it, int gamma);
double acceptance_threshold(double f_min, double f_mean, double eta);

class AilsEngine {
public:
    AilsEngine(const Instance& inst, AilsParams params);

    const DistanceOracle& oracle() const { return oracle_; }
    const NeighborLists& neighbors() const { return knn_; }
    const LocalSearch& local_search() const { return ls_; }

    // Greedy insertion into min_routes() routes followed by a descent.
    LinkedSolution initialize(Rng& rng) const;

    RunResult run(const RuinHeuristic& heuristic,
                  std::vector<IterationTraceRow>* trace = nullptr) const;

private:
    const Instance* inst_;
    AilsParams params_;
    DistanceOracle oracle_;
    NeighborLists knn_;
    LocalSearch ls_;
};

}  // namespace ails

#endif
