#include "ails/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ails {

void AilsParams::validate() const {
    if (!(d_min > 0) || !(d_min <= d_max)) throw std::invalid_argument("need 0 < d_min <= d_max");
    if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");
    if (eta < 0 || eta > 1) throw std::invalid_argument("eta must lie in [0, 1]");
    if (omega0 < 1) throw std::invalid_argument("omega0 must be >= 1");
    if (time_limit_s <= 0 && max_iterations < 0)
        throw std::invalid_argument("budget required: time_limit_s or max_iterations");
}

double update_omega(double omega, double d_r, double d_k, int n) {
    d_k = std::max(d_k, 1e-6);
    const double scaled = omega * d_r / d_k;
    const double branch = d_r > d_k ? std::min(scaled, static_cast<double>(n))
                                    : std::max(scaled, 1.0);
    // The branch bounds alone do not confine omega when it starts outside
    // [1, n] (e.g. omega0 = round(d_max) on a tiny instance).
    return std::clamp(branch, 1.0, static_cast<double>(n));
}

double update_dr(double d_r, double d_min, double d_max, long long it) {
    const double decayed = d_r * std::pow(d_min / d_max, 1.0 / static_cast<double>(it));
    return std::clamp(decayed, d_min, d_max);
}

double update_dk(double d_k, long long dist, long long it, int gamma) {
    const double w = it < gamma ? 1.0 / static_cast<double>(it) : 1.0 / gamma;
    return (1.0 - w) * d_k + w * static_cast<double>(dist);
}

double acceptance_threshold(double f_min, double f_mean, double eta) {
    return f_min + eta * (f_mean - f_min);
}

AilsEngine::AilsEngine(const Instance& inst, AilsParams params)
    : inst_(&inst),
      params_(params),
      oracle_(inst, params.dist_matrix_threshold),
      knn_(NeighborLists::build(inst, oracle_, params.k_neighbors)),
      ls_(inst, oracle_, knn_) {
    params_.validate();
}

LinkedSolution AilsEngine::initialize(Rng& rng) const {
    const int n = inst_->num_nodes();
    const int nr = inst_->min_routes();
    LinkedSolution s(*inst_, oracle_, nr);

    std::vector<int> customers(n - 1);
    for (int v = 1; v < n; ++v) customers[v - 1] = v;
    rng.shuffle(customers);

    // One random seed customer per route, then greedy insertion of the rest
    // in random order at the cheapest feasible position.
    for (int r = 0; r < nr; ++r) s.insert_node(customers[r], s.sentinel(r));
    for (int i = nr; i < n - 1; ++i) s.insert_node(customers[i], best_insertion(s, customers[i]).anchor);

    if (!s.violation().feasible()) ls_.repair(s);
    ls_.descend(s);
    return s;
}

RunResult AilsEngine::run(const RuinHeuristic& heuristic,
                          std::vector<IterationTraceRow>* trace) const {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
    auto out_of_budget = [&](long long it) {
        if (params_.max_iterations >= 0 && it > params_.max_iterations) return true;
        if (params_.time_limit_s > 0 && elapsed() >= params_.time_limit_s) return true;
        return false;
    };

    const int n = inst_->num_nodes();
    Rng rng(params_.seed);
    SanitizeStats sanitize_stats;

    LinkedSolution reference = initialize(rng);
    LinkedSolution best = reference;

    RunResult result;
    result.convergence.push_back({elapsed(), 0, best.cost()});

    double omega = params_.omega0;
    double d_r = params_.d_max;
    double d_k = params_.d_max;
    double f_min = static_cast<double>(reference.cost());
    double f_sum = f_min;
    long long f_count = 1;

    long long it = 0;
    while (!out_of_budget(it + 1)) {
        ++it;
        LinkedSolution s = reference;

        const int want = static_cast<int>(std::llround(omega));
        RuinContext ctx;
        ctx.inst = inst_;
        ctx.oracle = &oracle_;
        ctx.knn = &knn_;
        ctx.sol = &s;
        ctx.number_select = std::clamp(want, 1, n - 1);
        const int routes_now = std::max(1, s.nonempty_routes());
        ctx.average_nodes = static_cast<double>(s.routed_customers()) / routes_now;
        ctx.seed = rng.next_u64();

        RuinResult removal = sanitize_ruin(ctx, heuristic.ruin(ctx), &sanitize_stats);
        for (int v : removal.selected) s.remove_node(v);
        const RecreateMode mode =
            rng.next_double() < 0.5 ? RecreateMode::Nearest : RecreateMode::Best;
        recreate(s, removal.selected, mode, rng, knn_);
        if (!s.violation().feasible()) ls_.repair(s);
        ls_.descend(s);

        const long long f = s.cost();
        f_min = std::min(f_min, static_cast<double>(f));
        f_sum += static_cast<double>(f);
        ++f_count;
        const double f_mean = f_sum / static_cast<double>(f_count);

        const long long dist = solution_distance(s, reference);
        d_k = update_dk(d_k, dist, it, params_.gamma);
        omega = update_omega(omega, d_r, d_k, n);
        d_r = update_dr(d_r, params_.d_min, params_.d_max, it);

        const double theta = acceptance_threshold(f_min, f_mean, params_.eta);
        const bool accept = static_cast<double>(f) < theta;

        if (trace) trace->push_back({it, f, omega, d_r, d_k, dist, accept});

        if (f < best.cost()) {
            best = s;
            result.convergence.push_back({elapsed(), it, best.cost()});
        }
        if (accept) reference = std::move(s);
    }

    result.best_routes = best.to_routes();
    result.best_cost = best.cost();
    result.iterations = it;
    result.wall_s = elapsed();
    result.sanitize = sanitize_stats;
    return result;
}

}  // namespace ails
