#include "ails/ruin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ails {

namespace {

bool selectable(const LinkedSolution& s, const std::vector<char>& taken, int v) {
    return v > 0 && v < s.num_nodes() && s.in_route(v) && !taken[v];
}

// Random routed, not-yet-taken customer. Bounded rejection sampling with a
// deterministic scan fallback.
int random_selectable(const RuinContext& ctx, Rng& rng, const std::vector<char>& taken) {
    const int n = ctx.inst->num_nodes();
    for (int tries = 0; tries < 64 * n; ++tries) {
        int v = rng.next_int(1, n);
        if (selectable(*ctx.sol, taken, v)) return v;
    }
    for (int v = 1; v < n; ++v)
        if (selectable(*ctx.sol, taken, v)) return v;
    return -1;
}

// Walks successive next-links from a random start, skipping the depot and
// already-taken nodes, selecting until `max_len` nodes were taken or the
// walk wraps back to its start (which is then taken as well).
void walk_string(const RuinContext& ctx, Rng& rng, std::vector<char>& taken,
                 std::vector<int>& out, int target, int max_len) {
    const LinkedSolution& s = *ctx.sol;
    const int start = random_selectable(ctx, rng, taken);
    if (start < 0) return;
    int node = start;
    int steps = 0;
    do {
        ++steps;
        node = s.next(node);
        if (s.is_sentinel(node)) node = s.next(node);
        if (s.is_sentinel(node)) break;  // empty route cannot happen for a routed start
        if (!taken[node] && static_cast<int>(out.size()) < target) {
            taken[node] = 1;
            out.push_back(node);
        }
    } while (node != start && steps < max_len && static_cast<int>(out.size()) < target);
}

class SeedRuin : public RuinHeuristic {
public:
    std::string id() const override { return "seed"; }
    RuinResult ruin(const RuinContext& ctx) const override {
        Rng rng(ctx.seed);
        const LinkedSolution& s = *ctx.sol;
        const int n = ctx.inst->num_nodes();
        std::vector<char> taken(n, 0);
        std::vector<int> out;
        const int target = ctx.number_select;

        if (rng.next_double() > 0.5) {
            while (static_cast<int>(out.size()) < target) {
                const int remaining = target - static_cast<int>(out.size());
                const int size_string = std::min(std::max(1, n - 1), remaining);
                walk_string(ctx, rng, taken, out, target, size_string);
            }
        } else {
            const int v = rng.next_int(1, n);
            for (int w : ctx.knn->of(v)) {
                if (static_cast<int>(out.size()) >= target) break;
                if (selectable(s, taken, w)) {
                    taken[w] = 1;
                    out.push_back(w);
                }
            }
        }
        return {std::move(out)};
    }
};

class SequenceRuin : public RuinHeuristic {
public:
    std::string id() const override { return "sequence"; }
    RuinResult ruin(const RuinContext& ctx) const override {
        Rng rng(ctx.seed);
        const int n = ctx.inst->num_nodes();
        std::vector<char> taken(n, 0);
        std::vector<int> out;
        const int target = ctx.number_select;
        while (static_cast<int>(out.size()) < target) {
            const int remaining = target - static_cast<int>(out.size());
            const int size_string = std::min(std::max(1, n - 1), remaining);
            walk_string(ctx, rng, taken, out, target, size_string);
        }
        return {std::move(out)};
    }
};

class KNearestRuin : public RuinHeuristic {
public:
    std::string id() const override { return "knearest"; }
    RuinResult ruin(const RuinContext& ctx) const override {
        Rng rng(ctx.seed);
        const LinkedSolution& s = *ctx.sol;
        const int n = ctx.inst->num_nodes();
        std::vector<char> taken(n, 0);
        std::vector<int> out;
        const int target = ctx.number_select;

        const int seed_node = random_selectable(ctx, rng, taken);
        if (seed_node < 0) return {std::move(out)};
        taken[seed_node] = 1;
        out.push_back(seed_node);
        for (int w : ctx.knn->of(seed_node)) {
            if (static_cast<int>(out.size()) >= target) break;
            if (selectable(s, taken, w)) {
                taken[w] = 1;
                out.push_back(w);
            }
        }
        return {std::move(out)};
    }
};

class EnRuin : public RuinHeuristic {
public:
    explicit EnRuin(double step) : step_(step) {
        if (step_ <= 0) throw std::invalid_argument("expansion step must be positive");
    }
    std::string id() const override { return "en"; }

    RuinResult ruin(const RuinContext& ctx) const override {
        Rng rng(ctx.seed);
        const LinkedSolution& s = *ctx.sol;
        const DistanceOracle& d = *ctx.oracle;
        const int n = ctx.inst->num_nodes();

        int start = rng.next_int(1, n);
        int tries = 0;
        while (!s.in_route(start)) {
            start = rng.next_int(1, n);
            if (++tries > 64 * n) return {};
        }

        // Sweep k takes every routed node with dist <= k * step, in id
        // order within a sweep. Sorting by (sweep, id) selects exactly the
        // nodes the literal expanding-radius loop would, without the
        // O(n * radius) rescans.
        std::vector<std::pair<int64_t, int32_t>> order;
        order.reserve(n - 1);
        for (int v = 1; v < n; ++v) {
            if (!s.in_route(v)) continue;
            const int dist = d(start, v);
            int64_t sweep = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(dist / step_)));
            while (static_cast<double>(sweep) * step_ < dist) ++sweep;
            while (sweep > 1 && static_cast<double>(sweep - 1) * step_ >= dist) --sweep;
            order.emplace_back(sweep, v);
        }
        const int take = std::min<int>(ctx.number_select, static_cast<int>(order.size()));
        std::partial_sort(order.begin(), order.begin() + take, order.end());
        std::vector<int> out;
        out.reserve(take);
        for (int i = 0; i < take; ++i) out.push_back(order[i].second);
        return {std::move(out)};
    }

private:
    double step_;
};

class DddRuin : public RuinHeuristic {
public:
    std::string id() const override { return "ddd"; }

    RuinResult ruin(const RuinContext& ctx) const override {
        Rng rng(ctx.seed);
        const LinkedSolution& s = *ctx.sol;
        const DistanceOracle& d = *ctx.oracle;
        const int n = ctx.inst->num_nodes();
        std::vector<char> taken(n, 0);
        std::vector<int> out;
        const int target = std::min(ctx.number_select, s.routed_customers());

        int start = rng.next_int(1, n);
        int tries = 0;
        while (!s.in_route(start)) {
            start = rng.next_int(1, n);
            if (++tries > 64 * n) return {};
        }

        double radius = 0.0;
        std::vector<std::pair<double, int>> epoch;  // (priority, id)
        while (static_cast<int>(out.size()) < target) {
            radius += 1.0;
            // Jump over epochs with no candidate in range; they draw no
            // randomness, so skipping them is observationally identical.
            int min_remaining = -1;
            for (int v = 1; v < n; ++v) {
                if (!s.in_route(v) || taken[v]) continue;
                const int dist = d(start, v);
                if (min_remaining < 0 || dist < min_remaining) min_remaining = dist;
            }
            if (min_remaining < 0) break;
            if (static_cast<double>(min_remaining) > radius)
                radius = std::ceil(static_cast<double>(min_remaining));

            epoch.clear();
            const double decay = std::pow(0.9, radius);
            for (int v = 1; v < n; ++v) {
                if (!s.in_route(v) || taken[v]) continue;
                const int dist = d(start, v);
                if (dist <= radius) {
                    const double priority =
                        (ctx.inst->demand(v) * decay) / (dist + 1.0) + rng.next_double();
                    epoch.emplace_back(priority, v);
                }
            }
            std::sort(epoch.begin(), epoch.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
            for (const auto& [priority, v] : epoch) {
                if (static_cast<int>(out.size()) >= target) break;
                taken[v] = 1;
                out.push_back(v);
            }
        }
        return {std::move(out)};
    }
};

class PfdRuin : public RuinHeuristic {
public:
    std::string id() const override { return "pfd"; }

    RuinResult ruin(const RuinContext& ctx) const override {
        Rng rng(ctx.seed);
        const LinkedSolution& s = *ctx.sol;
        const int n = ctx.inst->num_nodes();
        std::vector<char> taken(n, 0);
        std::vector<double> frequency(n, 0.5);
        std::vector<int> out;
        const int target = std::min(ctx.number_select, s.routed_customers());
        const int k = ctx.knn->k();

        int guard = 0;
        while (static_cast<int>(out.size()) < target && ++guard < 10000) {
            const double luck = rng.next_double();
            if (luck > 0.8) {
                const int remaining = target - static_cast<int>(out.size());
                const int seq_len = std::min(n, remaining);
                walk_string(ctx, rng, taken, out, target, seq_len);
            } else {
                const int v = rng.next_int(1, n);
                auto list = ctx.knn->of(v);
                for (int i = 0; i < ctx.number_select && i < k; ++i) {
                    if (static_cast<int>(out.size()) >= target) break;
                    const int cand = list[i];
                    if (!selectable(s, taken, cand)) continue;
                    if (rng.next_double() < pfd_accept_probability(frequency[cand], i)) {
                        taken[cand] = 1;
                        out.push_back(cand);
                        frequency[cand] *= 0.95;
                    }
                }
            }
        }
        return {std::move(out)};
    }
};

}  // namespace

double pfd_accept_probability(double frequency, int i) {
    return 1.0 / (frequency + std::exp(-static_cast<double>(i)));
}

std::unique_ptr<RuinHeuristic> make_seed_ruin() { return std::make_unique<SeedRuin>(); }
std::unique_ptr<RuinHeuristic> make_en_ruin(double step) { return std::make_unique<EnRuin>(step); }
std::unique_ptr<RuinHeuristic> make_ddd_ruin() { return std::make_unique<DddRuin>(); }
std::unique_ptr<RuinHeuristic> make_pfd_ruin() { return std::make_unique<PfdRuin>(); }
std::unique_ptr<RuinHeuristic> make_knearest_ruin() { return std::make_unique<KNearestRuin>(); }
std::unique_ptr<RuinHeuristic> make_sequence_ruin() { return std::make_unique<SequenceRuin>(); }

std::unique_ptr<RuinHeuristic> make_builtin_ruin(const std::string& name) {
    if (name == "seed") return make_seed_ruin();
    if (name == "en") return make_en_ruin();
    if (name.rfind("en:", 0) == 0) return make_en_ruin(std::stod(name.substr(3)));
    if (name == "ddd") return make_ddd_ruin();
    if (name == "pfd") return make_pfd_ruin();
    if (name == "knearest") return make_knearest_ruin();
    if (name == "sequence") return make_sequence_ruin();
    return nullptr;
}

RuinResult sanitize_ruin(const RuinContext& ctx, RuinResult raw, SanitizeStats* stats) {
    const LinkedSolution& s = *ctx.sol;
    const int n = ctx.inst->num_nodes();
    const int target = std::min(ctx.number_select, s.routed_customers());

    std::vector<char> seen(n, 0);
    std::vector<int> out;
    out.reserve(target);
    long long invalid = 0, dups = 0;
    for (int id : raw.selected) {
        if (static_cast<int>(out.size()) >= target) {
            ++invalid;  // overlong output is a contract violation
            continue;
        }
        if (id <= 0 || id >= n || !s.in_route(id)) {
            ++invalid;
            continue;
        }
        if (seen[id]) {
            ++dups;
            continue;
        }
        seen[id] = 1;
        out.push_back(id);
    }

    long long topped = 0;
    if (static_cast<int>(out.size()) < target) {
        Rng rng(ctx.seed ^ 0x53414E49544F52ull);
        while (static_cast<int>(out.size()) < target) {
            int v = random_selectable(ctx, rng, seen);
            if (v < 0) break;
            seen[v] = 1;
            out.push_back(v);
            ++topped;
        }
    }

    if (stats) {
        ++stats->calls;
        stats->dropped_invalid += invalid;
        stats->dropped_duplicates += dups;
        stats->topped_up += topped;
        if (out.empty() || (topped == target && target > 0)) ++stats->hard_violations;
    }
    return {std::move(out)};
}

InsertionChoice best_insertion(const LinkedSolution& s, int v) {
    const long long cap = s.instance().capacity();
    const int q = s.instance().demand(v);
    InsertionChoice best;
    bool have = false;
    for (int r = 0; r < s.num_routes(); ++r) {
        const long long excess_inc = std::max(0LL, s.route_load(r) + q - cap) -
                                     std::max(0LL, s.route_load(r) - cap);
        int anchor = s.sentinel(r);
        while (true) {
            const int nxt = s.next(anchor);
            const long long delta = static_cast<long long>(s.dist(anchor, v)) + s.dist(v, nxt) -
                                    s.dist(anchor, nxt);
            const bool better =
                !have || std::pair(excess_inc, delta) < std::pair(best.delta_excess, best.delta_cost);
            if (better) {
                best = {anchor, delta, excess_inc};
                have = true;
            }
            if (nxt == s.sentinel(r)) break;
            anchor = nxt;
        }
    }
    return best;
}

void recreate(LinkedSolution& s, std::vector<int> removed, RecreateMode mode, Rng& rng,
              const NeighborLists& knn) {
    if (removed.empty()) return;
    if (s.num_routes() == 0) s.add_route();
    rng.shuffle(removed);

    const long long cap = s.instance().capacity();
    for (int v : removed) {
        int anchor = -1;
        if (mode == RecreateMode::Nearest) {
            for (int w : knn.of(v)) {
                if (w == 0 || !s.in_route(w)) continue;
                const int r = s.route_of(w);
                if (s.route_load(r) + s.instance().demand(v) > cap) continue;
                const int before = s.prev(w);
                const long long d_before = static_cast<long long>(s.dist(before, v)) +
                                           s.dist(v, w) - s.dist(before, w);
                const long long d_after = static_cast<long long>(s.dist(w, v)) +
                                          s.dist(v, s.next(w)) - s.dist(w, s.next(w));
                anchor = d_before < d_after ? before : w;
                break;
            }
        }
        if (anchor < 0) anchor = best_insertion(s, v).anchor;
        s.insert_node(v, anchor);
    }
}

}  // namespace ails
