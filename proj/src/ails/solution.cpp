#include "ails/solution.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace ails {

LinkedSolution::LinkedSolution(const Instance& inst, const DistanceOracle& oracle, int num_routes)
    : inst_(&inst), oracle_(&oracle), n_(inst.num_nodes()) {
    next_.assign(n_, -1);
    prev_.assign(n_, -1);
    route_.assign(n_, -1);
    next_[0] = prev_[0] = 0;
    route_[0] = -1;
    for (int r = 0; r < num_routes; ++r) add_route();
}

int LinkedSolution::add_route() {
    int r = num_routes();
    int s = n_ + r;
    next_.push_back(s);
    prev_.push_back(s);
    route_.push_back(r);
    route_load_.push_back(0);
    route_size_.push_back(0);
    return r;
}

int LinkedSolution::nonempty_routes() const {
    int c = 0;
    for (int r = 0; r < num_routes(); ++r)
        if (route_size_[r] > 0) ++c;
    return c;
}

long long LinkedSolution::remove_node(int v) {
    if (v <= 0 || v >= n_) throw std::invalid_argument("remove_node: not a customer id");
    if (!in_route(v)) throw std::invalid_argument("remove_node: node not routed");
    const int p = prev_[v];
    const int x = next_[v];
    const long long delta =
        static_cast<long long>(dist(p, x)) - dist(p, v) - dist(v, x);
    next_[p] = x;
    prev_[x] = p;
    route_load_[route_[v]] -= inst_->demand(v);
    route_size_[route_[v]] -= 1;
    next_[v] = prev_[v] = -1;
    route_[v] = -1;
    cost_ += delta;
    --routed_customers_;
    return delta;
}

long long LinkedSolution::insert_node(int v, int after) {
    if (v <= 0 || v >= n_) throw std::invalid_argument("insert_node: not a customer id");
    if (in_route(v)) throw std::invalid_argument("insert_node: node already routed");
    int r = is_sentinel(after) ? route_of_sentinel(after) : route_[after];
    if (r < 0) throw std::invalid_argument("insert_node: anchor not routed");
    const int x = next_[after];
    const long long delta =
        static_cast<long long>(dist(after, v)) + dist(v, x) - dist(after, x);
    next_[after] = v;
    prev_[v] = after;
    next_[v] = x;
    prev_[x] = v;
    route_[v] = r;
    route_load_[r] += inst_->demand(v);
    route_size_[r] += 1;
    cost_ += delta;
    ++routed_customers_;
    return delta;
}

long long LinkedSolution::cost_recompute() const {
    long long total = 0;
    for (int r = 0; r < num_routes(); ++r) {
        const int s = sentinel(r);
        int cur = s;
        int steps = 0;
        do {
            int nxt = next_[cur];
            if (nxt < 0) throw std::logic_error("broken link chain");
            total += dist(cur, nxt);
            cur = nxt;
            if (++steps > n_ + 1) throw std::logic_error("route cycle does not close");
        } while (cur != s);
    }
    return total;
}

ViolationMeasure LinkedSolution::violation() const {
    ViolationMeasure m;
    for (int r = 0; r < num_routes(); ++r) {
        long long excess = route_load_[r] - inst_->capacity();
        if (excess > 0) {
            m.total_excess += excess;
            ++m.infeasible_routes;
        }
    }
    return m;
}

void LinkedSolution::prune_empty_routes() {
    std::vector<std::vector<int>> routes = to_routes();
    routes.erase(std::remove_if(routes.begin(), routes.end(),
                                [](const std::vector<int>& r) { return r.empty(); }),
                 routes.end());
    set_routes(routes);
}

std::vector<std::vector<int>> LinkedSolution::to_routes() const {
    std::vector<std::vector<int>> out(num_routes());
    for (int r = 0; r < num_routes(); ++r) {
        int cur = next_[sentinel(r)];
        while (cur != sentinel(r)) {
            out[r].push_back(cur);
            cur = next_[cur];
        }
    }
    return out;
}

void LinkedSolution::set_routes(const std::vector<std::vector<int>>& routes) {
    next_.assign(n_, -1);
    prev_.assign(n_, -1);
    route_.assign(n_, -1);
    next_[0] = prev_[0] = 0;
    route_load_.clear();
    route_size_.clear();
    cost_ = 0;
    routed_customers_ = 0;
    for (const auto& route : routes) {
        int r = add_route();
        int anchor = sentinel(r);
        for (int v : route) {
            insert_node(v, anchor);
            anchor = v;
        }
    }
}

void LinkedSolution::write_sol(std::ostream& out) const {
    int k = 0;
    for (const auto& route : to_routes()) {
        if (route.empty()) continue;
        out << "Route #" << ++k << ":";
        for (int v : route) out << " " << v;
        out << "\n";
    }
    out << "Cost " << cost_ << "\n";
}

void LinkedSolution::validate() const {
    std::vector<char> seen(n_, 0);
    long long load_sum = 0;
    int routed = 0;
    for (int r = 0; r < num_routes(); ++r) {
        const int s = sentinel(r);
        int cur = next_[s];
        long long load = 0;
        int size = 0;
        int steps = 0;
        while (cur != s) {
            if (cur <= 0 || cur >= n_) throw std::logic_error("invalid node id in route");
            if (seen[cur]) throw std::logic_error("node appears twice");
            if (route_[cur] != r) throw std::logic_error("route id mismatch");
            if (next_[prev_[cur]] != cur || prev_[next_[cur]] != cur)
                throw std::logic_error("link inconsistency");
            seen[cur] = 1;
            load += inst_->demand(cur);
            ++size;
            ++routed;
            cur = next_[cur];
            if (++steps > n_) throw std::logic_error("route does not terminate");
        }
        if (load != route_load_[r]) throw std::logic_error("route load mismatch");
        if (size != route_size_[r]) throw std::logic_error("route size mismatch");
        load_sum += load;
    }
    for (int v = 1; v < n_; ++v) {
        if (route_[v] < 0 && (next_[v] != -1 || prev_[v] != -1))
            throw std::logic_error("unrouted node with incident links");
        if (route_[v] >= 0 && !seen[v]) throw std::logic_error("routed node unreachable");
    }
    if (routed != routed_customers_) throw std::logic_error("routed counter mismatch");
    if (cost_ != cost_recompute()) throw std::logic_error("cached cost mismatch");
    (void)load_sum;
}

namespace {

// Encodes the undirected edge set of a solution, sentinels mapped to depot 0.
std::vector<uint64_t> edge_multiset(const LinkedSolution& s) {
    std::vector<uint64_t> edges;
    const int n = s.num_nodes();
    for (int r = 0; r < s.num_routes(); ++r) {
        const int sen = s.sentinel(r);
        if (s.next(sen) == sen) continue;
        int cur = sen;
        do {
            int nxt = s.next(cur);
            uint64_t a = cur >= n ? 0 : cur;
            uint64_t b = nxt >= n ? 0 : nxt;
            if (a > b) std::swap(a, b);
            edges.push_back((a << 32) | b);
            cur = nxt;
        } while (cur != sen);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace

long long solution_distance(const LinkedSolution& a, const LinkedSolution& b) {
    if (&a.instance() != &b.instance() && a.num_nodes() != b.num_nodes())
        throw std::invalid_argument("solution_distance: mismatched instances");
    std::vector<uint64_t> ea = edge_multiset(a);
    std::vector<uint64_t> eb = edge_multiset(b);
    long long diff = 0;
    size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && ea[i] < eb[j])) {
            ++diff;
            ++i;
        } else if (i == ea.size() || eb[j] < ea[i]) {
            ++diff;
            ++j;
        } else {
            ++i;
            ++j;
        }
    }
    return diff;
}

}  // namespace ails
