#include "ails/local_search.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <vector>

namespace ails {

namespace {

long long excess_of(long long load, long long cap) { return std::max(0LL, load - cap); }

// Accept rule shared by all operators: never increase excess, strictly
// improve the penalized objective.
bool accepted(long long delta_cost, long long delta_excess, long long penalty) {
    return delta_excess <= 0 && delta_cost + penalty * delta_excess < 0;
}

long long head_load(const LinkedSolution& s, int anchor, int route) {
    if (s.is_sentinel(anchor)) return 0;
    long long load = 0;
    int cur = s.next(s.sentinel(route));
    while (true) {
        load += s.instance().demand(cur);
        if (cur == anchor) break;
        cur = s.next(cur);
    }
    return load;
}

}  // namespace

LocalSearch::LocalSearch(const Instance& inst, const DistanceOracle& oracle,
                         const NeighborLists& knn, LocalSearchConfig cfg)
    : inst_(&inst), oracle_(&oracle), knn_(&knn), cfg_(cfg) {}

std::optional<Move> LocalSearch::inter_shift(const LinkedSolution& s, int v, int target_route,
                                             long long penalty) const {
    const int rv = s.route_of(v);
    if (rv == target_route) return std::nullopt;
    const long long cap = inst_->capacity();
    const int q = inst_->demand(v);

    const long long remove_gain = static_cast<long long>(s.dist(s.prev(v), v)) +
                                  s.dist(v, s.next(v)) - s.dist(s.prev(v), s.next(v));
    const long long de_src = excess_of(s.route_load(rv) - q, cap) - excess_of(s.route_load(rv), cap);
    const long long de_tgt =
        excess_of(s.route_load(target_route) + q, cap) - excess_of(s.route_load(target_route), cap);
    const long long delta_excess = de_src + de_tgt;

    std::optional<Move> best;
    int anchor = s.sentinel(target_route);
    while (true) {
        const int nxt = s.next(anchor);
        const long long insert_cost =
            static_cast<long long>(s.dist(anchor, v)) + s.dist(v, nxt) - s.dist(anchor, nxt);
        const long long delta_cost = insert_cost - remove_gain;
        if (accepted(delta_cost, delta_excess, penalty) &&
            (!best || delta_cost < best->delta_cost)) {
            best = Move{MoveKind::InterShift, v, -1, anchor, -1, delta_cost, delta_excess};
        }
        if (nxt == s.sentinel(target_route)) break;
        anchor = nxt;
    }
    return best;
}

std::optional<Move> LocalSearch::swap_star(const LinkedSolution& s, int v, int w,
                                           long long penalty) const {
    const int rv = s.route_of(v);
    const int rw = s.route_of(w);
    if (rv == rw || rv < 0 || rw < 0) return std::nullopt;
    const long long cap = inst_->capacity();
    const int qv = inst_->demand(v);
    const int qw = inst_->demand(w);

    const long long delta_excess =
        excess_of(s.route_load(rw) - qw + qv, cap) - excess_of(s.route_load(rw), cap) +
        excess_of(s.route_load(rv) - qv + qw, cap) - excess_of(s.route_load(rv), cap);

    const long long gain_v = static_cast<long long>(s.dist(s.prev(v), v)) +
                             s.dist(v, s.next(v)) - s.dist(s.prev(v), s.next(v));
    const long long gain_w = static_cast<long long>(s.dist(s.prev(w), w)) +
                             s.dist(w, s.next(w)) - s.dist(s.prev(w), s.next(w));

    // Insertion positions in the two routes are independent, so the best
    // pair is the best anchor on each side. Anchors skip the removed node;
    // anchor == prev(removed) means taking its old slot.
    auto best_insertion = [&](int node, int route, int removed, long long& cost) -> int {
        int best_anchor = -1;
        int anchor = s.sentinel(route);
        while (true) {
            if (anchor != removed) {
                int nxt = s.next(anchor);
                if (nxt == removed) nxt = s.next(removed);
                const long long c = static_cast<long long>(s.dist(anchor, node)) +
                                    s.dist(node, nxt) - s.dist(anchor, nxt);
                if (best_anchor == -1 || c < cost) {
                    cost = c;
                    best_anchor = anchor;
                }
            }
            int step = s.next(anchor);
            if (step == s.sentinel(route)) break;
            anchor = step;
        }
        return best_anchor;
    };

    long long cost_v = 0, cost_w = 0;
    const int anchor_v = best_insertion(v, rw, w, cost_v);
    const int anchor_w = best_insertion(w, rv, v, cost_w);
    if (anchor_v == -1 || anchor_w == -1) return std::nullopt;

    const long long delta_cost = cost_v + cost_w - gain_v - gain_w;
    if (!accepted(delta_cost, delta_excess, penalty)) return std::nullopt;
    return Move{MoveKind::SwapStar, v, w, anchor_v, anchor_w, delta_cost, delta_excess};
}

std::optional<Move> LocalSearch::two_opt_star(const LinkedSolution& s, int a, int b,
                                              long long penalty) const {
    const int ra = s.is_sentinel(a) ? s.route_of_sentinel(a) : s.route_of(a);
    const int rb = s.is_sentinel(b) ? s.route_of_sentinel(b) : s.route_of(b);
    if (ra == rb || ra < 0 || rb < 0) return std::nullopt;
    const long long cap = inst_->capacity();

    const int na = s.next(a);
    const int nb = s.next(b);
    const long long delta_cost = static_cast<long long>(s.dist(a, nb)) + s.dist(b, na) -
                                 s.dist(a, na) - s.dist(b, nb);

    const long long head_a = head_load(s, a, ra);
    const long long head_b = head_load(s, b, rb);
    const long long tail_a = s.route_load(ra) - head_a;
    const long long tail_b = s.route_load(rb) - head_b;
    const long long delta_excess =
        excess_of(head_a + tail_b, cap) + excess_of(head_b + tail_a, cap) -
        excess_of(s.route_load(ra), cap) - excess_of(s.route_load(rb), cap);

    if (!accepted(delta_cost, delta_excess, penalty)) return std::nullopt;
    return Move{MoveKind::TwoOptStar, a, b, -1, -1, delta_cost, delta_excess};
}

std::optional<Move> LocalSearch::intra_shift(const LinkedSolution& s, int v, int anchor,
                                             long long penalty) const {
    if (anchor == v || anchor == s.prev(v)) return std::nullopt;
    const int rv = s.route_of(v);
    const int ra = s.is_sentinel(anchor) ? s.route_of_sentinel(anchor) : s.route_of(anchor);
    if (rv != ra || rv < 0) return std::nullopt;

    const long long remove_gain = static_cast<long long>(s.dist(s.prev(v), v)) +
                                  s.dist(v, s.next(v)) - s.dist(s.prev(v), s.next(v));
    const int nxt = s.next(anchor);
    const long long insert_cost =
        static_cast<long long>(s.dist(anchor, v)) + s.dist(v, nxt) - s.dist(anchor, nxt);
    const long long delta_cost = insert_cost - remove_gain;
    if (!accepted(delta_cost, 0, penalty)) return std::nullopt;
    return Move{MoveKind::IntraShift, v, -1, anchor, -1, delta_cost, 0};
}

std::optional<Move> LocalSearch::intra_swap(const LinkedSolution& s, int i, int j,
                                            long long penalty) const {
    if (i == j) return std::nullopt;
    const int r = s.route_of(i);
    if (r < 0 || s.route_of(j) != r) return std::nullopt;

    long long delta_cost;
    if (s.next(i) == j) {
        delta_cost = static_cast<long long>(s.dist(s.prev(i), j)) + s.dist(i, s.next(j)) -
                     s.dist(s.prev(i), i) - s.dist(j, s.next(j));
    } else if (s.next(j) == i) {
        delta_cost = static_cast<long long>(s.dist(s.prev(j), i)) + s.dist(j, s.next(i)) -
                     s.dist(s.prev(j), j) - s.dist(i, s.next(i));
    } else {
        delta_cost = static_cast<long long>(s.dist(s.prev(i), j)) + s.dist(j, s.next(i)) +
                     s.dist(s.prev(j), i) + s.dist(i, s.next(j)) - s.dist(s.prev(i), i) -
                     s.dist(i, s.next(i)) - s.dist(s.prev(j), j) - s.dist(j, s.next(j));
    }
    if (!accepted(delta_cost, 0, penalty)) return std::nullopt;
    return Move{MoveKind::IntraSwap, i, j, -1, -1, delta_cost, 0};
}

std::optional<Move> LocalSearch::intra_two_opt(const LinkedSolution& s, int i, int j,
                                               long long penalty) const {
    if (i == j) return std::nullopt;
    const int r = s.route_of(i);
    if (r < 0 || s.route_of(j) != r) return std::nullopt;

    // Orient the pair so i precedes j; the reversal delta only involves the
    // two boundary edges because distances are symmetric.
    int first = -1;
    int cur = s.next(s.sentinel(r));
    while (cur != s.sentinel(r)) {
        if (cur == i || cur == j) {
            first = cur;
            break;
        }
        cur = s.next(cur);
    }
    const int lo = first;
    const int hi = (first == i) ? j : i;

    const long long delta_cost = static_cast<long long>(s.dist(s.prev(lo), hi)) +
                                 s.dist(lo, s.next(hi)) - s.dist(s.prev(lo), lo) -
                                 s.dist(hi, s.next(hi));
    if (!accepted(delta_cost, 0, penalty)) return std::nullopt;
    return Move{MoveKind::IntraTwoOpt, lo, hi, -1, -1, delta_cost, 0};
}

void LocalSearch::apply(LinkedSolution& s, const Move& m) const {
    const long long cost_before = s.cost();
    switch (m.kind) {
        case MoveKind::InterShift: {
            s.remove_node(m.v);
            s.insert_node(m.v, m.anchor_v);
            break;
        }
        case MoveKind::SwapStar: {
            s.remove_node(m.v);
            s.remove_node(m.w);
            s.insert_node(m.v, m.anchor_v);
            s.insert_node(m.w, m.anchor_w);
            break;
        }
        case MoveKind::TwoOptStar: {
            const int sa = s.is_sentinel(m.v) ? m.v : s.sentinel(s.route_of(m.v));
            const int sb = s.is_sentinel(m.w) ? m.w : s.sentinel(s.route_of(m.w));
            std::vector<int> tail_a, tail_b;
            for (int cur = s.next(m.v); cur != sa; cur = s.next(cur)) tail_a.push_back(cur);
            for (int cur = s.next(m.w); cur != sb; cur = s.next(cur)) tail_b.push_back(cur);
            for (int v : tail_a) s.remove_node(v);
            for (int v : tail_b) s.remove_node(v);
            int anchor = m.v;
            for (int v : tail_b) {
                s.insert_node(v, anchor);
                anchor = v;
            }
            anchor = m.w;
            for (int v : tail_a) {
                s.insert_node(v, anchor);
                anchor = v;
            }
            break;
        }
        case MoveKind::IntraShift: {
            s.remove_node(m.v);
            s.insert_node(m.v, m.anchor_v);
            break;
        }
        case MoveKind::IntraSwap: {
            int i = m.v, j = m.w;
            if (s.next(j) == i) std::swap(i, j);
            if (s.next(i) == j) {
                const int p = s.prev(i);
                s.remove_node(j);
                s.insert_node(j, p);
            } else {
                const int pi = s.prev(i);
                const int pj = s.prev(j);
                s.remove_node(i);
                s.remove_node(j);
                s.insert_node(j, pi);
                s.insert_node(i, pj);
            }
            break;
        }
        case MoveKind::IntraTwoOpt: {
            std::vector<int> segment;
            for (int cur = m.v;; cur = s.next(cur)) {
                segment.push_back(cur);
                if (cur == m.w) break;
            }
            const int p = s.prev(m.v);
            for (int v : segment) s.remove_node(v);
            int anchor = p;
            for (auto it = segment.rbegin(); it != segment.rend(); ++it) {
                s.insert_node(*it, anchor);
                anchor = *it;
            }
            break;
        }
    }
    assert(s.cost() - cost_before == m.delta_cost);
    (void)cost_before;
}

std::optional<Move> LocalSearch::best_move_for(const LinkedSolution& s, MoveKind kind, int v,
                                               long long penalty) const {
    std::optional<Move> best;
    auto consider = [&](const std::optional<Move>& m) {
        if (m && (!best || m->delta_cost + penalty * m->delta_excess <
                               best->delta_cost + penalty * best->delta_excess))
            best = m;
    };

    const int rv = s.route_of(v);
    switch (kind) {
        case MoveKind::InterShift: {
            // Distinct routes of the KNN neighbors, plus the first empty
            // route so overloaded routes can always spill.
            std::vector<int> targets;
            for (int w : knn_->of(v)) {
                const int rw = s.route_of(w);
                if (rw < 0 || rw == rv) continue;
                if (std::find(targets.begin(), targets.end(), rw) == targets.end())
                    targets.push_back(rw);
            }
            for (int r = 0; r < s.num_routes(); ++r)
                if (s.route_size(r) == 0) {
                    targets.push_back(r);
                    break;
                }
            for (int r : targets) consider(inter_shift(s, v, r, penalty));
            break;
        }
        case MoveKind::SwapStar: {
            for (int w : knn_->of(v)) {
                if (w == 0 || s.route_of(w) < 0 || s.route_of(w) == rv) continue;
                consider(swap_star(s, v, w, penalty));
            }
            break;
        }
        case MoveKind::TwoOptStar: {
            for (int w : knn_->of(v)) {
                if (w == 0 || s.route_of(w) < 0 || s.route_of(w) == rv) continue;
                consider(two_opt_star(s, v, w, penalty));
                consider(two_opt_star(s, v, s.prev(w), penalty));
            }
            break;
        }
        case MoveKind::IntraShift: {
            consider(intra_shift(s, v, s.sentinel(rv), penalty));
            for (int w : knn_->of(v)) {
                if (w == 0 || s.route_of(w) != rv || w == v) continue;
                consider(intra_shift(s, v, w, penalty));
                consider(intra_shift(s, v, s.prev(w), penalty));
            }
            break;
        }
        case MoveKind::IntraSwap: {
            for (int w : knn_->of(v)) {
                if (w == 0 || s.route_of(w) != rv || w == v) continue;
                consider(intra_swap(s, v, w, penalty));
            }
            break;
        }
        case MoveKind::IntraTwoOpt: {
            for (int w : knn_->of(v)) {
                if (w == 0 || s.route_of(w) != rv || w == v) continue;
                consider(intra_two_opt(s, v, w, penalty));
            }
            break;
        }
    }
    return best;
}

bool LocalSearch::operator_pass(LinkedSolution& s, MoveKind kind, long long penalty) const {
    bool improved = false;
    for (int r = 0; r < s.num_routes(); ++r) {
        std::vector<int> members;
        members.reserve(s.route_size(r));
        for (int cur = s.next(s.sentinel(r)); cur != s.sentinel(r); cur = s.next(cur))
            members.push_back(cur);
        for (int v : members) {
            if (s.route_of(v) != r) continue;  // moved away earlier in this pass
            if (auto m = best_move_for(s, kind, v, penalty)) {
                apply(s, *m);
                improved = true;
            }
        }
    }
    return improved;
}

bool LocalSearch::one_cycle(LinkedSolution& s, long long penalty) const {
    static constexpr MoveKind kOrder[] = {MoveKind::InterShift,  MoveKind::SwapStar,
                                          MoveKind::TwoOptStar,  MoveKind::IntraShift,
                                          MoveKind::IntraSwap,   MoveKind::IntraTwoOpt};
    bool improved = false;
    for (MoveKind kind : kOrder) improved |= operator_pass(s, kind, penalty);
    return improved;
}

void LocalSearch::repair(LinkedSolution& s) const {
    auto ensure_empty_route = [&] {
        for (int r = 0; r < s.num_routes(); ++r)
            if (s.route_size(r) == 0) return;
        s.add_route();
    };

    long long excess = s.violation().total_excess;
    if (excess == 0) return;

    const long long edges = s.routed_customers() + s.nonempty_routes();
    long long penalty = edges > 0 ? std::max(1LL, (s.cost() / edges)) * 10 : 10;

    while (excess > 0) {
        ensure_empty_route();
        one_cycle(s, penalty);
        const long long now = s.violation().total_excess;
        if (now >= excess) penalty = std::min(penalty * 2, 1LL << 40);
        excess = now;
    }
}

void LocalSearch::descend(LinkedSolution& s) const {
    while (one_cycle(s, 0)) {
    }
    s.prune_empty_routes();
}

}  // namespace ails
