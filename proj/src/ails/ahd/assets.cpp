#include "ails/ahd/assets.hpp"

namespace ails::ahd::assets {

const char* kCandidateHost = R"PY(
import json
import math
import sys

MASK = (1 << 64) - 1


class Rng:
    """SplitMix64; bit-for-bit compatible with the evaluator's stream."""

    def __init__(self, seed):
        self.state = seed & MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def next_float(self):
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def next_int(self, lo, hi):
        return lo + self.next_u64() % (hi - lo)


def main():
    with open(sys.argv[1]) as f:
        code = f.read()
    namespace = {"Rng": Rng}
    exec(compile(code, sys.argv[1], "exec"), namespace)
    select_nodes = namespace["select_nodes"]

    coords = demands = knn = None
    for line in sys.stdin:
        if not line.strip():
            continue
        req = json.loads(line)
        coords = req.get("coords", coords)
        demands = req.get("demands", demands)
        knn = req.get("knn", knn)

        def dist(i, j, _c=coords):
            dx = _c[i][0] - _c[j][0]
            dy = _c[i][1] - _c[j][1]
            return int(math.floor(math.sqrt(dx * dx + dy * dy) + 0.5))

        rng = Rng(req["seed"])
        ids = select_nodes(dist, knn, req["numberSelect"], req["next"], req["prev"],
                           req["inRoute"], demands, coords, req["average_nodes"], rng)
        sys.stdout.write(json.dumps({"selected": [int(x) for x in ids]}) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
)PY";

const char* kSeedCandidateDescription =
    "Randomly alternates between two removal styles: with even chance it walks "
    "strings of consecutive customers along routes starting from random seeds, "
    "otherwise it removes the nearest-neighbor list of one random customer.";

const char* kSeedCandidate = R"PY(
def select_nodes(dist, knn, number_select, next_node, prev_node, in_route, demands, coords, average_nodes, rng):
    n = len(demands)
    taken = [False] * n
    selected = []

    def selectable(v):
        return 0 < v < n and in_route[v] and not taken[v]

    def random_start():
        for _ in range(64 * n):
            v = rng.next_int(1, n)
            if selectable(v):
                return v
        for v in range(1, n):
            if selectable(v):
                return v
        return -1

    def step(v):
        nxt = next_node[v]
        if nxt != 0:
            return nxt
        head = v  # wrap to the start of the route
        while prev_node[head] != 0:
            head = prev_node[head]
        return head

    def walk(limit):
        start = random_start()
        if start < 0:
            return
        node = start
        steps = 0
        while True:
            steps += 1
            node = step(node)
            if not taken[node] and len(selected) < number_select:
                taken[node] = True
                selected.append(node)
            if node == start or steps >= limit or len(selected) >= number_select:
                return

    if rng.next_float() > 0.5:
        while len(selected) < number_select:
            walk(min(max(1, n - 1), number_select - len(selected)))
    else:
        v = rng.next_int(1, n)
        for w in knn[v]:
            if len(selected) >= number_select:
                break
            if selectable(w):
                taken[w] = True
                selected.append(w)
    return selected
)PY";

const char* kEnCandidateDescription =
    "Expanding concentric neighborhood selection: starting from a random "
    "routed customer, grows a radius in fixed steps and removes every routed "
    "customer inside the circle until the requested count is reached.";

const char* kEnCandidate = R"PY(
def select_nodes(dist, knn, number_select, next_node, prev_node, in_route, demands, coords, average_nodes, rng):
    n = len(demands)
    taken = [False] * n
    taken[0] = True
    start = rng.next_int(1, n)
    while not in_route[start]:
        start = rng.next_int(1, n)
    selected = []
    radius = 0.0
    step = 2.0
    while len(selected) < number_select:
        radius += step
        for v in range(1, n):
            if in_route[v] and not taken[v] and len(selected) < number_select:
                if dist(start, v) <= radius:
                    taken[v] = True
                    selected.append(v)
    return selected
)PY";

}  // namespace ails::ahd::assets
