#ifndef AILS_RUIN_HPP
#define AILS_RUIN_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ails/instance.hpp"
#include "ails/rng.hpp"
#include "ails/solution.hpp"

namespace ails {

// Everything a ruin heuristic may look at. Heuristics are pure: they never
// mutate the solution, they only name the customers to remove.
struct RuinContext {
    const Instance* inst = nullptr;
    const DistanceOracle* oracle = nullptr;
    const NeighborLists* knn = nullptr;
    const LinkedSolution* sol = nullptr;
    int number_select = 1;
    double average_nodes = 0.0;  // customers per non-empty route
    uint64_t seed = 0;
};

struct RuinResult {
    std::vector<int> selected;
};

class RuinHeuristic {
public:
    virtual ~RuinHeuristic() = default;
    virtual std::string id() const = 0;
    // Deterministic given (context, seed).
    virtual RuinResult ruin(const RuinContext& ctx) const = 0;
};

struct SanitizeStats {
    long long calls = 0;
    long long dropped_invalid = 0;    // depot, unrouted or out-of-range ids
    long long dropped_duplicates = 0;
    long long topped_up = 0;
    long long hard_violations = 0;    // calls that produced no valid id at all
};

// Contract enforcement: dedupe, drop depot/unrouted ids, top up with random
// routed customers until number_select valid ids remain. Raw heuristic
// output never reaches the engine unchecked.
RuinResult sanitize_ruin(const RuinContext& ctx, RuinResult raw, SanitizeStats* stats = nullptr);

// Built-in heuristics.
std::unique_ptr<RuinHeuristic> make_seed_ruin();
std::unique_ptr<RuinHeuristic> make_en_ruin(double expansion_step = 2.0);
std::unique_ptr<RuinHeuristic> make_ddd_ruin();
std::unique_ptr<RuinHeuristic> make_pfd_ruin();
std::unique_ptr<RuinHeuristic> make_knearest_ruin();
std::unique_ptr<RuinHeuristic> make_sequence_ruin();

// Returns nullptr for unknown names. Accepts "en:<lambda>" for a custom
// expansion step.
std::unique_ptr<RuinHeuristic> make_builtin_ruin(const std::string& name);

// PFD acceptance probability for the i-th nearest-neighbor entry.
double pfd_accept_probability(double frequency, int i);

enum class RecreateMode { Nearest, Best };

// Reinserts `removed` (shuffled uniformly) into s. Best: cheapest
// capacity-feasible position anywhere; Nearest: cheaper side of the nearest
// routed KNN neighbor whose route has room. Falls back to the position of
// minimum excess increase when nothing fits.
void recreate(LinkedSolution& s, std::vector<int> removed, RecreateMode mode, Rng& rng,
              const NeighborLists& knn);

struct InsertionChoice {
    int anchor = -1;
    long long delta_cost = 0;
    long long delta_excess = 0;
};

// Exhaustive scan over all routes and positions. Prefers zero-excess
// positions with minimum cost; otherwise minimum (excess, cost). Route and
// position order break remaining ties.
InsertionChoice best_insertion(const LinkedSolution& s, int v);

}  // namespace ails

#endif
