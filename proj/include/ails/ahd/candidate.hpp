#ifndef AILS_AHD_CANDIDATE_HPP
#define AILS_AHD_CANDIDATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ails/rng.hpp"

namespace ails::ahd {

enum class CandidateStatus { Pending, Invalid, JudgedSkip, EarlyStopped, Evaluated };

std::string to_string(CandidateStatus s);
CandidateStatus status_from_string(const std::string& s);

struct PerInstanceResult {
    std::string instance;
    uint64_t seed = 0;
    long long best_cost = 0;
    double gap_pct = 0.0;
};

struct HeuristicCandidate {
    std::string id;  // hash of the source text
    std::string description;
    std::string source;
    CandidateStatus status = CandidateStatus::Pending;
    std::optional<double> fitness;  // mean gap % over completed runs
    std::vector<PerInstanceResult> per_instance;
    bool truncated = false;  // early stopping cut evaluation short
    int generation = 0;
    std::string op;  // O1..O4, or "seed"
    std::vector<std::string> parent_ids;
    std::string note;  // invalid reason, judge summary, ...
};

std::string source_hash(const std::string& source);

// Minimal static protocol conformance: the entry point must be present.
bool passes_static_check(const std::string& source);

// Splits an LLM response into the braces description and the fenced code
// block. Returns nullopt (with reason) when either part is missing.
std::optional<HeuristicCandidate> parse_candidate_response(const std::string& response,
                                                           std::string* reason = nullptr);

enum class InsertOutcome { Inserted, RejectedWorse, RejectedDuplicate, RejectedUnevaluated };

// Bounded elitist set ordered by ascending fitness (lower gap is better).
class Population {
public:
    explicit Population(int capacity) : capacity_(capacity) {}

    InsertOutcome insert(HeuristicCandidate cand, std::string* evicted_id = nullptr);

    int size() const { return static_cast<int>(members_.size()); }
    int capacity() const { return capacity_; }
    bool full() const { return size() >= capacity_; }
    bool empty() const { return members_.empty(); }
    const std::vector<HeuristicCandidate>& members() const { return members_; }
    const HeuristicCandidate& best() const { return members_.front(); }
    const HeuristicCandidate& worst() const { return members_.back(); }

private:
    int capacity_;
    std::vector<HeuristicCandidate> members_;
};

// Fitness-proportional parent sampling without replacement. Eq-style
// weights use score = 1 / (gap + epsilon) so better candidates are likelier.
std::vector<const HeuristicCandidate*> select_parents(const Population& pop, int count, Rng& rng);

double selection_score(double gap_pct);

}  // namespace ails::ahd

#endif
