#ifndef AILS_AHD_RUNTIME_HPP
#define AILS_AHD_RUNTIME_HPP

#include <memory>
#include <stdexcept>
#include <string>

#include "ails/ruin.hpp"

namespace ails::ahd {

// A candidate broke the run protocol (timeout, crash, malformed output).
// Propagates out of the engine loop into evaluate_candidate.
class CandidateRunError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CandidateLimits {
    // Per-call wall-clock cap: base_ms_per_1000_nodes * ceil(n / 1000).
    int base_ms_per_1000_nodes = 50;
    // Extra allowance for the first call (interpreter start + static data).
    int spawn_grace_ms = 2000;
    std::string interpreter = "python3";
};

// Runs a candidate program in a child process speaking the newline-delimited
// JSON protocol. The first request carries the static instance data
// (coords, demands, knn); subsequent requests carry only the solution state.
// Owned by a single engine run; not safe to share across threads.
class CandidateRuin : public RuinHeuristic {
public:
    CandidateRuin(std::string source, CandidateLimits limits = {});
    ~CandidateRuin() override;

    std::string id() const override { return "candidate"; }

    // Throws CandidateRunError on protocol violations.
    RuinResult ruin(const RuinContext& ctx) const override;

    long long calls() const { return calls_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    mutable long long calls_ = 0;
};

}  // namespace ails::ahd

#endif
