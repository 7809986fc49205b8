#ifndef AILS_AHD_EVOLUTION_HPP
#define AILS_AHD_EVOLUTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "ails/ahd/candidate.hpp"
#include "ails/ahd/provider.hpp"
#include "ails/ahd/runtime.hpp"
#include "ails/engine.hpp"

namespace ails::ahd {

struct EvalTask {
    std::string instance_path;
    std::string instance_id;
    uint64_t seed = 1;
    double bks = 0;  // reference objective for the gap
};

struct EvalSettings {
    std::vector<EvalTask> tasks;
    AilsParams engine;  // per-run budget and solver parameters
    CandidateLimits limits;
    int workers = 1;
    bool early_stopping = true;
    double p_lo = 0.05;
    uint64_t eval_seed = 12345;  // drives the early-stop coin flips
    // Runs whose raw selections contain nothing valid more often than this
    // are protocol violations rather than noise.
    long long hard_violation_budget = 3;
};

// Early-stop probability; gap is fractional (0.5 means 50%).
double early_stop_probability(double gap, double p_lo);

// Runs the candidate over the evaluation tasks, filling fitness,
// per-instance rows and status. `worst_fitness` enables early stopping.
void evaluate_candidate(HeuristicCandidate& cand, const EvalSettings& settings,
                        std::optional<double> worst_fitness);

struct JudgeVerdict {
    std::vector<bool> votes;
    std::vector<std::string> raw;        // reasoning text per vote
    std::vector<bool> fail_open;         // vote defaulted after provider failure
    bool decision = true;
    int vote_count = 0;
};

JudgeVerdict judge_candidate(LlmProvider& provider, const HeuristicCandidate& cand,
                             const Population& pop, int vote_n,
                             const DecodingParams& decoding);

struct JudgeRecord {
    std::string candidate_id;
    bool decision = true;
    std::vector<bool> votes;
    double worst_at_judgment = 0;
    std::optional<bool> truth_good;      // outperforms the worst member
    std::optional<double> truth_fitness;
};

struct EvolutionEvent {
    long long index = 0;
    int generation = 0;
    std::string op;
    std::string type;  // seeded|generated|invalid|duplicate|judged-skip|evaluated|...
    std::string candidate_id;
    double value = 0;
    std::string detail;
};

struct BestSample {
    long long sample = 0;
    double best_fitness = 0;
};

struct EvolutionConfig {
    int n_pop = 25;
    int generations = 10;
    std::vector<std::string> operators = {"O1", "O2", "O3", "O4"};
    int recombine_parents = 2;  // O1/O2 parent count
    int vote_n = 3;             // 0 disables LLM screening
    int generation_retries = 2;
    uint64_t seed = 1;
    EvalSettings eval;
    DecodingParams generate_decoding{1.0};
    DecodingParams judge_decoding{0.7};
    std::string checkpoint_path;  // empty disables checkpointing
    std::string seed_source;      // defaults to the built-in walk/knn heuristic
    std::string seed_description;
};

struct EvolutionResult {
    Population population{25};
    std::vector<HeuristicCandidate> all_candidates;
    std::vector<EvolutionEvent> events;
    std::vector<BestSample> curve;
    std::vector<JudgeRecord> judge_records;
    bool exhausted = false;  // provider ran dry; checkpoint saved
};

EvolutionResult run_evolution(LlmProvider& provider, const EvolutionConfig& cfg,
                              bool resume = false);

// Offline ground-truth labeling for judged-skip candidates (metrics only).
void label_skipped_candidates(EvolutionResult& result, const EvalSettings& settings);

}  // namespace ails::ahd

#endif
