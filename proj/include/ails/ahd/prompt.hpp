#ifndef AILS_AHD_PROMPT_HPP
#define AILS_AHD_PROMPT_HPP

#include <string>
#include <vector>

#include "ails/ahd/candidate.hpp"

namespace ails::ahd {

struct PromptBundle {
    std::string op;    // O1..O4
    std::string text;  // complete prompt, byte-stable for fixed inputs
};

// Number of parents an operator consumes (O1/O2 recombine, O3/O4 modify one).
int parents_for_operator(const std::string& op, int configured_pair_count = 2);

const std::vector<std::string>& known_operators();

// Five-part generation prompt: task description, serialized parents,
// operator instruction, output format, code template.
PromptBundle build_prompt(const std::vector<const HeuristicCandidate*>& parents,
                          const std::string& op);

// Chain-of-thought screening prompt ending in a single-token verdict line.
std::string build_judge_prompt(const HeuristicCandidate& cand, double worst_fitness);

// Parses the final "VERDICT: YES|NO" line. Returns nullopt when absent.
std::optional<bool> parse_verdict(const std::string& response);

}  // namespace ails::ahd

#endif
