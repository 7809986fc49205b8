#include "ails/ahd/candidate.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace ails::ahd {

std::string to_string(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::Pending: return "pending";
        case CandidateStatus::Invalid: return "invalid";
        case CandidateStatus::JudgedSkip: return "judged-skip";
        case CandidateStatus::EarlyStopped: return "early-stopped";
        case CandidateStatus::Evaluated: return "evaluated";
    }
    return "pending";
}

CandidateStatus status_from_string(const std::string& s) {
    if (s == "invalid") return CandidateStatus::Invalid;
    if (s == "judged-skip") return CandidateStatus::JudgedSkip;
    if (s == "early-stopped") return CandidateStatus::EarlyStopped;
    if (s == "evaluated") return CandidateStatus::Evaluated;
    return CandidateStatus::Pending;
}

std::string source_hash(const std::string& source) {
    uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (unsigned char c : source) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool passes_static_check(const std::string& source) {
    return source.find("def select_nodes(") != std::string::npos;
}

std::optional<HeuristicCandidate> parse_candidate_response(const std::string& response,
                                                           std::string* reason) {
    auto fail = [&](const std::string& why) -> std::optional<HeuristicCandidate> {
        if (reason) *reason = why;
        return std::nullopt;
    };

    const size_t fence_open = response.find("```");
    if (fence_open == std::string::npos) return fail("missing code fence");
    size_t code_begin = response.find('\n', fence_open);
    if (code_begin == std::string::npos) return fail("unterminated code fence");
    ++code_begin;
    const size_t fence_close = response.find("```", code_begin);
    if (fence_close == std::string::npos) return fail("unterminated code fence");
    std::string code = response.substr(code_begin, fence_close - code_begin);

    // Description: braces block outside the code fence.
    std::string outside = response.substr(0, fence_open) + response.substr(fence_close + 3);
    const size_t open = outside.find('{');
    const size_t close = outside.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close <= open)
        return fail("missing braces description");
    std::string desc = outside.substr(open + 1, close - open - 1);
    while (!desc.empty() && (desc.front() == '\n' || desc.front() == ' ')) desc.erase(0, 1);
    while (!desc.empty() && (desc.back() == '\n' || desc.back() == ' ')) desc.pop_back();
    if (desc.empty()) return fail("empty description");

    if (!passes_static_check(code)) return fail("code lacks the select_nodes entry point");

    HeuristicCandidate cand;
    cand.description = desc;
    cand.source = code;
    cand.id = source_hash(code);
    return cand;
}

InsertOutcome Population::insert(HeuristicCandidate cand, std::string* evicted_id) {
    if (cand.status != CandidateStatus::Evaluated || !cand.fitness)
        return InsertOutcome::RejectedUnevaluated;
    for (const auto& m : members_)
        if (m.id == cand.id) return InsertOutcome::RejectedDuplicate;
    if (full() && *cand.fitness >= *members_.back().fitness) return InsertOutcome::RejectedWorse;

    members_.push_back(std::move(cand));
    std::stable_sort(members_.begin(), members_.end(),
                     [](const HeuristicCandidate& a, const HeuristicCandidate& b) {
                         return *a.fitness < *b.fitness;
                     });
    if (size() > capacity_) {
        if (evicted_id) *evicted_id = members_.back().id;
        members_.pop_back();
    }
    return InsertOutcome::Inserted;
}

double selection_score(double gap_pct) { return 1.0 / (gap_pct + 1e-3); }

std::vector<const HeuristicCandidate*> select_parents(const Population& pop, int count, Rng& rng) {
    if (pop.empty()) throw std::invalid_argument("select_parents: empty population");
    if (count > pop.size())
        throw std::invalid_argument("select_parents: count exceeds population size");

    std::vector<const HeuristicCandidate*> remaining;
    for (const auto& m : pop.members()) remaining.push_back(&m);

    std::vector<const HeuristicCandidate*> out;
    for (int k = 0; k < count; ++k) {
        double total = 0;
        for (const auto* c : remaining) total += selection_score(*c->fitness);
        double pick = rng.next_double() * total;
        size_t chosen = remaining.size() - 1;
        for (size_t i = 0; i < remaining.size(); ++i) {
            pick -= selection_score(*remaining[i]->fitness);
            if (pick < 0) {
                chosen = i;
                break;
            }
        }
        out.push_back(remaining[chosen]);
        remaining.erase(remaining.begin() + chosen);
    }
    return out;
}

}  // namespace ails::ahd
