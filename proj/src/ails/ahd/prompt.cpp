#include "ails/ahd/prompt.hpp"

#include <sstream>
#include <stdexcept>

namespace ails::ahd {

namespace {

const char* kTaskDescription =
    "Task: Design and code a heuristic to select nodes to be removed in a CVRP graph to "
    "enhance solution quality. The goal is to determine the shortest and most efficient "
    "routes from depot node 0, visiting multiple destinations.";

const char* kCodeTemplate =
    R"(```python
def select_nodes(dist, knn, number_select, next_node, prev_node, in_route, demands, coords, average_nodes, rng):
    # dist(i, j): integer Euclidean distance between nodes i and j.
    # knn: knn[i] lists the ids of node i's nearest other nodes, closest first.
    # number_select: how many distinct node ids to return.
    # next_node[v] / prev_node[v]: id of the node after/before v on its route; 0 marks a route end.
    # in_route[v]: 1 while v is routed, 0 once selected for removal.
    # demands[v]: demand of node v. coords[v]: [x, y] of node v.
    # average_nodes: average number of customers per route.
    # rng: rng.next_float() in [0,1), rng.next_int(lo, hi) in [lo, hi). Use it for all randomness.
    # Node 0 is the depot and must not be selected.
    selected = []
    # @ Code your heuristic here
    return selected
```)";

std::string operator_text(const std::string& op) {
    if (op == "O1")
        return "Please help me create a new heuristic that has a totally different form from "
               "the given ones.";
    if (op == "O2")
        return "Please help me create a new heuristic that has a totally different form from "
               "the given ones but can be motivated from them.";
    if (op == "O3")
        return "Please assist me in creating a new heuristic that has a different form but can "
               "be a modified version of the heuristic provided.";
    if (op == "O4")
        return "Please identify the main heuristic parameters and assist me in creating a new "
               "heuristic that has a different parameter settings of the score function "
               "provided.";
    throw std::invalid_argument("unknown operator " + op);
}

}  // namespace

const std::vector<std::string>& known_operators() {
    static const std::vector<std::string> ops{"O1", "O2", "O3", "O4"};
    return ops;
}

int parents_for_operator(const std::string& op, int configured_pair_count) {
    if (op == "O3" || op == "O4") return 1;
    if (op == "O1" || op == "O2") return configured_pair_count;
    throw std::invalid_argument("unknown operator " + op);
}

PromptBundle build_prompt(const std::vector<const HeuristicCandidate*>& parents,
                          const std::string& op) {
    if (parents.empty()) throw std::invalid_argument("build_prompt: at least one parent required");
    std::ostringstream out;
    out << kTaskDescription << "\n\n";
    out << "I have " << parents.size() << " heuristic(s) with code as follows.\n";
    for (size_t i = 0; i < parents.size(); ++i) {
        out << "No. " << (i + 1) << " heuristic and the corresponding code are:\n";
        out << "{" << parents[i]->description << "}\n";
        out << "```python\n" << parents[i]->source;
        if (!parents[i]->source.empty() && parents[i]->source.back() != '\n') out << "\n";
        out << "```\n";
    }
    out << "\n" << operator_text(op) << "\n\n";
    out << "Firstly, provide a one-paragraph description of your heuristic in braces \"{}\" "
           "outside the code block.\n";
    out << "Next, implement it as Python 3 using only the standard library, in a single code "
           "block following exactly this template:\n\n";
    out << kCodeTemplate << "\n\n";
    out << "Do not give additional explanation.\n";
    return {op, out.str()};
}

std::string build_judge_prompt(const HeuristicCandidate& cand, double worst_fitness) {
    std::ostringstream out;
    out << "You are screening candidate ruin heuristics for a CVRP solver that repeatedly "
           "removes a set of customers and reinserts them.\n\n";
    out << "The worst heuristic currently retained in the population has an average gap of "
        << worst_fitness << "% to the best known solutions (lower is better).\n\n";
    out << "Candidate description:\n{" << cand.description << "}\n\n";
    out << "Candidate code:\n```python\n" << cand.source;
    if (!cand.source.empty() && cand.source.back() != '\n') out << "\n";
    out << "```\n\n";
    out << "Think step by step: analyze what the selection strategy rewards, whether it can "
           "diversify across routes, how it behaves on clustered and uniform instances, its "
           "cost per call, and failure modes such as selecting the depot or repeating nodes. "
           "Then answer on the final line with exactly one of:\n";
    out << "VERDICT: YES\n";
    out << "VERDICT: NO\n";
    out << "where YES means the candidate will likely outperform the worst retained "
           "heuristic.\n";
    return out.str();
}

std::optional<bool> parse_verdict(const std::string& response) {
    const std::string yes = "VERDICT: YES";
    const std::string no = "VERDICT: NO";
    const size_t py = response.rfind(yes);
    const size_t pn = response.rfind(no);
    if (py == std::string::npos && pn == std::string::npos) return std::nullopt;
    if (py == std::string::npos) return false;
    if (pn == std::string::npos) return true;
    return py > pn;
}

}  // namespace ails::ahd
