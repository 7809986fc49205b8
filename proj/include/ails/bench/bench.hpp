#ifndef AILS_BENCH_BENCH_HPP
#define AILS_BENCH_BENCH_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ails/engine.hpp"

namespace ails::bench {

// ---- best-known solutions ----

class BksTable {
public:
    static BksTable load(const std::string& path);

    std::optional<double> lookup(const std::string& instance) const;
    void set(const std::string& instance, double value);
    size_t size() const { return values_.size(); }

private:
    std::map<std::string, double> values_;
};

double gap_pct(long long cost, double bks);

// ---- run records ----

struct RunRecord {
    std::string instance;
    std::string heuristic;
    uint64_t seed = 0;
    double budget_s = 0;
    long long iterations = 0;
    long long best_cost = 0;
    std::optional<double> bks;
    std::optional<double> gap;
    double wall_s = 0;

    bool operator==(const RunRecord&) const = default;
};

std::string records_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_csv(const std::string& csv);

std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows);

struct Aggregate {
    double mean_cost = 0, std_cost = 0;
    std::optional<double> mean_gap, std_gap;
    long long best_cost = 0;
    int runs = 0;
};
Aggregate aggregate(const std::vector<RunRecord>& records);

// ---- statistics ----

struct RankSumResult {
    double statistic = 0;  // rank sum of sample A
    double p_value = 1;
    char verdict = '=';  // '+': A significantly lower, '-': higher, '=': no difference
};

// Two-sided Wilcoxon rank-sum (Mann-Whitney) with midranks. Exact
// conditional distribution below 20 samples per side, normal approximation
// with tie correction otherwise.
RankSumResult wilcoxon_rank_sum(const std::vector<double>& a, const std::vector<double>& b,
                                double alpha = 0.05);

struct CompareLine {
    std::string instance;
    char verdict;
    double p_value;
    double mean_a, mean_b;
};
struct CompareReport {
    std::vector<CompareLine> lines;
    int plus = 0, minus = 0, equal = 0;
};

// Per-instance significance of A vs B ('+' = A better). Throws when an
// instance has fewer than two runs on either side.
CompareReport compare_records(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b,
                              double alpha = 0.05);

// ---- config ----

// Plain "key = value" file with '#' comments.
class Config {
public:
    static Config load(const std::string& path);
    static Config from_text(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;  // comma-separated

private:
    std::map<std::string, std::string> values_;
};

// ---- solve orchestration ----

struct SolveSpec {
    std::vector<std::string> instance_paths;
    std::string heuristic = "en";  // builtin name or "candidate:<file>"
    int runs = 1;
    uint64_t seed0 = 1;
    AilsParams params;          // d_min/d_max/gamma/eta/omega0/k/threshold
    double budget_s = 0;        // 0 = paper default of 3n seconds
    long long budget_iterations = -1;
    int workers = 1;
    std::string out_dir;        // empty disables CSV emission
    const BksTable* bks = nullptr;
};

// Runs instances x runs on a bounded worker pool; records are ordered by
// (instance, seed). Run i uses seed0 + i.
std::vector<RunRecord> run_solve(const SolveSpec& spec);

struct AblateRow {
    double lambda = 0;
    std::string instance;
    int run = 0;
    double gap = 0;
};
struct AblateResult {
    std::vector<AblateRow> rows;
    std::map<double, double> median_gap;
    std::vector<std::string> warnings;
};

AblateResult ablate_lambda(std::vector<double> lambdas, const std::vector<std::string>& instances,
                           int runs, const SolveSpec& base);

std::string ablate_to_csv(const AblateResult& r);

}  // namespace ails::bench

#endif
