#ifndef AILS_AHD_METRICS_HPP
#define AILS_AHD_METRICS_HPP

#include <iosfwd>
#include <vector>

#include "ails/ahd/evolution.hpp"

namespace ails::ahd {

// Confusion tallies for the screening judge. The first letter is the ground
// truth (T = candidate outperforms the worst retained member), the second is
// the judge's decision.
struct JudgeConfusion {
    long long tt = 0, tf = 0, ft = 0, ff = 0;
    long long unlabeled = 0;

    long long labeled() const { return tt + tf + ft + ff; }
    double pct(long long v) const { return 100.0 * v / labeled(); }
    // Share of correct judgments (TT + FF).
    double accuracy_pct() const { return pct(tt + ff); }
    // Substitute critical-retention metric: share of genuinely good
    // candidates the judge retained (TT / (TT + TF)).
    double retention_pct() const { return tt + tf > 0 ? 100.0 * tt / (tt + tf) : 100.0; }
};

// Requires at least one ground-truth-labeled record.
JudgeConfusion judge_metrics(const std::vector<JudgeRecord>& records);

void print_judge_report(std::ostream& out, const JudgeConfusion& c);

}  // namespace ails::ahd

#endif
