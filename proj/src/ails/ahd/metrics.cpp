#include "ails/ahd/metrics.hpp"

#include <ostream>
#include <stdexcept>

namespace ails::ahd {

JudgeConfusion judge_metrics(const std::vector<JudgeRecord>& records) {
    JudgeConfusion c;
    for (const auto& r : records) {
        if (!r.truth_good) {
            ++c.unlabeled;
            continue;
        }
        if (*r.truth_good)
            r.decision ? ++c.tt : ++c.tf;
        else
            r.decision ? ++c.ft : ++c.ff;
    }
    if (c.labeled() == 0) throw std::invalid_argument("judge_metrics: no labeled records");
    return c;
}

void print_judge_report(std::ostream& out, const JudgeConfusion& c) {
    out << "judge confusion (% of " << c.labeled() << " labeled judgments)\n";
    out << "  TT " << c.pct(c.tt) << "  TF " << c.pct(c.tf) << "  FT " << c.pct(c.ft) << "  FF "
        << c.pct(c.ff) << "\n";
    out << "  accuracy (TT+FF) " << c.accuracy_pct() << "\n";
    out << "  retention of good candidates (TT/(TT+TF)) " << c.retention_pct() << "\n";
    if (c.unlabeled > 0) out << "  unlabeled judgments excluded: " << c.unlabeled << "\n";
}

}  // namespace ails::ahd
