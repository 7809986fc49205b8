#include <fstream>
#include <sstream>

#include "ails/bench/bench.hpp"
#include "ails/instance.hpp"

namespace ails::bench {

BksTable BksTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open BKS table '" + path + "'", 0);
    BksTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string name;
        if (!(ss >> name)) continue;
        double value;
        if (!(ss >> value) || value <= 0)
            throw ParseError("malformed BKS row for '" + name + "'", lineno);
        table.values_[name] = value;
    }
    return table;
}

std::optional<double> BksTable::lookup(const std::string& instance) const {
    auto it = values_.find(instance);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void BksTable::set(const std::string& instance, double value) { values_[instance] = value; }

double gap_pct(long long cost, double bks) {
    return 100.0 * (static_cast<double>(cost) - bks) / bks;
}

}  // namespace ails::bench
