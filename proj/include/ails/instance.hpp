#ifndef AILS_INSTANCE_HPP
#define AILS_INSTANCE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ails {

struct Coord {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Coord&) const = default;
};

// Rounded Euclidean distance (CVRPLib X/AGS convention): nearest integer,
// ties away from zero.
int euclidean_distance(const Coord& a, const Coord& b);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error(what + (line > 0 ? " (line " + std::to_string(line) + ")" : "")),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Immutable CVRP instance. Node 0 is always the depot, customers are
// 1..n-1, regardless of the numbering used in the source file.
class Instance {
public:
    Instance(std::string name, std::vector<Coord> coords, std::vector<int> demands,
             long long capacity);

    const std::string& name() const { return name_; }
    int num_nodes() const { return static_cast<int>(coords_.size()); }
    int num_customers() const { return num_nodes() - 1; }
    const Coord& coord(int i) const { return coords_[i]; }
    const std::vector<Coord>& coords() const { return coords_; }
    int demand(int i) const { return demands_[i]; }
    const std::vector<int>& demands() const { return demands_; }
    long long capacity() const { return capacity_; }
    long long total_demand() const { return total_demand_; }

    // Minimum number of routes needed to serve all demand.
    int min_routes() const;

    void serialize(std::ostream& out) const;

private:
    std::string name_;
    std::vector<Coord> coords_;
    std::vector<int> demands_;
    long long capacity_;
    long long total_demand_;
};

Instance parse_instance(const std::string& path);
Instance parse_instance_text(const std::string& text, const std::string& name_hint = "");

// Symmetric distance access. Stores the full matrix for instances up to
// `full_matrix_threshold` nodes and computes on demand above it (a full
// float matrix at Flanders scale would not fit in memory).
class DistanceOracle {
public:
    explicit DistanceOracle(const Instance& inst, int full_matrix_threshold = 5000);

    int operator()(int i, int j) const {
        if (full_) return matrix_[static_cast<size_t>(i) * n_ + j];
        return euclidean_distance(coords_[i], coords_[j]);
    }
    bool stores_full_matrix() const { return full_; }
    int num_nodes() const { return n_; }

private:
    int n_;
    bool full_;
    std::vector<Coord> coords_;
    std::vector<int32_t> matrix_;
};

// Per-node lists of the K nearest other nodes (depot included), ascending
// by distance, ties broken by node id.
class NeighborLists {
public:
    static NeighborLists build(const Instance& inst, const DistanceOracle& oracle, int k = 0);

    int k() const { return k_; }
    std::span<const int32_t> of(int i) const {
        return {ids_.data() + static_cast<size_t>(i) * k_, static_cast<size_t>(k_)};
    }
    std::span<const int32_t> dist_of(int i) const {
        return {dists_.data() + static_cast<size_t>(i) * k_, static_cast<size_t>(k_)};
    }

private:
    int k_ = 0;
    std::vector<int32_t> ids_;
    std::vector<int32_t> dists_;
};

struct ParsedSolution {
    std::vector<std::vector<int>> routes;  // customer ids per route
    std::optional<long long> declared_cost;
    std::vector<std::string> warnings;
};

// Reads the CVRPLib ".sol" convention: "Route #k: i1 i2 ..." plus "Cost <int>".
// Customer ids refer to this library's internal numbering (1..n-1).
ParsedSolution parse_solution(const std::string& path, const Instance& inst);
ParsedSolution parse_solution_text(const std::string& text, const Instance& inst);

}  // namespace ails

#endif
