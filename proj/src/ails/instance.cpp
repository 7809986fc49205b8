#include "ails/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ails {

int euclidean_distance(const Coord& a, const Coord& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return static_cast<int>(std::llround(std::sqrt(dx * dx + dy * dy)));
}

Instance::Instance(std::string name, std::vector<Coord> coords, std::vector<int> demands,
                   long long capacity)
    : name_(std::move(name)),
      coords_(std::move(coords)),
      demands_(std::move(demands)),
      capacity_(capacity) {
    if (coords_.size() < 2) throw ParseError("instance needs a depot and at least one customer", 0);
    if (coords_.size() != demands_.size()) throw ParseError("coords/demands length mismatch", 0);
    if (capacity_ <= 0) throw ParseError("capacity must be positive", 0);
    if (demands_[0] != 0) throw ParseError("depot demand must be zero", 0);
    total_demand_ = 0;
    for (size_t i = 1; i < demands_.size(); ++i) {
        if (demands_[i] < 0) throw ParseError("negative demand at node " + std::to_string(i), 0);
        if (demands_[i] > capacity_)
            throw ParseError("demand of node " + std::to_string(i) + " exceeds capacity", 0);
        total_demand_ += demands_[i];
    }
}

int Instance::min_routes() const {
    long long r = (total_demand_ + capacity_ - 1) / capacity_;
    return static_cast<int>(std::max(1LL, r));
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Splits "KEY : value" / "KEY: value" / "KEY value" header lines.
bool split_header(const std::string& line, std::string& key, std::string& value) {
    size_t colon = line.find(':');
    if (colon != std::string::npos) {
        key = trim(line.substr(0, colon));
        value = trim(line.substr(colon + 1));
        return !key.empty();
    }
    std::istringstream ss(line);
    if (!(ss >> key)) return false;
    std::getline(ss, value);
    value = trim(value);
    return true;
}

std::string format_number(double v) {
    long long as_int = static_cast<long long>(v);
    if (static_cast<double>(as_int) == v) return std::to_string(as_int);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

Instance parse_instance_text(const std::string& text, const std::string& name_hint) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    std::string name = name_hint;
    std::string type;
    std::string edge_weight_type;
    int dimension = -1;
    long long capacity = -1;
    std::vector<Coord> coords;
    std::vector<int> demands;
    std::vector<bool> coord_seen, demand_seen;
    int depot_file_id = -1;

    enum class Section { Header, Coords, Demands, Depot, Done };
    Section section = Section::Header;

    auto require_dimension = [&](const char* where) {
        if (dimension <= 0) throw ParseError(std::string(where) + " before DIMENSION", lineno);
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "EOF") {
            section = Section::Done;
            break;
        }
        if (t == "NODE_COORD_SECTION") {
            require_dimension("NODE_COORD_SECTION");
            section = Section::Coords;
            continue;
        }
        if (t == "DEMAND_SECTION") {
            require_dimension("DEMAND_SECTION");
            section = Section::Demands;
            continue;
        }
        if (t == "DEPOT_SECTION") {
            section = Section::Depot;
            continue;
        }

        switch (section) {
            case Section::Header: {
                std::string key, value;
                if (!split_header(t, key, value)) throw ParseError("malformed header line", lineno);
                if (key == "NAME") name = value;
                else if (key == "TYPE") type = value;
                else if (key == "DIMENSION") {
                    dimension = std::stoi(value);
                    if (dimension < 2) throw ParseError("DIMENSION must be >= 2", lineno);
                    coords.assign(dimension, {});
                    demands.assign(dimension, 0);
                    coord_seen.assign(dimension, false);
                    demand_seen.assign(dimension, false);
                } else if (key == "CAPACITY") capacity = std::stoll(value);
                else if (key == "EDGE_WEIGHT_TYPE") edge_weight_type = value;
                // COMMENT and unknown keys are ignored.
                break;
            }
            case Section::Coords: {
                std::istringstream ss(t);
                int id;
                double x, y;
                if (!(ss >> id >> x >> y)) throw ParseError("malformed coordinate line", lineno);
                if (id < 1 || id > dimension) throw ParseError("coordinate id out of range", lineno);
                coords[id - 1] = {x, y};
                coord_seen[id - 1] = true;
                break;
            }
            case Section::Demands: {
                std::istringstream ss(t);
                int id;
                long long q;
                if (!(ss >> id >> q)) throw ParseError("malformed demand line", lineno);
                if (id < 1 || id > dimension) throw ParseError("demand id out of range", lineno);
                if (q < 0) throw ParseError("negative demand", lineno);
                demands[id - 1] = static_cast<int>(q);
                demand_seen[id - 1] = true;
                break;
            }
            case Section::Depot: {
                std::istringstream ss(t);
                int id;
                if (!(ss >> id)) throw ParseError("malformed depot line", lineno);
                if (id == -1) break;
                if (depot_file_id != -1) throw ParseError("multiple depots not supported", lineno);
                if (id < 1 || id > dimension) throw ParseError("depot id out of range", lineno);
                depot_file_id = id;
                break;
            }
            case Section::Done:
                break;
        }
    }

    if (type != "CVRP") throw ParseError("TYPE must be CVRP, got '" + type + "'", 0);
    if (!edge_weight_type.empty() && edge_weight_type != "EUC_2D")
        throw ParseError("only EDGE_WEIGHT_TYPE EUC_2D is supported, got '" + edge_weight_type + "'",
                         0);
    if (dimension <= 0) throw ParseError("missing DIMENSION", 0);
    if (capacity <= 0) throw ParseError("missing or non-positive CAPACITY", 0);
    if (depot_file_id == -1) throw ParseError("missing DEPOT_SECTION", 0);
    for (int i = 0; i < dimension; ++i) {
        if (!coord_seen[i])
            throw ParseError("missing coordinates for node " + std::to_string(i + 1), 0);
        if (!demand_seen[i]) throw ParseError("missing demand for node " + std::to_string(i + 1), 0);
    }
    if (demands[depot_file_id - 1] != 0) throw ParseError("depot demand must be zero", 0);

    // Remap so the depot is node 0; all other nodes keep their file order.
    std::vector<Coord> out_coords;
    std::vector<int> out_demands;
    out_coords.reserve(dimension);
    out_demands.reserve(dimension);
    out_coords.push_back(coords[depot_file_id - 1]);
    out_demands.push_back(0);
    for (int i = 0; i < dimension; ++i) {
        if (i == depot_file_id - 1) continue;
        out_coords.push_back(coords[i]);
        out_demands.push_back(demands[i]);
    }

    return Instance(name, std::move(out_coords), std::move(out_demands), capacity);
}

Instance parse_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_instance_text(ss.str(), path);
}

void Instance::serialize(std::ostream& out) const {
    out << "NAME : " << name_ << "\n";
    out << "TYPE : CVRP\n";
    out << "DIMENSION : " << num_nodes() << "\n";
    out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
    out << "CAPACITY : " << capacity_ << "\n";
    out << "NODE_COORD_SECTION\n";
    for (int i = 0; i < num_nodes(); ++i)
        out << (i + 1) << " " << format_number(coords_[i].x) << " " << format_number(coords_[i].y)
            << "\n";
    out << "DEMAND_SECTION\n";
    for (int i = 0; i < num_nodes(); ++i) out << (i + 1) << " " << demands_[i] << "\n";
    out << "DEPOT_SECTION\n1\n-1\nEOF\n";
}

DistanceOracle::DistanceOracle(const Instance& inst, int full_matrix_threshold)
    : n_(inst.num_nodes()), full_(inst.num_nodes() <= full_matrix_threshold),
      coords_(inst.coords()) {
    if (full_) {
        matrix_.resize(static_cast<size_t>(n_) * n_);
        for (int i = 0; i < n_; ++i) {
            matrix_[static_cast<size_t>(i) * n_ + i] = 0;
            for (int j = i + 1; j < n_; ++j) {
                int d = euclidean_distance(coords_[i], coords_[j]);
                matrix_[static_cast<size_t>(i) * n_ + j] = d;
                matrix_[static_cast<size_t>(j) * n_ + i] = d;
            }
        }
    }
}

NeighborLists NeighborLists::build(const Instance& inst, const DistanceOracle& oracle, int k) {
    const int n = inst.num_nodes();
    if (k <= 0) k = std::min(100, n - 1);
    k = std::min(k, n - 1);

    NeighborLists out;
    out.k_ = k;
    out.ids_.resize(static_cast<size_t>(n) * k);
    out.dists_.resize(static_cast<size_t>(n) * k);

    std::vector<std::pair<int32_t, int32_t>> scratch;  // (dist, id)
    scratch.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
        scratch.clear();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            scratch.emplace_back(oracle(i, j), j);
        }
        if (k < static_cast<int>(scratch.size()))
            std::nth_element(scratch.begin(), scratch.begin() + k, scratch.end());
        std::sort(scratch.begin(), scratch.begin() + k);
        for (int j = 0; j < k; ++j) {
            out.ids_[static_cast<size_t>(i) * k + j] = scratch[j].second;
            out.dists_[static_cast<size_t>(i) * k + j] = scratch[j].first;
        }
    }
    return out;
}

ParsedSolution parse_solution_text(const std::string& text, const Instance& inst) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    ParsedSolution out;
    std::vector<int> seen(inst.num_nodes(), 0);

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.rfind("Route", 0) == 0) {
            size_t colon = t.find(':');
            if (colon == std::string::npos) throw ParseError("route line missing ':'", lineno);
            std::istringstream ss(t.substr(colon + 1));
            std::vector<int> route;
            int id;
            while (ss >> id) {
                if (id <= 0 || id >= inst.num_nodes())
                    throw ParseError("unknown node id " + std::to_string(id), lineno);
                if (seen[id]++)
                    throw ParseError("customer " + std::to_string(id) + " visited twice", lineno);
                route.push_back(id);
            }
            if (route.empty()) throw ParseError("empty route", lineno);
            out.routes.push_back(std::move(route));
        } else if (t.rfind("Cost", 0) == 0) {
            std::istringstream ss(t.substr(4));
            double c;
            if (!(ss >> c)) throw ParseError("malformed cost line", lineno);
            out.declared_cost = static_cast<long long>(std::llround(c));
        }
        // Other lines (comments, vehicle counts) are ignored.
    }

    if (!out.declared_cost) throw ParseError("missing Cost line", 0);

    long long recomputed = 0;
    for (const auto& route : out.routes) {
        int prev = 0;
        for (int v : route) {
            recomputed += euclidean_distance(inst.coord(prev), inst.coord(v));
            prev = v;
        }
        recomputed += euclidean_distance(inst.coord(prev), inst.coord(0));
    }
    if (recomputed != *out.declared_cost)
        out.warnings.push_back("declared cost " + std::to_string(*out.declared_cost) +
                               " differs from recomputed cost " + std::to_string(recomputed));

    std::vector<int> missing;
    for (int i = 1; i < inst.num_nodes(); ++i)
        if (!seen[i]) missing.push_back(i);
    if (!missing.empty()) {
        std::string msg = "customers not visited:";
        for (size_t i = 0; i < std::min<size_t>(missing.size(), 10); ++i)
            msg += " " + std::to_string(missing[i]);
        if (missing.size() > 10) msg += " ...";
        out.warnings.push_back(msg);
    }
    return out;
}

ParsedSolution parse_solution(const std::string& path, const Instance& inst) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open solution file '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_solution_text(ss.str(), inst);
}

}  // namespace ails
