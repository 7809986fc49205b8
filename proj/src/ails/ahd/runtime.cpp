#include "ails/ahd/runtime.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "ails/ahd/assets.hpp"
#include "ails/ahd/subprocess.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace ails::ahd {

struct CandidateRuin::Impl {
    std::string source;
    CandidateLimits limits;
    fs::path workdir;
    std::unique_ptr<LineProcess> proc;
    bool static_sent = false;

    ~Impl() {
        proc.reset();
        std::error_code ec;
        fs::remove_all(workdir, ec);
    }

    void spawn() {
        if (!proc) {
            proc = std::make_unique<LineProcess>(std::vector<std::string>{
                limits.interpreter, (workdir / "host.py").string(),
                (workdir / "candidate.py").string()});
            static_sent = false;
        }
    }
};

CandidateRuin::CandidateRuin(std::string source, CandidateLimits limits)
    : impl_(std::make_unique<Impl>()) {
    impl_->source = std::move(source);
    impl_->limits = limits;

    char tmpl[] = "/tmp/ails-candidate-XXXXXX";
    const char* dir = mkdtemp(tmpl);
    if (!dir) throw CandidateRunError("cannot create candidate working directory");
    impl_->workdir = dir;
    std::ofstream(impl_->workdir / "host.py") << assets::kCandidateHost;
    std::ofstream(impl_->workdir / "candidate.py") << impl_->source;
}

CandidateRuin::~CandidateRuin() = default;

RuinResult CandidateRuin::ruin(const RuinContext& ctx) const {
    const LinkedSolution& s = *ctx.sol;
    const int n = ctx.inst->num_nodes();

    impl_->spawn();

    nlohmann::json req;
    req["n"] = n;
    req["numberSelect"] = std::min(ctx.number_select, s.routed_customers());
    req["average_nodes"] = ctx.average_nodes;
    req["seed"] = ctx.seed;

    std::vector<int> next(n, 0), prev(n, 0), in_route(n, 0);
    for (int v = 1; v < n; ++v) {
        if (!s.in_route(v)) continue;
        in_route[v] = 1;
        next[v] = s.is_sentinel(s.next(v)) ? 0 : s.next(v);
        prev[v] = s.is_sentinel(s.prev(v)) ? 0 : s.prev(v);
    }
    req["next"] = next;
    req["prev"] = prev;
    req["inRoute"] = in_route;

    double timeout_s =
        impl_->limits.base_ms_per_1000_nodes * ((n + 999) / 1000) / 1000.0;
    if (!impl_->static_sent) {
        std::vector<std::vector<double>> coords;
        coords.reserve(n);
        for (int v = 0; v < n; ++v)
            coords.push_back({ctx.inst->coord(v).x, ctx.inst->coord(v).y});
        req["coords"] = coords;
        req["demands"] = ctx.inst->demands();
        std::vector<std::vector<int>> knn(n);
        for (int v = 0; v < n; ++v) {
            auto list = ctx.knn->of(v);
            knn[v].assign(list.begin(), list.end());
        }
        req["knn"] = knn;
        timeout_s += impl_->limits.spawn_grace_ms / 1000.0;
    }

    ++calls_;
    if (!impl_->proc->write_line(req.dump(), timeout_s))
        throw CandidateRunError("candidate did not accept the request (stalled or exited)");
    std::string line;
    if (!impl_->proc->read_line(line, timeout_s))
        throw CandidateRunError("candidate timed out or exited without a response");
    impl_->static_sent = true;

    RuinResult out;
    try {
        auto parsed = nlohmann::json::parse(line);
        for (const auto& v : parsed.at("selected")) out.selected.push_back(v.get<int>());
    } catch (const std::exception& e) {
        impl_->proc->terminate();
        throw CandidateRunError(std::string("malformed candidate response: ") + e.what());
    }
    return out;
}

}  // namespace ails::ahd
