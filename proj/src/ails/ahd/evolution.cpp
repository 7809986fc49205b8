#include "ails/ahd/evolution.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <thread>

#include "ails/ahd/assets.hpp"
#include "ails/ahd/prompt.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ails::ahd {

namespace {

uint64_t fnv64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

struct RunOutcome {
    PerInstanceResult row;
    bool invalid = false;
    std::string reason;
};

RunOutcome run_one(const std::string& source, const EvalTask& task, const EvalSettings& settings) {
    RunOutcome out;
    out.row.instance = task.instance_id;
    out.row.seed = task.seed;
    try {
        Instance inst = parse_instance(task.instance_path);
        AilsParams params = settings.engine;
        params.seed = task.seed;
        AilsEngine engine(inst, params);
        CandidateRuin heuristic(source, settings.limits);
        RunResult run = engine.run(heuristic);
        if (run.sanitize.hard_violations > settings.hard_violation_budget) {
            out.invalid = true;
            out.reason = "exceeded sanitation budget (" +
                         std::to_string(run.sanitize.hard_violations) + " empty selections)";
            return out;
        }
        out.row.best_cost = run.best_cost;
        out.row.gap_pct = task.bks > 0
                              ? 100.0 * (static_cast<double>(run.best_cost) - task.bks) / task.bks
                              : 0.0;
    } catch (const CandidateRunError& e) {
        out.invalid = true;
        out.reason = e.what();
    }
    return out;
}

}  // namespace

double early_stop_probability(double gap, double p_lo) {
    const double p_hi = p_lo + 0.1;
    return std::min(p_hi, std::max(p_lo, gap));
}

void evaluate_candidate(HeuristicCandidate& cand, const EvalSettings& settings,
                        std::optional<double> worst_fitness) {
    if (!passes_static_check(cand.source)) {
        cand.status = CandidateStatus::Invalid;
        cand.note = "static check failed: no select_nodes entry point";
        return;
    }
    if (settings.tasks.empty()) {
        cand.status = CandidateStatus::Invalid;
        cand.note = "no evaluation tasks configured";
        return;
    }

    cand.per_instance.clear();
    cand.truncated = false;
    Rng stop_rng(settings.eval_seed ^ fnv64(cand.source));

    // Tasks fan out to a bounded worker pool but are consumed in task order,
    // so early stopping and fitness are independent of scheduling.
    const int workers = std::max(1, settings.workers);
    std::vector<std::future<RunOutcome>> futures(settings.tasks.size());
    size_t launched = 0;
    auto launch_upto = [&](size_t limit) {
        for (; launched < std::min(limit, settings.tasks.size()); ++launched)
            futures[launched] = std::async(std::launch::async, run_one, cand.source,
                                           settings.tasks[launched], std::cref(settings));
    };

    double gap_sum = 0;
    size_t completed = 0;
    for (size_t i = 0; i < settings.tasks.size(); ++i) {
        launch_upto(i + workers);
        RunOutcome out = futures[i].get();
        if (out.invalid) {
            for (size_t j = i + 1; j < launched; ++j) futures[j].wait();
            cand.status = CandidateStatus::Invalid;
            cand.fitness.reset();
            cand.note = out.reason;
            return;
        }
        cand.per_instance.push_back(out.row);
        gap_sum += out.row.gap_pct;
        ++completed;

        if (settings.early_stopping && worst_fitness && out.row.gap_pct > *worst_fitness &&
            i + 1 < settings.tasks.size()) {
            const double p = early_stop_probability(out.row.gap_pct / 100.0, settings.p_lo);
            if (stop_rng.next_double() < p) {
                cand.truncated = true;
                break;
            }
        }
    }
    for (size_t j = completed; j < launched; ++j) futures[j].wait();

    cand.fitness = gap_sum / static_cast<double>(completed);
    cand.status = cand.truncated ? CandidateStatus::EarlyStopped : CandidateStatus::Evaluated;
}

JudgeVerdict judge_candidate(LlmProvider& provider, const HeuristicCandidate& cand,
                             const Population& pop, int vote_n,
                             const DecodingParams& decoding) {
    JudgeVerdict verdict;
    if (pop.empty() || vote_n <= 0) {
        verdict.decision = true;  // nothing to compare against: always evaluate
        return verdict;
    }
    if (vote_n % 2 == 0) throw std::invalid_argument("vote count must be odd");

    const std::string prompt = build_judge_prompt(cand, *pop.worst().fitness);
    verdict.vote_count = vote_n;
    verdict.votes.resize(vote_n);
    verdict.raw.resize(vote_n);
    verdict.fail_open.resize(vote_n);

    auto one_vote = [&](int i) {
        try {
            const std::string text = provider.complete(prompt, decoding, "judge");
            verdict.raw[i] = text;
            // Unparseable verdicts fail open: never discard on infrastructure
            // or formatting noise.
            auto parsed = parse_verdict(text);
            verdict.votes[i] = parsed.value_or(true);
            verdict.fail_open[i] = !parsed.has_value();
        } catch (const ProviderError& e) {
            verdict.raw[i] = std::string("<provider error> ") + e.what();
            verdict.votes[i] = true;
            verdict.fail_open[i] = true;
        }
    };

    if (provider.supports_concurrency() && vote_n > 1) {
        std::vector<std::thread> threads;
        for (int i = 0; i < vote_n; ++i) threads.emplace_back(one_vote, i);
        for (auto& t : threads) t.join();
    } else {
        for (int i = 0; i < vote_n; ++i) one_vote(i);
    }

    int yes = 0;
    for (bool v : verdict.votes) yes += v ? 1 : 0;
    verdict.decision = 2 * yes > vote_n;
    return verdict;
}

namespace {

// ---- checkpoint serialization ----

json to_json(const HeuristicCandidate& c) {
    json j;
    j["id"] = c.id;
    j["description"] = c.description;
    j["source"] = c.source;
    j["status"] = to_string(c.status);
    if (c.fitness) j["fitness"] = *c.fitness;
    j["truncated"] = c.truncated;
    j["generation"] = c.generation;
    j["op"] = c.op;
    j["parents"] = c.parent_ids;
    j["note"] = c.note;
    json rows = json::array();
    for (const auto& r : c.per_instance)
        rows.push_back({{"instance", r.instance},
                        {"seed", r.seed},
                        {"best_cost", r.best_cost},
                        {"gap_pct", r.gap_pct}});
    j["per_instance"] = rows;
    return j;
}

HeuristicCandidate candidate_from_json(const json& j) {
    HeuristicCandidate c;
    c.id = j.at("id");
    c.description = j.at("description");
    c.source = j.at("source");
    c.status = status_from_string(j.at("status"));
    if (j.contains("fitness")) c.fitness = j["fitness"].get<double>();
    c.truncated = j.value("truncated", false);
    c.generation = j.value("generation", 0);
    c.op = j.value("op", "");
    c.parent_ids = j.value("parents", std::vector<std::string>{});
    c.note = j.value("note", "");
    for (const auto& r : j.value("per_instance", json::array()))
        c.per_instance.push_back({r.at("instance"), r.at("seed"), r.at("best_cost"),
                                  r.at("gap_pct")});
    return c;
}

struct LoopState {
    bool seeded = false;
    int gen = 1;
    int op_index = 0;
    int offspring = 0;
    long long samples = 0;
    uint64_t rng_state = 0;
};

constexpr int kCheckpointVersion = 1;

}  // namespace

EvolutionResult run_evolution(LlmProvider& provider, const EvolutionConfig& cfg, bool resume) {
    EvolutionResult result;
    result.population = Population(cfg.n_pop);
    LoopState pos;
    Rng rng(cfg.seed);

    auto add_event = [&](int gen, const std::string& op, const std::string& type,
                         const std::string& id, double value = 0,
                         const std::string& detail = "") {
        result.events.push_back({static_cast<long long>(result.events.size()), gen, op, type, id,
                                 value, detail});
    };

    if (resume) {
        if (cfg.checkpoint_path.empty())
            throw std::invalid_argument("resume requested without a checkpoint path");
        std::ifstream in(cfg.checkpoint_path);
        if (!in) throw std::runtime_error("cannot open checkpoint " + cfg.checkpoint_path);
        json j = json::parse(in);
        if (j.at("version").get<int>() != kCheckpointVersion)
            throw std::runtime_error("unsupported checkpoint version");
        pos.seeded = j.at("seeded");
        pos.gen = j.at("gen");
        pos.op_index = j.at("op_index");
        pos.offspring = j.at("offspring");
        pos.samples = j.at("samples");
        rng.set_state(j.at("rng_state").get<uint64_t>());
        for (const auto& cj : j.at("population")) {
            HeuristicCandidate c = candidate_from_json(cj);
            result.population.insert(std::move(c));
        }
        for (const auto& cj : j.at("all_candidates"))
            result.all_candidates.push_back(candidate_from_json(cj));
        for (const auto& ej : j.at("events"))
            result.events.push_back({ej.at("index"), ej.at("generation"), ej.at("op"),
                                     ej.at("type"), ej.at("candidate_id"), ej.at("value"),
                                     ej.at("detail")});
        for (const auto& sj : j.at("curve"))
            result.curve.push_back({sj.at("sample"), sj.at("best_fitness")});
        for (const auto& rj : j.at("judge_records")) {
            JudgeRecord r;
            r.candidate_id = rj.at("candidate_id");
            r.decision = rj.at("decision");
            r.votes = rj.at("votes").get<std::vector<bool>>();
            r.worst_at_judgment = rj.at("worst_at_judgment");
            if (rj.contains("truth_good")) r.truth_good = rj["truth_good"].get<bool>();
            if (rj.contains("truth_fitness")) r.truth_fitness = rj["truth_fitness"].get<double>();
            result.judge_records.push_back(std::move(r));
        }
        provider.set_cursors(j.at("cursors").get<std::map<std::string, long long>>());
    }

    auto save_checkpoint = [&] {
        if (cfg.checkpoint_path.empty()) return;
        json j;
        j["version"] = kCheckpointVersion;
        j["seeded"] = pos.seeded;
        j["gen"] = pos.gen;
        j["op_index"] = pos.op_index;
        j["offspring"] = pos.offspring;
        j["samples"] = pos.samples;
        j["rng_state"] = rng.state();
        j["cursors"] = provider.cursors();
        json popj = json::array();
        for (const auto& m : result.population.members()) popj.push_back(to_json(m));
        j["population"] = popj;
        json allj = json::array();
        for (const auto& c : result.all_candidates) allj.push_back(to_json(c));
        j["all_candidates"] = allj;
        json evj = json::array();
        for (const auto& e : result.events)
            evj.push_back({{"index", e.index},
                           {"generation", e.generation},
                           {"op", e.op},
                           {"type", e.type},
                           {"candidate_id", e.candidate_id},
                           {"value", e.value},
                           {"detail", e.detail}});
        j["events"] = evj;
        json cj = json::array();
        for (const auto& s : result.curve)
            cj.push_back({{"sample", s.sample}, {"best_fitness", s.best_fitness}});
        j["curve"] = cj;
        json jr = json::array();
        for (const auto& r : result.judge_records) {
            json e{{"candidate_id", r.candidate_id},
                   {"decision", r.decision},
                   {"votes", r.votes},
                   {"worst_at_judgment", r.worst_at_judgment}};
            if (r.truth_good) e["truth_good"] = *r.truth_good;
            if (r.truth_fitness) e["truth_fitness"] = *r.truth_fitness;
            jr.push_back(e);
        }
        j["judge_records"] = jr;
        const std::string tmp = cfg.checkpoint_path + ".tmp";
        std::ofstream(tmp) << j.dump();
        fs::rename(tmp, cfg.checkpoint_path);
    };

    auto record_sample = [&] {
        ++pos.samples;
        if (!result.population.empty())
            result.curve.push_back({pos.samples, *result.population.best().fitness});
    };

    auto insert_candidate = [&](HeuristicCandidate cand) {
        const int gen = cand.generation;
        const std::string op = cand.op;
        const std::string id = cand.id;
        const double fitness = cand.fitness ? *cand.fitness : 0;
        std::string evicted;
        const InsertOutcome outcome = result.population.insert(std::move(cand), &evicted);
        switch (outcome) {
            case InsertOutcome::Inserted:
                add_event(gen, op, "inserted", id, fitness);
                if (!evicted.empty()) add_event(gen, op, "evicted", evicted);
                break;
            case InsertOutcome::RejectedWorse:
                add_event(gen, op, "rejected-worse", id, fitness);
                break;
            case InsertOutcome::RejectedDuplicate:
                add_event(gen, op, "duplicate", id);
                break;
            case InsertOutcome::RejectedUnevaluated:
                add_event(gen, op, "rejected-unevaluated", id);
                break;
        }
    };

    try {
        if (!pos.seeded) {
            HeuristicCandidate seed;
            seed.source = cfg.seed_source.empty() ? assets::kSeedCandidate : cfg.seed_source;
            seed.description = cfg.seed_description.empty() ? assets::kSeedCandidateDescription
                                                            : cfg.seed_description;
            seed.id = source_hash(seed.source);
            seed.op = "seed";
            evaluate_candidate(seed, cfg.eval, std::nullopt);
            if (seed.status != CandidateStatus::Evaluated)
                throw std::runtime_error("seed heuristic failed evaluation: " + seed.note);
            add_event(0, "seed", "seeded", seed.id, *seed.fitness);
            result.all_candidates.push_back(seed);
            insert_candidate(seed);
            pos.seeded = true;
            record_sample();
            save_checkpoint();
        }

        while (pos.gen <= cfg.generations) {
            const std::string op = cfg.operators[pos.op_index];
            const int want_parents =
                std::min(parents_for_operator(op, cfg.recombine_parents),
                         result.population.size());
            auto parents = select_parents(result.population, want_parents, rng);

            PromptBundle bundle = build_prompt(parents, op);
            std::string response;
            bool generated = false;
            std::string fail_reason;
            for (int attempt = 0; attempt <= cfg.generation_retries && !generated; ++attempt) {
                try {
                    response = provider.complete(bundle.text, cfg.generate_decoding, "generate");
                    generated = true;
                } catch (const ProviderError& e) {
                    fail_reason = e.what();
                }
            }

            if (generated) {
                std::string reason;
                auto parsed = parse_candidate_response(response, &reason);
                if (!parsed) {
                    add_event(pos.gen, op, "invalid", "", 0, reason);
                } else {
                    HeuristicCandidate cand = std::move(*parsed);
                    cand.generation = pos.gen;
                    cand.op = op;
                    for (const auto* p : parents) cand.parent_ids.push_back(p->id);
                    add_event(pos.gen, op, "generated", cand.id);

                    const bool duplicate = std::any_of(
                        result.population.members().begin(), result.population.members().end(),
                        [&](const HeuristicCandidate& m) { return m.id == cand.id; });
                    if (duplicate) {
                        add_event(pos.gen, op, "duplicate", cand.id);
                    } else {
                        bool evaluate = true;
                        if (cfg.vote_n > 0 && !result.population.empty()) {
                            JudgeVerdict verdict = judge_candidate(
                                provider, cand, result.population, cfg.vote_n,
                                cfg.judge_decoding);
                            JudgeRecord record;
                            record.candidate_id = cand.id;
                            record.decision = verdict.decision;
                            record.votes = verdict.votes;
                            record.worst_at_judgment = *result.population.worst().fitness;
                            result.judge_records.push_back(record);
                            add_event(pos.gen, op, "judged", cand.id,
                                      verdict.decision ? 1.0 : 0.0);
                            evaluate = verdict.decision;
                        }
                        if (!evaluate) {
                            cand.status = CandidateStatus::JudgedSkip;
                            add_event(pos.gen, op, "judged-skip", cand.id);
                            result.all_candidates.push_back(cand);
                        } else {
                            std::optional<double> worst;
                            if (result.population.full())
                                worst = *result.population.worst().fitness;
                            evaluate_candidate(cand, cfg.eval, worst);
                            if (cand.status == CandidateStatus::Invalid) {
                                add_event(pos.gen, op, "invalid", cand.id, 0, cand.note);
                            } else if (cand.status == CandidateStatus::EarlyStopped) {
                                add_event(pos.gen, op, "early-stopped", cand.id, *cand.fitness);
                            } else {
                                add_event(pos.gen, op, "evaluated", cand.id, *cand.fitness);
                            }
                            if (!result.judge_records.empty() &&
                                result.judge_records.back().candidate_id == cand.id &&
                                cand.fitness) {
                                result.judge_records.back().truth_fitness = cand.fitness;
                                result.judge_records.back().truth_good =
                                    *cand.fitness < result.judge_records.back().worst_at_judgment;
                            }
                            result.all_candidates.push_back(cand);
                            if (cand.status == CandidateStatus::Evaluated)
                                insert_candidate(std::move(cand));
                        }
                    }
                }
            } else {
                add_event(pos.gen, op, "invalid", "", 0,
                          "generation failed after retries: " + fail_reason);
            }

            record_sample();
            if (++pos.offspring >= cfg.n_pop) {
                pos.offspring = 0;
                if (++pos.op_index >= static_cast<int>(cfg.operators.size())) {
                    pos.op_index = 0;
                    ++pos.gen;
                }
            }
            save_checkpoint();
        }
    } catch (const ProviderExhausted&) {
        // Not logged as an event: a resumed session must reproduce the
        // uninterrupted event log exactly.
        result.exhausted = true;
        save_checkpoint();
    }

    return result;
}

void label_skipped_candidates(EvolutionResult& result, const EvalSettings& settings) {
    EvalSettings full = settings;
    full.early_stopping = false;
    for (auto& cand : result.all_candidates) {
        if (cand.status != CandidateStatus::JudgedSkip) continue;
        HeuristicCandidate copy = cand;
        evaluate_candidate(copy, full, std::nullopt);
        if (copy.status != CandidateStatus::Evaluated) continue;
        for (auto& record : result.judge_records) {
            if (record.candidate_id != cand.id || record.truth_good) continue;
            record.truth_fitness = copy.fitness;
            record.truth_good = *copy.fitness < record.worst_at_judgment;
        }
    }
}

}  // namespace ails::ahd
