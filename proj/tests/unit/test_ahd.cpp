#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <fstream>
#include <sstream>

#include "ails/ahd/assets.hpp"
#include "ails/ahd/evolution.hpp"
#include "ails/ahd/metrics.hpp"
#include "ails/ahd/prompt.hpp"
#include "ails/ahd/provider.hpp"
#include "doctest.h"
#include "unit/oracles.hpp"

using namespace ails;
using namespace ails::ahd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing file ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

HeuristicCandidate evaluated(const std::string& id, double fitness) {
    HeuristicCandidate c;
    c.id = id;
    c.source = "def select_nodes(...): pass  # " + id;
    c.description = id;
    c.status = CandidateStatus::Evaluated;
    c.fitness = fitness;
    return c;
}

// Evaluation settings against the 9-node fixture with the exact optimum as
// the gap reference.
EvalSettings fixture_eval(int workers = 2) {
    static const double bks = [] {
        Instance inst = parse_instance("tests/fixtures/eight_customers.vrp");
        return static_cast<double>(oracles::optimal_cost(inst));
    }();
    EvalSettings s;
    s.tasks = {{"tests/fixtures/eight_customers.vrp", "eight", 11, bks},
               {"tests/fixtures/eight_customers.vrp", "eight", 22, bks}};
    s.engine.max_iterations = 40;
    s.engine.time_limit_s = 0;
    s.workers = workers;
    s.early_stopping = false;
    return s;
}

struct TempDir {
    fs::path path;
    TempDir() {
        char tmpl[] = "/tmp/ails-test-XXXXXX";
        path = mkdtemp(tmpl);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("generation prompt is byte-stable against the golden file") {
    HeuristicCandidate p1;
    p1.description = "Walks strings of consecutive customers from random seeds.";
    p1.source =
        "def select_nodes(dist, knn, number_select, next_node, prev_node, in_route, demands, "
        "coords, average_nodes, rng):\n    return [1]\n";
    HeuristicCandidate p2;
    p2.description = "Removes the nearest-neighbor list of one random customer.";
    p2.source =
        "def select_nodes(dist, knn, number_select, next_node, prev_node, in_route, demands, "
        "coords, average_nodes, rng):\n    return [2]\n";
    PromptBundle b = build_prompt({&p1, &p2}, "O1");
    CHECK(b.text == slurp("tests/fixtures/golden_prompt_o1.txt"));
}

TEST_CASE("prompt construction basics") {
    HeuristicCandidate p = evaluated("p", 1.0);
    p.source = "def select_nodes(a):\n    return []\n";
    SUBCASE("O3 contains the parent code verbatim") {
        PromptBundle b = build_prompt({&p}, "O3");
        CHECK(b.text.find(p.source) != std::string::npos);
        CHECK(b.text.find("modified version") != std::string::npos);
    }
    SUBCASE("empty parent list is rejected") {
        CHECK_THROWS_AS(build_prompt({}, "O1"), std::invalid_argument);
    }
    SUBCASE("each operator text appears exactly once") {
        PromptBundle b = build_prompt({&p}, "O2");
        CHECK(b.text.find("motivated from them") != std::string::npos);
        CHECK(b.text.find("modified version") == std::string::npos);
    }
    SUBCASE("operator parent counts") {
        CHECK(parents_for_operator("O1") == 2);
        CHECK(parents_for_operator("O2") == 2);
        CHECK(parents_for_operator("O3") == 1);
        CHECK(parents_for_operator("O4") == 1);
    }
}

TEST_CASE("candidate response parsing") {
    SUBCASE("well-formed fixture response") {
        std::string reason;
        auto cand = parse_candidate_response(slurp("tests/fixtures/mock_evolution/generate/000.txt"),
                                             &reason);
        REQUIRE_MESSAGE(cand.has_value(), reason);
        CHECK(cand->description ==
              "Takes the lowest-numbered routed customers until the requested count is reached.");
        CHECK(cand->source.find("def select_nodes(") != std::string::npos);
        CHECK(cand->id == source_hash(cand->source));
    }
    SUBCASE("missing code fence is invalid") {
        std::string reason;
        CHECK(!parse_candidate_response("{desc} but no code", &reason));
        CHECK(reason == "missing code fence");
    }
    SUBCASE("empty response is invalid") {
        CHECK(!parse_candidate_response(""));
    }
    SUBCASE("code without the entry point is invalid") {
        std::string reason;
        CHECK(!parse_candidate_response("{d}\n```python\nprint(1)\n```\n", &reason));
        CHECK(reason.find("select_nodes") != std::string::npos);
    }
}

TEST_CASE("population update") {
    Population pop(3);
    std::string evicted;

    SUBCASE("insert into non-full population grows it") {
        CHECK(pop.insert(evaluated("a", 2.0)) == InsertOutcome::Inserted);
        CHECK(pop.insert(evaluated("b", 1.0)) == InsertOutcome::Inserted);
        CHECK(pop.size() == 2);
        CHECK(pop.best().id == "b");
        CHECK(pop.worst().id == "a");
    }
    SUBCASE("worse-than-worst into a full population is rejected") {
        pop.insert(evaluated("a", 1.0));
        pop.insert(evaluated("b", 2.0));
        pop.insert(evaluated("c", 3.0));
        CHECK(pop.insert(evaluated("d", 4.0)) == InsertOutcome::RejectedWorse);
        CHECK(pop.size() == 3);
    }
    SUBCASE("mid-fitness insert evicts the worst") {
        pop.insert(evaluated("a", 1.0));
        pop.insert(evaluated("b", 2.0));
        pop.insert(evaluated("c", 3.0));
        CHECK(pop.insert(evaluated("d", 2.5), &evicted) == InsertOutcome::Inserted);
        CHECK(evicted == "c");
        CHECK(pop.size() == 3);
        CHECK(pop.worst().id == "d");
    }
    SUBCASE("duplicates by source are rejected") {
        HeuristicCandidate a = evaluated("x", 1.0);
        HeuristicCandidate b = evaluated("x", 0.5);
        CHECK(pop.insert(a) == InsertOutcome::Inserted);
        CHECK(pop.insert(b) == InsertOutcome::RejectedDuplicate);
    }
    SUBCASE("unevaluated candidates never enter") {
        HeuristicCandidate c = evaluated("u", 1.0);
        c.status = CandidateStatus::EarlyStopped;
        CHECK(pop.insert(c) == InsertOutcome::RejectedUnevaluated);
    }
}

TEST_CASE("parent selection") {
    SUBCASE("scores {1,3} give probabilities {0.25, 0.75}") {
        // selection_score(gap) = 1/(gap + 1e-3); pick gaps yielding scores 1 and 3.
        Population pop(2);
        pop.insert(evaluated("s1", 1.0 - 1e-3));        // score 1
        pop.insert(evaluated("s3", 1.0 / 3.0 - 1e-3));  // score 3
        CHECK(selection_score(*pop.members()[0].fitness) == doctest::Approx(3.0));
        CHECK(selection_score(*pop.members()[1].fitness) == doctest::Approx(1.0));
        Rng rng(7);
        int first = 0;
        const int trials = 100000;
        for (int i = 0; i < trials; ++i)
            if (select_parents(pop, 1, rng)[0]->id == "s3") ++first;
        CHECK(static_cast<double>(first) / trials == doctest::Approx(0.75).epsilon(0.015));
    }
    SUBCASE("single member is always chosen") {
        Population pop(2);
        pop.insert(evaluated("only", 1.0));
        Rng rng(1);
        CHECK(select_parents(pop, 1, rng)[0]->id == "only");
    }
    SUBCASE("count beyond population size throws") {
        Population pop(2);
        pop.insert(evaluated("a", 1.0));
        Rng rng(1);
        CHECK_THROWS_AS(select_parents(pop, 2, rng), std::invalid_argument);
    }
    SUBCASE("empirical frequencies on 4 members match the analytic distribution") {
        Population pop(4);
        const double gaps[] = {0.5, 1.0, 2.0, 4.0};
        for (int i = 0; i < 4; ++i) pop.insert(evaluated("m" + std::to_string(i), gaps[i]));
        double total = 0;
        for (double g : gaps) total += selection_score(g);
        std::map<std::string, int> counts;
        Rng rng(99);
        const int trials = 100000;
        for (int i = 0; i < trials; ++i) ++counts[select_parents(pop, 1, rng)[0]->id];
        for (int i = 0; i < 4; ++i) {
            const double expect = selection_score(gaps[i]) / total;
            const double got = static_cast<double>(counts["m" + std::to_string(i)]) / trials;
            CHECK(std::abs(got - expect) < 0.01);
        }
    }
    SUBCASE("sampling is without replacement") {
        Population pop(3);
        pop.insert(evaluated("a", 1.0));
        pop.insert(evaluated("b", 2.0));
        pop.insert(evaluated("c", 3.0));
        Rng rng(5);
        for (int i = 0; i < 100; ++i) {
            auto parents = select_parents(pop, 3, rng);
            std::set<std::string> ids{parents[0]->id, parents[1]->id, parents[2]->id};
            CHECK(ids.size() == 3);
        }
    }
}

TEST_CASE("verdict parsing and judging") {
    SUBCASE("parse_verdict reads the last verdict line") {
        CHECK(*parse_verdict("blah\nVERDICT: YES\n") == true);
        CHECK(*parse_verdict("blah\nVERDICT: NO\n") == false);
        CHECK(*parse_verdict("VERDICT: YES is tempting...\nVERDICT: NO") == false);
        CHECK(!parse_verdict("no verdict here").has_value());
    }
    SUBCASE("majority decides; fixture votes [T,T,F] evaluate") {
        auto provider = make_replay_provider("tests/fixtures/mock_judge");
        Population pop(1);
        pop.insert(evaluated("w", 5.0));
        HeuristicCandidate cand = evaluated("c", 0.0);
        JudgeVerdict v = judge_candidate(*provider, cand, pop, 3, {});
        CHECK(v.votes == std::vector<bool>{true, false, true});
        CHECK(v.decision == true);
    }
    SUBCASE("single NO vote skips") {
        auto provider = make_replay_provider("tests/fixtures/mock_judge");
        std::map<std::string, long long> cursors{{"judge", 1}};  // position on the NO fixture
        provider->set_cursors(cursors);
        Population pop(1);
        pop.insert(evaluated("w", 5.0));
        JudgeVerdict v = judge_candidate(*provider, evaluated("c", 0.0), pop, 1, {});
        CHECK(v.decision == false);
    }
    SUBCASE("provider failure on a vote fails open") {
        // Exhausted fixtures raise ProviderExhausted which must propagate,
        // but transient ProviderError defaults the vote to true.
        struct Flaky : LlmProvider {
            std::string complete(const std::string&, const DecodingParams&,
                                 const std::string&) override {
                throw ProviderError("connection reset");
            }
        } flaky;
        Population pop(1);
        pop.insert(evaluated("w", 5.0));
        JudgeVerdict v = judge_candidate(flaky, evaluated("c", 0.0), pop, 3, {});
        CHECK(v.decision == true);
        CHECK(v.fail_open == std::vector<bool>{true, true, true});
    }
    SUBCASE("empty population always evaluates") {
        auto provider = make_replay_provider("tests/fixtures/mock_judge");
        Population pop(1);
        JudgeVerdict v = judge_candidate(*provider, evaluated("c", 1.0), pop, 3, {});
        CHECK(v.decision == true);
        CHECK(v.vote_count == 0);
    }
}

TEST_CASE("early stopping") {
    SUBCASE("probability formula") {
        CHECK(early_stop_probability(0.5, 0.05) == doctest::Approx(0.15));
        CHECK(early_stop_probability(0.07, 0.05) == doctest::Approx(0.07));
        CHECK(early_stop_probability(0.01, 0.05) == doctest::Approx(0.05));
    }
    SUBCASE("output stays in [p_lo, p_lo + 0.1]") {
        Rng rng(3);
        for (int i = 0; i < 20000; ++i) {
            const double p_lo = rng.next_double() * 0.9;
            const double gap = rng.next_double() * 4 - 1;
            const double p = early_stop_probability(gap, p_lo);
            CHECK(p >= p_lo);
            CHECK(p <= p_lo + 0.1 + 1e-12);
        }
    }
    SUBCASE("empirical stop rate at P=0.15 over seeded trials") {
        Rng rng(2718);
        int stops = 0;
        const int trials = 10000;
        for (int i = 0; i < trials; ++i)
            if (rng.next_double() < early_stop_probability(0.5, 0.05)) ++stops;
        CHECK(std::abs(stops / static_cast<double>(trials) - 0.15) < 0.01);
    }
}

TEST_CASE("judge metrics") {
    SUBCASE("hand-built log gives exact tallies") {
        std::vector<JudgeRecord> records;
        auto add = [&](bool truth, bool decision) {
            JudgeRecord r;
            r.candidate_id = "x";
            r.decision = decision;
            r.truth_good = truth;
            records.push_back(r);
        };
        // 4 TT, 2 TF, 3 FT, 1 FF
        for (int i = 0; i < 4; ++i) add(true, true);
        for (int i = 0; i < 2; ++i) add(true, false);
        for (int i = 0; i < 3; ++i) add(false, true);
        add(false, false);
        records.push_back({});  // unlabeled, excluded
        JudgeConfusion c = judge_metrics(records);
        CHECK(c.tt == 4);
        CHECK(c.tf == 2);
        CHECK(c.ft == 3);
        CHECK(c.ff == 1);
        CHECK(c.unlabeled == 1);
        CHECK(c.accuracy_pct() == doctest::Approx(50.0));
        CHECK(c.retention_pct() == doctest::Approx(100.0 * 4 / 6));
        CHECK(c.pct(c.tt) + c.pct(c.tf) + c.pct(c.ft) + c.pct(c.ff) == doctest::Approx(100.0));
    }
    SUBCASE("all-correct log reports 100 accuracy") {
        std::vector<JudgeRecord> records;
        JudgeRecord r;
        r.decision = true;
        r.truth_good = true;
        records.push_back(r);
        r.decision = false;
        r.truth_good = false;
        records.push_back(r);
        CHECK(judge_metrics(records).accuracy_pct() == doctest::Approx(100.0));
    }
    SUBCASE("empty log throws") {
        CHECK_THROWS_AS(judge_metrics({}), std::invalid_argument);
    }
}

TEST_CASE("evolution loop under the mock provider") {
    TempDir tmp;
    EvolutionConfig cfg;
    cfg.n_pop = 3;
    cfg.generations = 2;
    cfg.operators = {"O1"};
    cfg.vote_n = 0;
    cfg.seed = 5;
    cfg.eval = fixture_eval();
    cfg.checkpoint_path = (tmp.path / "ckpt.json").string();

    auto provider = make_replay_provider("tests/fixtures/mock_evolution");
    EvolutionResult result = run_evolution(*provider, cfg);
    CHECK(!result.exhausted);

    // Hand simulation: fitness of each scripted candidate evaluated
    // independently, then the insertion rules replayed by hand.
    auto fitness_of = [&](const std::string& source) {
        HeuristicCandidate c;
        c.source = source;
        c.description = "probe";
        c.id = source_hash(source);
        evaluate_candidate(c, cfg.eval, std::nullopt);
        REQUIRE(c.status == CandidateStatus::Evaluated);
        return *c.fitness;
    };
    auto source_from_fixture = [&](int i) {
        auto cand = parse_candidate_response(
            slurp("tests/fixtures/mock_evolution/generate/00" + std::to_string(i) + ".txt"));
        REQUIRE(cand.has_value());
        return cand->source;
    };

    const double f_seed = fitness_of(assets::kSeedCandidate);
    const double f_a = fitness_of(source_from_fixture(0));  // lowest-id heuristic
    const double f_c = fitness_of(source_from_fixture(2));  // uniform random
    const double f_d = fitness_of(source_from_fixture(4));  // demand-first

    std::vector<std::pair<double, std::string>> expected{
        {f_seed, source_hash(assets::kSeedCandidate)},
        {f_a, source_hash(source_from_fixture(0))},
        {f_c, source_hash(source_from_fixture(2))},
        {f_d, source_hash(source_from_fixture(4))},
    };
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    expected.resize(3);  // capacity

    REQUIRE(result.population.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(result.population.members()[i].id == expected[i].second);
        CHECK(*result.population.members()[i].fitness == doctest::Approx(expected[i].first));
    }

    // Event structure: 6 offspring attempts -> 1 invalid response (001),
    // 1 duplicate (003), 1 invalid evaluation (005), 3 evaluated.
    auto count = [&](const std::string& type) {
        return std::count_if(result.events.begin(), result.events.end(),
                             [&](const EvolutionEvent& e) { return e.type == type; });
    };
    CHECK(count("seeded") == 1);
    CHECK(count("generated") == 5);  // 001 never parses into a candidate
    CHECK(count("duplicate") == 1);
    CHECK(count("invalid") == 2);
    CHECK(count("evaluated") == 3);

    // Best fitness is monotonically nonincreasing along the sample curve.
    for (size_t i = 1; i < result.curve.size(); ++i)
        CHECK(result.curve[i].best_fitness <= result.curve[i - 1].best_fitness);

    // All candidates persisted: seed + 5 parsed-or-skipped offspring minus
    // the duplicate (which is never re-recorded).
    CHECK(result.all_candidates.size() == 5);  // seed, A, C, D, E(invalid)

    SUBCASE("zero generations leaves only the seeded population") {
        EvolutionConfig zero = cfg;
        zero.generations = 0;
        zero.checkpoint_path.clear();
        auto p2 = make_replay_provider("tests/fixtures/mock_evolution");
        EvolutionResult r2 = run_evolution(*p2, zero);
        CHECK(r2.population.size() == 1);
        CHECK(r2.population.best().id == source_hash(assets::kSeedCandidate));
    }

    SUBCASE("checkpoint resume replays to an identical final state") {
        // Interrupted session: only the first three scripted responses exist.
        TempDir partial;
        fs::create_directories(partial.path / "fixtures" / "generate");
        for (int i = 0; i < 3; ++i) {
            fs::copy_file(fs::path("tests/fixtures/mock_evolution/generate") /
                              ("00" + std::to_string(i) + ".txt"),
                          partial.path / "fixtures" / "generate" / ("00" + std::to_string(i) + ".txt"));
        }
        EvolutionConfig interrupted = cfg;
        interrupted.checkpoint_path = (partial.path / "ckpt.json").string();

        auto p3 = make_replay_provider((partial.path / "fixtures").string());
        EvolutionResult half = run_evolution(*p3, interrupted);
        CHECK(half.exhausted);
        CHECK(half.all_candidates.size() < result.all_candidates.size());

        // The missing responses "arrive" and the session resumes.
        for (int i = 3; i < 6; ++i) {
            fs::copy_file(fs::path("tests/fixtures/mock_evolution/generate") /
                              ("00" + std::to_string(i) + ".txt"),
                          partial.path / "fixtures" / "generate" / ("00" + std::to_string(i) + ".txt"));
        }
        auto p4 = make_replay_provider((partial.path / "fixtures").string());
        EvolutionResult resumed = run_evolution(*p4, interrupted, /*resume=*/true);
        CHECK(!resumed.exhausted);

        REQUIRE(resumed.events.size() == result.events.size());
        for (size_t i = 0; i < result.events.size(); ++i) {
            CHECK(resumed.events[i].type == result.events[i].type);
            CHECK(resumed.events[i].candidate_id == result.events[i].candidate_id);
            CHECK(resumed.events[i].generation == result.events[i].generation);
            CHECK(resumed.events[i].value == result.events[i].value);
        }
        REQUIRE(resumed.population.size() == result.population.size());
        for (int i = 0; i < result.population.size(); ++i) {
            CHECK(resumed.population.members()[i].id == result.population.members()[i].id);
            CHECK(*resumed.population.members()[i].fitness ==
                  *result.population.members()[i].fitness);
        }
        REQUIRE(resumed.curve.size() == result.curve.size());
        for (size_t i = 0; i < result.curve.size(); ++i)
            CHECK(resumed.curve[i].best_fitness == result.curve[i].best_fitness);
    }
}
