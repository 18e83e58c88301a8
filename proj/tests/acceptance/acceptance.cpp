// One line per criterion: "criterion N: PASS|FAIL - detail". Exit status is
// the number of failing criteria (0 when all pass).
#include "fixtures.hpp"
#include "genealogy_oracle.hpp"

#include "relgraph/cli.hpp"
#include "relgraph/error.hpp"
#include "relgraph/evaluation_engine.hpp"
#include "relgraph/graph_generator.hpp"
#include "relgraph/kinship.hpp"
#include "relgraph/relation_oracle.hpp"
#include "relgraph/scoring.hpp"
#include "relgraph/surrogate_naming.hpp"
#include "relgraph/task_renderer.hpp"
#include "relgraph/text.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <unistd.h>

using namespace relgraph;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << s << "s";
    return os.str();
}

constexpr Credit kCredits[] = {Credit::None, Credit::Half, Credit::Full};

// Every grade vector over indices lo..hi, by odometer.
void for_each_vector(int lo, int hi, const std::function<void(const GradeVector&)>& visit) {
    const int n = hi - lo + 1;
    std::vector<int> digits(n, 0);
    while (true) {
        GradeVector g;
        for (int i = 0; i < n; ++i) g[lo + i] = kCredits[digits[i]];
        visit(g);
        int i = 0;
        while (i < n && ++digits[i] == 3) digits[i++] = 0;
        if (i == n) return;
    }
}

GradeVector uniform(int lo, int hi, Credit c) {
    GradeVector g;
    for (int i = lo; i <= hi; ++i) g[i] = c;
    return g;
}

Verdict reasoning_exactness() {
    const auto t0 = Clock::now();
    const auto low = reasoning_score({{2, Credit::Half}, {3, Credit::None}, {4, Credit::None}, {5, Credit::None}}).text();
    const auto high = reasoning_score(uniform(2, 5, Credit::Full)).text();
    std::set<std::string> seen;
    for_each_vector(2, 5, [&](const GradeVector& g) { seen.insert(reasoning_score(g).text()); });
    std::vector<std::string> missing;
    for (const char* want : {"7.14", "42.86", "78.57", "100.00"}) {
        if (!seen.count(want)) missing.push_back(want);
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = low == "7.14" && high == "100.00" && missing.empty() && secs < 1.0;
    v.detail = "(0.5,0,0,0)=" + low + ", (1,1,1,1)=" + high + ", " + std::to_string(seen.size()) +
               " distinct scores over 81 vectors, missing [" + text::join(missing, ",") + "], " + fmt_seconds(secs);
    return v;
}

// A vector over steps 1..5 whose step-weighted sum in halves equals `h`.
GradeVector vector_with_halves(int h) {
    GradeVector g = uniform(1, 5, Credit::None);
    for (int step = 5; step >= 1; --step) {
        for (const auto c : {Credit::Full, Credit::Half}) {
            if (h >= halves(c) * step && g[step] == Credit::None) {
                g[step] = c;
                h -= halves(c) * step;
            }
        }
    }
    return g;
}

Verdict memory_exactness() {
    const auto t0 = Clock::now();
    // Weighted sums 14 and 13 are 28 and 26 halves.
    const auto g1 = vector_with_halves(28), g2 = vector_with_halves(26);
    const auto anchored = memory_score(g1, g2).text();
    std::vector<GradeVector> all;
    for_each_vector(1, 5, [&](const GradeVector& g) { all.push_back(g); });
    std::set<std::string> seen;
    for (const auto& a : all) {
        for (const auto& b : all) seen.insert(memory_score(a, b).text());
    }
    std::vector<std::string> missing;
    for (const char* want : {"8.33", "15.00", "29.17", "68.33", "88.33"}) {
        if (!seen.count(want)) missing.push_back(want);
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = anchored == "88.33" && missing.empty() && secs < 5.0;
    v.detail = "(14,13) -> " + anchored + ", " + std::to_string(seen.size()) + " distinct scores, missing [" +
               text::join(missing, ",") + "], " + fmt_seconds(secs);
    return v;
}

Verdict generator_soundness() {
    const auto t0 = Clock::now();
    const auto& reg = SchemaRegistry::builtin();
    int built = 0, violations = 0, exhausted = 0, certified = 0;
    std::string first_problem;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const int n = static_cast<int>(seed % 10) + 1;
        try {
            const auto g = generate_task_graph(reg, n, seed);
            ++built;
            const auto v = graph_violations(g, reg);
            const bool sized = static_cast<int>(g.edges().size()) == n;
            if (!v.empty() || !sized) {
                ++violations;
                if (first_problem.empty()) {
                    first_problem = "seed " + std::to_string(seed) + ": " + (v.empty() ? "wrong edge count" : v.front());
                }
            }
        } catch (const GenerationExhausted&) {
            // Exhaustion is sound only when no construction exists at all.
            ++exhausted;
            Rng rng = make_rng(seed, Stream::Generation);
            std::vector<RelationType> relations;
            for (const auto& s : sample_schema_multiset(reg, n, rng)) relations.push_back(s.relation);
            if (!testkit::some_valid_construction(reg, relations)) {
                ++certified;
            } else if (first_problem.empty()) {
                first_problem = "seed " + std::to_string(seed) + " exhausted although {" + text::join(relations, ",") +
                                "} is constructible";
            }
        }
    }
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = violations == 0 && certified == exhausted && secs < 60.0;
    v.detail = std::to_string(built) + " graphs built, " + std::to_string(violations) + " with violations, " +
               std::to_string(exhausted) + " unconstructible multisets (" + std::to_string(certified) +
               " certified by exhaustive search), " + fmt_seconds(secs) +
               (first_problem.empty() ? "" : "; " + first_problem);
    return v;
}

RelationChain forward_chain(Gender start, const std::vector<std::string>& relations) {
    RelationChain c;
    c.genders.push_back(start);
    for (std::uint32_t i = 0; i < relations.size(); ++i) {
        c.atoms.push_back({relations[i], Orientation::Forward, std::nullopt});
        c.genders.push_back(*intrinsic_head_gender(relations[i]));
    }
    for (std::uint32_t i = 0; i <= relations.size(); ++i) c.path.push_back(NodeId{i});
    c.from = c.path.front();
    c.to = c.path.back();
    return c;
}

Verdict oracle_equivalence() {
    const auto t0 = Clock::now();
    const auto& kin = kin_relations();
    std::vector<std::vector<std::string>> chains;
    for (const auto& a : kin) {
        chains.push_back({a});
        for (const auto& b : kin) {
            chains.push_back({a, b});
            for (const auto& c : kin) chains.push_back({a, b, c});
        }
    }
    int cases = 0, mismatches = 0;
    std::string first;
    for (const auto& chain : chains) {
        for (const auto g : {Gender::Female, Gender::Male}) {
            ++cases;
            const auto composed = compose_designation(forward_chain(g, chain));
            const auto brute = testkit::brute_force_designation(g, chain);
            if (!(composed == brute)) {
                ++mismatches;
                if (first.empty()) first = text::join(chain, ",") + ": " + composed.canonical + " vs " + brute.canonical;
            }
        }
    }
    const auto anchor = compose_designation(forward_chain(Gender::Male, {"mother", "father"})).canonical;
    const double secs = seconds_since(t0);
    Verdict v;
    v.pass = mismatches == 0 && anchor == "maternal grandfather" && secs < 30.0;
    v.detail = std::to_string(cases) + " cases over " + std::to_string(kin.size()) + " kin relations, " +
               std::to_string(mismatches) + " mismatches, [mother,father] -> " + anchor + ", " + fmt_seconds(secs) +
               (first.empty() ? "" : "; " + first);
    return v;
}

Verdict distance_correctness() {
    std::vector<TaskGraph> graphs = {testkit::construction_example(), testkit::family_graph()};
    for (int e = 1; e <= 7; ++e) graphs.push_back(testkit::path_graph(e));
    for (int l = 1; l <= 7; ++l) graphs.push_back(testkit::star_graph(l));
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        try {
            graphs.push_back(generate_task_graph(SchemaRegistry::builtin(), static_cast<int>(seed % 7) + 1, seed));
        } catch (const GenerationExhausted&) {
        }
    }
    int pairs = 0, wrong = 0;
    for (const auto& g : graphs) {
        if (g.nodes().size() > 8) continue;
        for (const auto& a : g.nodes()) {
            for (const auto& b : g.nodes()) {
                ++pairs;
                if (distance(g, a.id, b.id) != testkit::enumerated_distance(g, a.id, b.id)) ++wrong;
            }
        }
    }
    Verdict v;
    v.pass = wrong == 0 && pairs > 0;
    v.detail = std::to_string(graphs.size()) + " graphs, " + std::to_string(pairs) + " ordered pairs, " +
               std::to_string(wrong) + " disagreements with path enumeration";
    return v;
}

Verdict render_round_trip() {
    Rng rng(2024);
    const auto& lib = SurrogateLibrary::builtin();
    int trials = 0, failures = 0;
    std::string first;
    for (const auto& e : SchemaRegistry::builtin().entries()) {
        for (int i = 0; i < 20; ++i) {
            ++trials;
            // A two-node graph with the relation's genders and random names.
            TaskGraph g;
            const auto pick_gender = [&](GenderConstraint c) {
                if (c == GenderConstraint::FemaleOnly) return Gender::Female;
                if (c == GenderConstraint::MaleOnly) return Gender::Male;
                return rng.coin() ? Gender::Female : Gender::Male;
            };
            const auto h = g.add_node(pick_gender(e.head));
            const auto t = g.add_node(pick_gender(e.tail));
            g.add_edge(h, t, e.relation, e.ordinal() ? std::optional<int>(rng.between(1, 9)) : std::nullopt);
            assign_names(g, lib, rng);
            const auto sentence = render_edge_prompt(g.edges()[0], g);
            const auto parsed = parse_prompt(sentence);
            const EdgeDescriptor want{*g.node(h).name, *g.node(t).name, e.relation, g.edges()[0].ordinal};
            if (!(parsed == want)) {
                ++failures;
                if (first.empty()) first = sentence;
            }
        }
    }
    const auto g = testkit::construction_example();
    const auto row1 = render_edge_prompt(g.edges()[0], g);
    Verdict v;
    v.pass = failures == 0 && trials == 540 && row1 == "Xiaohong is Xiaoming's third student.";
    v.detail = std::to_string(trials) + " renders, " + std::to_string(failures) + " round-trip failures, row 1 \"" +
               row1 + "\"" + (first.empty() ? "" : "; first failure \"" + first + "\"");
    return v;
}

int quiet_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    return run_cli(args, out, err);
}

Verdict end_to_end() {
    const auto t0 = Clock::now();
    const auto root = fs::temp_directory_path() / ("relgraph-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    const auto a = (root / "a").string(), b = (root / "b").string(), w = (root / "w").string();
    int codes = 0;
    codes += quiet_cli({"gen", "--seed", "42", "--out", a});
    codes += quiet_cli({"gen", "--seed", "42", "--out", b});
    codes += quiet_cli({"gen", "--seed", "42", "--out", w});
    bool identical = codes == 0;
    for (const char* f : {"graph.txt", "rulebook.txt", "tasks.txt", "meta.txt"}) {
        if (!identical) break;
        identical = text::read_file((fs::path(a) / f).string()) == text::read_file((fs::path(b) / f).string());
    }
    codes += quiet_cli({"run", "--out", a, "--adapter", "oracle"});
    codes += quiet_cli({"run", "--out", w, "--adapter", "always_wrong"});
    std::string best, worst;
    if (codes == 0) {
        const auto ra = load_run(a), rw = load_run(w);
        best = ra.reasoning.text() + "/" + ra.memory.text();
        worst = rw.reasoning.text() + "/" + rw.memory.text();
    }
    const double secs = seconds_since(t0);
    fs::remove_all(root);
    Verdict v;
    v.pass = codes == 0 && identical && best == "100.00/100.00" && worst == "0.00/0.00" && secs < 10.0;
    v.detail = std::string("gen twice ") + (identical ? "byte-identical" : "DIFFERENT") + ", oracle " + best +
               ", always_wrong " + worst + ", " + fmt_seconds(secs);
    return v;
}

Verdict protocol_shape() {
    TaskGraph graph;
    TaskPlan plan;
    for (std::uint64_t s = 42;; ++s) {
        try {
            graph = generate_task_graph(SchemaRegistry::builtin(), 10, s);
            Rng naming = make_rng(s, Stream::Naming);
            assign_names(graph, SurrogateLibrary::builtin(), naming);
            plan = plan_tasks(graph, s);
            break;
        } catch (const DistanceUnavailable&) {
        }
    }
    const RunInputs in{&graph, &plan, render_rulebook(SchemaRegistry::builtin(), Lexicon::builtin())};
    std::vector<std::string> problems;

    testkit::RecordingAdapter mem;
    run_memory_protocol(in, mem);
    std::map<std::string, std::vector<Message>> final_history;
    for (const auto& call : mem.calls()) {
        if (call.history.size() > final_history[call.session].size()) final_history[call.session] = call.history;
    }
    for (int k = 1; k <= kMemorySteps; ++k) {
        const auto session = "memory-k" + std::to_string(k);
        int graphs = 0;
        std::vector<std::string> questions;
        for (const auto& m : final_history[session]) {
            if (m.kind == MessageKind::Graph) ++graphs;
            if (m.kind == MessageKind::Question) questions.push_back(m.text);
        }
        std::multiset<int> distances;
        for (const auto& t : plan.tasks) {
            if (t.protocol != Protocol::Memory || t.step != k) continue;
            distances.insert(t.distance);
            if (std::count(questions.begin(), questions.end(), build_question(t.form, *graph.node(t.a).name,
                                                                              *graph.node(t.b).name,
                                                                              truth_for(graph, t))) != 1) {
                problems.push_back(t.id + " not asked exactly once");
            }
        }
        if (graphs != k) problems.push_back(session + " sent " + std::to_string(graphs) + " graph messages");
        if (questions.size() != 2 || distances != std::multiset<int>{1, 2}) {
            problems.push_back(session + " questions are not one at distance 1 and one at distance 2");
        }
    }

    testkit::RecordingAdapter rea;
    run_reasoning_protocol(in, rea);
    std::set<std::string> sessions;
    for (const auto& call : rea.calls()) {
        sessions.insert(call.session);
        int questions = 0;
        for (const auto& m : call.history) questions += m.kind == MessageKind::Question ? 1 : 0;
        if (questions > 1) problems.push_back(call.session + " carries more than one question");
    }
    if (sessions != std::set<std::string>{"reasoning-d2", "reasoning-d3", "reasoning-d4", "reasoning-d5"}) {
        problems.push_back("reasoning sessions are {" +
                           text::join(std::vector<std::string>(sessions.begin(), sessions.end()), ",") + "}");
    }
    Verdict v;
    v.pass = problems.empty();
    v.detail = problems.empty() ? "k graph messages at step k for k=1..5, one d1 and one d2 question per step, "
                                  "4 isolated reasoning sessions d2..d5"
                                : text::join(problems, "; ");
    return v;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Verdict()>> criteria = {reasoning_exactness, memory_exactness,   generator_soundness,
                                                            oracle_equivalence,  distance_correctness, render_round_trip,
                                                            end_to_end,          protocol_shape};
    int only = 0;
    if (argc == 3 && std::string(argv[1]) == "--criterion") only = std::atoi(argv[2]);
    if (only < 0 || only > static_cast<int>(criteria.size()) || (argc != 1 && argc != 3)) {
        std::cerr << "usage: relgraph_acceptance [--criterion N]\n";
        return 64;
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) continue;
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        std::cout << "criterion " << i + 1 << ": " << (v.pass ? "PASS" : "FAIL") << " - " << v.detail << std::endl;
        failed += v.pass ? 0 : 1;
    }
    return failed;
}
