#include "relgraph/relation_oracle.hpp"

#include "relgraph/error.hpp"
#include "relgraph/text.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

namespace relgraph {

namespace {

std::string capitalize_words(std::string s) {
    bool word_start = true;
    for (auto& ch : s) {
        if (word_start && std::isalpha(static_cast<unsigned char>(ch))) {
            ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        }
        word_start = ch == ' ' || ch == '-';
    }
    return s;
}

std::vector<int> bfs(const TaskGraph& graph, NodeId source) {
    std::vector<std::vector<NodeId>> adjacency(graph.nodes().size());
    for (const auto& e : graph.edges()) {
        adjacency[e.head.value].push_back(e.tail);
        adjacency[e.tail.value].push_back(e.head);
    }
    std::vector<int> dist(graph.nodes().size(), -1);
    std::deque<NodeId> queue{source};
    dist[source.value] = 0;
    while (!queue.empty()) {
        const NodeId cur = queue.front();
        queue.pop_front();
        for (const NodeId next : adjacency[cur.value]) {
            if (dist[next.value] < 0) {
                dist[next.value] = dist[cur.value] + 1;
                queue.push_back(next);
            }
        }
    }
    return dist;
}

std::string gendered(Gender g, std::string_view female, std::string_view male) {
    return std::string(g == Gender::Male ? male : female);
}

std::set<std::string> term_set(const Designation& d) {
    std::set<std::string> out{text::normalize(d.canonical)};
    for (const auto& s : d.synonyms) {
        out.insert(text::normalize(s));
    }
    return out;
}

bool expressible(const Designation& d, const RelationChain& chain) {
    return d.kind == DesignationKind::KinTerm || chain.atoms.size() == 1;
}

RelationChain reversed(const RelationChain& chain) {
    RelationChain r;
    r.from = chain.to;
    r.to = chain.from;
    r.path.assign(chain.path.rbegin(), chain.path.rend());
    r.genders.assign(chain.genders.rbegin(), chain.genders.rend());
    for (auto it = chain.atoms.rbegin(); it != chain.atoms.rend(); ++it) {
        RelationAtom a = *it;
        const auto* entry = SchemaRegistry::builtin().find(a.relation);
        if (entry == nullptr || !entry->symmetric()) {
            a.orientation = a.orientation == Orientation::Forward ? Orientation::Inverse : Orientation::Forward;
        }
        r.atoms.push_back(std::move(a));
    }
    return r;
}

} // namespace

std::string Designation::vocative() const {
    return capitalize_words(synonyms.empty() ? canonical : synonyms.front());
}

std::string Designation::phrase_for(const std::string& asker) const {
    std::string out = canonical;
    const auto pos = out.find(kAskerPlaceholder);
    if (pos != std::string::npos) {
        out.replace(pos, kAskerPlaceholder.size(), asker + "'s ");
    }
    return out;
}

int distance(const TaskGraph& graph, NodeId a, NodeId b) {
    graph.node(a);
    graph.node(b);
    const int d = bfs(graph, a)[b.value];
    if (d < 0) {
        throw Unreachable("nodes " + std::to_string(a.value) + " and " + std::to_string(b.value) + " are not connected");
    }
    return d;
}

std::vector<std::vector<int>> all_distances(const TaskGraph& graph) {
    std::vector<std::vector<int>> out;
    out.reserve(graph.nodes().size());
    for (const auto& n : graph.nodes()) {
        out.push_back(bfs(graph, n.id));
    }
    return out;
}

RelationChain relation_chain(const TaskGraph& graph, NodeId a, NodeId b) {
    graph.node(a);
    graph.node(b);
    const auto to_b = bfs(graph, b);
    if (to_b[a.value] < 0) {
        throw Unreachable("nodes " + std::to_string(a.value) + " and " + std::to_string(b.value) + " are not connected");
    }
    RelationChain chain;
    chain.from = a;
    chain.to = b;
    chain.path.push_back(a);
    chain.genders.push_back(graph.node(a).gender);
    // Greedy choice of the smallest insertion index at every step yields
    // the lexicographically smallest index sequence among shortest paths.
    NodeId cur = a;
    while (cur != b) {
        const Edge* best = nullptr;
        for (const auto i : graph.incident(cur)) {
            const Edge& e = graph.edges()[i];
            if (to_b[e.other(cur).value] == to_b[cur.value] - 1 &&
                (best == nullptr || e.insertion_index < best->insertion_index)) {
                best = &e;
            }
        }
        const NodeId next = best->other(cur);
        const auto& entry = SchemaRegistry::builtin().find(best->relation);
        const bool symmetric = entry != nullptr && entry->symmetric();
        const auto orientation = symmetric || best->head == next ? Orientation::Forward : Orientation::Inverse;
        chain.atoms.push_back(RelationAtom{best->relation, orientation, best->ordinal});
        chain.path.push_back(next);
        chain.genders.push_back(graph.node(next).gender);
        cur = next;
    }
    return chain;
}

std::string role_name(const RelationAtom& atom, Gender g) {
    if (atom.orientation == Orientation::Forward) {
        return display_name(atom.relation);
    }
    const std::string_view r = atom.relation;
    if (r == "student") return "teacher";
    if (r == "teacher") return "student";
    if (r == "subordinate") return "leader";
    if (r == "leader") return "subordinate";
    if (r == "boyfriend") return "girlfriend";
    if (r == "girlfriend") return "boyfriend";
    if (r == "husband") return "wife";
    if (r == "wife") return "husband";
    if (r == "father" || r == "mother") return gendered(g, "daughter", "son");
    if (r == "son" || r == "daughter") return gendered(g, "mother", "father");
    if (r == "older_brother" || r == "older_sister") return gendered(g, "younger sister", "younger brother");
    if (r == "younger_brother" || r == "younger_sister") return gendered(g, "older sister", "older brother");
    if (r == "sworn_elder_brother" || r == "sworn_elder_sister") {
        return gendered(g, "sworn younger sister", "sworn younger brother");
    }
    if (r == "sworn_younger_brother" || r == "sworn_younger_sister") {
        return gendered(g, "sworn elder sister", "sworn elder brother");
    }
    if (r == "godson" || r == "goddaughter") return gendered(g, "godmother", "godfather");
    if (r == "godfather" || r == "godmother") return gendered(g, "goddaughter", "godson");
    return display_name(atom.relation);
}

std::optional<KinOutcome> chain_kin_outcome(const std::vector<RelationAtom>& atoms, const std::vector<Gender>& genders) {
    std::vector<KinStep> steps;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& atom = atoms[i];
        if (!is_kin_relation(atom.relation)) {
            return std::nullopt;
        }
        const auto step = kin_step(atom.relation, atom.orientation, genders[i + 1]);
        // An inverse atom also fixes the gender of the person it leaves.
        const bool from_ok = atom.orientation == Orientation::Forward ||
                             intrinsic_head_gender(atom.relation) == genders[i];
        if (!step || !from_ok) {
            return KinOutcome{KinOutcomeKind::Unsatisfiable, std::nullopt};
        }
        steps.push_back(*step);
    }
    return compose_kin(genders.front(), steps);
}

Designation compose_designation(const RelationChain& chain, const Lexicon& lexicon) {
    if (chain.atoms.empty()) {
        throw EmptyChain("cannot designate an empty relation chain");
    }
    if (chain.atoms.size() <= 4) {
        const auto outcome = chain_kin_outcome(chain.atoms, chain.genders);
        if (outcome && outcome->kind == KinOutcomeKind::Coordinate) {
            if (const auto* entry = lexicon.find(*outcome->coordinate)) {
                return Designation{entry->canonical, entry->synonyms, DesignationKind::KinTerm, entry->key};
            }
        }
    }
    std::vector<std::string> roles;
    for (std::size_t i = 0; i < chain.atoms.size(); ++i) {
        roles.push_back(role_name(chain.atoms[i], chain.genders[i + 1]));
    }
    Designation d;
    d.kind = DesignationKind::ChainDescription;
    if (roles.size() == 1) {
        d.canonical = roles.front();
        const auto* entry = SchemaRegistry::builtin().find(chain.atoms.front().relation);
        if (entry != nullptr && entry->symmetric()) {
            d.synonyms.push_back(roles.front() + "s");
        }
        return d;
    }
    // "the wife of A's teacher" / "teacher's wife"
    std::string canonical;
    for (std::size_t i = roles.size(); i-- > 1;) {
        canonical += "the " + roles[i] + " of ";
    }
    d.canonical = canonical + std::string(kAskerPlaceholder) + roles.front();
    d.synonyms.push_back(text::join(roles, "'s "));
    return d;
}

bool probe_holds(QuestionForm form, const Designation& ab, const Designation& ba, const std::string& probe_x,
                 const std::string& probe_y) {
    if (form == QuestionForm::AssertRelation) {
        // "x-y" is read back from text, where hyphens inside the terms make
        // the split point ambiguous; any reading that holds counts.
        const auto xs = term_set(ab);
        const auto ys = term_set(ba);
        const std::string joined = probe_x + "-" + probe_y;
        for (auto pos = joined.find('-'); pos != std::string::npos; pos = joined.find('-', pos + 1)) {
            if (xs.count(text::normalize(joined.substr(0, pos))) > 0 &&
                ys.count(text::normalize(joined.substr(pos + 1))) > 0) {
                return true;
            }
        }
        return false;
    }
    if (form == QuestionForm::AssertAppellation) {
        return term_set(ab).count(text::normalize(probe_x)) > 0;
    }
    return false;
}

std::vector<std::pair<std::string, std::string>> relation_probe_pool(const Lexicon& lexicon) {
    std::vector<std::pair<std::string, std::string>> pool;
    std::set<std::pair<std::string, std::string>> seen;
    const auto& kin = kin_relations();
    auto consider = [&](const std::vector<RelationType>& relations, Gender start) {
        RelationChain chain;
        chain.genders.push_back(start);
        for (const auto& r : relations) {
            chain.atoms.push_back(RelationAtom{r, Orientation::Forward, std::nullopt});
            chain.genders.push_back(*intrinsic_head_gender(r));
        }
        chain.path.assign(chain.genders.size(), NodeId{});
        const auto ab = compose_designation(chain, lexicon);
        const auto ba = compose_designation(reversed(chain), lexicon);
        if (ab.kind == DesignationKind::KinTerm && ba.kind == DesignationKind::KinTerm &&
            seen.emplace(ab.canonical, ba.canonical).second) {
            pool.emplace_back(ab.canonical, ba.canonical);
        }
    };
    for (const Gender start : {Gender::Female, Gender::Male}) {
        for (const auto& r1 : kin) {
            consider({r1}, start);
        }
        for (const auto& r1 : kin) {
            for (const auto& r2 : kin) {
                consider({r1, r2}, start);
            }
        }
    }
    return pool;
}

std::vector<std::string> vocative_pool(const Lexicon& lexicon) {
    std::vector<std::string> out;
    for (const auto& e : lexicon.entries()) {
        auto v = e.vocative();
        if (std::find(out.begin(), out.end(), v) == out.end()) {
            out.push_back(std::move(v));
        }
    }
    return out;
}

GroundTruth ground_truth_with_probe(const TaskGraph& graph, NodeId a, NodeId b, QuestionForm form,
                                    std::string probe_x, std::string probe_y, const Lexicon& lexicon) {
    GroundTruth t;
    t.chain = relation_chain(graph, a, b);
    t.designation_ab = compose_designation(t.chain, lexicon);
    t.designation_ba = compose_designation(relation_chain(graph, b, a), lexicon);
    if (form == QuestionForm::AssertRelation || form == QuestionForm::AssertAppellation) {
        t.boolean_answer = probe_holds(form, t.designation_ab, t.designation_ba, probe_x, probe_y);
        t.probe_x = std::move(probe_x);
        t.probe_y = std::move(probe_y);
    }
    return t;
}

GroundTruth ground_truth_for(const TaskGraph& graph, NodeId a, NodeId b, QuestionForm form, Rng& rng,
                             const Lexicon& lexicon) {
    auto t = ground_truth_with_probe(graph, a, b, QuestionForm::Relationship, {}, {}, lexicon);
    if (form == QuestionForm::Relationship || form == QuestionForm::Appellation) {
        return t;
    }
    const auto& ab = t.designation_ab;
    const auto& ba = t.designation_ba;
    const bool positive = rng.coin() && expressible(ab, t.chain) && (form == QuestionForm::AssertAppellation ||
                                                                     expressible(ba, t.chain));
    std::string x;
    std::string y;
    if (form == QuestionForm::AssertRelation) {
        if (positive) {
            x = ab.canonical;
            y = ba.canonical;
        } else {
            std::vector<std::pair<std::string, std::string>> negatives;
            for (auto& p : relation_probe_pool(lexicon)) {
                // Swapped pairs are excluded too: "is there a son-father
                // relationship" reads as true for a father-son pair.
                if (!probe_holds(form, ab, ba, p.first, p.second) && !probe_holds(form, ab, ba, p.second, p.first)) {
                    negatives.push_back(std::move(p));
                }
            }
            const auto& pick = rng.pick(std::span<const std::pair<std::string, std::string>>(negatives));
            x = pick.first;
            y = pick.second;
        }
    } else {
        if (positive) {
            x = ab.vocative();
        } else {
            std::vector<std::string> negatives;
            for (auto& v : vocative_pool(lexicon)) {
                if (!probe_holds(form, ab, ba, v, {})) {
                    negatives.push_back(std::move(v));
                }
            }
            x = rng.pick(std::span<const std::string>(negatives));
        }
    }
    t.boolean_answer = probe_holds(form, ab, ba, x, y);
    t.probe_x = std::move(x);
    t.probe_y = std::move(y);
    return t;
}

} // namespace relgraph
