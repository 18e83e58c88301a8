#include "relgraph/chat_adapter.hpp"

#include "relgraph/error.hpp"
#include "relgraph/relation_oracle.hpp"
#include "relgraph/text.hpp"

#include <filesystem>
#include <regex>
#include <set>

namespace relgraph {

namespace {

struct ParsedQuestion {
    QuestionForm form;
    std::string a;
    std::string b;
    std::string x;
    std::string y;
};

std::optional<ParsedQuestion> parse_question(const std::string& s) {
    static const std::regex form1(R"(^What's the relationship between ([A-Za-z]+) and ([A-Za-z]+)\?$)");
    static const std::regex form2(R"(^What should ([A-Za-z]+) call ([A-Za-z]+)\?$)");
    static const std::regex form3(R"(^Is there a (.+) relationship between ([A-Za-z]+) and ([A-Za-z]+)\?$)");
    static const std::regex form4(R"(^Should ([A-Za-z]+) call (.+) ([A-Za-z]+)\?$)");
    std::smatch m;
    const std::string t(text::trim(s));
    if (std::regex_match(t, m, form1)) return ParsedQuestion{QuestionForm::Relationship, m[1], m[2], {}, {}};
    if (std::regex_match(t, m, form2)) return ParsedQuestion{QuestionForm::Appellation, m[1], m[2], {}, {}};
    if (std::regex_match(t, m, form3)) {
        // The split point is irrelevant: probe checks try every hyphen.
        const std::string probe = m[1];
        const auto dash = probe.find('-');
        if (dash == std::string::npos) return std::nullopt;
        return ParsedQuestion{QuestionForm::AssertRelation, m[2], m[3], probe.substr(0, dash), probe.substr(dash + 1)};
    }
    if (std::regex_match(t, m, form4)) return ParsedQuestion{QuestionForm::AssertAppellation, m[1], m[3], m[2], {}};
    return std::nullopt;
}

/// Graph described by every edge sentence the user has sent so far.
TaskGraph rebuild_graph(std::span<const Message> history, const AdapterResources& res) {
    std::vector<EdgeDescriptor> edges;
    for (const auto& m : history) {
        if (m.role != MessageRole::User) continue;
        for (const auto& line : text::split(m.text, '\n')) {
            try {
                auto d = res.templates->parse(line);
                if (std::find(edges.begin(), edges.end(), d) == edges.end()) edges.push_back(std::move(d));
            } catch (const UnparseablePrompt&) {
            }
        }
    }
    std::unordered_map<std::string, Gender> gender_of;
    for (const auto& s : res.surrogates->entries()) gender_of.emplace(s.name, s.gender);
    TaskGraph g;
    auto node_for = [&](const std::string& name) {
        if (auto id = g.find_by_name(name)) return *id;
        const auto it = gender_of.find(name);
        if (it == gender_of.end()) {
            throw AdapterFailure("oracle: unknown person " + name);
        }
        const NodeId id = g.add_node(it->second);
        g.node(id).name = name;
        return id;
    };
    for (const auto& d : edges) {
        const NodeId h = node_for(d.head_name);
        const NodeId t = node_for(d.tail_name);
        g.add_edge(h, t, d.relation, d.ordinal);
    }
    return g;
}

std::string statement(const Designation& d, const std::string& asker) {
    if (d.canonical.find(kAskerPlaceholder) != std::string::npos) {
        return d.phrase_for(asker);
    }
    return asker + "'s " + d.canonical;
}

} // namespace

std::string_view role_token(MessageRole r) { return r == MessageRole::User ? "user" : "assistant"; }

std::string_view kind_token(MessageKind k) {
    switch (k) {
    case MessageKind::Rulebook: return "rulebook";
    case MessageKind::Graph: return "graph";
    case MessageKind::Question: return "question";
    case MessageKind::Reply: return "reply";
    }
    return "?";
}

std::optional<MessageRole> parse_role_token(std::string_view s) {
    if (s == "user") return MessageRole::User;
    if (s == "assistant") return MessageRole::Assistant;
    return std::nullopt;
}

std::optional<MessageKind> parse_kind_token(std::string_view s) {
    for (const auto k : {MessageKind::Rulebook, MessageKind::Graph, MessageKind::Question, MessageKind::Reply}) {
        if (kind_token(k) == s) return k;
    }
    return std::nullopt;
}

std::string OracleAdapter::submit(const std::string&, std::span<const Message> history) {
    if (history.empty()) return "OK.";
    const auto q = parse_question(history.back().text);
    if (!q) return "OK.";
    const TaskGraph g = rebuild_graph(history, resources_);
    const auto a = g.find_by_name(q->a);
    const auto b = g.find_by_name(q->b);
    if (!a || !b) {
        throw AdapterFailure("oracle: question mentions someone it was not told about");
    }
    const auto truth = ground_truth_with_probe(g, *a, *b, q->form, q->x, q->y, *resources_.lexicon);
    switch (q->form) {
    case QuestionForm::Relationship:
        if (invert_) return "They are strangers to each other.";
        return q->b + " is " + statement(truth.designation_ab, q->a) + ".";
    case QuestionForm::Appellation:
        if (invert_) return "They are strangers to each other.";
        return q->a + " should call " + q->b + " " + (truth.designation_ab.kind == DesignationKind::KinTerm
                                                          ? truth.designation_ab.canonical
                                                          : truth.designation_ab.phrase_for(q->a)) + ".";
    default:
        return *truth.boolean_answer != invert_ ? "Yes." : "No.";
    }
}

ScriptedAdapter::ScriptedAdapter(std::string name, std::string_view script) : name_(std::move(name)) {
    for (const auto& line : text::data_lines(script)) {
        const auto bar = line.find('|');
        if (bar == std::string::npos) {
            throw ConfigError("scripted reply lines must be 'session|reply'");
        }
        replies_[line.substr(0, bar)].push_back(text::unescape_field(line.substr(bar + 1)));
    }
}

std::unique_ptr<ScriptedAdapter> ScriptedAdapter::from_file(const std::string& path) {
    std::string content;
    try {
        content = text::read_file(path);
    } catch (const Error& e) {
        throw ConfigError(std::string("scripted adapter: ") + e.what());
    }
    return std::make_unique<ScriptedAdapter>(std::filesystem::path(path).filename().string(), content);
}

std::string ScriptedAdapter::submit(const std::string& session, std::span<const Message> history) {
    if (history.empty() || history.back().kind != MessageKind::Question) return "OK.";
    const std::lock_guard lock(mutex_);
    const auto it = replies_.find(session);
    auto& cursor = cursor_[session];
    if (it == replies_.end() || cursor >= it->second.size()) return {};
    return it->second[cursor++];
}

std::unique_ptr<ChatAdapter> make_adapter(std::string_view spec, AdapterResources resources) {
    if (spec == "oracle") return std::make_unique<OracleAdapter>(resources, false);
    if (spec == "always_wrong") return std::make_unique<OracleAdapter>(resources, true);
    if (spec == "silent") return std::make_unique<SilentAdapter>();
    if (spec.rfind("scripted:", 0) == 0 && spec.size() > 9) {
        return ScriptedAdapter::from_file(std::string(spec.substr(9)));
    }
    if (spec == "remote") return RemoteAdapter::from_environment("default");
    if (spec.rfind("remote:", 0) == 0 && spec.size() > 7) {
        return RemoteAdapter::from_environment(std::string(spec.substr(7)));
    }
    throw ConfigError("unknown adapter '" + std::string(spec) +
                      "' (expected oracle, always_wrong, silent, scripted:<path> or remote[:<model>])");
}

} // namespace relgraph
