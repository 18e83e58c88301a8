#include "relgraph/evaluation_engine.hpp"

#include "relgraph/error.hpp"
#include "relgraph/graph_generator.hpp"
#include "relgraph/text.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <thread>

namespace relgraph {

namespace {

std::string_view protocol_token(Protocol p) { return p == Protocol::Reasoning ? "reasoning" : "memory"; }

std::string_view status_token(TaskStatus s) {
    switch (s) {
    case TaskStatus::Graded: return "graded";
    case TaskStatus::Ungraded: return "ungraded";
    case TaskStatus::Skipped: return "skipped";
    case TaskStatus::Overridden: return "override";
    }
    return "?";
}

std::optional<TaskStatus> parse_status(std::string_view s) {
    for (const auto t : {TaskStatus::Graded, TaskStatus::Ungraded, TaskStatus::Skipped, TaskStatus::Overridden}) {
        if (status_token(t) == s) return t;
    }
    return std::nullopt;
}

QuestionForm draw_form(Rng& rng, const PlanOptions& options) {
    return static_cast<QuestionForm>(rng.between(1, options.assertion_forms ? 4 : 2));
}

bool asserts(QuestionForm f) { return f == QuestionForm::AssertRelation || f == QuestionForm::AssertAppellation; }

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

// ---- sessions ----------------------------------------------------------

struct SessionPlan {
    std::string session;
    std::vector<Message> prompts;
    std::vector<std::string> question_ids; // one per Question prompt, in order
};

struct SessionOutcome {
    std::vector<Exchange> exchanges;
    std::vector<std::string> timestamps;
    std::map<std::string, int> reply_at; // task id -> local exchange index
    std::string failure;
};

SessionOutcome run_session(const SessionPlan& plan, ChatAdapter& adapter) {
    SessionOutcome out;
    std::vector<Message> history;
    std::size_t question = 0;
    for (const auto& prompt : plan.prompts) {
        history.push_back(prompt);
        out.exchanges.push_back(Exchange{plan.session, prompt});
        out.timestamps.push_back(utc_now());
        std::string reply;
        try {
            reply = adapter.submit(plan.session, history);
        } catch (const AdapterFailure& e) {
            out.failure = e.what();
            return out;
        }
        Message answer{MessageRole::Assistant, MessageKind::Reply, std::move(reply)};
        history.push_back(answer);
        out.exchanges.push_back(Exchange{plan.session, std::move(answer)});
        out.timestamps.push_back(utc_now());
        if (prompt.kind == MessageKind::Question) {
            out.reply_at[plan.question_ids[question++]] = static_cast<int>(out.exchanges.size()) - 1;
        }
    }
    return out;
}

/// Runs sessions on up to `workers` threads; outcomes come back in input order.
std::vector<SessionOutcome> run_pool(const std::vector<SessionPlan>& plans, ChatAdapter& adapter, int workers) {
    std::vector<SessionOutcome> outcomes(plans.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < plans.size(); i = next++) {
            outcomes[i] = run_session(plans[i], adapter);
        }
    };
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), plans.size());
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < count; ++t) threads.emplace_back(work);
    work();
    for (auto& t : threads) t.join();
    return outcomes;
}

Message user(MessageKind kind, std::string text) { return Message{MessageRole::User, kind, std::move(text)}; }

std::vector<SessionPlan> session_plans(const RunInputs& in, const RunOptions& options, Protocol protocol,
                                       const TemplateSet& templates, std::map<std::string, std::string>& skipped) {
    const auto& graph = *in.graph;
    const auto prompts = render_graph_prompts(graph, templates);
    const auto rulebook = text::join(in.rulebook, "\n");
    const auto all_prompts = text::join(prompts, "\n");
    auto question_text = [&](const QuestionTask& t) {
        return build_question(t.form, graph.name_of(t.a), graph.name_of(t.b), truth_for(graph, t, *in.lexicon));
    };

    std::vector<SessionPlan> plans;
    if (protocol == Protocol::Reasoning) {
        for (const auto& t : in.plan->tasks) {
            if (t.protocol != Protocol::Reasoning) continue;
            SessionPlan p{t.session(), {}, {t.id}};
            p.prompts.push_back(user(MessageKind::Rulebook, rulebook));
            p.prompts.push_back(user(MessageKind::Graph, all_prompts));
            if (options.reinform) p.prompts.push_back(user(MessageKind::Graph, all_prompts));
            p.prompts.push_back(user(MessageKind::Question, question_text(t)));
            plans.push_back(std::move(p));
        }
        return plans;
    }
    for (int k = 1; k <= kMemorySteps; ++k) {
        std::vector<const QuestionTask*> questions;
        for (const auto& t : in.plan->tasks) {
            if (t.protocol == Protocol::Memory && t.step == k) questions.push_back(&t);
        }
        if (questions.empty()) continue;
        std::vector<std::vector<std::string>> chunks;
        try {
            chunks = chunk_prompts(prompts, k);
        } catch (const TooFewPrompts& e) {
            for (const auto* q : questions) skipped[q->id] = std::string("skipped: ") + e.what();
            continue;
        }
        SessionPlan p{questions.front()->session(), {}, {}};
        p.prompts.push_back(user(MessageKind::Rulebook, rulebook));
        for (const auto& c : chunks) p.prompts.push_back(user(MessageKind::Graph, text::join(c, "\n")));
        for (const auto* q : questions) {
            p.prompts.push_back(user(MessageKind::Question, question_text(*q)));
            p.question_ids.push_back(q->id);
        }
        plans.push_back(std::move(p));
    }
    return plans;
}

RunRecord run_protocols(const RunInputs& in, ChatAdapter& adapter, const RunOptions& options,
                        std::vector<Protocol> protocols) {
    RunRecord record;
    record.graph = *in.graph;
    record.rulebook = in.rulebook;
    record.plan = *in.plan;
    record.meta.seed = in.graph->seed();
    record.meta.adapter = adapter.identity();
    record.meta.templates = in.templates->identifier();
    record.meta.reinform = options.reinform;

    std::map<std::string, std::string> skipped;
    std::vector<SessionPlan> plans;
    for (const auto p : protocols) {
        auto more = session_plans(in, options, p, *in.templates, skipped);
        plans.insert(plans.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    const auto outcomes = run_pool(plans, adapter, options.workers);

    std::map<std::string, int> reply_at;
    std::map<std::string, std::string> failed; // session -> error
    for (const auto& o : outcomes) {
        const int offset = static_cast<int>(record.transcript.size());
        record.transcript.insert(record.transcript.end(), o.exchanges.begin(), o.exchanges.end());
        record.timestamps.insert(record.timestamps.end(), o.timestamps.begin(), o.timestamps.end());
        for (const auto& [id, local] : o.reply_at) reply_at[id] = offset + local;
        if (!o.failure.empty()) {
            failed[o.exchanges.front().session] = o.failure;
            ++record.meta.adapter_failures;
        }
    }
    for (const auto& t : record.plan.tasks) {
        if (std::find(protocols.begin(), protocols.end(), t.protocol) == protocols.end()) continue;
        TaskResult r{t.id, TaskStatus::Graded, {}, -1};
        if (const auto s = skipped.find(t.id); s != skipped.end()) {
            r.status = TaskStatus::Skipped;
            r.grade = Grade{Credit::None, s->second};
        } else if (const auto at = reply_at.find(t.id); at != reply_at.end()) {
            r.reply_index = at->second;
        } else {
            r.status = TaskStatus::Ungraded;
            const auto f = failed.find(t.session());
            r.grade = Grade{Credit::None, "adapter failure: " + (f == failed.end() ? std::string("no reply") : f->second)};
        }
        record.results.push_back(std::move(r));
    }
    return record;
}

// ---- persistence helpers --------------------------------------------------

const char* const kContentFiles[] = {"graph.txt", "rulebook.txt", "tasks.txt", "transcript.log", "grades.txt",
                                     "scores.txt"};
const char* const kPlanFiles[] = {"graph.txt", "rulebook.txt", "tasks.txt"};

std::string path_in(const std::string& dir, std::string_view file) {
    return (std::filesystem::path(dir) / std::string(file)).string();
}

std::string read_required(const std::string& dir, std::string_view file) {
    const auto p = path_in(dir, file);
    if (!std::filesystem::exists(p)) {
        throw CorruptRunDirectory("run directory " + dir + " lacks " + std::string(file));
    }
    return text::read_file(p);
}

std::string rulebook_document(const std::vector<std::string>& rulebook) {
    std::string out;
    for (const auto& line : rulebook) out += line + "\n";
    return out;
}

std::string meta_document(const RunMeta& meta, const std::map<std::string, std::string>& files) {
    std::string out = "seed=" + std::to_string(meta.seed) + "\n";
    out += "adapter=" + meta.adapter + "\n";
    out += "rubric=" + meta.rubric + "\n";
    out += "templates=" + meta.templates + "\n";
    out += "surrogates=" + meta.surrogates + "\n";
    out += "lexicon=" + meta.lexicon + "\n";
    out += std::string("reinform=") + (meta.reinform ? "1" : "0") + "\n";
    out += "adapter_failures=" + std::to_string(meta.adapter_failures) + "\n";
    for (const auto& [name, content] : files) {
        out += "sha256:" + name + "=" + text::sha256_hex(content) + "\n";
    }
    return out;
}

struct ParsedMeta {
    RunMeta meta;
    std::map<std::string, std::string> checksums;
};

ParsedMeta parse_meta(std::string_view document) {
    ParsedMeta pm;
    for (const auto& line : text::data_lines(document)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw CorruptRunDirectory("meta.txt: bad line '" + line + "'");
        const auto key = line.substr(0, eq);
        const auto value = line.substr(eq + 1);
        try {
            if (key == "seed") pm.meta.seed = std::stoull(value);
            else if (key == "adapter") pm.meta.adapter = value;
            else if (key == "rubric") pm.meta.rubric = value;
            else if (key == "templates") pm.meta.templates = value;
            else if (key == "surrogates") pm.meta.surrogates = value;
            else if (key == "lexicon") pm.meta.lexicon = value;
            else if (key == "reinform") pm.meta.reinform = value == "1";
            else if (key == "adapter_failures") pm.meta.adapter_failures = std::stoi(value);
            else if (key.rfind("sha256:", 0) == 0) pm.checksums[key.substr(7)] = value;
            else throw CorruptRunDirectory("meta.txt: unknown key " + key);
        } catch (const std::logic_error&) {
            throw CorruptRunDirectory("meta.txt: bad value for " + key);
        }
    }
    return pm;
}

void verify(const ParsedMeta& pm, const std::string& dir, std::span<const char* const> files,
            std::map<std::string, std::string>& contents) {
    for (const char* f : files) {
        contents[f] = read_required(dir, f);
        const auto it = pm.checksums.find(f);
        if (it == pm.checksums.end()) {
            throw CorruptRunDirectory("meta.txt has no checksum for " + std::string(f));
        }
        if (it->second != text::sha256_hex(contents[f])) {
            throw CorruptRunDirectory(std::string(f) + " does not match its recorded checksum");
        }
    }
}

std::vector<std::string> parse_rulebook(std::string_view document) {
    std::vector<std::string> out;
    for (auto& line : text::split(document, '\n')) {
        if (!line.empty()) out.push_back(std::move(line));
    }
    return out;
}

} // namespace

std::string QuestionTask::session() const {
    return protocol == Protocol::Reasoning ? "reasoning-d" + std::to_string(distance)
                                           : "memory-k" + std::to_string(step);
}

const QuestionTask* TaskPlan::find(std::string_view id) const {
    for (const auto& t : tasks) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

std::string TaskPlan::serialize(const TaskGraph& graph) const {
    std::string out = "# relgraph tasks v1\n";
    out += "# task|id|protocol|distance|step|a|b|a_name|b_name|form|probe_x|probe_y\n";
    for (const auto& t : tasks) {
        out += "task|" + t.id + "|" + std::string(protocol_token(t.protocol)) + "|" + std::to_string(t.distance) + "|" +
               std::to_string(t.step) + "|" + std::to_string(t.a.value) + "|" + std::to_string(t.b.value) + "|" +
               graph.name_of(t.a) + "|" + graph.name_of(t.b) + "|" + std::to_string(static_cast<int>(t.form)) + "|" +
               text::escape_field(t.probe_x) + "|" + text::escape_field(t.probe_y) + "\n";
    }
    return out;
}

TaskPlan TaskPlan::parse(std::string_view document, const TaskGraph& graph) {
    TaskPlan plan;
    int line_no = 0;
    for (const auto& line : text::data_lines(document)) {
        ++line_no;
        const auto f = text::split(line, '|');
        const auto where = "task record " + std::to_string(line_no);
        if (f.size() != 12 || f[0] != "task") throw MalformedTaskFile(where + ": expected 12 fields");
        QuestionTask t;
        t.id = f[1];
        if (f[2] == "reasoning") t.protocol = Protocol::Reasoning;
        else if (f[2] == "memory") t.protocol = Protocol::Memory;
        else throw MalformedTaskFile(where + ": unknown protocol " + f[2]);
        try {
            t.distance = std::stoi(f[3]);
            t.step = std::stoi(f[4]);
            t.a = NodeId{static_cast<std::uint32_t>(std::stoul(f[5]))};
            t.b = NodeId{static_cast<std::uint32_t>(std::stoul(f[6]))};
            const int form = std::stoi(f[9]);
            if (form < 1 || form > 4) throw MalformedTaskFile(where + ": form must be 1..4");
            t.form = static_cast<QuestionForm>(form);
        } catch (const std::logic_error&) {
            throw MalformedTaskFile(where + ": bad number");
        }
        if (!graph.contains(t.a) || !graph.contains(t.b) || t.a == t.b) {
            throw MalformedTaskFile(where + ": pair is not two distinct graph nodes");
        }
        if (graph.node(t.a).name != f[7] || graph.node(t.b).name != f[8]) {
            throw MalformedTaskFile(where + ": names do not match the graph");
        }
        t.probe_x = text::unescape_field(f[10]);
        t.probe_y = text::unescape_field(f[11]);
        if (t.session().empty() || plan.find(t.id) != nullptr) throw MalformedTaskFile(where + ": duplicate id");
        plan.tasks.push_back(std::move(t));
    }
    return plan;
}

TaskPlan plan_tasks(const TaskGraph& graph, std::uint64_t seed, const Lexicon& lexicon, PlanOptions options) {
    Rng rng = make_rng(seed, Stream::Tasks);
    TaskPlan plan;
    auto make = [&](std::string id, Protocol p, int d, int k, std::pair<NodeId, NodeId> pair, QuestionForm form) {
        QuestionTask t{std::move(id), p, d, k, pair.first, pair.second, form, {}, {}};
        if (asserts(form)) {
            const auto truth = ground_truth_for(graph, pair.first, pair.second, form, rng, lexicon);
            t.probe_x = truth.probe_x;
            t.probe_y = truth.probe_y;
        }
        return t;
    };
    for (const auto& [d, pair] : distance_bucket_tasks(graph, rng)) {
        plan.tasks.push_back(make("reasoning-d" + std::to_string(d), Protocol::Reasoning, d, 0, pair, draw_form(rng, options)));
    }
    std::vector<QuestionTask> memory_templates;
    for (int d = 1; d <= 2; ++d) {
        const auto pairs = pairs_at_distance(graph, d);
        if (pairs.empty()) throw DistanceUnavailable(d);
        auto pair = rng.pick(std::span<const std::pair<NodeId, NodeId>>(pairs));
        if (rng.coin()) std::swap(pair.first, pair.second);
        memory_templates.push_back(make({}, Protocol::Memory, d, 0, pair, draw_form(rng, options)));
    }
    for (int k = 1; k <= kMemorySteps; ++k) {
        for (auto t : memory_templates) {
            t.step = k;
            t.id = "memory-k" + std::to_string(k) + "-d" + std::to_string(t.distance);
            plan.tasks.push_back(std::move(t));
        }
    }
    return plan;
}

GroundTruth truth_for(const TaskGraph& graph, const QuestionTask& task, const Lexicon& lexicon) {
    return ground_truth_with_probe(graph, task.a, task.b, task.form, task.probe_x, task.probe_y, lexicon);
}

const TaskResult* RunRecord::result(std::string_view task_id) const {
    for (const auto& r : results) {
        if (r.task_id == task_id) return &r;
    }
    return nullptr;
}

RunRecord run_reasoning_protocol(const RunInputs& in, ChatAdapter& adapter, const RunOptions& options) {
    return run_protocols(in, adapter, options, {Protocol::Reasoning});
}

RunRecord run_memory_protocol(const RunInputs& in, ChatAdapter& adapter, const RunOptions& options) {
    return run_protocols(in, adapter, options, {Protocol::Memory});
}

RunRecord run_evaluation(const RunInputs& in, ChatAdapter& adapter, const RunOptions& options) {
    auto record = run_protocols(in, adapter, options, {Protocol::Reasoning, Protocol::Memory});
    grade_record(record, {}, *in.lexicon);
    return record;
}

void grade_record(RunRecord& record, const std::map<std::string, GradeOverride>& overrides, const Lexicon& lexicon,
                  const Rubric& rubric) {
    std::vector<std::string> names;
    for (const auto& n : record.graph.nodes()) {
        if (n.name) names.push_back(*n.name);
    }
    for (auto& r : record.results) {
        const auto* task = record.plan.find(r.task_id);
        if (task == nullptr) throw MalformedTaskFile("result for unknown task " + r.task_id);
        if (r.status == TaskStatus::Overridden) r.status = r.reply_index >= 0 ? TaskStatus::Graded : TaskStatus::Ungraded;
        if (r.reply_index < 0) continue;
        if (static_cast<std::size_t>(r.reply_index) >= record.transcript.size()) {
            throw CorruptRunDirectory("reply index out of range for " + r.task_id);
        }
        GradeContext ctx;
        ctx.form = task->form;
        ctx.protocol = task->protocol;
        ctx.truth = truth_for(record.graph, *task, lexicon);
        ctx.asker = record.graph.name_of(task->a);
        ctx.target = record.graph.name_of(task->b);
        for (const auto& n : names) {
            if (n != ctx.asker && n != ctx.target) ctx.other_names.push_back(n);
        }
        r.status = TaskStatus::Graded;
        r.grade = grade_answer(record.transcript[static_cast<std::size_t>(r.reply_index)].message.text, ctx, rubric,
                               lexicon);
    }
    for (const auto& [id, o] : overrides) {
        const auto it = std::find_if(record.results.begin(), record.results.end(),
                                     [&id = id](const TaskResult& r) { return r.task_id == id; });
        if (it == record.results.end()) throw MalformedTaskFile("override for unknown task " + id);
        it->status = TaskStatus::Overridden;
        it->grade = Grade{o.credit, "override: " + o.note};
    }
    record.meta.rubric = rubric.version;
    compute_scores(record);
}

void compute_scores(RunRecord& record) {
    GradeVector reasoning;
    GradeVector g1;
    GradeVector g2;
    for (const auto& r : record.results) {
        const auto* t = record.plan.find(r.task_id);
        if (t == nullptr) continue;
        if (t->protocol == Protocol::Reasoning) reasoning[t->distance] = r.grade.credit;
        else (t->distance == 1 ? g1 : g2)[t->step] = r.grade.credit;
    }
    // Fragments from a single protocol score only what they cover.
    try {
        record.reasoning = reasoning_score(reasoning);
    } catch (const IncompleteGradeVector&) {
        record.reasoning = Score{};
    }
    try {
        record.memory = memory_score(g1, g2);
    } catch (const IncompleteGradeVector&) {
        record.memory = Score{};
    }
}

void persist_plan(const TaskGraph& graph, const std::vector<std::string>& rulebook, const TaskPlan& plan,
                  const RunMeta& meta, const std::string& directory) {
    std::filesystem::create_directories(directory);
    std::map<std::string, std::string> files{{"graph.txt", graph.serialize()},
                                             {"rulebook.txt", rulebook_document(rulebook)},
                                             {"tasks.txt", plan.serialize(graph)}};
    for (const auto& [name, content] : files) text::write_file(path_in(directory, name), content);
    text::write_file(path_in(directory, "meta.txt"), meta_document(meta, files));
}

PlannedRun load_plan(const std::string& directory) {
    const auto pm = parse_meta(read_required(directory, "meta.txt"));
    std::map<std::string, std::string> contents;
    verify(pm, directory, kPlanFiles, contents);
    PlannedRun out;
    try {
        out.graph = TaskGraph::parse(contents["graph.txt"]);
        out.rulebook = parse_rulebook(contents["rulebook.txt"]);
        out.plan = TaskPlan::parse(contents["tasks.txt"], out.graph);
    } catch (const CorruptRunDirectory&) {
        throw;
    } catch (const Error& e) {
        throw CorruptRunDirectory(std::string("run directory ") + directory + ": " + e.what());
    }
    out.meta = pm.meta;
    return out;
}

void persist_run(const RunRecord& record, const std::string& directory) {
    std::filesystem::create_directories(directory);
    std::string transcript;
    for (const auto& x : record.transcript) {
        transcript += x.session + "|" + std::string(role_token(x.message.role)) + "|" +
                      std::string(kind_token(x.message.kind)) + "|" + text::escape_field(x.message.text) + "\n";
    }
    std::string grades;
    for (const auto& r : record.results) {
        grades += r.task_id + "|" + credit_text(r.grade.credit) + "|" + std::string(status_token(r.status)) + "|" +
                  std::to_string(r.reply_index) + "|" + text::escape_field(r.grade.rationale) + "\n";
    }
    std::string timestamps;
    for (std::size_t i = 0; i < record.timestamps.size(); ++i) {
        timestamps += std::to_string(i) + "|" + record.timestamps[i] + "\n";
    }
    std::map<std::string, std::string> files{
        {"graph.txt", record.graph.serialize()},
        {"rulebook.txt", rulebook_document(record.rulebook)},
        {"tasks.txt", record.plan.serialize(record.graph)},
        {"transcript.log", transcript},
        {"grades.txt", grades},
        {"scores.txt", "reasoning=" + record.reasoning.text() + "\nmemory=" + record.memory.text() + "\n"},
    };
    for (const auto& [name, content] : files) text::write_file(path_in(directory, name), content);
    text::write_file(path_in(directory, "timestamps.txt"), timestamps);
    text::write_file(path_in(directory, "meta.txt"), meta_document(record.meta, files));
}

RunRecord load_run(const std::string& directory) {
    const auto pm = parse_meta(read_required(directory, "meta.txt"));
    std::map<std::string, std::string> contents;
    verify(pm, directory, kContentFiles, contents);
    RunRecord record;
    record.meta = pm.meta;
    try {
        record.graph = TaskGraph::parse(contents["graph.txt"]);
        record.rulebook = parse_rulebook(contents["rulebook.txt"]);
        record.plan = TaskPlan::parse(contents["tasks.txt"], record.graph);
    } catch (const CorruptRunDirectory&) {
        throw;
    } catch (const Error& e) {
        throw CorruptRunDirectory(std::string("run directory ") + directory + ": " + e.what());
    }
    for (const auto& line : text::split(contents["transcript.log"], '\n')) {
        if (line.empty()) continue;
        const auto f = text::split(line, '|');
        const auto role = f.size() == 4 ? parse_role_token(f[1]) : std::nullopt;
        const auto kind = f.size() == 4 ? parse_kind_token(f[2]) : std::nullopt;
        if (!role || !kind) throw CorruptRunDirectory("transcript.log: bad record");
        record.transcript.push_back(Exchange{f[0], Message{*role, *kind, text::unescape_field(f[3])}});
    }
    for (const auto& line : text::split(contents["grades.txt"], '\n')) {
        if (line.empty()) continue;
        const auto f = text::split(line, '|');
        const auto credit = f.size() == 5 ? parse_credit(f[1]) : std::nullopt;
        const auto status = f.size() == 5 ? parse_status(f[2]) : std::nullopt;
        if (!credit || !status) throw CorruptRunDirectory("grades.txt: bad record");
        TaskResult r{f[0], *status, Grade{*credit, text::unescape_field(f[4])}, 0};
        try {
            r.reply_index = std::stoi(f[3]);
        } catch (const std::logic_error&) {
            throw CorruptRunDirectory("grades.txt: bad reply index");
        }
        if (r.reply_index >= static_cast<int>(record.transcript.size()) || record.plan.find(r.task_id) == nullptr) {
            throw CorruptRunDirectory("grades.txt: record does not match the transcript or tasks");
        }
        record.results.push_back(std::move(r));
    }
    const auto ts_path = path_in(directory, "timestamps.txt");
    if (std::filesystem::exists(ts_path)) {
        for (const auto& line : text::data_lines(text::read_file(ts_path))) {
            const auto bar = line.find('|');
            record.timestamps.push_back(bar == std::string::npos ? std::string() : line.substr(bar + 1));
        }
    }
    compute_scores(record);
    const auto expected = "reasoning=" + record.reasoning.text() + "\nmemory=" + record.memory.text() + "\n";
    if (expected != contents["scores.txt"]) {
        throw CorruptRunDirectory("scores.txt disagrees with grades.txt");
    }
    return record;
}

} // namespace relgraph
