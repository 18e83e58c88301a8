#pragma once

#include "relgraph/chat_adapter.hpp"
#include "relgraph/grading.hpp"
#include "relgraph/relation_oracle.hpp"
#include "relgraph/scoring.hpp"
#include "relgraph/task_graph.hpp"
#include "relgraph/task_renderer.hpp"

#include <map>
#include <string>
#include <vector>

namespace relgraph {

/// One question bound to a node pair. `step` is the memory step k (0 for
/// reasoning tasks).
struct QuestionTask {
    std::string id;
    Protocol protocol = Protocol::Reasoning;
    int distance = 0;
    int step = 0;
    NodeId a;
    NodeId b;
    QuestionForm form = QuestionForm::Relationship;
    std::string probe_x;
    std::string probe_y;

    std::string session() const;
    friend bool operator==(const QuestionTask&, const QuestionTask&) = default;
};

/// All questions of a run: reasoning at distances 2..5, then memory steps
/// 1..5 with one distance-1 and one distance-2 question each. Memory pairs
/// and forms are the same at every step.
struct TaskPlan {
    std::vector<QuestionTask> tasks;

    const QuestionTask* find(std::string_view id) const;
    std::string serialize(const TaskGraph& graph) const;
    /// Throws MalformedTaskFile.
    static TaskPlan parse(std::string_view document, const TaskGraph& graph);

    friend bool operator==(const TaskPlan&, const TaskPlan&) = default;
};

inline constexpr int kMemorySteps = 5;

struct PlanOptions {
    bool assertion_forms = false; // also draw forms 3 and 4
};

/// Throws DistanceUnavailable when the graph lacks a needed distance.
TaskPlan plan_tasks(const TaskGraph& graph, std::uint64_t seed, const Lexicon& lexicon = Lexicon::builtin(),
                    PlanOptions options = {});

GroundTruth truth_for(const TaskGraph& graph, const QuestionTask& task, const Lexicon& lexicon = Lexicon::builtin());

struct Exchange {
    std::string session;
    Message message;

    friend bool operator==(const Exchange&, const Exchange&) = default;
};

enum class TaskStatus : std::uint8_t { Graded, Ungraded, Skipped, Overridden };

struct TaskResult {
    std::string task_id;
    TaskStatus status = TaskStatus::Graded;
    Grade grade;
    int reply_index = -1; // position of the reply in the transcript

    friend bool operator==(const TaskResult&, const TaskResult&) = default;
};

struct RunMeta {
    std::uint64_t seed = 0;
    std::string adapter;
    std::string rubric{kRubricVersion};
    std::string templates;  // template set identifier
    std::string surrogates; // content hash prefix of the surrogate library
    std::string lexicon;    // content hash prefix of the lexicon
    bool reinform = false;
    int adapter_failures = 0;

    friend bool operator==(const RunMeta&, const RunMeta&) = default;
};

struct RunRecord {
    TaskGraph graph;
    std::vector<std::string> rulebook;
    TaskPlan plan;
    std::vector<Exchange> transcript;
    std::vector<std::string> timestamps; // parallel to transcript, kept out of checksums
    std::vector<TaskResult> results;     // plan order
    Score reasoning;
    Score memory;
    RunMeta meta;

    const TaskResult* result(std::string_view task_id) const;
    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RunOptions {
    bool reinform = false;
    int workers = 4;
};

/// What a protocol run needs besides the adapter.
struct RunInputs {
    const TaskGraph* graph = nullptr;
    const TaskPlan* plan = nullptr;
    std::vector<std::string> rulebook;
    const TemplateSet* templates = &TemplateSet::builtin();
    const Lexicon* lexicon = &Lexicon::builtin();
};

/// Four sessions, one per distance: rulebook, all edge sentences (again
/// before the question when reinforming), then the question.
RunRecord run_reasoning_protocol(const RunInputs& in, ChatAdapter& adapter, const RunOptions& options = {});

/// Five sessions, step k: rulebook, the edge sentences in k messages, then
/// the distance-1 and distance-2 questions. Steps needing more messages
/// than there are edges are skipped.
RunRecord run_memory_protocol(const RunInputs& in, ChatAdapter& adapter, const RunOptions& options = {});

/// Both protocols, graded and scored; sessions run on a worker pool and are
/// merged in plan order.
RunRecord run_evaluation(const RunInputs& in, ChatAdapter& adapter, const RunOptions& options = {});

/// (Re)grades every answered task from its stored reply, then applies
/// overrides and recomputes scores.
void grade_record(RunRecord& record, const std::map<std::string, GradeOverride>& overrides = {},
                  const Lexicon& lexicon = Lexicon::builtin(), const Rubric& rubric = Rubric{});
void compute_scores(RunRecord& record);

/// Writes graph.txt, rulebook.txt, tasks.txt, transcript.log, grades.txt,
/// scores.txt, timestamps.txt and meta.txt (with checksums of the others).
void persist_run(const RunRecord& record, const std::string& directory);
/// Throws CorruptRunDirectory on missing files or checksum mismatch.
RunRecord load_run(const std::string& directory);

/// Files written before any model is contacted: graph, rulebook, tasks and
/// a meta file with their checksums.
void persist_plan(const TaskGraph& graph, const std::vector<std::string>& rulebook, const TaskPlan& plan,
                  const RunMeta& meta, const std::string& directory);
struct PlannedRun {
    TaskGraph graph;
    std::vector<std::string> rulebook;
    TaskPlan plan;
    RunMeta meta;
};
PlannedRun load_plan(const std::string& directory);

} // namespace relgraph
