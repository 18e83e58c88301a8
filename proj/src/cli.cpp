#include "relgraph/cli.hpp"

#include "relgraph/embedded_data.hpp"
#include "relgraph/error.hpp"
#include "relgraph/evaluation_engine.hpp"
#include "relgraph/graph_generator.hpp"
#include "relgraph/surrogate_naming.hpp"
#include "relgraph/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>

namespace relgraph {

namespace {

std::string short_hash(std::string_view document) { return text::sha256_hex(document).substr(0, 12); }

/// Resources named by --templates/--surrogates/--lexicon, or the built-in ones.
struct Resources {
    std::optional<TemplateSet> own_templates;
    std::optional<SurrogateLibrary> own_surrogates;
    std::optional<Lexicon> own_lexicon;
    const TemplateSet* templates = &TemplateSet::builtin();
    const SurrogateLibrary* surrogates = &SurrogateLibrary::builtin();
    const Lexicon* lexicon = &Lexicon::builtin();
    std::string surrogates_id = short_hash(data::kSurrogates);
    std::string lexicon_id = short_hash(data::kLexicon);

    AdapterResources adapter_view() const { return {templates, surrogates, lexicon}; }
};

struct Flags {
    int n = 10;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string adapter;
    bool reinform = false;
    bool one_shot = false;
    std::string templates;
    std::string surrogates;
    std::string lexicon;
    std::vector<std::string> run_dirs;
};

// Resource files are configuration: a bad one is a config error, not I/O.
std::string read_config(const std::string& path) {
    try {
        return text::read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
}

Resources load_resources(const Flags& f) {
    Resources r;
    try {
        if (!f.templates.empty()) {
            r.own_templates = TemplateSet::load(read_config(f.templates), SchemaRegistry::builtin());
            r.templates = &*r.own_templates;
        }
        if (!f.surrogates.empty()) {
            const auto doc = read_config(f.surrogates);
            r.own_surrogates = SurrogateLibrary::load(doc);
            r.surrogates = &*r.own_surrogates;
            r.surrogates_id = short_hash(doc);
        }
        if (!f.lexicon.empty()) {
            const auto doc = read_config(f.lexicon);
            r.own_lexicon = Lexicon::load(doc);
            r.lexicon = &*r.own_lexicon;
            r.lexicon_id = short_hash(doc);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return r;
}

/// A run must use the resources its plan was generated with.
void check_resources(const RunMeta& meta, const Resources& r) {
    auto same = [](const std::string& recorded, const std::string& current, const char* what) {
        if (!recorded.empty() && recorded != current) {
            throw ConfigError(std::string(what) + " differ from the ones used by gen (" + recorded + " vs " +
                              current + ")");
        }
    };
    same(meta.templates, r.templates->identifier(), "templates");
    same(meta.surrogates, r.surrogates_id, "surrogates");
    same(meta.lexicon, r.lexicon_id, "lexicon");
}

void remove_stale_run_files(const std::string& dir) {
    for (const char* f : {"transcript.log", "grades.txt", "scores.txt", "timestamps.txt"}) {
        std::filesystem::remove(std::filesystem::path(dir) / f);
    }
}

int cmd_gen(const Flags& f, std::ostream& out) {
    const auto res = load_resources(f);
    const auto& registry = SchemaRegistry::builtin();
    Rng regen = make_rng(*f.seed, Stream::Regeneration);
    std::string last_failure;
    for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
        const std::uint64_t seed = attempt == 0 ? *f.seed : regen.next();
        try {
            auto graph = generate_task_graph(registry, f.n, seed);
            Rng naming = make_rng(seed, Stream::Naming);
            assign_names(graph, *res.surrogates, naming);
            const auto plan = plan_tasks(graph, seed, *res.lexicon);
            RunMeta meta;
            meta.seed = *f.seed;
            meta.templates = res.templates->identifier();
            meta.surrogates = res.surrogates_id;
            meta.lexicon = res.lexicon_id;
            remove_stale_run_files(f.out);
            persist_plan(graph, render_rulebook(registry, *res.lexicon), plan, meta, f.out);
            out << "gen: " << graph.edges().size() << " edges, " << graph.nodes().size() << " people, "
                << plan.tasks.size() << " tasks";
            if (attempt > 0) out << " (attempt " << attempt + 1 << ")";
            out << " -> " << f.out << "\n";
            return kExitOk;
        } catch (const GenerationExhausted& e) {
            last_failure = e.what();
        } catch (const DistanceUnavailable& e) {
            last_failure = e.what();
        }
    }
    throw GenerationExhausted("no usable graph after " + std::to_string(kGenerationAttempts) +
                              " attempts: " + last_failure);
}

int cmd_run(const Flags& f, std::ostream& out) {
    const auto res = load_resources(f);
    const auto planned = load_plan(f.out);
    check_resources(planned.meta, res);
    auto adapter = make_adapter(f.adapter, res.adapter_view());
    RunInputs in{&planned.graph, &planned.plan, planned.rulebook, res.templates, res.lexicon};
    auto record = run_evaluation(in, *adapter, RunOptions{f.reinform, 4});
    record.meta.seed = planned.meta.seed;
    record.meta.surrogates = res.surrogates_id;
    record.meta.lexicon = res.lexicon_id;
    persist_run(record, f.out);
    out << "run: " << record.meta.adapter << " reasoning=" << record.reasoning.text()
        << " memory=" << record.memory.text() << "\n";
    if (record.meta.adapter_failures > 0) {
        out << "run: " << record.meta.adapter_failures << " session(s) aborted by adapter failure\n";
        return kExitAdapter;
    }
    return kExitOk;
}

int cmd_grade(const Flags& f, std::ostream& out) {
    const auto res = load_resources(f);
    auto record = load_run(f.out);
    std::map<std::string, GradeOverride> overrides;
    const auto override_path = (std::filesystem::path(f.out) / "override.txt").string();
    if (std::filesystem::exists(override_path)) overrides = parse_overrides(text::read_file(override_path));
    grade_record(record, overrides, *res.lexicon);
    persist_run(record, f.out);
    out << "grade: reasoning=" << record.reasoning.text() << " memory=" << record.memory.text();
    if (!overrides.empty()) out << " (" << overrides.size() << " override(s))";
    out << "\n";
    return kExitOk;
}

int cmd_render(const Flags& f, std::ostream& out) {
    const auto res = load_resources(f);
    const auto planned = load_plan(f.out);
    out << "## rulebook\n";
    for (const auto& line : planned.rulebook) out << line << "\n";
    out << "## graph\n";
    for (const auto& line : render_graph_prompts(planned.graph, *res.templates)) out << line << "\n";
    out << "## questions\n";
    for (const auto& t : planned.plan.tasks) {
        out << t.id << ": "
            << build_question(t.form, planned.graph.name_of(t.a), planned.graph.name_of(t.b),
                              truth_for(planned.graph, t, *res.lexicon))
            << "\n";
    }
    return kExitOk;
}

int cmd_report(const Flags& f, std::ostream& out) {
    struct Row {
        std::string adapter;
        std::string reasoning;
        std::string memory;
    };
    std::vector<Row> rows;
    for (const auto& dir : f.run_dirs) {
        const auto record = load_run(dir);
        rows.push_back({record.meta.adapter, record.reasoning.text(), record.memory.text()});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.adapter < b.adapter; });
    std::size_t width = std::string("adapter").size();
    for (const auto& r : rows) width = std::max(width, r.adapter.size());
    out << std::left << std::setw(static_cast<int>(width)) << "adapter" << std::right << std::setw(10) << "score_r"
        << std::setw(10) << "score_m" << "\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(static_cast<int>(width)) << r.adapter << std::right << std::setw(10)
            << r.reasoning << std::setw(10) << r.memory << "\n";
    }
    return kExitOk;
}

void add_resource_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--templates", f.templates, "prompt template file");
    cmd->add_option("--surrogates", f.surrogates, "surrogate name file");
    cmd->add_option("--lexicon", f.lexicon, "kinship lexicon file");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Random social-relationship graph tasks for evaluating chat models", "relgraph"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a graph, rulebook and task plan");
    gen->add_option("--n", f.n, "number of basic schemas to splice")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", f.seed, "random seed")->required();
    gen->add_option("--out", f.out, "run directory")->required();
    gen->add_flag("--one-shot", f.one_shot, "run the evaluation right after generating");
    gen->add_option("--adapter", f.adapter, "adapter for --one-shot");
    gen->add_flag("--reinform", f.reinform, "resend the graph before each question (with --one-shot)");
    add_resource_flags(gen, f);

    auto* run = app.add_subcommand("run", "run both protocols against an adapter");
    run->add_option("--out", f.out, "run directory produced by gen")->required();
    run->add_option("--adapter", f.adapter, "oracle | always_wrong | scripted:PATH | remote[:MODEL]")->required();
    run->add_flag("--reinform", f.reinform, "resend the graph before each question");
    add_resource_flags(run, f);

    auto* grade = app.add_subcommand("grade", "regrade a run, applying override.txt if present");
    grade->add_option("--out", f.out, "run directory")->required();
    add_resource_flags(grade, f);

    auto* render = app.add_subcommand("render", "print the prompts and questions of a run directory");
    render->add_option("--out", f.out, "run directory")->required();
    add_resource_flags(render, f);

    auto* report = app.add_subcommand("report", "tabulate scores of completed runs");
    report->add_option("runs", f.run_dirs, "run directories")->required();

    std::vector<const char*> argv{"relgraph"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "relgraph: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (*gen) {
            if (f.one_shot && f.adapter.empty()) throw ConfigError("--one-shot needs --adapter");
            if (!f.one_shot && (!f.adapter.empty() || f.reinform)) {
                throw ConfigError("--adapter and --reinform apply to gen only with --one-shot");
            }
            const int code = cmd_gen(f, out);
            return f.one_shot && code == kExitOk ? cmd_run(f, out) : code;
        }
        if (*run) return cmd_run(f, out);
        if (*grade) return cmd_grade(f, out);
        if (*render) return cmd_render(f, out);
        return cmd_report(f, out);
    } catch (const ConfigError& e) {
        err << "relgraph: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GenerationExhausted& e) {
        err << "relgraph: " << e.what() << "\n";
        return kExitGeneration;
    } catch (const DistanceUnavailable& e) {
        err << "relgraph: " << e.what() << "\n";
        return kExitGeneration;
    } catch (const AdapterFailure& e) {
        err << "relgraph: " << e.what() << "\n";
        return kExitAdapter;
    } catch (const MalformedTaskFile& e) {
        err << "relgraph: override file: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "relgraph: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "relgraph: " << e.what() << "\n";
        return kExitIo;
    }
}

} // namespace relgraph
