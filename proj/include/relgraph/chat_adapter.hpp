#pragma once

#include "relgraph/kinship.hpp"
#include "relgraph/surrogate_naming.hpp"
#include "relgraph/task_renderer.hpp"

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace relgraph {

enum class MessageRole : std::uint8_t { User, Assistant };
enum class MessageKind : std::uint8_t { Rulebook, Graph, Question, Reply };

std::string_view role_token(MessageRole r);
std::string_view kind_token(MessageKind k);
std::optional<MessageRole> parse_role_token(std::string_view s);
std::optional<MessageKind> parse_kind_token(std::string_view s);

struct Message {
    MessageRole role = MessageRole::User;
    MessageKind kind = MessageKind::Question;
    std::string text;

    friend bool operator==(const Message&, const Message&) = default;
};

/// A chat model. submit() answers the last message of `history`, which
/// holds the whole conversation of one session so far. Implementations
/// must accept concurrent calls for different sessions.
class ChatAdapter {
public:
    virtual ~ChatAdapter() = default;
    virtual std::string identity() const = 0;
    /// Throws AdapterFailure when no reply can be obtained.
    virtual std::string submit(const std::string& session, std::span<const Message> history) = 0;
};

/// Data an adapter may need to interpret the conversation.
struct AdapterResources {
    const TemplateSet* templates = &TemplateSet::builtin();
    const SurrogateLibrary* surrogates = &SurrogateLibrary::builtin();
    const Lexicon* lexicon = &Lexicon::builtin();
};

/// Answers from the conversation alone: rebuilds the graph from the edge
/// sentences it was told, genders from the surrogate library, and derives
/// the true answer. With `invert` it gives a wrong answer instead.
class OracleAdapter : public ChatAdapter {
public:
    explicit OracleAdapter(AdapterResources resources, bool invert = false)
        : resources_(resources), invert_(invert) {}

    std::string identity() const override { return invert_ ? "always_wrong" : "oracle"; }
    std::string submit(const std::string& session, std::span<const Message> history) override;

private:
    AdapterResources resources_;
    bool invert_;
};

class SilentAdapter : public ChatAdapter {
public:
    std::string identity() const override { return "silent"; }
    std::string submit(const std::string&, std::span<const Message>) override { return {}; }
};

/// Replays `session|reply` records: each question in a session takes the
/// next reply listed for it (empty once they run out); other messages are
/// acknowledged with "OK.".
class ScriptedAdapter : public ChatAdapter {
public:
    ScriptedAdapter(std::string name, std::string_view script);
    static std::unique_ptr<ScriptedAdapter> from_file(const std::string& path);

    std::string identity() const override { return "scripted:" + name_; }
    std::string submit(const std::string& session, std::span<const Message> history) override;

private:
    std::string name_;
    std::mutex mutex_;
    std::unordered_map<std::string, std::vector<std::string>> replies_;
    std::unordered_map<std::string, std::size_t> cursor_;
};

/// Chat-completions endpoint at ROCAR_API_BASE with bearer ROCAR_API_KEY.
class RemoteAdapter : public ChatAdapter {
public:
    RemoteAdapter(std::string base_url, std::string api_key, std::string model);
    /// Reads the endpoint and key from the environment; throws ConfigError.
    static std::unique_ptr<RemoteAdapter> from_environment(std::string model);

    std::string identity() const override { return "remote:" + model_; }
    std::string submit(const std::string& session, std::span<const Message> history) override;

private:
    std::string base_url_;
    std::string api_key_;
    std::string model_;
};

inline constexpr int kRemoteAttempts = 3;

/// oracle | always_wrong | silent | scripted:<path> | remote[:<model>].
/// Throws ConfigError for an unknown spec.
std::unique_ptr<ChatAdapter> make_adapter(std::string_view spec, AdapterResources resources = {});

} // namespace relgraph
