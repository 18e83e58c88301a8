#define CPPHTTPLIB_OPENSSL_SUPPORT // must match the library's view of httplib
#include <httplib.h>
#include <json.hpp>

#include "fixtures.hpp"

#include "relgraph/chat_adapter.hpp"
#include "relgraph/error.hpp"
#include "relgraph/task_renderer.hpp"
#include "relgraph/text.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <thread>

using namespace relgraph;

namespace {

Message user(MessageKind k, std::string t) { return Message{MessageRole::User, k, std::move(t)}; }

std::vector<Message> conversation(const TaskGraph& g, const std::string& question) {
    return {user(MessageKind::Rulebook, "rules"), user(MessageKind::Graph, text::join(render_graph_prompts(g), "\n")),
            user(MessageKind::Question, question)};
}

/// Local chat-completions endpoint; `fail_first` requests get `status`.
class FakeEndpoint {
public:
    FakeEndpoint(int fail_first, int status) : fail_first_(fail_first), status_(status) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            last_auth_ = req.get_header_value("Authorization");
            last_body_ = req.body;
            if (requests_ <= fail_first_) {
                res.status = status_;
                res.set_content("{}", "application/json");
                return;
            }
            const auto body = nlohmann::json::parse(req.body);
            nlohmann::json reply;
            reply["choices"][0]["message"]["content"] =
                "echo: " + body["messages"].back()["content"].get<std::string>();
            res.set_content(reply.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint() {
        server_.stop();
        thread_.join();
    }

    std::string base() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
    int requests() const { return requests_; }
    std::string last_auth() const { return last_auth_; }
    std::string last_body() const { return last_body_; }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    int fail_first_;
    int status_;
    std::atomic<int> requests_{0};
    std::string last_auth_;
    std::string last_body_;
};

} // namespace

TEST(ChatAdapter, TokensRoundTrip) {
    for (const auto k : {MessageKind::Rulebook, MessageKind::Graph, MessageKind::Question, MessageKind::Reply}) {
        EXPECT_EQ(parse_kind_token(kind_token(k)), k);
    }
    for (const auto r : {MessageRole::User, MessageRole::Assistant}) EXPECT_EQ(parse_role_token(role_token(r)), r);
    EXPECT_FALSE(parse_kind_token("nope").has_value());
}

TEST(ChatAdapter, OracleAnswersFromTheConversationAlone) {
    const auto g = testkit::family_graph();
    OracleAdapter oracle({}, false);
    EXPECT_EQ(oracle.submit("s", conversation(g, "What should Xiaoming call Jianguo?")),
              "Xiaoming should call Jianguo maternal grandfather.");
    EXPECT_EQ(oracle.submit("s", conversation(g, "What's the relationship between Xiaoming and Jianguo?")),
              "Jianguo is Xiaoming's maternal grandfather.");
    EXPECT_EQ(oracle.submit("s", conversation(g, "Is there a mother-son relationship between Xiaoming and Meiling?")),
              "Yes.");
    EXPECT_EQ(oracle.submit("s", conversation(g, "Should Xiaoming call Uncle Meiling?")), "No.");
    const std::vector<Message> ack = {user(MessageKind::Graph, "Xiaohong is Xiaoming's third student.")};
    EXPECT_EQ(oracle.submit("s", ack), "OK.");
    OracleAdapter wrong({}, true);
    EXPECT_EQ(wrong.submit("s", conversation(g, "Should Xiaoming call Uncle Meiling?")), "Yes.");
    EXPECT_EQ(wrong.identity(), "always_wrong");
}

TEST(ChatAdapter, ScriptedRepliesPerSession) {
    ScriptedAdapter s("fixture", "# replies\nmemory-k1|first\nmemory-k1|second\\nline\nreasoning-d2|only\n");
    const std::vector<Message> q = {user(MessageKind::Question, "?")};
    const std::vector<Message> g = {user(MessageKind::Graph, "x")};
    EXPECT_EQ(s.submit("memory-k1", g), "OK.");
    EXPECT_EQ(s.submit("memory-k1", q), "first");
    EXPECT_EQ(s.submit("reasoning-d2", q), "only");
    EXPECT_EQ(s.submit("memory-k1", q), "second\nline");
    EXPECT_EQ(s.submit("memory-k1", q), "");
    EXPECT_EQ(s.identity(), "scripted:fixture");
    EXPECT_THROW(ScriptedAdapter("bad", "no bar here\n"), ConfigError);
}

TEST(ChatAdapter, Factory) {
    EXPECT_EQ(make_adapter("oracle")->identity(), "oracle");
    EXPECT_EQ(make_adapter("always_wrong")->identity(), "always_wrong");
    EXPECT_EQ(make_adapter("silent")->identity(), "silent");
    EXPECT_THROW(make_adapter("gpt"), ConfigError);
    EXPECT_THROW(make_adapter("scripted:/nonexistent/replies.txt"), ConfigError);
    const auto path = std::filesystem::temp_directory_path() / "relgraph-replies.txt";
    text::write_file(path.string(), "reasoning-d2|hello\n");
    EXPECT_EQ(make_adapter("scripted:" + path.string())->identity(), "scripted:relgraph-replies.txt");
}

TEST(ChatAdapter, RemoteNeedsEnvironment) {
    ::unsetenv("ROCAR_API_BASE");
    ::unsetenv("ROCAR_API_KEY");
    EXPECT_THROW(make_adapter("remote"), ConfigError);
}

TEST(ChatAdapter, RemoteRoundTrip) {
    FakeEndpoint endpoint(0, 200);
    ::setenv("ROCAR_API_BASE", endpoint.base().c_str(), 1);
    ::setenv("ROCAR_API_KEY", "secret", 1);
    auto remote = make_adapter("remote:test-model");
    EXPECT_EQ(remote->identity(), "remote:test-model");
    const std::vector<Message> history = {user(MessageKind::Rulebook, "rules"),
                                          Message{MessageRole::Assistant, MessageKind::Reply, "OK."},
                                          user(MessageKind::Question, "Who?")};
    EXPECT_EQ(remote->submit("s", history), "echo: Who?");
    EXPECT_EQ(endpoint.last_auth(), "Bearer secret");
    const auto body = nlohmann::json::parse(endpoint.last_body());
    EXPECT_EQ(body["model"], "test-model");
    ASSERT_EQ(body["messages"].size(), 3u);
    EXPECT_EQ(body["messages"][1]["role"], "assistant");
}

TEST(ChatAdapter, RemoteRetriesServerErrors) {
    FakeEndpoint endpoint(1, 503);
    RemoteAdapter remote(endpoint.base(), "k", "m");
    EXPECT_EQ(remote.submit("s", std::vector<Message>{user(MessageKind::Question, "hi")}), "echo: hi");
    EXPECT_EQ(endpoint.requests(), 2);
}

TEST(ChatAdapter, RemoteGivesUpOnClientErrors) {
    FakeEndpoint endpoint(10, 401);
    RemoteAdapter remote(endpoint.base(), "k", "m");
    EXPECT_THROW(remote.submit("s", std::vector<Message>{user(MessageKind::Question, "hi")}), AdapterFailure);
    EXPECT_EQ(endpoint.requests(), 1);
}
