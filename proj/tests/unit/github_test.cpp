#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "mpiassist/github.hpp"

using namespace mpiassist;

namespace {

class MockApi {
public:
    explicit MockApi(httplib::Server::Handler handler) {
        server_.Get("/search/repositories", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockApi() {
        server_.stop();
        thread_.join();
    }
    RepoSearchOptions options() const {
        RepoSearchOptions opt;
        opt.base_url = "http://127.0.0.1:" + std::to_string(port_);
        opt.sleep = [](int) {};
        return opt;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

std::string page(std::initializer_list<const char*> urls, int total) {
    nlohmann::json items = nlohmann::json::array();
    for (const char* u : urls) items.push_back({{"clone_url", u}, {"name", "x"}});
    return nlohmann::json{{"total_count", total}, {"items", items}}.dump();
}

} // namespace

TEST(RepoSearch, TwoRepositories) {
    std::string seen_query;
    std::string seen_auth;
    MockApi api([&](const httplib::Request& req, httplib::Response& res) {
        seen_query = req.get_param_value("q");
        seen_auth = req.get_header_value("Authorization");
        res.set_content(page({"https://github.com/a/one.git", "https://github.com/b/two.git"}, 2), "application/json");
    });
    const auto urls = fetch_repo_list("MPI", "tok", api.options());
    EXPECT_EQ(urls, (std::vector<std::string>{"https://github.com/a/one.git", "https://github.com/b/two.git"}));
    EXPECT_EQ(seen_query, "MPI in:name,description,readme");
    EXPECT_EQ(seen_auth, "Bearer tok");
}

TEST(RepoSearch, EmptyResult) {
    MockApi api([](const httplib::Request&, httplib::Response& res) { res.set_content(page({}, 0), "application/json"); });
    EXPECT_TRUE(fetch_repo_list("MPI", "", api.options()).empty());
}

TEST(RepoSearch, Unauthorized) {
    MockApi api([](const httplib::Request&, httplib::Response& res) {
        res.status = 401;
        res.set_content("{\"message\":\"Bad credentials\"}", "application/json");
    });
    try {
        fetch_repo_list("MPI", "bad", api.options());
        FAIL() << "expected HttpError";
    } catch (const HttpError& e) {
        EXPECT_EQ(e.status(), 401);
    }
}

TEST(RepoSearch, RetriesAfterRateLimit) {
    std::atomic<int> calls{0};
    MockApi api([&](const httplib::Request&, httplib::Response& res) {
        if (calls++ == 0) {
            res.status = 429;
            res.set_header("Retry-After", "2");
            return;
        }
        res.set_content(page({"https://github.com/a/one.git"}, 1), "application/json");
    });
    std::vector<int> waits;
    auto opt = api.options();
    opt.sleep = [&](int s) { waits.push_back(s); };
    EXPECT_EQ(fetch_repo_list("MPI", "", opt).size(), 1u);
    EXPECT_EQ(waits, std::vector<int>{2});
}

TEST(RepoSearch, GivesUpOnLongWait) {
    MockApi api([](const httplib::Request&, httplib::Response& res) {
        res.status = 403;
        res.set_header("Retry-After", "3600");
    });
    EXPECT_THROW(fetch_repo_list("MPI", "", api.options()), RateLimitedError);
}

TEST(RepoSearch, Paging) {
    MockApi api([](const httplib::Request& req, httplib::Response& res) {
        const int p = std::stoi(req.get_param_value("page"));
        EXPECT_EQ(req.get_param_value("per_page"), "2");
        if (p == 1) res.set_content(page({"u1", "u2"}, 5), "application/json");
        else if (p == 2) res.set_content(page({"u3", "u4"}, 5), "application/json");
        else res.set_content(page({"u5"}, 5), "application/json");
    });
    auto opt = api.options();
    opt.per_page = 2;
    EXPECT_EQ(fetch_repo_list("MPI", "", opt), (std::vector<std::string>{"u1", "u2", "u3", "u4", "u5"}));
    opt.max_results = 4;
    EXPECT_EQ(fetch_repo_list("MPI", "", opt).size(), 4u);
}

TEST(RepoSearch, MalformedBody) {
    MockApi api([](const httplib::Request&, httplib::Response& res) { res.set_content("not json", "text/plain"); });
    EXPECT_THROW(fetch_repo_list("MPI", "", api.options()), HttpError);
}

TEST(RepoSearch, ConnectionRefused) {
    RepoSearchOptions opt;
    opt.base_url = "http://127.0.0.1:1";
    EXPECT_THROW(fetch_repo_list("MPI", "", opt), HttpError);
}
