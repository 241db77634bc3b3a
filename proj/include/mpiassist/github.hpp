#pragma once

#include <chrono>
#include <ctime>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "mpiassist/errors.hpp"

namespace mpiassist {

struct RepoSearchOptions {
    std::string base_url = "https://api.github.com";
    int per_page = 100;
    int max_results = 1000;  // the search API stops serving results here
    int max_retries = 3;
    int max_wait_s = 120;    // longer Retry-After values fail immediately
    std::function<void(int)> sleep = [](int s) { std::this_thread::sleep_for(std::chrono::seconds(s)); };
};

namespace detail {

inline int retry_after_seconds(const httplib::Result& res) {
    if (res->has_header("Retry-After")) {
        try {
            return std::max(0, std::stoi(res->get_header_value("Retry-After")));
        } catch (const std::exception&) {
        }
    }
    if (res->has_header("X-RateLimit-Reset")) {
        try {
            const long long reset = std::stoll(res->get_header_value("X-RateLimit-Reset"));
            return static_cast<int>(std::max<long long>(0, reset - static_cast<long long>(std::time(nullptr))));
        } catch (const std::exception&) {
        }
    }
    return 60;
}

inline bool is_rate_limited(const httplib::Result& res) {
    if (res->status == 429) return true;
    if (res->status != 403) return false;
    return res->has_header("Retry-After") ||
           (res->has_header("X-RateLimit-Remaining") && res->get_header_value("X-RateLimit-Remaining") == "0");
}

} // namespace detail

/// Clone URLs of repositories whose name, description or README mention
/// `query`, paging through the repository search endpoint.
inline std::vector<std::string> fetch_repo_list(const std::string& query, const std::string& token,
                                                const RepoSearchOptions& opt = {}) {
    httplib::Client client(opt.base_url);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    client.set_follow_location(true);
    httplib::Headers headers = {{"Accept", "application/vnd.github+json"}, {"User-Agent", "mpiassist"}};
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);

    std::vector<std::string> urls;
    for (int page = 1;; ++page) {
        const httplib::Params params = {{"q", query + " in:name,description,readme"},
                                        {"per_page", std::to_string(opt.per_page)},
                                        {"page", std::to_string(page)}};
        httplib::Result res;
        for (int attempt = 0;; ++attempt) {
            res = client.Get("/search/repositories", params, headers);
            if (!res) throw HttpError(0, httplib::to_string(res.error()));
            if (!detail::is_rate_limited(res)) break;
            const int wait = detail::retry_after_seconds(res);
            if (attempt >= opt.max_retries || wait > opt.max_wait_s) throw RateLimitedError(wait);
            opt.sleep(wait);
        }
        if (res->status != 200) throw HttpError(res->status, res->body);
        nlohmann::json body;
        try {
            body = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw HttpError(res->status, std::string("malformed response: ") + e.what());
        }
        const auto& items = body.value("items", nlohmann::json::array());
        for (const auto& item : items) {
            if (item.contains("clone_url") && item["clone_url"].is_string()) {
                urls.push_back(item["clone_url"].get<std::string>());
            }
        }
        const long long total = body.value("total_count", 0LL);
        const long long seen = static_cast<long long>(page) * opt.per_page;
        if (items.size() < static_cast<std::size_t>(opt.per_page) || seen >= total || seen >= opt.max_results) break;
    }
    return urls;
}

} // namespace mpiassist
