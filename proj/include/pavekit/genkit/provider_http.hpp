#pragma once

#include <httplib.h>

#include "pavekit/genkit/provider.hpp"

namespace pavekit::genkit {

namespace detail {

struct ParsedUrl {
  std::string host_port;  // host[:port]
  std::string path;
};

inline ParsedUrl parse_http_url(const std::string& url) {
  std::string rest = url;
  const std::string prefix = "http://";
  if (rest.rfind(prefix, 0) == 0) rest = rest.substr(prefix.size());
  else if (rest.rfind("https://", 0) == 0)
    raise(Errc::ConfigError, "https endpoints are not supported; use a local http proxy");
  const auto slash = rest.find('/');
  if (slash == std::string::npos) return {rest, "/v1/chat/completions"};
  return {rest.substr(0, slash), rest.substr(slash)};
}

}  // namespace detail

class HttpProvider : public Provider {
 public:
  explicit HttpProvider(RemoteConfig config) : config_(std::move(config)) {
    if (config_.url.empty()) raise(Errc::ConfigError, "provider URL is empty");
  }

  ProviderResponse complete(const ProviderRequest& request) override {
    if (request.temperature < 0.0 || request.temperature > 2.0)
      raise(Errc::InvalidArgument, "temperature must lie in [0,2]");
    const auto [host_port, path] = detail::parse_http_url(config_.url);
    httplib::Client client(("http://" + host_port).c_str());
    client.set_read_timeout(60, 0);

    nlohmann::json body = {
        {"model", config_.model},
        {"messages",
         {{{"role", "system"}, {"content", request.system_prompt}},
          {{"role", "user"}, {"content", request.user_prompt}}}},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens}};

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto t0 = std::chrono::steady_clock::now();
    auto res = client.Post(path.c_str(), headers, body.dump(), "application/json");
    const auto elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (!res) raise(Errc::ProviderError, "no response from " + config_.url);
    if (res->status != 200)
      raise(Errc::ProviderError, "HTTP " + std::to_string(res->status) + " from " + config_.url);

    try {
      const auto reply = nlohmann::json::parse(res->body);
      const auto& choice = reply.at("choices").at(0);
      ProviderResponse out;
      out.text = choice.at("message").at("content").get<std::string>();
      out.finish_reason = choice.value("finish_reason", "stop");
      out.latency_ms = elapsed;
      if (out.text.empty()) raise(Errc::ProviderError, "empty completion text");
      return out;
    } catch (const nlohmann::json::exception& e) {
      raise(Errc::ProviderError, std::string("malformed completion payload: ") + e.what());
    }
  }

  std::string_view name() const override { return "remote"; }

 private:
  RemoteConfig config_;
};

}  // namespace pavekit::genkit
