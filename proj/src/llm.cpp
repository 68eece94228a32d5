#include "terra/llm.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace terra {

std::optional<std::string> chat_complete(const ChatEndpoint& endpoint,
                                         const std::string& system_text,
                                         const std::string& user_text,
                                         std::string* error) {
  using nlohmann::json;
  std::string base = endpoint.base_url;
  std::string path_prefix;
  // Split scheme://host[:port] from any path component.
  size_t scheme = base.find("://");
  size_t slash = scheme == std::string::npos ? base.find('/')
                                             : base.find('/', scheme + 3);
  if (slash != std::string::npos) {
    path_prefix = base.substr(slash);
    base = base.substr(0, slash);
  }
  if (!path_prefix.empty() && path_prefix.back() == '/') path_prefix.pop_back();

  httplib::Client client(base);
  client.set_read_timeout(endpoint.timeout_seconds, 0);
  client.set_connection_timeout(10, 0);
  httplib::Headers headers;
  if (!endpoint.api_key_env.empty()) {
    const char* key = std::getenv(endpoint.api_key_env.c_str());
    if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  json body = {
      {"model", endpoint.model},
      {"messages",
       {{{"role", "system"}, {"content", system_text}},
        {{"role", "user"}, {"content", user_text}}}},
  };
  auto res = client.Post(path_prefix + "/chat/completions", headers, body.dump(),
                         "application/json");
  if (!res) {
    if (error) *error = "transport error: " + httplib::to_string(res.error());
    return std::nullopt;
  }
  if (res->status != 200) {
    if (error) *error = "http status " + std::to_string(res->status);
    return std::nullopt;
  }
  try {
    json reply = json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const std::exception& e) {
    if (error) *error = std::string("malformed completion body: ") + e.what();
    return std::nullopt;
  }
}

}  // namespace terra
