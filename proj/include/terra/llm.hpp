// Minimal OpenAI-compatible chat completion client.
#pragma once

#include <optional>
#include <string>

namespace terra {

struct ChatEndpoint {
  std::string base_url;  // e.g. http://localhost:8000/v1
  std::string model;
  std::string api_key_env;  // env var holding the bearer token
  int timeout_seconds = 120;
};

// Returns the assistant message content, or nullopt with *error filled.
std::optional<std::string> chat_complete(const ChatEndpoint& endpoint,
                                         const std::string& system_text,
                                         const std::string& user_text,
                                         std::string* error);

}  // namespace terra
