#include <httplib.h>

#include <json.hpp>

#include "coedit/translate.hpp"

namespace coedit {

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
  const auto& url = config_.endpoint;
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "backend endpoint must start with http:// or https://");
  }
  const auto slash = url.find('/', scheme + 3);
  scheme_host_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

std::vector<std::string> HttpBackend::complete(const std::string& input, int n, int max_tokens) {
  httplib::Client client(scheme_host_);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  if (!config_.token.empty()) client.set_bearer_token_auth(config_.token);

  const nlohmann::json body = {{"input", input}, {"n", n}, {"max_tokens", max_tokens}};
  const auto res = client.Post(path_, body.dump(), "application/json");
  if (!res) {
    throw BackendFailure("backend connection failed: " + httplib::to_string(res.error()), true);
  }
  if (res->status == 429 || res->status >= 500) {
    throw BackendFailure("backend returned HTTP " + std::to_string(res->status), true);
  }
  if (res->status != 200) {
    throw BackendFailure("backend returned HTTP " + std::to_string(res->status), false);
  }
  try {
    const auto reply = nlohmann::json::parse(res->body);
    return reply.at("outputs").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendFailure(std::string("malformed backend reply: ") + e.what(), false);
  }
}

}  // namespace coedit
