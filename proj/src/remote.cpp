#include "prose2poem/remote.h"

#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "prose2poem/error.h"
#include "prose2poem/text.h"

namespace prose2poem {

using nlohmann::json;

namespace {

void set_timeouts(httplib::Client& client, std::chrono::milliseconds timeout) {
  const auto sec = static_cast<time_t>(timeout.count() / 1000);
  const auto usec = static_cast<time_t>((timeout.count() % 1000) * 1000);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
}

std::vector<MaskPrediction> parse_predictions(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("predictions") || !doc["predictions"].is_array()) {
    throw ProtocolError("response lacks a \"predictions\" array");
  }
  std::vector<MaskPrediction> out;
  for (const auto& p : doc["predictions"]) {
    if (!p.is_object() || !p.contains("position") || !p["position"].is_number_unsigned() ||
        !p.contains("candidates") || !p["candidates"].is_array()) {
      throw ProtocolError("malformed prediction entry: " + p.dump());
    }
    MaskPrediction mp;
    mp.position = p["position"].get<std::size_t>();
    for (const auto& c : p["candidates"]) {
      if (!c.is_object() || !c.contains("token") || !c["token"].is_string() ||
          !c.contains("log_prob") || !c["log_prob"].is_number()) {
        throw ProtocolError("malformed candidate: " + c.dump());
      }
      mp.candidates.push_back({c["token"].get<std::string>(), c["log_prob"].get<double>()});
    }
    out.push_back(std::move(mp));
  }
  return out;
}

json predictions_to_json(const std::vector<MaskPrediction>& predictions) {
  json list = json::array();
  for (const auto& p : predictions) {
    json cands = json::array();
    for (const auto& c : p.candidates) cands.push_back({{"token", c.token}, {"log_prob", c.log_prob}});
    list.push_back({{"position", p.position}, {"candidates", std::move(cands)}});
  }
  return list;
}

}  // namespace

std::string resolve_endpoint(const std::string& flag) {
  const char* env = std::getenv(kEndpointEnv);
  if (env != nullptr && *env != '\0') return env;
  return flag;
}

RemotePredictor::RemotePredictor(std::string endpoint, RemoteOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
  if (endpoint_.empty()) throw Error("remote predictor needs an endpoint");
  if (options_.retries < 0) throw Error("retries must be non-negative");
  if (options_.timeout.count() <= 0) throw Error("timeout must be positive");
  std::string rest = endpoint_;
  const auto scheme = rest.find("://");
  const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const auto slash = rest.find('/', host_start);
  origin_ = rest.substr(0, slash);
  if (scheme == std::string::npos) origin_ = "http://" + origin_;
  prefix_ = slash == std::string::npos ? "" : rest.substr(slash);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

std::vector<MaskPrediction> RemotePredictor::predict(std::span<const std::string> tokens,
                                                     std::size_t top_k) const {
  if (top_k == 0) throw Error("top_k must be at least 1");
  if (mask_positions(tokens).empty()) throw NoMaskError();

  const json request = {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())},
                        {"mask_token", kMaskToken},
                        {"top_k", top_k}};
  const std::string body = request.dump();
  const int attempts = options_.retries + 1;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client client(origin_);
    set_timeouts(client, options_.timeout);
    auto res = client.Post(prefix_ + "/v1/fill-mask", body, "application/json");
    if (!res) {
      last_error = "fill-mask request to " + endpoint_ + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) throw HttpStatusError(res->status, res->body);
    auto predictions = parse_predictions(res->body);
    validate_predictions(tokens, top_k, predictions);
    return predictions;
  }
  throw TransportError(last_error, attempts);
}

HealthStatus RemotePredictor::health() const {
  const int attempts = options_.retries + 1;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client client(origin_);
    set_timeouts(client, options_.timeout);
    auto res = client.Get(prefix_ + "/v1/health");
    if (!res) {
      last_error = "health request to " + endpoint_ + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) throw HttpStatusError(res->status, res->body);
    try {
      const auto doc = json::parse(res->body);
      return {doc.at("status").get<std::string>(), doc.at("model").get<std::string>()};
    } catch (const json::exception& e) {
      throw ProtocolError(std::string("malformed health response: ") + e.what());
    }
  }
  throw TransportError(last_error, attempts);
}

struct FillMaskServer::Impl {
  const MaskPredictor* predictor;
  std::string model;
  std::size_t max_top_k;
  httplib::Server server;
  std::thread thread;
  std::string host;
  int port = 0;

  void install() {
    server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(json({{"status", "ok"}, {"model", model}}).dump(), "application/json");
    });
    server.Post("/v1/fill-mask", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res);
    });
  }

  static void fail(httplib::Response& res, int status, const std::string& detail) {
    res.status = status;
    res.set_content(json({{"error", detail}}).dump(), "application/json");
  }

  void handle(const httplib::Request& req, httplib::Response& res) const {
    json doc;
    try {
      doc = json::parse(req.body);
    } catch (const json::exception&) {
      return fail(res, 400, "body is not JSON");
    }
    if (!doc.is_object() || !doc.contains("tokens") || !doc["tokens"].is_array()) {
      return fail(res, 400, "\"tokens\" must be an array of strings");
    }
    std::string mask = std::string(kMaskToken);
    if (doc.contains("mask_token")) {
      if (!doc["mask_token"].is_string()) return fail(res, 400, "\"mask_token\" must be a string");
      mask = doc["mask_token"].get<std::string>();
    }
    std::size_t top_k = 0;
    if (!doc.contains("top_k") || !doc["top_k"].is_number_unsigned() ||
        (top_k = doc["top_k"].get<std::size_t>()) == 0) {
      return fail(res, 400, "\"top_k\" must be a positive integer");
    }
    std::vector<std::string> tokens;
    bool has_mask = false;
    for (const auto& t : doc["tokens"]) {
      if (!t.is_string()) return fail(res, 400, "\"tokens\" must be an array of strings");
      auto s = t.get<std::string>();
      if (s == mask) {
        s = std::string(kMaskToken);
        has_mask = true;
      }
      tokens.push_back(std::move(s));
    }
    if (!has_mask) return fail(res, 422, "no mask token in sequence");
    if (predictor == nullptr) return fail(res, 503, "model not loaded");

    json out;
    if (top_k > max_top_k) {
      out["top_k_clamped_from"] = top_k;
      top_k = max_top_k;
    }
    try {
      out["predictions"] = predictions_to_json(predictor->predict(tokens, top_k));
    } catch (const std::exception& e) {
      return fail(res, 500, e.what());
    }
    res.set_content(out.dump(), "application/json");
  }
};

FillMaskServer::FillMaskServer(const MaskPredictor* predictor, std::string model_name,
                               std::size_t max_top_k)
    : impl_(std::make_unique<Impl>()) {
  if (max_top_k == 0) throw Error("max top_k must be at least 1");
  impl_->predictor = predictor;
  impl_->model = std::move(model_name);
  impl_->max_top_k = max_top_k;
  impl_->install();
}

FillMaskServer::~FillMaskServer() { stop(); }

int FillMaskServer::start(const std::string& host, int port) {
  if (impl_->thread.joinable()) throw Error("server already running");
  impl_->host = host;
  impl_->port = port == 0 ? impl_->server.bind_to_any_port(host) : port;
  if (impl_->port < 0 || (port != 0 && !impl_->server.bind_to_port(host, port))) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void FillMaskServer::serve(const std::string& host, int port) {
  impl_->host = host;
  impl_->port = port;
  if (!impl_->server.bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->server.listen_after_bind();
}

void FillMaskServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string FillMaskServer::endpoint() const {
  return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

}  // namespace prose2poem
