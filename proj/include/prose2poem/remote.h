#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>

#include "prose2poem/predictor.h"

namespace prose2poem {

inline constexpr const char* kEndpointEnv = "PROSE2POEM_ENDPOINT";

// The endpoint to use: the environment variable when set and non-empty,
// otherwise `flag`.
std::string resolve_endpoint(const std::string& flag);

struct RemoteOptions {
  std::chrono::milliseconds timeout{10000};  // per attempt
  int retries = 2;                           // extra attempts after a transport failure
};

struct HealthStatus {
  std::string status;
  std::string model;
};

// Client of the fill-mask wire protocol. Every call opens its own
// connection, so concurrent requests are independent.
//
// Errors: NoMaskError before any network traffic; TransportError (with the
// attempt count) when the server cannot be reached or times out; an
// HttpStatusError for any non-200 status; ProtocolError for a body that does
// not parse or violates the prediction invariants.
class RemotePredictor : public MaskPredictor {
 public:
  explicit RemotePredictor(std::string endpoint, RemoteOptions options = {});

  std::vector<MaskPrediction> predict(std::span<const std::string> tokens,
                                      std::size_t top_k) const override;
  std::string name() const override { return "remote"; }

  HealthStatus health() const;
  const std::string& endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
  std::string origin_;  // scheme://host:port
  std::string prefix_;  // path prefix without trailing slash
  RemoteOptions options_;
};

// In-process HTTP server speaking the same protocol, backed by any
// predictor. With a null predictor every fill-mask request gets 503, which
// mimics a service whose model failed to load. Requests with top_k above
// `max_top_k` are clamped.
class FillMaskServer {
 public:
  FillMaskServer(const MaskPredictor* predictor, std::string model_name,
                 std::size_t max_top_k = 1000);
  ~FillMaskServer();

  FillMaskServer(const FillMaskServer&) = delete;
  FillMaskServer& operator=(const FillMaskServer&) = delete;

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port. Throws IoError when binding fails.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  // Serves on the calling thread until stop() is called from elsewhere.
  void serve(const std::string& host, int port);
  void stop();

  std::string endpoint() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace prose2poem
