#pragma once

#include "bikerisk/analytics/stats.hpp"
#include "bikerisk/density/grid.hpp"
#include "bikerisk/pipeline/config.hpp"
#include "bikerisk/router/router.hpp"

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace bikerisk::service {

/// Everything the handlers read. Built once, never mutated afterwards.
struct ServiceState {
  pipeline::PipelineConfig config;
  density::RiskGrid risk;     // f_R
  density::RiskGrid display;  // Box-Cox of f_R
  std::shared_ptr<const router::Router> router;
  std::vector<ingest::AccidentRecord> accidents;
  std::vector<std::string> warnings;
};

/// Loads the inputs and runs the estimation chain, or reads the precomputed
/// grid named by service.risk_grid.
std::shared_ptr<const ServiceState> build_state(const pipeline::PipelineConfig& config);

struct ListenAddress {
  std::string host;
  int port = 0;
};

/// "host:port"; a bare port binds 127.0.0.1.
ListenAddress parse_listen(const std::string& text);

class Service {
 public:
  explicit Service(pipeline::PipelineConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Builds the state on a background thread. Until it finishes every API
  /// call answers 503.
  void start_loading();
  /// Installs a ready state directly.
  void set_state(std::shared_ptr<const ServiceState> state);

  bool ready() const;
  /// Empty unless loading failed.
  std::string failure() const;

  /// Binds the configured address (port 0 picks a free one) and returns the
  /// bound port, or -1.
  int bind();
  /// Serves until stop(). Requires bind().
  bool serve();
  void stop();

  const pipeline::PipelineConfig& config() const { return config_; }

 private:
  void install_routes();
  std::shared_ptr<const ServiceState> state() const;

  pipeline::PipelineConfig config_;
  std::unique_ptr<httplib::Server> server_;
  mutable std::mutex mutex_;
  std::shared_ptr<const ServiceState> state_;
  std::string failure_;
  std::thread loader_;
};

}  // namespace bikerisk::service
