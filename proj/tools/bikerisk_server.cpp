#include "bikerisk/error.hpp"
#include "bikerisk/pipeline/config.hpp"
#include "bikerisk/service/service.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

namespace {

bikerisk::service::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  std::string config_path = "config/synthetic_city.json";
  std::string listen;
  int threads = -1;
  CLI::App app{"HTTP service for risk maps and route queries", "bikerisk-server"};
  app.add_option("--config", config_path, "Pipeline config file")->capture_default_str();
  app.add_option("--listen", listen, "host:port, overrides the config and BIKERISK_LISTEN");
  app.add_option("--threads", threads, "Estimation threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  try {
    auto overrides = bikerisk::pipeline::environment_overrides();
    if (!listen.empty()) overrides.listen = listen;
    auto config = bikerisk::pipeline::load_config(config_path, overrides);
    if (threads >= 0) config.threads = static_cast<unsigned>(threads);

    bikerisk::service::Service service(config);
    const int port = service.bind();
    if (port < 0) {
      std::cerr << "error: cannot bind " << config.service.listen << "\n";
      return 2;
    }
    std::cerr << "listening on port " << port << ", estimating risk surface\n";
    g_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    const auto started = std::chrono::steady_clock::now();
    service.start_loading();
    std::thread watcher([&service, started] {
      while (!service.ready() && service.failure().empty()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
      if (service.ready()) {
        std::cerr << "ready after " << secs.count() << " s\n";
      } else {
        std::cerr << "estimation failed: " << service.failure() << "\n";
      }
    });
    const bool ok = service.serve();
    watcher.join();
    g_service = nullptr;
    return ok ? 0 : 2;
  } catch (const bikerisk::ValidationError& e) {
    std::cerr << "error (invalid input): " << e.what() << "\n";
    return 1;
  } catch (const bikerisk::Error& e) {
    std::cerr << "error (data): " << e.what() << "\n";
    return 2;
  }
}
