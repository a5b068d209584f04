#include "visforge/workspace/app_server.hpp"

#include <httplib.h>

#include <chrono>

#include "visforge/error.hpp"

namespace visforge::ws {

AppServer AppServer::serve(const fs::path& root_dir, int port_min,
                           int port_max) {
  if (!fs::exists(root_dir / "index.html"))
    raise(ErrorCode::NoEntryPage,
          "no index.html under " + root_dir.string());

  AppServer app;
  app.server_ = std::make_shared<httplib::Server>();
  if (!app.server_->set_mount_point("/", root_dir.string()))
    raise(ErrorCode::IoFailure, "cannot mount " + root_dir.string());

  int port = -1;
  if (port_min > 0) {
    for (int p = port_min; p <= std::max(port_min, port_max); ++p) {
      if (app.server_->bind_to_port("127.0.0.1", p)) {
        port = p;
        break;
      }
    }
  } else {
    port = app.server_->bind_to_any_port("127.0.0.1");
  }
  if (port <= 0)
    raise(ErrorCode::BindFailure, "no free port for " + root_dir.string());
  app.port_ = port;

  auto server = app.server_;
  app.thread_ = std::thread([server] { server->listen_after_bind(); });

  // listen_after_bind needs a beat before is_running flips.
  for (int i = 0; i < 200 && !server->is_running(); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  if (!server->is_running())
    raise(ErrorCode::BindFailure, "server failed to start");
  return app;
}

AppServer::AppServer(AppServer&& other) noexcept { *this = std::move(other); }

AppServer& AppServer::operator=(AppServer&& other) noexcept {
  if (this != &other) {
    stop();
    server_ = std::move(other.server_);
    thread_ = std::move(other.thread_);
    port_ = other.port_;
    other.port_ = 0;
  }
  return *this;
}

AppServer::~AppServer() { stop(); }

std::string AppServer::url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

bool AppServer::healthy() const { return server_ && server_->is_running(); }

void AppServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
  server_.reset();
  port_ = 0;
}

}  // namespace visforge::ws
