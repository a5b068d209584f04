#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace visforge::ws {

namespace fs = std::filesystem;

/// Serves a generated app directory over a local ephemeral port for
/// browser validation. Static files only: apps that need a data backend
/// must pre-bake their data (the planner templates state this constraint).
class AppServer {
 public:
  /// Requires an index.html entry page. With port_min/port_max given,
  /// binds the first free port in the range; otherwise any free port.
  /// Throws NoEntryPage or BindFailure.
  static AppServer serve(const fs::path& root_dir, int port_min = 0,
                         int port_max = 0);

  AppServer(AppServer&&) noexcept;
  AppServer& operator=(AppServer&&) noexcept;
  ~AppServer();

  std::string url() const;  ///< e.g. "http://127.0.0.1:41023"
  int port() const { return port_; }
  bool healthy() const;
  void stop();

 private:
  AppServer() = default;

  std::shared_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace visforge::ws
