#pragma once

#include "hive/dynamics.hpp"
#include "hive/model.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hive {

// Error raised by session operations, carrying the HTTP status it maps to.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

enum class SessionStatus { running, converged, diverged };
std::string to_string(SessionStatus status);

struct ShockRequest {
    ParamSelector param;
    double value = 0.0;

    static ShockRequest from_json(const nlohmann::json& body);
};

struct ShockLogEntry {
    double t = 0.0;
    std::string field;
    double old_value = 0.0;
    double new_value = 0.0;
    nlohmann::json prediction;  // null when no prediction was available
};

struct SessionOptions {
    double dt = 1e-2;
    double divergence_utilization = 5.0;
    double divergence_population = 1e3;
    int analyze_starts = 16;
};

// A live simulation. Operations are not internally synchronized; callers
// serialize them through mutex().
class Session {
public:
    Session(std::string id, HiveConfig config, const SessionOptions& options, std::optional<Vector> N0 = std::nullopt);

    const std::string& id() const { return id_; }

    nlohmann::json state() const;
    nlohmann::json advance(double duration);
    nlohmann::json preview_shock(const ShockRequest& request) const;
    nlohmann::json apply_shock(const ShockRequest& request);
    nlohmann::json trajectory(double from) const;
    nlohmann::json analyze() const;
    nlohmann::json shock_log() const;

    /// FNV-1a digest over config, trajectory and shock log.
    std::string digest() const;

    std::mutex& mutex() const { return mutex_; }
    void attach_log(const std::string& path);

    const HiveConfig& config() const { return config_; }
    const Trajectory& history() const { return traj_; }
    SessionStatus status() const { return status_; }

    /// Rebuilds a session by re-executing the records of an event log.
    static std::unique_ptr<Session> replay(const std::string& path);

private:
    void append_record(const nlohmann::json& record);
    nlohmann::json predict(const ShockRequest& request) const;
    nlohmann::json apply_with(const ShockRequest& request, const nlohmann::json& prediction);
    void record_state(const Vector& N, double t);

    std::string id_;
    HiveConfig config_;
    SessionOptions options_;
    Trajectory traj_;
    std::vector<int> frozen_;
    std::vector<ShockLogEntry> shocks_;
    SessionStatus status_ = SessionStatus::running;
    std::string log_path_;
    mutable std::mutex mutex_;
};

/// Serializes one record as a 4-byte little-endian length followed by the JSON text.
void write_log_record(std::ostream& out, const nlohmann::json& record);
std::vector<nlohmann::json> read_log_records(const std::string& path);

class SessionManager {
public:
    explicit SessionManager(SessionOptions defaults = {}, std::string log_dir = {});

    /// Body is a config document, or {"config": ..., "dt": ..., "initial_population": [...]}.
    nlohmann::json create(const nlohmann::json& body);
    std::shared_ptr<Session> get(const std::string& id) const;
    std::size_t size() const;

private:
    SessionOptions defaults_;
    std::string log_dir_;
    mutable std::mutex registry_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t counter_ = 0;
};

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
    std::string log_dir;
    SessionOptions session;
};

class HttpServer {
public:
    explicit HttpServer(const ServerOptions& options);
    ~HttpServer();

    /// Binds the listening socket; port 0 picks a free port. Returns the bound port.
    int bind();
    /// Serves until stop() is called.
    void listen();
    void stop();
    SessionManager& sessions();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Blocks serving HTTP until the process is stopped.
int run_server(const ServerOptions& options);

} // namespace hive
