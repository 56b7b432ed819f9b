#include "hive/service.hpp"
#include "hive/equilibrium.hpp"
#include "hive/errors.hpp"
#include "hive/spectral.hpp"
#include "hive/statics.hpp"

#include "httplib.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace hive {

using nlohmann::json;

namespace {

json to_json(const Vector& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(std::isfinite(v[i]) ? json(v[i]) : json(nullptr));
    return a;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Vector vector_from(const json& a, const char* field)
{
    if (!a.is_array()) throw ServiceError(400, std::string(field) + ": expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) throw ServiceError(400, std::string(field) + ": expected an array of numbers");
        v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    }
    return v;
}

json eigen_json(const std::vector<Complex>& ev)
{
    json a = json::array();
    for (const auto& z : ev) a.push_back({z.real(), z.imag()});
    return a;
}

double local_abscissa(const HiveConfig& cfg, const Vector& N, const Vector& V)
{
    std::vector<int> active;
    for (Eigen::Index j = 0; j < N.size(); ++j)
        if (N[j] > 0.0) active.push_back(static_cast<int>(j));
    if (active.empty()) return std::numeric_limits<double>::quiet_NaN();
    Matrix D = value_jacobian(cfg, N, active);
    for (std::size_t r = 0; r < active.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(r);
        D.row(i) *= N[active[r]];
        D(i, i) += V[active[r]];
    }
    std::vector<Complex> ev;
    const Eigen::VectorXcd values = Eigen::EigenSolver<Matrix>(D, false).eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) ev.push_back(values[i]);
    return classify_spectrum(ev).spectral_abscissa;
}

class Fnv {
public:
    void bytes(const void* p, std::size_t n)
    {
        const auto* c = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= c[i];
            h_ *= 0x100000001b3ULL;
        }
    }
    void number(double v) { bytes(&v, sizeof v); }
    void text(const std::string& s) { bytes(s.data(), s.size()); }
    std::string hex() const
    {
        std::ostringstream os;
        os << std::hex << std::setw(16) << std::setfill('0') << h_;
        return os.str();
    }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

} // namespace

std::string to_string(SessionStatus s)
{
    switch (s) {
    case SessionStatus::running: return "running";
    case SessionStatus::converged: return "converged";
    case SessionStatus::diverged: return "diverged";
    }
    return "running";
}

ShockRequest ShockRequest::from_json(const json& body)
{
    if (!body.is_object()) throw ServiceError(400, "shock: expected an object");
    const char* key = body.contains("field") ? "field" : "param";
    if (!body.contains(key) || !body.at(key).is_string()) throw ServiceError(400, "shock: missing string 'field'");
    if (!body.contains("value") || !body.at("value").is_number()) throw ServiceError(400, "shock: missing numeric 'value'");
    ShockRequest r;
    try {
        r.param = ParamSelector::parse(body.at(key).get<std::string>());
    } catch (const DomainError& e) {
        throw ServiceError(400, e.what());
    }
    using K = ParamSelector::Kind;
    if (r.param.kind != K::w && r.param.kind != K::R && r.param.kind != K::B && r.param.kind != K::gamma_entry)
        throw ServiceError(400, "shock: field must be w[j], R[m], B or gamma[j,k]");
    r.value = body.at("value").get<double>();
    return r;
}

void write_log_record(std::ostream& out, const json& record)
{
    const std::string text = record.dump();
    const auto n = static_cast<std::uint32_t>(text.size());
    const unsigned char len[4] = {static_cast<unsigned char>(n & 0xff), static_cast<unsigned char>((n >> 8) & 0xff),
                                  static_cast<unsigned char>((n >> 16) & 0xff), static_cast<unsigned char>(n >> 24)};
    out.write(reinterpret_cast<const char*>(len), 4);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
}

std::vector<json> read_log_records(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedDocument("cannot open event log '" + path + "'");
    std::vector<json> out;
    unsigned char len[4];
    while (in.read(reinterpret_cast<char*>(len), 4)) {
        const std::uint32_t n = len[0] | (len[1] << 8) | (len[2] << 16) | (static_cast<std::uint32_t>(len[3]) << 24);
        std::string text(n, '\0');
        if (!in.read(text.data(), n)) throw MalformedDocument("event log truncated");
        out.push_back(json::parse(text));
    }
    return out;
}

Session::Session(std::string id, HiveConfig config, const SessionOptions& options, std::optional<Vector> N0)
    : id_(std::move(id)), config_(std::move(config)), options_(options)
{
    if (!(options_.dt > 0.0)) throw ServiceError(400, "dt must be > 0");
    const Vector start = N0 ? *N0 : default_start(config_);
    if (start.size() != config_.families()) throw ServiceError(400, "initial_population: wrong length");
    if ((start.array() < 0.0).any()) throw ServiceError(400, "initial_population: entries must be >= 0");
    for (Eigen::Index j = 0; j < start.size(); ++j)
        if (start[j] == 0.0) frozen_.push_back(static_cast<int>(j));
    record_state(start, 0.0);
}

void Session::record_state(const Vector& N, double t)
{
    const ValueEvaluation ev = evaluate_values(config_, N);
    traj_.states.push_back({N, t});
    traj_.welfare.push_back(ev.alloc.W_star);
    traj_.values.push_back(ev.V);
    traj_.budget_utilization.push_back(budget_utilization(config_, N));
}

void Session::attach_log(const std::string& path)
{
    log_path_ = path;
    std::ofstream(path, std::ios::binary | std::ios::trunc);
    append_record({{"op", "create"},
                   {"id", id_},
                   {"config", json::parse(serialize_config(config_))},
                   {"dt", options_.dt},
                   {"divergence_utilization", options_.divergence_utilization},
                   {"divergence_population", options_.divergence_population},
                   {"analyze_starts", options_.analyze_starts},
                   {"N0", to_json(traj_.states.front().N)}});
}

void Session::append_record(const json& record)
{
    if (log_path_.empty()) return;
    std::ofstream out(log_path_, std::ios::binary | std::ios::app);
    write_log_record(out, record);
}

json Session::state() const
{
    const auto& s = traj_.back();
    const ValueEvaluation ev = evaluate_values(config_, s.N);
    json out;
    out["id"] = id_;
    out["t"] = s.t;
    out["N"] = to_json(s.N);
    out["V"] = to_json(ev.V);
    out["W_star"] = number_or_null(ev.alloc.W_star);
    out["lambda"] = to_json(ev.alloc.lambda);
    out["budget_utilization"] = budget_utilization(config_, s.N);
    out["status"] = to_string(status_);
    try {
        out["spectral_abscissa"] = number_or_null(local_abscissa(config_, s.N, ev.V));
    } catch (const SolverError&) {
        out["spectral_abscissa"] = nullptr;
    }
    out["families"] = config_.family_names;
    out["resources"] = config_.resource_names;
    out["dt"] = options_.dt;
    out["samples"] = traj_.size();
    out["shock_count"] = shocks_.size();
    out["digest"] = digest();
    return out;
}

json Session::advance(double duration)
{
    if (status_ == SessionStatus::diverged) throw ServiceError(409, "session has diverged");
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw ServiceError(400, "duration must be >= 0");
    const long steps = std::lround(duration / options_.dt);
    if (steps > 0) {
        IntegrateOptions io;
        io.dt = options_.dt;
        io.horizon = static_cast<double>(steps) * options_.dt;
        io.t0 = traj_.back().t;
        io.early_stop = false;
        io.frozen = frozen_;
        const Trajectory sub = integrate(config_, traj_.back().N, io);
        for (std::size_t k = 1; k < sub.size(); ++k) {
            traj_.states.push_back(sub.states[k]);
            traj_.welfare.push_back(sub.welfare[k]);
            traj_.values.push_back(sub.values[k]);
            traj_.budget_utilization.push_back(sub.budget_utilization[k]);
        }
        for (const auto& e : sub.events) {
            traj_.events.push_back(e);
            if (e.label.rfind("extinct:", 0) == 0) {
                const std::string name = e.label.substr(8);
                for (int j = 0; j < config_.families(); ++j)
                    if (config_.family_names[static_cast<std::size_t>(j)] == name &&
                        std::find(frozen_.begin(), frozen_.end(), j) == frozen_.end())
                        frozen_.push_back(j);
            }
        }
        bool diverged = sub.aborted;
        for (std::size_t k = 0; k < sub.size() && !diverged; ++k)
            diverged = sub.budget_utilization[k] > options_.divergence_utilization ||
                       sub.states[k].N.maxCoeff() > options_.divergence_population;
        status_ = diverged ? SessionStatus::diverged
                           : (sub.converged ? SessionStatus::converged : SessionStatus::running);
    }
    append_record({{"op", "advance"}, {"duration", duration}});
    return state();
}

json Session::predict(const ShockRequest& req) const
{
    const Vector N = traj_.back().N;
    std::optional<EquilibriumRecord> base;
    try {
        EquilibriumRecord r = solve_from(config_, N);
        if (r.valid()) base = std::move(r);
    } catch (const SolverError&) {
    } catch (const NoActiveFamily&) {
    }
    if (!base) {
        const auto all = find_all(config_, options_.analyze_starts, 0);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : all) {
            const double d = (r.N_star - N).lpNorm<Eigen::Infinity>();
            if (d < best) {
                best = d;
                base = r;
            }
        }
    }
    if (!base) throw ServiceError(422, "prediction unavailable: no equilibrium found near the current state");
    try {
        jacobian_eigen(config_, *base);
    } catch (const SolverError&) {
    }

    const double old_value = req.param.get(config_);
    json out;
    out["field"] = req.param.to_string();
    out["old"] = old_value;
    out["new"] = req.value;
    out["base_equilibrium"] = {{"N", to_json(base->N_star)},
                               {"lambda", to_json(base->allocation.lambda)},
                               {"W_star", base->welfare()},
                               {"stability", to_string(base->stability)}};
    using K = ParamSelector::Kind;
    out["kind"] = req.param.kind == K::w ? "ss_row" : req.param.kind == K::R ? "rb_column" : "parameter";
    if (req.param.kind == K::w)
        out["convention"] = "other weights renormalized proportionally";

    json el = {{"N", nullptr}, {"lambda", nullptr}, {"lost", false}};
    if (old_value != 0.0) {
        const ParameterElasticity pe = parameter_elasticity(config_, *base, req.param);
        el = {{"N", to_json(pe.N)}, {"lambda", to_json(pe.lambda)}, {"lost", pe.lost}};
    } else {
        el["note"] = "elasticity undefined at a zero base value";
    }
    out["elasticities"] = el;

    HiveConfig target;
    try {
        target = req.param.apply(config_, req.value);
        check_invariants(target);
    } catch (const DomainError& e) {
        throw ServiceError(400, e.what());
    }
    const ShockResponse resp = continue_shock(config_, *base, req.param, req.value);
    if (resp.lost) {
        out["predicted_equilibrium"] = nullptr;
        out["predicted_lambda"] = nullptr;
        out["predicted_change"] = nullptr;
        out["regime_flags"] = {{"stability", "unknown"}, {"note", "continuation lost: " + resp.note}};
        return out;
    }
    out["predicted_equilibrium"] = to_json(resp.record.N_star);
    out["predicted_lambda"] = to_json(resp.record.allocation.lambda);
    out["predicted_change"] = {{"N", to_json(resp.N_change)}, {"lambda", to_json(resp.lambda_change)}};
    EquilibriumRecord predicted = resp.record;
    json flags;
    try {
        const Spectrum sp = jacobian_eigen(target, predicted);
        flags["stability"] = to_string(sp.cls.tag);
        flags["spectral_abscissa"] = sp.cls.spectral_abscissa;
        flags["eigenvalues"] = eigen_json(sp.eigenvalues);
        flags["sufficient_condition"] = sufficient_stability(target, predicted).holds;
    } catch (const SolverError& e) {
        flags["stability"] = "unknown";
        flags["note"] = e.what();
    }
    flags["budget_ok"] = predicted.budget_ok;
    out["regime_flags"] = flags;
    return out;
}

json Session::preview_shock(const ShockRequest& req) const { return predict(req); }

json Session::apply_shock(const ShockRequest& req)
{
    json prediction;
    try {
        prediction = predict(req);
    } catch (const ServiceError& e) {
        if (e.status() != 422) throw;
        prediction = nullptr;
    }
    return apply_with(req, prediction);
}

json Session::apply_with(const ShockRequest& req, const json& prediction)
{
    HiveConfig next;
    try {
        next = req.param.apply(config_, req.value);
        check_invariants(next);
    } catch (const DomainError& e) {
        throw ServiceError(400, e.what());
    }
    ShockLogEntry entry;
    entry.t = traj_.back().t;
    entry.field = req.param.to_string();
    entry.old_value = req.param.get(config_);
    entry.new_value = req.value;
    entry.prediction = prediction;
    config_ = std::move(next);
    shocks_.push_back(entry);
    if (status_ == SessionStatus::converged) status_ = SessionStatus::running;
    append_record({{"op", "shock"}, {"field", entry.field}, {"value", req.value}, {"prediction", prediction}});
    json out = state();
    out["shock"] = shock_log().back();
    return out;
}

json Session::trajectory(double from) const
{
    json t = json::array(), N = json::array(), W = json::array(), util = json::array();
    for (std::size_t k = 0; k < traj_.size(); ++k) {
        if (!(traj_.states[k].t > from)) continue;
        t.push_back(traj_.states[k].t);
        N.push_back(to_json(traj_.states[k].N));
        W.push_back(number_or_null(traj_.welfare[k]));
        util.push_back(traj_.budget_utilization[k]);
    }
    json events = json::array();
    for (const auto& e : traj_.events)
        if (e.t > from) events.push_back({{"t", e.t}, {"label", e.label}});
    return {{"t", t}, {"N", N}, {"W_star", W}, {"budget_utilization", util}, {"events", events},
            {"last_t", traj_.back().t}, {"status", to_string(status_)}};
}

json Session::analyze() const
{
    const Vector N = traj_.back().N;
    auto all = find_all(config_, options_.analyze_starts, 0);
    json list = json::array();
    std::vector<std::pair<double, json>> rows;
    for (auto& r : all) {
        json e;
        e["N"] = to_json(r.N_star);
        e["lambda"] = to_json(r.allocation.lambda);
        e["W_star"] = r.welfare();
        e["interior"] = r.interior();
        e["max_abs_V"] = r.V_residual;
        try {
            const Spectrum sp = jacobian_eigen(config_, r);
            e["stability"] = to_string(sp.cls.tag);
            e["eigenvalues"] = eigen_json(sp.eigenvalues);
            e["spectral_abscissa"] = sp.cls.spectral_abscissa;
            e["sufficient_condition"] = sufficient_stability(config_, r).holds;
        } catch (const SolverError& err) {
            e["stability"] = "unknown";
            e["note"] = err.what();
        }
        const double d = (r.N_star - N).lpNorm<Eigen::Infinity>();
        e["distance"] = d;
        rows.emplace_back(d, e);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& r : rows) list.push_back(std::move(r.second));
    return {{"t", traj_.back().t}, {"N", to_json(N)}, {"equilibria", list}};
}

json Session::shock_log() const
{
    json a = json::array();
    for (const auto& s : shocks_)
        a.push_back({{"t", s.t}, {"field", s.field}, {"old", s.old_value}, {"new", s.new_value}, {"prediction", s.prediction}});
    return a;
}

std::string Session::digest() const
{
    Fnv h;
    h.text(serialize_config(config_));
    for (std::size_t k = 0; k < traj_.size(); ++k) {
        h.number(traj_.states[k].t);
        for (Eigen::Index j = 0; j < traj_.states[k].N.size(); ++j) h.number(traj_.states[k].N[j]);
        h.number(traj_.welfare[k]);
    }
    for (const auto& s : shocks_) {
        h.text(s.field);
        h.number(s.t);
        h.number(s.old_value);
        h.number(s.new_value);
        h.text(s.prediction.dump());
    }
    h.text(to_string(status_));
    return h.hex();
}

std::unique_ptr<Session> Session::replay(const std::string& path)
{
    const auto records = read_log_records(path);
    if (records.empty() || records.front().value("op", "") != "create")
        throw MalformedDocument("event log must start with a create record");
    const json& c = records.front();
    SessionOptions opt;
    opt.dt = c.at("dt").get<double>();
    opt.divergence_utilization = c.at("divergence_utilization").get<double>();
    opt.divergence_population = c.at("divergence_population").get<double>();
    opt.analyze_starts = c.at("analyze_starts").get<int>();
    auto s = std::make_unique<Session>(c.at("id").get<std::string>(), parse_config(c.at("config").dump()), opt,
                                       vector_from(c.at("N0"), "N0"));
    for (std::size_t i = 1; i < records.size(); ++i) {
        const json& r = records[i];
        const std::string op = r.value("op", "");
        if (op == "advance") {
            s->advance(r.at("duration").get<double>());
        } else if (op == "shock") {
            s->apply_with(ShockRequest::from_json(r), r.at("prediction"));
        } else {
            throw MalformedDocument("event log: unknown record '" + op + "'");
        }
    }
    return s;
}

SessionManager::SessionManager(SessionOptions defaults, std::string log_dir)
    : defaults_(defaults), log_dir_(std::move(log_dir))
{
    if (!log_dir_.empty()) std::filesystem::create_directories(log_dir_);
}

json SessionManager::create(const json& body)
{
    if (!body.is_object()) throw ServiceError(400, "expected a JSON object");
    const json& doc = body.contains("config") ? body.at("config") : body;
    HiveConfig cfg;
    try {
        cfg = parse_config(doc.dump());
    } catch (const DomainError& e) {
        throw ServiceError(400, e.what());
    }
    SessionOptions opt = defaults_;
    if (body.contains("dt")) {
        if (!body.at("dt").is_number()) throw ServiceError(400, "dt: expected a number");
        opt.dt = body.at("dt").get<double>();
    }
    std::optional<Vector> N0;
    if (body.contains("config") && body.contains("initial_population"))
        N0 = vector_from(body.at("initial_population"), "initial_population");

    std::string id;
    {
        std::lock_guard<std::mutex> lock(registry_);
        std::random_device rd;
        std::ostringstream os;
        os << std::hex << std::setw(8) << std::setfill('0') << rd() << std::setw(8) << ++counter_;
        id = os.str();
    }
    std::shared_ptr<Session> s;
    try {
        s = std::make_shared<Session>(id, std::move(cfg), opt, N0);
    } catch (const SolverError& e) {
        throw ServiceError(422, std::string("initial state cannot be evaluated: ") + e.what());
    } catch (const DomainError& e) {
        throw ServiceError(400, e.what());
    }
    if (!log_dir_.empty()) s->attach_log((std::filesystem::path(log_dir_) / (id + ".log")).string());
    json out = s->state();
    {
        std::lock_guard<std::mutex> lock(registry_);
        sessions_[id] = s;
    }
    return out;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const
{
    std::lock_guard<std::mutex> lock(registry_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown session '" + id + "'");
    return it->second;
}

std::size_t SessionManager::size() const
{
    std::lock_guard<std::mutex> lock(registry_);
    return sessions_.size();
}

struct HttpServer::Impl {
    ServerOptions options;
    SessionManager manager;
    httplib::Server server;

    explicit Impl(const ServerOptions& o) : options(o), manager(o.session, o.log_dir) {}
};

namespace {

void reply(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn)
{
    try {
        reply(res, 200, fn());
    } catch (const ServiceError& e) {
        reply(res, e.status(), {{"error", e.what()}});
    } catch (const json::exception& e) {
        reply(res, 400, {{"error", std::string("malformed request body: ") + e.what()}});
    } catch (const DomainError& e) {
        reply(res, 400, {{"error", e.what()}});
    } catch (const SolverError& e) {
        reply(res, 422, {{"error", e.what()}});
    } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
    }
}

json parse_body(const httplib::Request& req)
{
    if (req.body.empty()) return json::object();
    return json::parse(req.body);
}

} // namespace

HttpServer::HttpServer(const ServerOptions& options) : impl_(std::make_unique<Impl>(options))
{
    auto& srv = impl_->server;
    auto& mgr = impl_->manager;

    srv.Get("/healthz", [&](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, {{"status", "ok"}, {"sessions", mgr.size()}});
    });
    srv.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return mgr.create(parse_body(req)); });
    });
    auto with_session = [&](const httplib::Request& req, httplib::Response& res, auto&& op) {
        guarded(res, [&] {
            auto s = mgr.get(req.matches[1]);
            std::lock_guard<std::mutex> lock(s->mutex());
            return op(*s);
        });
    };
    srv.Get(R"(/sessions/([^/]+)/state)", [=](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [](Session& s) { return s.state(); });
    });
    srv.Post(R"(/sessions/([^/]+)/advance)", [=](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [&](Session& s) {
            const json body = parse_body(req);
            if (!body.contains("duration") || !body.at("duration").is_number())
                throw ServiceError(400, "advance: missing numeric 'duration'");
            return s.advance(body.at("duration").get<double>());
        });
    });
    srv.Post(R"(/sessions/([^/]+)/shock/preview)", [=](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [&](Session& s) { return s.preview_shock(ShockRequest::from_json(parse_body(req))); });
    });
    srv.Post(R"(/sessions/([^/]+)/shock/apply)", [=](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [&](Session& s) { return s.apply_shock(ShockRequest::from_json(parse_body(req))); });
    });
    srv.Get(R"(/sessions/([^/]+)/trajectory)", [=](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [&](Session& s) {
            double from = -std::numeric_limits<double>::infinity();
            if (req.has_param("from")) {
                try {
                    from = std::stod(req.get_param_value("from"));
                } catch (const std::exception&) {
                    throw ServiceError(400, "from: expected a number");
                }
            }
            return s.trajectory(from);
        });
    });
    srv.Get(R"(/sessions/([^/]+)/shocks)", [=](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [](Session& s) { return json{{"shock_log", s.shock_log()}}; });
    });
    srv.Post(R"(/sessions/([^/]+)/analyze)", [=](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [](Session& s) { return s.analyze(); });
    });
    if (!options.static_dir.empty()) srv.set_mount_point("/", options.static_dir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind()
{
    auto& o = impl_->options;
    if (o.port == 0) {
        const int port = impl_->server.bind_to_any_port(o.host);
        if (port < 0) throw DomainViolation("cannot bind " + o.host);
        return o.port = port;
    }
    if (!impl_->server.bind_to_port(o.host, o.port))
        throw DomainViolation("cannot bind " + o.host + ":" + std::to_string(o.port));
    return o.port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

SessionManager& HttpServer::sessions() { return impl_->manager; }

int run_server(const ServerOptions& options)
{
    HttpServer server(options);
    const int port = server.bind();
    std::fprintf(stderr, "listening on http://%s:%d\n", options.host.c_str(), port);
    server.listen();
    return 0;
}

} // namespace hive
