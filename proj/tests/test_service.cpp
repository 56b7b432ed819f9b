#include "doctest.h"
#include "support.hpp"

#include "hive/service.hpp"

#include "httplib.h"

#include <filesystem>
#include <fstream>
#include <thread>

using namespace hive;
using namespace hive::testing;
using nlohmann::json;

namespace {

json document(const std::string& rel) { return json::parse(serialize_config(load(rel))); }

json runaway_document()
{
    HiveConfig cfg = single_family(1.0, 1.0, 1.5, 1.0, 0.2);
    cfg.B = 10.0;
    cfg.initial_population = Vector::Constant(1, 5.0);
    return json::parse(serialize_config(cfg));
}

Vector as_vector(const json& a)
{
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

json shock(const std::string& field, double value) { return {{"field", field}, {"value", value}}; }

int status_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const ServiceError& e) {
        return e.status();
    }
    return 200;
}

} // namespace

TEST_SUITE("service") {

TEST_CASE("new session starts at the centroid with finite welfare")
{
    SessionManager mgr;
    const json s = mgr.create(document("configs/three_family.json"));
    const HiveConfig cfg = load("configs/three_family.json");
    CHECK(as_vector(s["N"]).isApprox(omega_centroid(cfg)));
    CHECK(s["W_star"].is_number());
    CHECK(s["status"] == "running");
    CHECK(s["t"] == 0.0);
    CHECK(mgr.size() == 1);
}

TEST_CASE("five-family session exposes its families and resources")
{
    SessionManager mgr;
    const json s = mgr.create(document("configs/five_family.json"));
    CHECK(s["families"].size() == 5);
    CHECK(s["resources"].size() == 3);
    CHECK(s["lambda"].size() == 3);
}

TEST_CASE("invalid config is a 400 naming the field")
{
    SessionManager mgr;
    json doc = document("configs/three_family.json");
    doc["resources"][0]["R"] = -1.0;
    try {
        mgr.create(doc);
        FAIL("expected rejection");
    } catch (const ServiceError& e) {
        CHECK(e.status() == 400);
        CHECK(std::string(e.what()).find("resources[0].R") != std::string::npos);
    }
    CHECK(mgr.size() == 0);
    CHECK(status_of([&] { mgr.get("missing"); }) == 404);
}

TEST_CASE("advance by zero leaves the state unchanged")
{
    SessionManager mgr;
    auto s = mgr.get(mgr.create(document("configs/three_family.json"))["id"]);
    const json before = s->state();
    const json after = s->advance(0.0);
    CHECK(after["N"] == before["N"]);
    CHECK(after["t"] == before["t"]);
    CHECK(after["digest"] == before["digest"]);
    CHECK(status_of([&] { s->advance(-1.0); }) == 400);
}

TEST_CASE("many small advances equal one large advance")
{
    SessionManager mgr;
    auto a = mgr.get(mgr.create(document("configs/three_family_complementarity.json"))["id"]);
    auto b = mgr.get(mgr.create(document("configs/three_family_complementarity.json"))["id"]);
    for (int k = 0; k < 10; ++k) a->advance(1.5);
    b->advance(15.0);
    const Vector Na = as_vector(a->state()["N"]), Nb = as_vector(b->state()["N"]);
    CHECK((Na - Nb).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(a->state()["t"].get<double>() == doctest::Approx(15.0));
}

TEST_CASE("sessions are isolated")
{
    SessionManager mgr;
    auto a = mgr.get(mgr.create(document("configs/three_family.json"))["id"]);
    auto b = mgr.get(mgr.create(document("configs/three_family.json"))["id"]);
    CHECK(a->id() != b->id());
    const std::string digest = b->digest();
    a->advance(2.0);
    a->apply_shock(ShockRequest::from_json(shock("R[1]", 12.0)));
    CHECK(b->digest() == digest);
}

TEST_CASE("preview is read-only and a null shock predicts the current equilibrium")
{
    SessionManager mgr;
    auto s = mgr.get(mgr.create(document("configs/five_family.json"))["id"]);
    s->advance(5.0);
    const std::string digest = s->digest();
    const HiveConfig cfg = load("configs/five_family.json");
    json p;
    for (int k = 0; k < 3; ++k) p = s->preview_shock(ShockRequest::from_json(shock("R[1]", cfg.R[0])));
    CHECK(s->digest() == digest);
    CHECK(p["kind"] == "rb_column");
    CHECK(as_vector(p["predicted_equilibrium"]).isApprox(as_vector(p["base_equilibrium"]["N"]), 1e-10));
    CHECK(as_vector(p["predicted_change"]["N"]).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(p["elasticities"]["N"].size() == 5);
    CHECK(p["regime_flags"]["stability"].is_string());

    const json w = s->preview_shock(ShockRequest::from_json(shock("w[4]", 0.25)));
    CHECK(w["kind"] == "ss_row");
    CHECK(w["elasticities"]["lambda"].size() == 3);
}

TEST_CASE("shock requests are validated")
{
    CHECK(status_of([] { ShockRequest::from_json(json{{"value", 1.0}}); }) == 400);
    CHECK(status_of([] { ShockRequest::from_json(shock("eta[1]", 1.0)); }) == 400);
    CHECK(status_of([] { ShockRequest::from_json(json{{"field", "R[1]"}, {"value", "x"}}); }) == 400);
    SessionManager mgr;
    auto s = mgr.get(mgr.create(document("configs/three_family.json"))["id"]);
    CHECK(status_of([&] { s->apply_shock(ShockRequest::from_json(shock("w[1]", 1.5))); }) == 400);
    CHECK(status_of([&] { s->apply_shock(ShockRequest::from_json(shock("R[1]", -2.0))); }) == 400);
    CHECK(s->shock_log().empty());
}

TEST_CASE("applied shocks are logged with their prediction and never roll back")
{
    SessionManager mgr;
    auto s = mgr.get(mgr.create(document("configs/three_family.json"))["id"]);
    s->advance(3.0);
    const json applied = s->apply_shock(ShockRequest::from_json(shock("gamma[1,2]", 0.08)));
    CHECK(applied["shock"]["old"] == 0.05);
    CHECK(applied["shock"]["prediction"]["predicted_equilibrium"].size() == 3);
    CHECK(s->config().gamma(0, 1) == doctest::Approx(0.08));
    s->advance(2.0);
    const Vector perturbed = as_vector(s->state()["N"]);
    s->apply_shock(ShockRequest::from_json(shock("gamma[1,2]", 0.05)));
    const json log = s->shock_log();
    REQUIRE(log.size() == 2);
    CHECK(log[1]["t"].get<double>() == doctest::Approx(5.0));
    CHECK(as_vector(s->state()["N"]) == perturbed);
    CHECK(s->history().back().t == doctest::Approx(5.0));
}

TEST_CASE("runaway growth marks the session diverged")
{
    SessionManager mgr;
    auto s = mgr.get(mgr.create(runaway_document())["id"]);
    const json st = s->advance(20.0);
    CHECK(st["status"] == "diverged");
    CHECK(status_of([&] { s->advance(1.0); }) == 409);
}

TEST_CASE("trajectory cursor returns only newer samples")
{
    SessionManager mgr;
    auto s = mgr.get(mgr.create(json{{"config", document("configs/three_family.json")}, {"dt", 0.1}})["id"]);
    s->advance(1.0);
    const json all = s->trajectory(-1.0);
    CHECK(all["t"].size() == 11);
    const json tail = s->trajectory(0.55);
    CHECK(tail["t"].size() == 5);
    for (const auto& t : tail["t"]) CHECK(t.get<double>() > 0.55);
    CHECK(s->trajectory(s->history().back().t)["t"].empty());
}

TEST_CASE("analysis sorts equilibria by distance to the current state")
{
    SessionManager mgr;
    json body{{"config", document("tests/data/bistable.json")}, {"initial_population", {0.4, 1.5}}};
    auto s = mgr.get(mgr.create(body)["id"]);
    const json a = s->analyze();
    REQUIRE(a["equilibria"].size() >= 3);
    double last = -1.0;
    for (const auto& e : a["equilibria"]) {
        CHECK(e["distance"].get<double>() >= last);
        last = e["distance"].get<double>();
    }
    CHECK(a["equilibria"][0]["stability"] == "stable-node");
}

TEST_CASE("event log replays to an identical session")
{
    const auto dir = std::filesystem::temp_directory_path() / "hive_service_log_test";
    std::filesystem::remove_all(dir);
    SessionManager mgr({}, dir.string());
    auto s = mgr.get(mgr.create(document("configs/three_family.json"))["id"]);
    s->advance(1.0);
    s->apply_shock(ShockRequest::from_json(shock("R[2]", 9.0)));
    s->advance(0.5);
    s->apply_shock(ShockRequest::from_json(shock("w[2]", 0.3)));
    s->advance(2.0);
    const auto replayed = Session::replay((dir / (s->id() + ".log")).string());
    CHECK(replayed->digest() == s->digest());
    CHECK(replayed->shock_log() == s->shock_log());
    std::filesystem::remove_all(dir);
}

TEST_CASE("API schema documents every payload field")
{
    std::ifstream in(source_path("docs/api_schema.json"));
    REQUIRE(in.good());
    const json schema = json::parse(in);
    const json& defs = schema["$defs"];
    auto covered = [](const json& payload, const json& doc) {
        for (const auto& [key, _] : payload.items()) {
            INFO(key);
            CHECK(doc["properties"].contains(key));
        }
    };
    SessionManager mgr;
    auto s = mgr.get(mgr.create(document("configs/three_family.json"))["id"]);
    s->advance(0.5);
    covered(s->state(), defs["state"]);
    const json p = s->preview_shock(ShockRequest::from_json(shock("w[2]", 0.3)));
    covered(p, defs["prediction"]);
    covered(p["regime_flags"], defs["prediction"]["properties"]["regime_flags"]);
    covered(s->trajectory(-1.0), schema["endpoints"]["GET /sessions/{id}/trajectory"]["response"]);
    const json a = s->analyze();
    const json& eq = schema["endpoints"]["POST /sessions/{id}/analyze"]["response"];
    covered(a, eq);
    covered(a["equilibria"][0], eq["properties"]["equilibria"]["items"]);
    s->apply_shock(ShockRequest::from_json(shock("R[1]", 11.0)));
    covered(s->shock_log()[0], defs["shock_entry"]);
    for (const char* ep : {"GET /healthz", "POST /sessions", "GET /sessions/{id}/state", "POST /sessions/{id}/advance",
                           "POST /sessions/{id}/shock/preview", "POST /sessions/{id}/shock/apply",
                           "GET /sessions/{id}/trajectory", "POST /sessions/{id}/analyze"})
        CHECK(schema["endpoints"].contains(ep));
}

TEST_CASE("HTTP endpoints")
{
    ServerOptions opt;
    opt.port = 0;
    HttpServer server(opt);
    const int port = server.bind();
    std::thread th([&] { server.listen(); });
    httplib::Client cli("127.0.0.1", port);

    auto health = cli.Get("/healthz");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(json::parse(health->body)["status"] == "ok");

    auto created = cli.Post("/sessions", document("configs/three_family.json").dump(), "application/json");
    REQUIRE(created);
    CHECK(created->status == 200);
    const std::string id = json::parse(created->body)["id"];
    const std::string base = "/sessions/" + id;

    auto adv = cli.Post(base + "/advance", R"({"duration": 1.0})", "application/json");
    REQUIRE(adv);
    CHECK(adv->status == 200);
    CHECK(json::parse(adv->body)["t"].get<double>() == doctest::Approx(1.0));

    auto st = cli.Get(base + "/state");
    REQUIRE(st);
    CHECK(json::parse(st->body)["spectral_abscissa"].is_number());

    auto tr = cli.Get(base + "/trajectory?from=0.505");
    REQUIRE(tr);
    CHECK(json::parse(tr->body)["t"].size() == 50);

    auto pv = cli.Post(base + "/shock/preview", shock("R[1]", 12.0).dump(), "application/json");
    REQUIRE(pv);
    CHECK(pv->status == 200);
    CHECK(json::parse(pv->body)["kind"] == "rb_column");

    auto ap = cli.Post(base + "/shock/apply", shock("R[1]", 12.0).dump(), "application/json");
    REQUIRE(ap);
    CHECK(json::parse(ap->body)["shock_count"] == 1);

    auto an = cli.Post(base + "/analyze", "", "application/json");
    REQUIRE(an);
    CHECK(an->status == 200);
    CHECK(json::parse(an->body)["equilibria"].size() >= 1);

    CHECK(cli.Get("/sessions/nope/state")->status == 404);
    CHECK(cli.Post("/sessions", "{not json", "application/json")->status == 400);
    CHECK(cli.Post(base + "/advance", R"({"dur": 1})", "application/json")->status == 400);
    CHECK(cli.Post(base + "/shock/apply", shock("w[1]", 2.0).dump(), "application/json")->status == 400);

    server.stop();
    th.join();
}

}
