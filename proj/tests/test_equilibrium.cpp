#include "doctest.h"
#include "support.hpp"

#include "hive/dynamics.hpp"
#include "hive/equilibrium.hpp"
#include "hive/errors.hpp"
#include "hive/spectral.hpp"

#include <algorithm>
#include <sstream>

using namespace hive;
using namespace hive::testing;

TEST_SUITE("equilibrium") {

TEST_CASE("single family equilibrium has the closed form")
{
    const HiveConfig log_cfg = single_family(1.3, 0.8, 0.6, 4.0, 1.0);
    const EquilibriumRecord a = solve_from(log_cfg, Vector::Constant(1, 5.0));
    CHECK(a.N_star[0] == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(a.valid());

    // w eta (A R)^(1-sigma) N^(eta(1-sigma)-1) = c
    const double A = 1.3, c = 0.8, eta = 0.6, R = 4.0, s = 0.5;
    const HiveConfig crra = single_family(A, c, eta, R, s);
    const double expected = std::pow(eta * std::pow(A * R, 1.0 - s) / c, 1.0 / (1.0 - eta * (1.0 - s)));
    CHECK(solve_from(crra, Vector::Constant(1, 1.0)).N_star[0] == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("baseline has one interior equilibrium that passes every check")
{
    const HiveConfig cfg = load("configs/three_family.json");
    const auto all = find_all(cfg, 64, 0);
    int interior = 0;
    for (const auto& r : all) {
        CHECK(r.valid());
        CHECK(r.V_residual < 1e-8);
        CHECK(r.allocation.residual < 1e-10);
        interior += r.interior();
    }
    CHECK(interior == 1);
    CHECK(all.front().interior());
    CHECK(all.front().allocation.lambda[1] > all.front().allocation.lambda[0]);
}

TEST_CASE("unique equilibrium is welfare maximal under weak externalities")
{
    const HiveConfig cfg = load("configs/three_family.json");
    const EquilibriumRecord r = solve_from(cfg, omega_centroid(cfg));
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        Vector N(3);
        for (int j = 0; j < 3; ++j) N[j] = 0.01 + U(rng);
        N = project_onto_budget(N * cfg.B / cfg.c.dot(N) * U(rng), cfg.c, cfg.B);
        if ((N.array() <= 0.0).any()) continue;
        CHECK(solve_inner(cfg, N).W_star <= r.welfare() + 1e-8);
    }
}

TEST_CASE("bistable config has two stable equilibria separated by a saddle")
{
    const HiveConfig cfg = load("tests/data/bistable.json");
    auto all = find_all(cfg, 64, 0);
    std::vector<EquilibriumRecord> stable, saddles;
    for (auto& r : all) {
        if (!r.interior()) continue;
        jacobian_eigen(cfg, r);
        if (is_stable(r.stability)) stable.push_back(r);
        if (r.stability == StabilityTag::saddle) saddles.push_back(r);
    }
    REQUIRE(stable.size() == 2);
    REQUIRE(saddles.size() == 1);
    CHECK(stable[0].N_star[0] == doctest::Approx(9.126).epsilon(1e-3));
    CHECK(stable[1].N_star[0] == doctest::Approx(0.3556).epsilon(1e-3));
    CHECK(stable[0].welfare() > stable[1].welfare());

    // Each stable point attracts a nearby start.
    IntegrateOptions io;
    io.dt = 0.05;
    io.horizon = 400.0;
    for (const auto& s : stable) {
        const Trajectory t = integrate(cfg, s.N_star * 1.05, io);
        CHECK((t.back().N - s.N_star).lpNorm<Eigen::Infinity>() < 1e-4);
    }
}

TEST_CASE("boundary equilibria are reported when entry is unprofitable")
{
    const HiveConfig cfg = load("tests/data/focus.json");
    const auto all = find_all(cfg, 32, 0);
    int boundary = 0;
    for (const auto& r : all) {
        CHECK(r.valid());
        if (r.interior()) continue;
        ++boundary;
        CHECK(r.inactive_ok);
        for (Eigen::Index j = 0; j < r.N_star.size(); ++j)
            if (r.N_star[j] == 0.0) CHECK(r.entry_values[j] <= 0.0);
    }
    CHECK(boundary == 2);
}

TEST_CASE("multistart points are deterministic and feasible")
{
    const HiveConfig cfg = load("configs/five_family.json");
    const auto a = multistart_points(cfg, 40, 7);
    const auto b = multistart_points(cfg, 40, 7);
    const auto c = multistart_points(cfg, 40, 8);
    REQUIRE(a.size() == 40);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        CHECK((a[i].array() > 0.0).all());
        CHECK(budget_utilization(cfg, a[i]) <= 0.9 + 1e-12);
        differs = differs || !(a[i] == c[i]);
    }
    CHECK(differs);
}

TEST_CASE("find_all is reproducible for a fixed seed")
{
    const HiveConfig cfg = load("tests/data/bistable.json");
    const auto a = find_all(cfg, 24, 3);
    const auto b = find_all(cfg, 24, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].N_star == b[i].N_star);
}

TEST_CASE("continuation follows a small parameter change")
{
    const HiveConfig cfg = load("configs/three_family.json");
    const EquilibriumRecord base = solve_from(cfg, omega_centroid(cfg));
    const HiveConfig moved = ParamSelector::parse("gamma[1,2]").apply(cfg, 0.07);
    const EquilibriumRecord next = continue_equilibrium(moved, base);
    const EquilibriumRecord direct = solve_from(moved, omega_centroid(moved));
    CHECK((next.N_star - direct.N_star).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("empty start has no active family")
{
    const HiveConfig cfg = plain_config(2, 1);
    CHECK_THROWS_AS(solve_from(cfg, Vector::Zero(2)), NoActiveFamily);
}

TEST_CASE("equilibria CSV lists one row per record")
{
    const HiveConfig cfg = load("configs/three_family.json");
    auto all = find_all(cfg, 8, 0);
    std::ostringstream os;
    write_equilibria_csv(os, cfg, all);
    const std::string s = os.str();
    CHECK(s.rfind("id,N_1,N_2,N_3,W_star,lambda_1,lambda_2,stability,max_abs_V", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(all.size()) + 1);
}

}
