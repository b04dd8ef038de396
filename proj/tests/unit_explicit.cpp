#include <doctest.h>

#include <cmath>
#include <random>

#include "poresim/errors.hpp"
#include "poresim/explicit_diffusion.hpp"
#include "poresim/synthetic.hpp"
#include "poresim/units.hpp"
#include "support/builders.hpp"

using namespace poresim;
using poresim::testing::all_water;
using poresim::testing::random_states;
using poresim::testing::two_ball_unit_volume;
using poresim::testing::unit_volume_chain;

TEST_CASE("fick_flow basics") {
    CHECK(fick_flow(0.7, 0.7, 2.0, 1.5, 4.0, 0.1) == 0.0);
    // Node i at higher concentration loses mass.
    CHECK(fick_flow(1.0, 0.0, 1.0, 1.0, 1.0, 0.1) == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(fick_flow(0.0, 1.0, 1.0, 1.0, 1.0, 0.1) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("fick_flow is exactly antisymmetric") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 300; ++k) {
        const double ci = poresim::testing::uniform01(rng);
        const double cj = poresim::testing::uniform01(rng);
        const double s = 0.1 + poresim::testing::uniform01(rng);
        const double d = 0.1 + poresim::testing::uniform01(rng);
        const double dc = 10.0 * poresim::testing::uniform01(rng);
        const double dt = poresim::testing::uniform01(rng);
        CHECK(fick_flow(ci, cj, s, d, dc, dt) == -fick_flow(cj, ci, s, d, dc, dt));
    }
}

TEST_CASE("uniform concentration is a fixed point of the explicit step") {
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::Grid3d, 3, 0);
    std::vector<double> dom(static_cast<size_t>(net.node_count()));
    for (int i = 0; i < net.node_count(); ++i)
        dom[static_cast<size_t>(i)] = 0.42 * net.node(i).volume; // equal concentration
    const std::vector<double> out =
        diffusion_step_explicit(dom, net, all_water(net), 1000.0, 0.001);
    CHECK(out == dom); // flows are exactly zero
}

TEST_CASE("two equal balls exchange theta of the mass difference") {
    const PoreNetwork net = two_ball_unit_volume();
    // theta = d_c * s / d * dt = 0.1
    const std::vector<double> out =
        diffusion_step_explicit({1.0, 0.0}, net, all_water(net), 1.0, 0.1);
    CHECK(out[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("isolated node keeps its mass") {
    std::vector<BallNode> nodes{{0, {0, 0, 0}, 1.0, 1.0, 0}};
    const PoreNetwork net(std::move(nodes), {});
    const std::vector<double> out = diffusion_step_explicit({5.0}, net, {1}, 100.0, 1.0);
    CHECK(out[0] == 5.0);
}

TEST_CASE("air-filled endpoints block the arc") {
    const PoreNetwork net = two_ball_unit_volume();
    const std::vector<double> out = diffusion_step_explicit({1.0, 0.0}, net, {1, 0}, 1.0, 0.1);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 0.0);
}

TEST_CASE("explicit diffusion conserves mass for any dt, stable or not") {
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::RandomTangent, 200, 71);
    std::mt19937_64 rng(71);
    std::vector<double> dom(static_cast<size_t>(net.node_count()));
    double total = 0.0;
    for (double& m : dom) {
        m = poresim::testing::uniform01(rng);
        total += m;
    }
    for (double dt : {1e-6, 1e-3, 0.5, 20.0}) { // the large steps are far past stability
        const std::vector<double> out =
            diffusion_step_explicit(dom, net, all_water(net), 5000.0, dt);
        double out_total = 0.0;
        for (double m : out) out_total += m;
        CHECK(out_total == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("negativity H and M") {
    SUBCASE("all nonnegative") {
        PoolGrid grid(3);
        grid.dom = {0.1, 0.2, 0.3};
        const NegativityReport report = negativity(grid);
        for (double h : report.negativity) CHECK(h == 0.0);
        CHECK(report.species_exceeding(0.01) == -1);
    }
    SUBCASE("one negative entry") {
        double H, M;
        species_negativity({-0.02, 0.5, 0.5}, H, M);
        CHECK(H == doctest::Approx(0.02).epsilon(1e-15));
        CHECK(M == doctest::Approx(0.98).epsilon(1e-15));
    }
    SUBCASE("two negative entries") {
        double H, M;
        species_negativity({-0.01, -0.03, 1.0}, H, M);
        CHECK(H == doctest::Approx(0.04).epsilon(1e-15));
        CHECK(M == doctest::Approx(0.96).epsilon(1e-15));
    }
    SUBCASE("zero negativity never triggers a backtrack, even with zero totals") {
        PoolGrid grid(2); // everything zero
        CHECK(negativity(grid).species_exceeding(0.01) == -1);
    }
}

TEST_CASE("reallocation worked example") {
    std::vector<double> mass{-0.02, 0.49, 0.51};
    const std::vector<double> volumes{1.0, 1.0, 1.0};
    reallocate_species(mass, volumes, 0.02);
    CHECK(mass[0] == 0.0);
    CHECK(mass[1] == doctest::Approx(0.49 - 0.02 * 0.49).epsilon(1e-14));
    CHECK(mass[2] == doctest::Approx(0.51 - 0.02 * 0.51).epsilon(1e-14));
    CHECK(mass[0] + mass[1] + mass[2] == doctest::Approx(0.98).epsilon(1e-12));
}

TEST_CASE("reallocation is the identity when H = 0") {
    std::vector<double> mass{0.1, 0.2};
    const std::vector<double> before = mass;
    reallocate_species(mass, {1.0, 1.0}, 0.0);
    CHECK(mass == before);
}

TEST_CASE("reallocation without donors overdraws") {
    std::vector<double> mass{-0.1};
    CHECK_THROWS_AS(reallocate_species(mass, {1.0}, 0.1), RepairOverdraw);
}

TEST_CASE("reallocation conserves and stays nonnegative on random inputs") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 5 + static_cast<size_t>(rng() % 50);
        std::vector<double> mass(n);
        std::vector<double> volumes(n);
        for (size_t i = 0; i < n; ++i) {
            mass[i] = poresim::testing::uniform01(rng) - 0.005; // mostly positive
            volumes[i] = 0.2 + poresim::testing::uniform01(rng);
        }
        double H, M;
        species_negativity(mass, H, M);
        if (!(H > 0.0) || H >= 0.05 * M) continue;
        const double before = M;
        reallocate_species(mass, volumes, H);
        double after = 0.0;
        for (double m : mass) {
            CHECK(m >= 0.0);
            after += m;
        }
        CHECK(after == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("synchronous step with zero DOM reduces to the transformation alone") {
    const PoreNetwork net = unit_volume_chain(5);
    PoolGrid states(5);
    for (size_t i = 0; i < 5; ++i) states.set(i, {0.4, 0.0, 0.2, 0.3, 0.0});
    const BioParams params;
    ExplicitConfig cfg;
    const PoolGrid stepped = step_synchronous(states, net, all_water(net), params, cfg, 0.01);
    const PoolGrid bio_only = transform_all(states, net, all_water(net), params, 0.01);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(stepped.mb[i] == bio_only.mb[i]);
        CHECK(stepped.dom[i] == bio_only.dom[i]);
        CHECK(stepped.co2[i] == bio_only.co2[i]);
    }
}

TEST_CASE("synchronous step with zero rates reduces to diffusion alone") {
    const PoreNetwork net = unit_volume_chain(5);
    PoolGrid states(5);
    states.dom = {1.0, 0.0, 0.5, 0.2, 0.0};
    BioParams params;
    params.rho = params.mu = params.v_fom = params.v_som = params.v_dom = 0.0;
    params.d_c = 3.0;
    ExplicitConfig cfg;
    const PoolGrid stepped = step_synchronous(states, net, all_water(net), params, cfg, 0.01);
    const std::vector<double> diffused =
        diffusion_step_explicit(states.dom, net, all_water(net), params.d_c, 0.01);
    for (size_t i = 0; i < 5; ++i) CHECK(stepped.dom[i] == doctest::Approx(diffused[i]).epsilon(1e-15));
}

TEST_CASE("synchronous and asynchronous steps agree for tiny dt") {
    const PoreNetwork net = unit_volume_chain(10);
    std::mt19937_64 rng(89);
    const PoolGrid states = random_states(10, rng);
    BioParams params;
    params.d_c = 2.0;

    const double dt_days = 1e-6;
    ExplicitConfig cfg;
    cfg.dt_diffusion_s = cfg.dt_transform_s = units::days_to_seconds(dt_days);

    const PoolGrid sync = step_synchronous(states, net, all_water(net), params, cfg, dt_days);
    const PoolGrid async = step_asynchronous(states, net, all_water(net), params, cfg);
    for (size_t i = 0; i < states.size(); ++i) {
        CHECK(sync.mb[i] == doctest::Approx(async.mb[i]).epsilon(1e-8));
        CHECK(sync.dom[i] == doctest::Approx(async.dom[i]).epsilon(1e-8));
        CHECK(sync.som[i] == doctest::Approx(async.som[i]).epsilon(1e-8));
    }
}

TEST_CASE("operator splitting error shrinks at first order") {
    const PoreNetwork net = unit_volume_chain(8);
    std::mt19937_64 rng(97);
    const PoolGrid initial = random_states(8, rng);
    BioParams params;
    params.d_c = 50.0;
    const double t_end = 0.008; // days

    auto gap_at = [&](double dt_days) {
        const auto steps = static_cast<long long>(std::llround(t_end / dt_days));
        ExplicitConfig cfg;
        cfg.dt_diffusion_s = cfg.dt_transform_s = units::days_to_seconds(dt_days);
        PoolGrid sync = initial, async = initial;
        for (long long k = 0; k < steps; ++k) {
            sync = step_synchronous(sync, net, all_water(net), params, cfg, dt_days);
            async = step_asynchronous(async, net, all_water(net), params, cfg);
        }
        double gap = 0.0;
        for (size_t i = 0; i < sync.size(); ++i)
            gap = std::max(gap, std::abs(sync.dom[i] - async.dom[i]));
        return gap;
    };

    const double g1 = gap_at(0.001);
    const double g2 = gap_at(0.0005);
    const double g4 = gap_at(0.00025);
    CHECK(g1 / g2 > 1.7);
    CHECK(g2 / g4 > 1.7);
}

TEST_CASE("pure diffusion contracts toward uniform concentration (stable dt)") {
    const PoreNetwork net = unit_volume_chain(8);
    std::vector<double> dom(8, 0.0);
    dom[0] = 1.0;
    const double d_c = 4.0, dt = 0.1; // theta = 0.4 per arc, still below stability
    const double mean = 1.0 / 8.0;    // unit volumes: uniform concentration = mean mass

    double previous_gap = 1.0;
    for (int step = 0; step < 600; ++step) {
        dom = diffusion_step_explicit(dom, net, all_water(net), d_c, dt);
        double gap = 0.0;
        for (double m : dom) gap = std::max(gap, std::abs(m - mean));
        CHECK(gap <= previous_gap * (1.0 + 1e-12));
        previous_gap = gap;
    }
    CHECK(previous_gap / mean < 1e-6);
}

TEST_CASE("small negatives are repaired in place of a backtrack") {
    // theta = 1.005 drives node 0 slightly negative: H = 0.005 < p_neg * M.
    const PoreNetwork net = two_ball_unit_volume();
    PoolGrid states(2);
    states.dom = {1.0, 0.0};
    BioParams params;
    params.rho = params.mu = params.v_fom = params.v_som = params.v_dom = 0.0;
    params.d_c = 1.005;
    ExplicitConfig cfg;
    cfg.p_neg = 0.01;
    const PoolGrid out = step_synchronous(states, net, all_water(net), params, cfg, 1.0);
    CHECK(out.dom[0] == 0.0);
    CHECK(out.dom[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("backtracking: stable dt leaves the trajectory untouched") {
    const PoreNetwork net = unit_volume_chain(6);
    PoolGrid states(6);
    states.dom = {1.0, 0.0, 0.0, 0.5, 0.0, 0.25};
    states.mb = {0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
    BioParams params;
    params.d_c = 100.0;

    ExplicitConfig cfg;
    cfg.dt_diffusion_s = 30.0;
    cfg.dt_transform_s = 60.0;
    const double t_end = units::seconds_to_days(600.0);

    RunStats stats;
    const PoolGrid driven = run_with_backtracking(states, net, all_water(net), params, cfg,
                                                  t_end, &stats);
    CHECK(stats.backtracks == 0);
    CHECK(stats.macro_steps == 10);

    PoolGrid manual = states;
    for (int k = 0; k < 10; ++k)
        manual = step_asynchronous(manual, net, all_water(net), params, cfg);
    for (size_t i = 0; i < manual.size(); ++i) {
        CHECK(driven.dom[i] == manual.dom[i]);
        CHECK(driven.mb[i] == manual.mb[i]);
    }
}

TEST_CASE("backtracking halves the step on a constructed instability") {
    const PoreNetwork net = two_ball_unit_volume();
    PoolGrid states(2);
    states.dom = {1.0, 0.0};
    BioParams params;
    params.rho = params.mu = params.v_fom = params.v_som = params.v_dom = 0.0;
    params.d_c = 1.5; // theta = 1.5 at the initial one-day step

    ExplicitConfig cfg;
    cfg.dt_diffusion_s = units::days_to_seconds(1.0);
    cfg.dt_transform_s = units::days_to_seconds(1.0);
    cfg.max_backtracks = 10;

    RunStats stats;
    std::vector<double> committed_minima;
    const PoolGrid out = run_with_backtracking(
        states, net, all_water(net), params, cfg, 3.0, &stats,
        [&](double, const PoolGrid& grid) {
            committed_minima.push_back(std::min(grid.dom[0], grid.dom[1]));
        });

    CHECK(stats.backtracks >= 1);
    CHECK(stats.dt_diffusion_s_final < cfg.dt_diffusion_s);
    CHECK(out.dom[0] + out.dom[1] == doctest::Approx(1.0).epsilon(1e-12));
    for (double m : committed_minima) CHECK(m >= 0.0); // every committed state nonnegative
}

TEST_CASE("backtracking gives up after max_backtracks halvings") {
    const PoreNetwork net = two_ball_unit_volume();
    PoolGrid states(2);
    states.dom = {1.0, 0.0};
    BioParams params;
    params.rho = params.mu = params.v_fom = params.v_som = params.v_dom = 0.0;
    params.d_c = 1.5;

    ExplicitConfig cfg;
    cfg.dt_diffusion_s = units::days_to_seconds(1.0);
    cfg.dt_transform_s = units::days_to_seconds(1.0);
    cfg.max_backtracks = 0;
    CHECK_THROWS_AS(run_with_backtracking(states, net, all_water(net), params, cfg, 3.0),
                    StepCollapse);
}

TEST_CASE("config validation") {
    ExplicitConfig cfg;
    cfg.coupling = Coupling::Asynchronous;
    cfg.dt_diffusion_s = 3.0;
    cfg.dt_transform_s = 10.0; // not a multiple
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg.dt_transform_s = 9.0;
    CHECK_NOTHROW(cfg.validate());

    cfg.p_neg = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.p_neg = 0.005; // outside the recommended band: warns, does not throw
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("committed steps conserve the grand total") {
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::Grid3d, 3, 0);
    std::mt19937_64 rng(101);
    PoolGrid states = random_states(static_cast<size_t>(net.node_count()), rng);
    BioParams params;
    params.d_c = 50.0;

    ExplicitConfig cfg;
    cfg.dt_diffusion_s = 60.0;
    cfg.dt_transform_s = 120.0;

    const double initial = states.total_mass();
    double worst = 0.0;
    double previous = initial;
    run_with_backtracking(states, net, all_water(net), params, cfg,
                          units::seconds_to_days(1200.0), nullptr,
                          [&](double, const PoolGrid& grid) {
                              const double total = grid.total_mass();
                              worst = std::max(worst, std::abs(total - previous) / initial);
                              previous = total;
                          });
    CHECK(worst <= 1e-10);
    CHECK(std::abs(previous - initial) / initial <= 1e-9);
}
