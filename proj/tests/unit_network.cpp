#include <doctest.h>

#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>

#include "poresim/errors.hpp"
#include "poresim/network.hpp"
#include "poresim/network_io.hpp"
#include "poresim/synthetic.hpp"
#include "support/builders.hpp"

using namespace poresim;

TEST_CASE("load two-ball network and derive Euclidean distance") {
    std::istringstream file(
        "# tiny fixture\n"
        "B 0 0 0 0 1\n"
        "B 1 0 0 3 1\n"
        "A 0 1\n");
    const PoreNetwork net = load_network(file, "inline");
    REQUIRE(net.node_count() == 2);
    REQUIRE(net.arc_count() == 1);
    CHECK(net.arc(0).distance == doctest::Approx(3.0));
    // Default volume from radius.
    CHECK(net.node(0).volume == doctest::Approx(4.0 / 3.0 * std::numbers::pi));
}

TEST_CASE("loader rejects dangling arc endpoints") {
    std::istringstream file(
        "B 0 0 0 0 1\n"
        "B 1 0 0 3 1\n"
        "A 0 99\n");
    CHECK_THROWS_AS(load_network(file, "inline"), ValidationError);
}

TEST_CASE("loader rejects malformed and invalid records") {
    SUBCASE("malformed ball line reports the line number") {
        std::istringstream file("B 0 0 0\n");
        try {
            load_network(file, "inline");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
        }
    }
    SUBCASE("non-positive radius") {
        std::istringstream file("B 0 0 0 0 -2\n");
        CHECK_THROWS_AS(load_network(file, "inline"), ValidationError);
    }
    SUBCASE("duplicate arc") {
        std::istringstream file("B 0 0 0 0 1\nB 1 0 0 2 1\nA 0 1\nA 1 0\n");
        CHECK_THROWS_AS(load_network(file, "inline"), ValidationError);
    }
    SUBCASE("self loop") {
        std::istringstream file("B 0 0 0 0 1\nA 0 0\n");
        CHECK_THROWS_AS(load_network(file, "inline"), ValidationError);
    }
    SUBCASE("unknown tag") {
        std::istringstream file("Q 1 2 3\n");
        CHECK_THROWS_AS(load_network(file, "inline"), ParseError);
    }
}

TEST_CASE("sparse external ids are remapped densely") {
    std::istringstream file(
        "B 5 0 0 0 1\n"
        "B 10 0 0 2 1\n"
        "A 5 10\n");
    const PoreNetwork net = load_network(file, "inline");
    CHECK(net.node(0).external_id == 5);
    CHECK(net.node(1).external_id == 10);
    CHECK(net.arc(0).i == 0);
    CHECK(net.arc(0).j == 1);
}

TEST_CASE("volume override from file is honored") {
    std::istringstream file("B 0 0 0 0 1 7.5\n");
    const PoreNetwork net = load_network(file, "inline");
    CHECK(net.node(0).volume == 7.5);
}

TEST_CASE("arcs derived from tangency when the file has none") {
    std::istringstream file(
        "B 0 0 0 0 1\n"
        "B 1 0 0 2 1\n"   // tangent to ball 0
        "B 2 0 0 10 1\n"); // far away
    const PoreNetwork net = load_network(file, "inline");
    REQUIRE(net.arc_count() == 1);
    CHECK(net.arc(0).i == 0);
    CHECK(net.arc(0).j == 1);
}

TEST_CASE("contact area follows the min-radius disk rule") {
    CHECK(compute_contact_area(1, 1, 1) == doctest::Approx(std::numbers::pi));
    // Direct evaluation: alpha * pi * min(r)^2.
    const double expected = 0.6 * std::numbers::pi * 3.0 * 3.0;
    CHECK(compute_contact_area(3, 5, 0.6) == doctest::Approx(expected)); // ~16.9646
    CHECK(compute_contact_area(5, 3, 0.6) == compute_contact_area(3, 5, 0.6));

    CHECK_THROWS_AS(compute_contact_area(-1, 1, 0.5), DomainError);
    CHECK_THROWS_AS(compute_contact_area(1, 1, 0.0), DomainError);
    CHECK_THROWS_AS(compute_contact_area(1, 1, 1.5), DomainError);
}

TEST_CASE("contact area is symmetric for random radius pairs") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const double a = 0.1 + 5.0 * poresim::testing::uniform01(rng);
        const double b = 0.1 + 5.0 * poresim::testing::uniform01(rng);
        const double alpha = 0.5 + 0.5 * poresim::testing::uniform01(rng);
        CHECK(compute_contact_area(a, b, alpha) == compute_contact_area(b, a, alpha));
    }
}

namespace {

// Brute-force BFS oracle for component structure.
std::vector<std::vector<int>> bfs_components(const PoreNetwork& net, const WaterMask& active) {
    std::vector<std::vector<int>> components;
    std::vector<char> visited(static_cast<size_t>(net.node_count()), 0);
    for (int start = 0; start < net.node_count(); ++start) {
        if (!active[static_cast<size_t>(start)] || visited[static_cast<size_t>(start)]) continue;
        std::vector<int> component;
        std::queue<int> queue;
        queue.push(start);
        visited[static_cast<size_t>(start)] = 1;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop();
            component.push_back(u);
            for (int arc_idx : net.incident_arcs(u)) {
                const AdjacencyArc& a = net.arc(arc_idx);
                const int v = a.i == u ? a.j : a.i;
                if (!active[static_cast<size_t>(v)] || visited[static_cast<size_t>(v)]) continue;
                visited[static_cast<size_t>(v)] = 1;
                queue.push(v);
            }
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    return components;
}

} // namespace

TEST_CASE("connected components on small fixtures") {
    const PoreNetwork pair = poresim::testing::two_ball_unit_volume();
    CHECK(connected_components(pair, {1, 1}) == std::vector<std::vector<int>>{{0, 1}});
    CHECK(connected_components(pair, {1, 0}) == std::vector<std::vector<int>>{{0}});

    std::vector<BallNode> nodes(4);
    for (int i = 0; i < 4; ++i) nodes[static_cast<size_t>(i)] = {i, {0, 0, 3.0 * i}, 1.0, 1.0, i};
    std::vector<AdjacencyArc> arcs{{0, 1, 1, 1}, {2, 3, 1, 1}};
    const PoreNetwork net(std::move(nodes), std::move(arcs));
    const auto components = connected_components(net, {1, 1, 1, 1});
    CHECK(components == bfs_components(net, {1, 1, 1, 1}));
    CHECK(components.size() == 2);
}

TEST_CASE("connected components partition the active set (random masks)") {
    std::mt19937_64 rng(23);
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::RandomTangent, 80, 5);
    for (int trial = 0; trial < 10; ++trial) {
        WaterMask active(static_cast<size_t>(net.node_count()));
        for (auto& a : active) a = poresim::testing::uniform01(rng) < 0.7 ? 1 : 0;

        const auto components = connected_components(net, active);
        CHECK(components == bfs_components(net, active));

        size_t covered = 0;
        std::vector<char> seen(static_cast<size_t>(net.node_count()), 0);
        for (const auto& component : components)
            for (int id : component) {
                CHECK(active[static_cast<size_t>(id)]);
                CHECK(!seen[static_cast<size_t>(id)]);
                seen[static_cast<size_t>(id)] = 1;
                ++covered;
            }
        size_t active_count = 0;
        for (auto a : active) active_count += a;
        CHECK(covered == active_count);
    }
}

TEST_CASE("canonical text format round-trips bitwise") {
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::RandomTangent, 40, 99);

    std::ostringstream first;
    save_network(net, first);
    std::istringstream reload(first.str());
    const PoreNetwork net2 = load_network(reload, "inline");

    REQUIRE(net2.node_count() == net.node_count());
    REQUIRE(net2.arc_count() == net.arc_count());
    for (int i = 0; i < net.node_count(); ++i) {
        CHECK(net2.node(i).center.x == net.node(i).center.x);
        CHECK(net2.node(i).center.y == net.node(i).center.y);
        CHECK(net2.node(i).center.z == net.node(i).center.z);
        CHECK(net2.node(i).radius == net.node(i).radius);
        CHECK(net2.node(i).volume == net.node(i).volume);
    }
    for (int k = 0; k < net.arc_count(); ++k) {
        CHECK(net2.arc(k).distance == net.arc(k).distance);
        CHECK(net2.arc(k).contact_area == net.arc(k).contact_area);
    }

    std::ostringstream second;
    save_network(net2, second);
    CHECK(first.str() == second.str());
}
