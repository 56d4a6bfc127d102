#include "ava/charts/charts.hpp"
#include "ava/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ava;

namespace {

PointSet coincident(int k) {
    PointSet ps;
    ps.points.assign(static_cast<std::size_t>(k), Point2{0.5, 0.5});
    return ps;
}

ScatterStyle bare() {
    ScatterStyle s;
    s.axes = false;
    return s;
}

}  // namespace

TEST_CASE("coincident points stack coverage as 1 - (1 - o)^k") {
    for (double o : {0.1, 0.25, 0.5, 1.0}) {
        for (int k = 1; k <= 16; ++k) {
            const auto r = render_scatter(coincident(k), o, 3.0, {}, bare());
            // A degenerate bounding box maps every point to the plot centre.
            const double expected = 1.0 - std::pow(1.0 - o, k);
            CHECK(r.coverage.coverage_at(320, 240) == doctest::Approx(expected).epsilon(1e-12));
            CHECK(r.coverage.count_at(320, 240) == k);
            CHECK(r.counters.discs == k);
            // Over a white background the channel is c*cov + (1 - cov).
            const auto px = r.image.at(320, 240);
            const double green = 119 / 255.0;
            // Rounding of the iterated blend may land one step away at .5 boundaries.
            CHECK(std::abs(px.g - (green * expected + (1.0 - expected)) * 255.0) <= 1.0);
        }
    }
}

TEST_CASE("disc covers exactly the pixels whose centres are within the radius") {
    for (double radius : {0.5, 1.0, 2.3, 3.0, 6.5}) {
        const auto r = render_scatter(coincident(1), 0.5, radius, {}, bare());
        int expected = 0, got = 0;
        for (int y = 0; y < 480; ++y) {
            for (int x = 0; x < 640; ++x) {
                const double dx = x + 0.5 - 320.0, dy = y + 0.5 - 240.0;
                const bool in = dx * dx + dy * dy <= radius * radius;
                expected += in;
                got += r.coverage.count_at(x, y);
                CHECK(r.coverage.count_at(x, y) == static_cast<int>(in));
            }
        }
        CHECK(got == expected);
    }
}

TEST_CASE("overplot metrics") {
    const auto single = render_scatter(coincident(1), 0.3, 3.0, {}, bare());
    const auto m1 = overplot_metrics(single.coverage);
    CHECK(m1.saturated_fraction == 0.0);
    CHECK(m1.faintness == doctest::Approx(0.3));
    CHECK(m1.covered_fraction > 0.0);

    const auto heavy = render_scatter(coincident(20), 0.3, 3.0, {}, bare());
    const auto m2 = overplot_metrics(heavy.coverage);
    CHECK(m2.saturated_fraction == 1.0);  // 1 - 0.7^20 > 0.98
    CHECK(m2.faintness == 0.0);           // no pixel is covered by a single point
    CHECK(m2.covered_fraction == m1.covered_fraction);

    CoverageBuffer empty{2, 2, std::vector<double>(4, 0.0), std::vector<int>(4, 0)};
    CHECK(overplot_metrics(empty) == OverplotMetrics{});
}

TEST_CASE("scatter argument errors") {
    CHECK_THROWS_AS(render_scatter(PointSet{}, 0.5), EmptyPointSet);
    CHECK_THROWS_AS(render_scatter(coincident(1), 0.0), InvalidParams);
    CHECK_THROWS_AS(render_scatter(coincident(1), 1.5), InvalidParams);
    CHECK_THROWS_AS(render_scatter(coincident(1), 0.5, 0.0), InvalidParams);
    PointSet bad = coincident(2);
    bad.labels = std::vector<int>{1};
    CHECK_THROWS_AS(render_scatter(bad, 0.5), InvalidParams);
    bad = coincident(1);
    bad.points[0][0] = std::nan("");
    CHECK_THROWS_AS(render_scatter(bad, 0.5), InvalidParams);
}

TEST_CASE("scatter is deterministic and reports one disc per point") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0.0, 1.0);
    PointSet ps;
    for (int i = 0; i < 300; ++i) ps.points.push_back({n(rng), n(rng)});
    const auto a = render_scatter(ps, 0.2);
    const auto b = render_scatter(ps, 0.2);
    CHECK(a.image == b.image);
    CHECK(a.counters.discs == 300);
    CHECK(a.counters.segments == 2);  // axes
}

TEST_CASE("parallel coordinates") {
    const std::vector<std::vector<double>> rows{{1, 5, 2}, {2, 5, 3}, {3, 5, 1}};
    ParallelStyle style;
    style.axis_names = {"a", "b", "c"};
    const auto r = render_parallel_coords(rows, {}, style);
    CHECK(r.counters.polylines == 3);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("b") != std::string::npos);
    CHECK(render_parallel_coords(rows).image == render_parallel_coords(rows).image);

    CHECK_THROWS_AS(render_parallel_coords({{1}, {2}}), InvalidParams);
    CHECK_THROWS_AS(render_parallel_coords({}), InvalidParams);
    CHECK_THROWS_AS(render_parallel_coords({{1, 2}, {1}}), InvalidParams);
}

TEST_CASE("node-link labels stack for coincident nodes") {
    Graph g{3, {{0, 1}, {1, 2}}};
    const std::vector<Point2> pos{{0.5, 0.5}, {0.5, 0.5}, {0.1, 0.9}};
    const auto r = render_node_link(g, pos, {"a", "b", "c"});
    REQUIRE(r.label_origins.size() == 3);
    CHECK(r.label_origins[0][0] == r.label_origins[1][0]);
    CHECK(r.label_origins[1][1] - r.label_origins[0][1] == doctest::Approx(7 * 2 + 3));
    CHECK(r.counters.segments == 2);
    CHECK(r.counters.labels == 3);
    CHECK_THROWS_AS(render_node_link(g, {{0.5, 0.5}}, {}), MissingPosition);
    CHECK_THROWS_AS(validate(Graph{2, {{0, 0}}}), InvalidParams);
    CHECK_THROWS_AS(validate(Graph{2, {{0, 2}}}), InvalidParams);
}

TEST_CASE("force layout is seeded, bounded and centred (property)") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g;
        g.nodes = 2 + static_cast<int>(rng() % 15);
        for (int i = 1; i < g.nodes; ++i) g.edges.push_back({static_cast<int>(rng() % i), i});
        const auto a = fr_layout(g, 100, trial);
        CHECK(a == fr_layout(g, 100, trial));
        const auto b = bounds_of(a);
        CHECK(b.x_min >= -1e-12);
        CHECK(b.x_max <= 1.0 + 1e-12);
        CHECK(b.y_min >= -1e-12);
        CHECK(b.y_max <= 1.0 + 1e-12);
        CHECK(0.5 * (b.x_min + b.x_max) == doctest::Approx(0.5));
        CHECK(0.5 * (b.y_min + b.y_max) == doctest::Approx(0.5));
    }
    CHECK_THROWS_AS(fr_layout(Graph{0, {}}), InvalidParams);
}

TEST_CASE("csv parsing handles quotes and reports bad cells") {
    const auto t = parse_csv("x,y,name\r\n1,2,\"a, \"\"b\"\"\"\n3.5,-4,c\n");
    CHECK(t.header == std::vector<std::string>{"x", "y", "name"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][2] == "a, \"b\"");
    const auto ps = csv_points(t, "x", "y");
    CHECK(ps.points == std::vector<Point2>{{1, 2}, {3.5, -4}});
    CHECK_THROWS_AS(csv_columns(t, {"name"}), InvalidParams);
    CHECK_THROWS_AS(csv_columns(t, {"z"}), InvalidParams);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), InvalidParams);
    CHECK_THROWS_AS(parse_csv("a\n\"open\n"), InvalidParams);
    CHECK_THROWS_AS(parse_csv(""), InvalidParams);
}
