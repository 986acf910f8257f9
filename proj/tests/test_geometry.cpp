#include <doctest.h>

#include "mdfrac/geometry.hpp"

#include <cmath>
#include <set>

using namespace mdfrac;

namespace {
std::vector<VecX> tri(const Vec2& a, const Vec2& b, const Vec2& c) {
    return {VecX(a), VecX(b), VecX(c)};
}
} // namespace

TEST_CASE("simplex measures") {
    CHECK(simplex_measure(tri({0, 0}, {1, 0}, {0, 1})) == doctest::Approx(0.5));
    std::vector<VecX> seg = {VecX(Vec2(0, 0)), VecX(Vec2(3, 4))};
    CHECK(simplex_measure(seg) == doctest::Approx(5.0));
    std::vector<VecX> pt = {VecX(Vec2(2, 2))};
    CHECK(simplex_measure(pt) == doctest::Approx(1.0));
    std::vector<VecX> tet = {VecX(Vec3(0, 0, 0)), VecX(Vec3(1, 0, 0)), VecX(Vec3(0, 1, 0)),
                             VecX(Vec3(0, 0, 1))};
    CHECK(simplex_measure(tet) == doctest::Approx(1.0 / 6));
    // flat triangle embedded in 3D
    std::vector<VecX> flat = {VecX(Vec3(0, 0, 1)), VecX(Vec3(1, 0, 1)), VecX(Vec3(0, 1, 1))};
    CHECK(simplex_measure(flat) == doctest::Approx(0.5));
}

TEST_CASE("facet normals point outward") {
    auto t = tri({0, 0}, {1, 0}, {0, 1});
    // facet opposite vertex 0 is the hypotenuse
    VecX n = facet_outward_normal(t, 0);
    CHECK(n.dot(Vec2(1, 1).normalized()) == doctest::Approx(1.0));
    n = facet_outward_normal(t, 1); // facet x = 0
    CHECK(n(0) == doctest::Approx(-1.0));
    // 1D: the facet opposite vertex 0 is the right endpoint
    std::vector<VecX> seg = {VecX::Constant(1, 2.0), VecX::Constant(1, 5.0)};
    CHECK(facet_outward_normal(seg, 0)(0) == doctest::Approx(1.0));
    CHECK(facet_outward_normal(seg, 1)(0) == doctest::Approx(-1.0));
}

TEST_CASE("partition_interval respects breakpoints and stays monotone") {
    auto nodes = partition_interval(2.0, {0.75}, {3, 4}, 0.3, "k1");
    CHECK(nodes.size() == 8);
    CHECK(nodes.front() == 0.0);
    CHECK(nodes.back() == 2.0);
    CHECK(nodes[3] == 0.75);
    for (size_t i = 0; i + 1 < nodes.size(); ++i) CHECK(nodes[i] < nodes[i + 1]);
    // deterministic
    auto again = partition_interval(2.0, {0.75}, {3, 4}, 0.3, "k1");
    CHECK(nodes == again);
    auto other = partition_interval(2.0, {0.75}, {3, 4}, 0.3, "k2");
    CHECK(nodes != other);
}

TEST_CASE("polygon triangulation covers the polygon") {
    // L-shaped polygon with collinear boundary points
    std::vector<Vec2> pts = {{0, 0},   {0.5, 0}, {1, 0},   {1, 0.5}, {0.5, 0.5},
                             {0.5, 1}, {0, 1},   {0, 0.5}};
    auto tris = triangulate_polygon(pts);
    CHECK(tris.size() == pts.size() - 2);
    double area = 0;
    std::set<std::pair<int, int>> edges;
    for (auto& t : tris) {
        Vec2 a = pts[t[0]], b = pts[t[1]], c = pts[t[2]];
        double a2 = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
        CHECK(a2 > 0); // CCW and non-degenerate
        area += a2 / 2;
    }
    CHECK(area == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(min_triangle_angle(pts, tris) > 0.3); // ~17 degrees on this shape
}

TEST_CASE("quadrature integrates polynomials exactly") {
    auto t = tri({0, 0}, {1, 0}, {0, 1});
    auto q = simplex_quadrature(t, 4);
    auto integ = [&](auto f) {
        double s = 0;
        for (size_t i = 0; i < q.points.size(); ++i) s += q.weights[i] * f(q.points[i]);
        return s;
    };
    CHECK(integ([](const VecX&) { return 1.0; }) == doctest::Approx(0.5));
    CHECK(integ([](const VecX& p) { return p(0); }) == doctest::Approx(1.0 / 6));
    CHECK(integ([](const VecX& p) { return p(0) * p(0); }) == doctest::Approx(1.0 / 12));
    CHECK(integ([](const VecX& p) { return p(0) * p(1); }) == doctest::Approx(1.0 / 24));
    CHECK(integ([](const VecX& p) { return p(0) * p(0) * p(0) * p(1); }) ==
          doctest::Approx(1.0 / 120).epsilon(1e-12));

    std::vector<VecX> tet = {VecX(Vec3(0, 0, 0)), VecX(Vec3(1, 0, 0)), VecX(Vec3(0, 1, 0)),
                             VecX(Vec3(0, 0, 1))};
    auto q3 = simplex_quadrature(tet, 2);
    double s = 0, sx = 0, sxy = 0;
    for (size_t i = 0; i < q3.points.size(); ++i) {
        s += q3.weights[i];
        sx += q3.weights[i] * q3.points[i](0);
        sxy += q3.weights[i] * q3.points[i](0) * q3.points[i](1);
    }
    CHECK(s == doctest::Approx(1.0 / 6));
    CHECK(sx == doctest::Approx(1.0 / 24));
    CHECK(sxy == doctest::Approx(1.0 / 120));
}

TEST_CASE("point-simplex distance") {
    std::vector<VecX> seg = {VecX(Vec2(0, 0)), VecX(Vec2(1, 0))};
    CHECK(point_simplex_distance(Vec2(0.5, 0.3), seg) == doctest::Approx(0.3));
    CHECK(point_simplex_distance(Vec2(2, 0), seg) == doctest::Approx(1.0));
    auto t = tri({0, 0}, {1, 0}, {0, 1});
    CHECK(point_simplex_distance(Vec2(0.25, 0.25), t) == doctest::Approx(0.0));
    CHECK(point_simplex_distance(Vec2(1, 1), t) == doctest::Approx(std::sqrt(0.5)));
}
