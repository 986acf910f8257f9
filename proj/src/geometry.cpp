#include "mdfrac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdfrac {

double simplex_measure(const std::vector<VecX>& verts) {
    const int d = int(verts.size()) - 1;
    if (d == 0) return 1.0;
    const int m = int(verts[0].size());
    MatX edges(m, d);
    for (int i = 0; i < d; ++i) edges.col(i) = verts[i + 1] - verts[0];
    double fact = 1.0;
    for (int i = 2; i <= d; ++i) fact *= i;
    if (m == d) return std::abs(edges.determinant()) / fact;
    // flat simplex embedded in higher dimension: Gram determinant
    MatX g = edges.transpose() * edges;
    return std::sqrt(std::max(0.0, g.determinant())) / fact;
}

double facet_measure(const std::vector<VecX>& verts, int opposite) {
    std::vector<VecX> f;
    for (int i = 0; i < int(verts.size()); ++i)
        if (i != opposite) f.push_back(verts[i]);
    return simplex_measure(f);
}

VecX facet_outward_normal(const std::vector<VecX>& verts, int opposite) {
    const int d = int(verts.size()) - 1;
    const int m = int(verts[0].size());
    if (d == 1) {
        VecX t = verts[1 - opposite] - verts[opposite];
        return t / t.norm();
    }
    // Project "facet plane" normal: take the direction from the opposite
    // vertex to the facet, orthogonalized against the facet span.
    std::vector<VecX> f;
    for (int i = 0; i < int(verts.size()); ++i)
        if (i != opposite) f.push_back(verts[i]);
    MatX span(m, d - 1);
    for (int i = 0; i < d - 1; ++i) span.col(i) = f[i + 1] - f[0];
    VecX w = f[0] - verts[opposite];
    // subtract components along the facet span (Gram-Schmidt)
    Eigen::HouseholderQR<MatX> qr(span);
    MatX q = qr.householderQ() * MatX::Identity(m, d - 1);
    w -= q * (q.transpose() * w);
    double n = w.norm();
    if (n < 1e-300) throw std::runtime_error("degenerate simplex in facet_outward_normal");
    return w / n;
}

VecX centroid(const std::vector<VecX>& verts) {
    VecX c = VecX::Zero(verts[0].size());
    for (const auto& v : verts) c += v;
    return c / double(verts.size());
}

double point_simplex_distance(const VecX& p, const std::vector<VecX>& verts) {
    if (verts.size() == 1) return (p - verts[0]).norm();
    if (verts.size() == 2) {
        VecX d = verts[1] - verts[0];
        double t = d.squaredNorm() > 0 ? (p - verts[0]).dot(d) / d.squaredNorm() : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return (p - (verts[0] + t * d)).norm();
    }
    if (verts.size() == 3) {
        // project onto triangle plane, clamp barycentrically, else edge distances
        VecX e0 = verts[1] - verts[0], e1 = verts[2] - verts[0], w = p - verts[0];
        double a = e0.dot(e0), b = e0.dot(e1), c = e1.dot(e1);
        double d0 = e0.dot(w), d1 = e1.dot(w);
        double det = a * c - b * b;
        double s = (c * d0 - b * d1) / det, t = (a * d1 - b * d0) / det;
        if (s >= 0 && t >= 0 && s + t <= 1)
            return (w - s * e0 - t * e1).norm();
        double best = std::min(point_simplex_distance(p, {verts[0], verts[1]}),
                               std::min(point_simplex_distance(p, {verts[1], verts[2]}),
                                        point_simplex_distance(p, {verts[0], verts[2]})));
        return best;
    }
    throw std::runtime_error("point_simplex_distance: unsupported simplex");
}

uint64_t seed_from_key(const std::string& key) {
    // FNV-1a, then one splitmix round to spread short keys
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    SplitMix64 s(h);
    return s.next();
}

std::vector<double> partition_interval(double length,
                                       const std::vector<double>& breakpoints,
                                       const std::vector<int>& cells_per_piece,
                                       double jitter,
                                       const std::string& seed_key) {
    std::vector<double> bounds;
    bounds.push_back(0.0);
    for (double b : breakpoints) bounds.push_back(b);
    bounds.push_back(length);
    if (bounds.size() - 1 != cells_per_piece.size())
        throw std::runtime_error("partition_interval: piece count mismatch");
    SplitMix64 rng(seed_from_key(seed_key));
    std::vector<double> nodes;
    nodes.push_back(0.0);
    for (size_t pc = 0; pc + 1 < bounds.size(); ++pc) {
        double a = bounds[pc], b = bounds[pc + 1];
        int m = cells_per_piece[pc];
        double h = (b - a) / m;
        for (int k = 1; k < m; ++k)
            nodes.push_back(a + h * (k + jitter * rng.sym()));
        nodes.push_back(b);
    }
    return nodes;
}

// -- polygon triangulation ----------------------------------------------------

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// inside-or-on test with tolerance scaled by the triangle size
bool point_in_tri(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
    double scale = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    double tol = -1e-13 * scale * scale;
    double d1 = cross2(a, b, p), d2 = cross2(b, c, p), d3 = cross2(c, a, p);
    return d1 >= tol && d2 >= tol && d3 >= tol;
}

double tri_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
    double la = (c - b).norm(), lb = (a - c).norm(), lc = (b - a).norm();
    double area2 = std::abs(cross2(a, b, c));
    if (area2 <= 0) return 0.0;
    auto ang = [&](double opp, double s1, double s2) {
        double cosv = (s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2);
        return std::acos(std::clamp(cosv, -1.0, 1.0));
    };
    return std::min({ang(la, lb, lc), ang(lb, lc, la), ang(lc, la, lb)});
}

bool in_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    Eigen::Matrix3d m;
    m << a.x() - d.x(), a.y() - d.y(), (a - d).squaredNorm(),
         b.x() - d.x(), b.y() - d.y(), (b - d).squaredNorm(),
         c.x() - d.x(), c.y() - d.y(), (c - d).squaredNorm();
    double scale = std::max({(a - d).squaredNorm(), (b - d).squaredNorm(), (c - d).squaredNorm()});
    return m.determinant() > 1e-12 * scale * scale;
}

} // namespace

std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Vec2>& pts) {
    const int n = int(pts.size());
    if (n < 3) throw std::runtime_error("triangulate_polygon: fewer than 3 points");
    std::vector<int> ring(n);
    for (int i = 0; i < n; ++i) ring[i] = i;
    std::vector<std::array<int, 3>> tris;

    double scale2 = 0.0;
    for (int i = 0; i < n; ++i) scale2 = std::max(scale2, (pts[(i + 1) % n] - pts[i]).squaredNorm());

    while (ring.size() > 3) {
        int m = int(ring.size());
        int best = -1;
        double best_quality = -1.0;
        for (int i = 0; i < m; ++i) {
            int ia = ring[(i + m - 1) % m], ib = ring[i], ic = ring[(i + 1) % m];
            double area2 = cross2(pts[ia], pts[ib], pts[ic]);
            if (area2 <= 1e-13 * scale2) continue; // reflex or collinear corner
            bool blocked = false;
            for (int j = 0; j < m && !blocked; ++j) {
                int ij = ring[j];
                if (ij == ia || ij == ib || ij == ic) continue;
                if (point_in_tri(pts[ij], pts[ia], pts[ib], pts[ic])) blocked = true;
            }
            if (blocked) continue;
            double q = tri_min_angle(pts[ia], pts[ib], pts[ic]);
            if (q > best_quality) {
                best_quality = q;
                best = i;
            }
        }
        if (best < 0) throw std::runtime_error("triangulate_polygon: no ear found (degenerate polygon?)");
        int m2 = int(ring.size());
        int ia = ring[(best + m2 - 1) % m2], ib = ring[best], ic = ring[(best + 1) % m2];
        tris.push_back({ia, ib, ic});
        ring.erase(ring.begin() + best);
    }
    tris.push_back({ring[0], ring[1], ring[2]});

    // Lawson flips toward the constrained Delaunay triangulation of the chain.
    // Boundary edges (consecutive chain indices mod n) are never flipped.
    auto is_boundary = [n](int a, int b) {
        int d = std::abs(a - b);
        return d == 1 || d == n - 1;
    };
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 200) {
        changed = false;
        for (size_t t1 = 0; t1 < tris.size() && !changed; ++t1) {
            for (size_t t2 = t1 + 1; t2 < tris.size() && !changed; ++t2) {
                // find shared edge
                std::array<int, 3>&A = tris[t1], &B = tris[t2];
                int shared[2], ns = 0;
                for (int v : A)
                    for (int w : B)
                        if (v == w && ns < 2) { shared[ns++] = v; break; }
                if (ns != 2) continue;
                if (is_boundary(shared[0], shared[1])) continue;
                int a = -1, b = -1;
                for (int v : A) if (v != shared[0] && v != shared[1]) a = v;
                for (int v : B) if (v != shared[0] && v != shared[1]) b = v;
                if (a < 0 || b < 0) continue;
                // flip only if the quad is strictly convex and Delaunay improves
                if (!in_circumcircle(pts[A[0]], pts[A[1]], pts[A[2]], pts[b])) continue;
                double c1 = cross2(pts[a], pts[shared[0]], pts[b]);
                double c2 = cross2(pts[a], pts[shared[1]], pts[b]);
                if (c1 * c2 >= -1e-13 * scale2 * scale2) continue; // not strictly convex
                double before = std::min(tri_min_angle(pts[A[0]], pts[A[1]], pts[A[2]]),
                                         tri_min_angle(pts[B[0]], pts[B[1]], pts[B[2]]));
                std::array<int, 3> na{a, shared[0], b}, nb{a, b, shared[1]};
                if (cross2(pts[na[0]], pts[na[1]], pts[na[2]]) < 0) std::swap(na[1], na[2]);
                if (cross2(pts[nb[0]], pts[nb[1]], pts[nb[2]]) < 0) std::swap(nb[1], nb[2]);
                double after = std::min(tri_min_angle(pts[na[0]], pts[na[1]], pts[na[2]]),
                                        tri_min_angle(pts[nb[0]], pts[nb[1]], pts[nb[2]]));
                if (after <= before + 1e-15) continue;
                A = na;
                B = nb;
                changed = true;
            }
        }
    }

    // normalize orientation to CCW
    for (auto& t : tris)
        if (cross2(pts[t[0]], pts[t[1]], pts[t[2]]) < 0) std::swap(t[1], t[2]);
    return tris;
}

double min_triangle_angle(const std::vector<Vec2>& pts,
                          const std::vector<std::array<int, 3>>& tris) {
    double m = 1e30;
    for (const auto& t : tris)
        m = std::min(m, tri_min_angle(pts[t[0]], pts[t[1]], pts[t[2]]));
    return m;
}

QuadratureRule simplex_quadrature(const std::vector<VecX>& verts, int deg) {
    const int d = int(verts.size()) - 1;
    const double vol = simplex_measure(verts);
    QuadratureRule q;
    auto bary = [&](std::initializer_list<double> l) {
        VecX p = VecX::Zero(verts[0].size());
        int i = 0;
        for (double w : l) p += w * verts[i++];
        return p;
    };
    if (d == 0) {
        q.points = {verts[0]};
        q.weights = {1.0};
        return q;
    }
    if (d == 1) {
        // 3-point Gauss-Legendre, exact to degree 5
        const double s = std::sqrt(3.0 / 5.0);
        for (double x : {-s, 0.0, s}) {
            double t = 0.5 * (1 + x);
            q.points.push_back(bary({1 - t, t}));
        }
        q.weights = {vol * 5. / 18, vol * 8. / 18, vol * 5. / 18};
        return q;
    }
    if (d == 2) {
        // 6-point rule, exact to degree 4
        const double a1 = 0.445948490915965, b1 = 0.108103018168070;
        const double a2 = 0.091576213509771, b2 = 0.816847572980459;
        const double w1 = 0.223381589678011, w2 = 0.109951743655322;
        for (auto [a, b] : {std::pair{a1, b1}, {a2, b2}}) {
            q.points.push_back(bary({a, a, b}));
            q.points.push_back(bary({a, b, a}));
            q.points.push_back(bary({b, a, a}));
            double w = (a == a1) ? w1 : w2;
            for (int i = 0; i < 3; ++i) q.weights.push_back(vol * w);
        }
        return q;
    }
    if (d == 3) {
        // symmetric 4-point rule, exact to degree 2
        const double a = (5.0 - std::sqrt(5.0)) / 20.0;
        const double b = 1.0 - 3.0 * a;
        q.points.push_back(bary({b, a, a, a}));
        q.points.push_back(bary({a, b, a, a}));
        q.points.push_back(bary({a, a, b, a}));
        q.points.push_back(bary({a, a, a, b}));
        q.weights.assign(4, vol * 0.25);
        return q;
    }
    throw std::runtime_error("simplex_quadrature: unsupported dimension");
}

} // namespace mdfrac
