#include "fuplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace fuplab::geometry {

namespace {

long ipow(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > (1L << 40))
            throw std::invalid_argument("grid extent overflow: base^depth too large");
        r *= b;
    }
    return r;
}

long packIndex(const Idx2& c, long extent) { return c.x() + extent * static_cast<long>(c.y()); }

}  // namespace

long DyadicSet::gridExtent() const { return ipow(base, depth); }

Vec2 DyadicSet::cellLow(const Idx2& c) const {
    return box.low() + cellSide() * c.cast<double>();
}

Vec2 DyadicSet::cellHigh(const Idx2& c) const {
    return box.low() + cellSide() * (c.cast<double>() + Vec2::Ones());
}

Vec2 DyadicSet::cellCenter(const Idx2& c) const {
    return box.low() + cellSide() * (c.cast<double>() + Vec2::Constant(0.5));
}

bool DyadicSet::inRange(const Idx2& c) const {
    const long ext = gridExtent();
    if (c.x() < 0 || c.x() >= ext) return false;
    if (dim == 1) return c.y() == 0;
    return c.y() >= 0 && c.y() < ext;
}

double DyadicSet::measure() const {
    const double cs = cellSide();
    double cell = cs;
    for (int a = 1; a < dim; ++a) cell *= cs;
    return cell * static_cast<double>(cells.size());
}

void DyadicSet::normalize() {
    if (dim != 1 && dim != 2) throw std::invalid_argument("DyadicSet: dim must be 1 or 2");
    if (base < 2) throw std::invalid_argument("DyadicSet: base must be >= 2");
    if (depth < 0) throw std::invalid_argument("DyadicSet: depth must be >= 0");
    if (!(box.side > 0.0)) throw std::invalid_argument("DyadicSet: box side must be positive");
    for (const Idx2& c : cells)
        if (!inRange(c)) throw std::invalid_argument("DyadicSet: cell index out of range");
    std::sort(cells.begin(), cells.end(), [](const Idx2& a, const Idx2& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    cells.erase(std::unique(cells.begin(), cells.end(),
                            [](const Idx2& a, const Idx2& b) {
                                return a.x() == b.x() && a.y() == b.y();
                            }),
                cells.end());
}

void ClosedPolyline::validate() const {
    if (vertices.size() < 3)
        throw std::invalid_argument("ClosedPolyline: needs at least 3 vertices");
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[(i + 1) % n];
        if ((a - b).squaredNorm() == 0.0)
            throw std::invalid_argument("ClosedPolyline: consecutive vertices coincide");
    }
}

double ClosedPolyline::diameter() const {
    double d2 = 0.0;
    for (size_t i = 0; i < vertices.size(); ++i)
        for (size_t j = i + 1; j < vertices.size(); ++j)
            d2 = std::max(d2, (vertices[i] - vertices[j]).squaredNorm());
    return std::sqrt(d2);
}

void IFSSpec::validate() const {
    if (base < 2) throw std::invalid_argument("IFSSpec: base must be >= 2");
    if (depth < 0) throw std::invalid_argument("IFSSpec: depth must be >= 0");
    const int d = dim();
    if (d != 1 && d != 2) throw std::invalid_argument("IFSSpec: needs 1 or 2 digit sets");
    for (const auto& axis : kept) {
        if (axis.empty())
            throw std::invalid_argument("IFSSpec: kept digit set is empty");
        if (static_cast<int>(axis.size()) >= base)
            throw std::invalid_argument("IFSSpec: kept digit set is the full digit range");
        for (int digit : axis)
            if (digit < 0 || digit >= base)
                throw std::invalid_argument("IFSSpec: digit outside [0,base)");
    }
}

DyadicSet build_cantor(const IFSSpec& spec, const BoundingBox& box) {
    spec.validate();
    const int d = spec.dim();

    // Per-axis index lists: all depth-n digit strings over the kept set.
    std::vector<std::vector<long>> axisIdx(d);
    for (int a = 0; a < d; ++a) {
        std::vector<long> cur{0};
        for (int lvl = 0; lvl < spec.depth; ++lvl) {
            std::vector<long> next;
            next.reserve(cur.size() * spec.kept[a].size());
            for (long p : cur)
                for (int digit : spec.kept[a]) next.push_back(p * spec.base + digit);
            cur.swap(next);
        }
        std::sort(cur.begin(), cur.end());
        axisIdx[a] = std::move(cur);
    }

    DyadicSet out;
    out.dim = d;
    out.base = spec.base;
    out.depth = spec.depth;
    out.box = box;
    if (d == 1) {
        out.cells.reserve(axisIdx[0].size());
        for (long i : axisIdx[0]) out.cells.emplace_back(static_cast<int>(i), 0);
    } else {
        out.cells.reserve(axisIdx[0].size() * axisIdx[1].size());
        for (long i : axisIdx[0])
            for (long j : axisIdx[1])
                out.cells.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
    out.normalize();
    return out;
}

DyadicSet product_set(const DyadicSet& a, const DyadicSet& b) {
    if (a.dim != 1 || b.dim != 1)
        throw std::invalid_argument("product_set: both factors must be 1-dimensional");
    if (a.base != b.base || a.depth != b.depth)
        throw std::invalid_argument("product_set: factors have incompatible base/depth");
    DyadicSet out;
    out.dim = 2;
    out.base = a.base;
    out.depth = a.depth;
    out.box = a.box;
    out.cells.reserve(a.cells.size() * b.cells.size());
    for (const Idx2& ca : a.cells)
        for (const Idx2& cb : b.cells) out.cells.emplace_back(ca.x(), cb.x());
    out.normalize();
    return out;
}

ClosedPolyline build_koch(int depth) {
    if (depth < 0) throw std::invalid_argument("build_koch: depth must be >= 0");
    ClosedPolyline poly;
    // Counterclockwise equilateral triangle on the unit circumcircle.
    for (double deg : {90.0, 210.0, 330.0}) {
        const double th = deg * M_PI / 180.0;
        poly.vertices.emplace_back(std::cos(th), std::sin(th));
    }
    const double c60 = 0.5, s60 = std::sqrt(3.0) / 2.0;
    for (int round = 0; round < depth; ++round) {
        std::vector<Vec2> next;
        next.reserve(poly.vertices.size() * 4);
        const size_t n = poly.vertices.size();
        for (size_t i = 0; i < n; ++i) {
            const Vec2 u = poly.vertices[i];
            const Vec2 v = poly.vertices[(i + 1) % n];
            const Vec2 e = (v - u) / 3.0;
            const Vec2 a = u + e;
            const Vec2 b = u + 2.0 * e;
            // Outward apex for ccw orientation: rotate the middle third by -60 deg.
            const Vec2 apex(a.x() + c60 * e.x() + s60 * e.y(),
                            a.y() - s60 * e.x() + c60 * e.y());
            next.push_back(u);
            next.push_back(a);
            next.push_back(apex);
            next.push_back(b);
        }
        poly.vertices.swap(next);
    }
    return poly;
}

bool segmentIntersectsBox(const Vec2& a, const Vec2& b, const Vec2& lo, const Vec2& hi) {
    // Liang-Barsky clip of a + t(b-a), t in [0,1], against the closed box.
    double t0 = 0.0, t1 = 1.0;
    for (int axis = 0; axis < 2; ++axis) {
        const double p = b[axis] - a[axis];
        const double qLo = lo[axis] - a[axis];
        const double qHi = hi[axis] - a[axis];
        if (p == 0.0) {
            if (a[axis] < lo[axis] || a[axis] > hi[axis]) return false;
        } else {
            double tLo = qLo / p, tHi = qHi / p;
            if (tLo > tHi) std::swap(tLo, tHi);
            t0 = std::max(t0, tLo);
            t1 = std::min(t1, tHi);
            if (t0 > t1) return false;
        }
    }
    return true;
}

double pointBoxDistance(const Vec2& p, const Vec2& lo, const Vec2& hi, int dim) {
    double d2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        const double g = std::max({lo[a] - p[a], p[a] - hi[a], 0.0});
        d2 += g * g;
    }
    return std::sqrt(d2);
}

DyadicSet discretize_curve(const ClosedPolyline& curve, int base, int depth,
                           const BoundingBox& box) {
    curve.validate();
    const Vec2 lo = box.low();
    const Vec2 hi = box.high();
    for (const Vec2& v : curve.vertices)
        if (v.x() < lo.x() || v.x() > hi.x() || v.y() < lo.y() || v.y() > hi.y())
            throw std::invalid_argument("discretize_curve: curve exits the bounding box");

    DyadicSet out;
    out.dim = 2;
    out.base = base;
    out.depth = depth;
    out.box = box;
    const long ext = out.gridExtent();
    const double cs = out.cellSide();

    std::unordered_set<long> seen;
    const size_t n = curve.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = curve.vertices[i];
        const Vec2 b = curve.vertices[(i + 1) % n];
        int i0 = static_cast<int>(std::floor((std::min(a.x(), b.x()) - lo.x()) / cs));
        int i1 = static_cast<int>(std::floor((std::max(a.x(), b.x()) - lo.x()) / cs));
        int j0 = static_cast<int>(std::floor((std::min(a.y(), b.y()) - lo.y()) / cs));
        int j1 = static_cast<int>(std::floor((std::max(a.y(), b.y()) - lo.y()) / cs));
        i0 = std::max(i0, 0);
        j0 = std::max(j0, 0);
        i1 = std::min<long>(i1, ext - 1);
        j1 = std::min<long>(j1, ext - 1);
        for (int ci = i0; ci <= i1; ++ci) {
            for (int cj = j0; cj <= j1; ++cj) {
                const Idx2 c(ci, cj);
                const long key = packIndex(c, ext);
                if (seen.count(key)) continue;
                if (segmentIntersectsBox(a, b, out.cellLow(c), out.cellHigh(c))) {
                    seen.insert(key);
                    out.cells.push_back(c);
                }
            }
        }
    }
    out.normalize();
    return out;
}

DyadicSet neighborhood(const DyadicSet& s, double r) {
    if (r < 0.0) throw std::invalid_argument("neighborhood: radius must be >= 0");
    DyadicSet out = s;
    if (r == 0.0 || s.cells.empty()) return out;

    const double cs = s.cellSide();
    const long ext = s.gridExtent();
    const int reach = static_cast<int>(std::ceil(r / cs)) + 1;

    std::unordered_set<long> seen;
    seen.reserve(s.cells.size() * 4);
    for (const Idx2& c : s.cells) seen.insert(packIndex(c, ext));

    // A grid cell joins the neighborhood when its open interior meets X(r),
    // i.e. its box is strictly within distance r of some input cell.
    for (const Idx2& c : s.cells) {
        const int jLo = s.dim == 2 ? std::max(0, c.y() - reach) : 0;
        const int jHi = s.dim == 2 ? std::min<long>(ext - 1, c.y() + reach) : 0;
        for (int ci = std::max(0, c.x() - reach); ci <= std::min<long>(ext - 1, c.x() + reach); ++ci) {
            for (int cj = jLo; cj <= jHi; ++cj) {
                const Idx2 cand(ci, cj);
                const long key = packIndex(cand, ext);
                if (seen.count(key)) continue;
                double d2 = 0.0;
                for (int a = 0; a < s.dim; ++a) {
                    const double g = static_cast<double>(std::max(std::abs(cand[a] - c[a]) - 1, 0)) * cs;
                    d2 += g * g;
                }
                if (std::sqrt(d2) < r) {
                    seen.insert(key);
                    out.cells.push_back(cand);
                }
            }
        }
    }
    out.normalize();
    return out;
}

DyadicSet affine_image(const DyadicSet& s, double scale, const Vec2& shift,
                       int targetBase, int targetDepth, const BoundingBox& targetBox) {
    if (!(scale > 0.0)) throw std::invalid_argument("affine_image: scale must be positive");
    DyadicSet out;
    out.dim = s.dim;
    out.base = targetBase;
    out.depth = targetDepth;
    out.box = targetBox;
    const long ext = out.gridExtent();
    const double cs = out.cellSide();
    const Vec2 lo = targetBox.low();

    std::unordered_set<long> seen;
    for (const Idx2& c : s.cells) {
        Vec2 a = scale * s.cellLow(c) + shift;
        Vec2 b = scale * s.cellHigh(c) + shift;
        for (int axis = 0; axis < s.dim; ++axis) {
            // Target cells whose open interior meets the closed image box.
            long i0 = static_cast<long>(std::floor((a[axis] - lo[axis]) / cs));
            long i1 = static_cast<long>(std::ceil((b[axis] - lo[axis]) / cs)) - 1;
            a[axis] = static_cast<double>(std::max(i0, 0L));
            b[axis] = static_cast<double>(std::min(i1, ext - 1));
        }
        const int jLo = s.dim == 2 ? static_cast<int>(a.y()) : 0;
        const int jHi = s.dim == 2 ? static_cast<int>(b.y()) : 0;
        for (int ci = static_cast<int>(a.x()); ci <= static_cast<int>(b.x()); ++ci) {
            for (int cj = jLo; cj <= jHi; ++cj) {
                const Idx2 cand(ci, cj);
                const long key = packIndex(cand, ext);
                if (!seen.count(key)) {
                    seen.insert(key);
                    out.cells.push_back(cand);
                }
            }
        }
    }
    out.normalize();
    return out;
}

long coveringCount(const DyadicSet& s, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("coveringCount: scale must be positive");
    const Vec2 lo = s.box.low();
    std::unordered_set<long> seen;
    const long stride = 1L << 21;
    for (const Idx2& c : s.cells) {
        const Vec2 a = s.cellLow(c);
        const Vec2 b = s.cellHigh(c);
        const long i0 = static_cast<long>(std::floor((a.x() - lo.x()) / r));
        const long i1 = static_cast<long>(std::floor((b.x() - lo.x()) / r));
        const long j0 = s.dim == 2 ? static_cast<long>(std::floor((a.y() - lo.y()) / r)) : 0;
        const long j1 = s.dim == 2 ? static_cast<long>(std::floor((b.y() - lo.y()) / r)) : 0;
        for (long i = i0; i <= i1; ++i)
            for (long j = j0; j <= j1; ++j) seen.insert(i + stride * j);
    }
    return static_cast<long>(seen.size());
}

long coveringCount(const ClosedPolyline& curve, const BoundingBox& box, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("coveringCount: scale must be positive");
    const Vec2 lo = box.low();
    std::unordered_set<long> seen;
    const long stride = 1L << 21;
    const size_t n = curve.vertices.size();
    for (size_t k = 0; k < n; ++k) {
        const Vec2 a = curve.vertices[k];
        const Vec2 b = curve.vertices[(k + 1) % n];
        const long i0 = static_cast<long>(std::floor((std::min(a.x(), b.x()) - lo.x()) / r));
        const long i1 = static_cast<long>(std::floor((std::max(a.x(), b.x()) - lo.x()) / r));
        const long j0 = static_cast<long>(std::floor((std::min(a.y(), b.y()) - lo.y()) / r));
        const long j1 = static_cast<long>(std::floor((std::max(a.y(), b.y()) - lo.y()) / r));
        for (long i = i0; i <= i1; ++i) {
            for (long j = j0; j <= j1; ++j) {
                const Vec2 cellLo = lo + r * Vec2(static_cast<double>(i), static_cast<double>(j));
                if (segmentIntersectsBox(a, b, cellLo, cellLo + Vec2::Constant(r)))
                    seen.insert(i + stride * j);
            }
        }
    }
    return static_cast<long>(seen.size());
}

}  // namespace fuplab::geometry
