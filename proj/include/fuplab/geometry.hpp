// Dyadic cell sets, Cantor/Koch generators and the set operations built on them.
#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuplab::geometry {

using Vec2 = Eigen::Vector2d;
using Idx2 = Eigen::Vector2i;

struct BoundingBox {
    Vec2 center{0.0, 0.0};
    double side{2.0};

    Vec2 low() const { return center - Vec2::Constant(side / 2.0); }
    Vec2 high() const { return center + Vec2::Constant(side / 2.0); }
};

// A finite union of closed axis-aligned cells on the base-L grid of depth n
// inside a bounding box. Cell (i,j) spans low() + cellSide()*[i,i+1]x[j,j+1];
// the second index is zero when dim == 1. Cells are kept sorted and unique.
struct DyadicSet {
    int dim{1};
    int base{2};
    int depth{0};
    BoundingBox box;
    std::vector<Idx2> cells;

    long gridExtent() const;                // base^depth per axis
    double cellSide() const { return box.side / static_cast<double>(gridExtent()); }
    Vec2 cellLow(const Idx2& c) const;
    Vec2 cellHigh(const Idx2& c) const;
    Vec2 cellCenter(const Idx2& c) const;
    bool inRange(const Idx2& c) const;
    bool empty() const { return cells.empty(); }
    double measure() const;                 // Lebesgue measure of the cell union

    void normalize();                        // sort, dedupe, validate invariants
};

struct ClosedPolyline {
    std::vector<Vec2> vertices;              // closure implicit, first != last

    void validate() const;
    double diameter() const;
};

// Digit-restricted iterated construction: per-axis kept digit sets in {0..L-1}.
struct IFSSpec {
    int base{3};
    std::vector<std::vector<int>> kept;
    int depth{1};

    int dim() const { return static_cast<int>(kept.size()); }
    void validate() const;
};

struct Line {
    Vec2 point{0.0, 0.0};
    Vec2 dir{1.0, 0.0};                      // normalized on use
};

DyadicSet build_cantor(const IFSSpec& spec, const BoundingBox& box = BoundingBox{});

DyadicSet product_set(const DyadicSet& a, const DyadicSet& b);

ClosedPolyline build_koch(int depth);

DyadicSet discretize_curve(const ClosedPolyline& curve, int base, int depth,
                           const BoundingBox& box);

DyadicSet neighborhood(const DyadicSet& s, double r);

DyadicSet affine_image(const DyadicSet& s, double scale, const Vec2& shift,
                       int targetBase, int targetDepth, const BoundingBox& targetBox);

// Closed-box segment intersection predicate (Liang-Barsky clipping).
bool segmentIntersectsBox(const Vec2& a, const Vec2& b, const Vec2& lo, const Vec2& hi);

// Exact Euclidean distance from a point to a closed axis-aligned box.
double pointBoxDistance(const Vec2& p, const Vec2& lo, const Vec2& hi, int dim);

// Box-counting: number of side-r grid boxes (anchored at box.low()) meeting the set.
long coveringCount(const DyadicSet& s, double r);
long coveringCount(const ClosedPolyline& curve, const BoundingBox& box, double r);

}  // namespace fuplab::geometry
