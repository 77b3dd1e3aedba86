// Porosity certification on dyadic sets plus the geometric estimators
// (regularity, three-point constant, non-concentration) used downstream.
#pragma once

#include "fuplab/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

namespace fuplab::porosity {

using geometry::BoundingBox;
using geometry::ClosedPolyline;
using geometry::DyadicSet;
using geometry::Idx2;
using geometry::Line;
using geometry::Vec2;

// Exact point-to-cell-union distance queries over the cell lattice: an
// occupancy bitmap with ring scans, pre-screened by a center-to-center
// Euclidean distance transform when the threshold spans many cells.
class CellDistanceIndex {
public:
    explicit CellDistanceIndex(const DyadicSet& s);

    // True iff some cell box lies within (closed) Euclidean distance t of p.
    bool anyWithin(const Vec2& p, double t) const;
    double distance(const Vec2& p, double cap) const;  // exact below cap, else inf
    bool empty() const { return empty_; }

private:
    bool ringScan(const Vec2& p, double t, long ci, long cj) const;

    int dim_;
    bool empty_;
    double cs_;
    double halfDiag_;
    Vec2 lo_;
    long extent_;
    std::vector<uint8_t> occ_;
    std::vector<float> centerDist_;  // exact distance to the nearest occupied center
};

enum class PorosityKind { Balls, Lines, Box };
enum class Verdict { Holds, Violated };

struct ScanParams {
    double strideFraction{0.25};   // candidate/window stride = strideFraction*nu*R
    double ladderRatio{2.0};       // geometric scale ladder, anchored at box side
    int directions{64};            // line scans only
    int maxWitnessSamples{8};
    int rescanFactor{2};           // violation re-check densification
};

struct ScanWindow {
    double scale{0.0};             // ball diameter / segment length
    Vec2 center{0.0, 0.0};
    double angle{-1.0};            // segment direction; <0 for balls
};

struct PorosityCertificate {
    PorosityKind kind{PorosityKind::Balls};
    double nu{0.0};
    double alpha0{0.0};
    double alpha1{0.0};
    int boxScaleL{0};              // box porosity only
    int boxMaxDepth{0};
    Verdict verdict{Verdict::Holds};
    bool vacuous{false};
    std::vector<std::pair<ScanWindow, Vec2>> witnessSamples;
    std::optional<ScanWindow> violation;     // ball/line violations
    Vec2 violationWitnessGap{0.0, 0.0};      // best clearance seen in the bad window
    int violationDepth{-1};                  // box violations
    Idx2 violationCell{0, 0};
    ScanParams params;

    bool holds() const { return verdict == Verdict::Holds; }
};

PorosityCertificate certify_ball_porosity(const DyadicSet& s, double nu, double alpha0,
                                          double alpha1, const ScanParams& params = {});

PorosityCertificate certify_line_porosity(const DyadicSet& s, double nu, double alpha0,
                                          double alpha1, int directions = 64,
                                          const ScanParams& params = {});

PorosityCertificate certify_box_porosity(const DyadicSet& s, int scaleL, int maxDepth);

double max_porosity(const DyadicSet& s, PorosityKind kind, double alpha0, double alpha1,
                    int directions = 64, double tol = 1e-3);

// Decoupled scan: clearance tested at nuTest while the scan grid (strides,
// window lattice) is built from nuGrid. Used for the monotonicity property.
bool scan_holds_on_grid(const DyadicSet& s, PorosityKind kind, double nuTest, double nuGrid,
                        double alpha0, double alpha1, const ScanParams& params = {});

struct PorosityTransforms {
    double neighborhoodNu;        // nu'
    double neighborhoodAlpha0;    // r/(nu-nu')
    double neighborhoodAlpha1;    // alpha1 unchanged
    double dilationNu;            // nu unchanged
    double dilationAlpha0;        // s*alpha0
    double dilationAlpha1;        // s*alpha1
};

PorosityTransforms porosity_transforms(double nu, double nuPrime, double r, double dilation,
                                       double alpha0, double alpha1);

DyadicSet restrict_to_line(const DyadicSet& s, const Line& line);

struct MeasureBoundSample {
    Vec2 center;                  // ball center / segment midpoint
    double radiusOrLength;        // ball radius (A.7) or segment length (A.8)
    double angle{-1.0};
    double measure;
    double bound;
    double slack;                 // bound / measure (inf when measure == 0)
};

struct MeasureBoundReport {
    double totalMeasure;          // Lebesgue measure of the cell union
    double boxBound;              // 2^d (1-L^-d)^N * box volume factor
    double boxSlack;
    int boxDepthCount;            // N
    double gammaExact;            // log(1/(1-L^-d)) / log L at L = ceil(sqrt(d)/nu)
    double gammaBalls;            // nu^d / (Cd (1+log(1/nu)))
    double gammaLines;            // nu / (Cd (1+log(1/nu)))
    std::vector<MeasureBoundSample> ballSamples;
    std::vector<MeasureBoundSample> segmentSamples;
    double minBallSlack;
    double minSegmentSlack;
};

MeasureBoundReport check_measure_bounds(const DyadicSet& s, const PorosityCertificate& cert,
                                        int sampleCount = 100, unsigned seed = 1,
                                        double Cd = 1.0);

struct RegularityEstimate {
    double delta;                  // fitted regularity exponent
    double cMu;                    // max ratio defect over sampled (x0, r)
    double rMin, rMax;
    std::vector<std::pair<double, long>> coveringCounts;  // (r, N(r))
};

RegularityEstimate estimate_regularity(const DyadicSet& s, double rMin, double rMax,
                                       int samples = 200, unsigned seed = 1);

struct ArcConstantEstimate {
    double cArc;
    std::pair<int, int> maximizerPair;  // vertex indices
    double shortArcDiameter;
    double chord;
};

ArcConstantEstimate estimate_three_point_constant(const ClosedPolyline& curve);

struct MonotoneTriple {
    int i1, i2, i3;               // 0-based positions
    bool increasing;
};

MonotoneTriple monotone_triple(const std::array<int, 5>& perm);

struct OffLinePointParams {
    double delta;                 // regularity exponent, > 1
    double cMuTilde;              // local regularity constant
    double cOut;                  // non-concentration constant
};

struct OffLinePointResult {
    bool found;
    Vec2 point;
    double distanceToLine;
    double packingRadius;         // r' used by the greedy packing
    int packedCount;
};

OffLinePointResult find_point_off_line(const DyadicSet& sample, const Vec2& center, double r,
                                       const Line& line, const OffLinePointParams& params);

// Exact area of the intersection of a closed axis-aligned box and a disk.
double diskBoxArea(const Vec2& c, double radius, const Vec2& lo, const Vec2& hi);

// Total length of {t : line.point + t*dir in cell union}, segment t in [t0,t1].
double lineSliceMeasure(const DyadicSet& s, const Line& line, double t0, double t1);

}  // namespace fuplab::porosity
