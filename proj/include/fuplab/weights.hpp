// Dyadic weight construction on annuli with bump sums, exact derivative
// evaluation, and sampled verification of the regularity/growth/damping bounds.
#pragma once

#include "fuplab/geometry.hpp"

#include <array>
#include <vector>

namespace fuplab::weights {

using geometry::Idx2;
using geometry::Vec2;

// Radial bump profile exp(1 - 1/(1 - t^2)) on |t| < 1, normalized to 1 at 0.
// Derivatives with respect to q = t^2 up to order 3.
struct BumpProfile {
    static double value(double q);
    static double d1(double q);
    static double d2(double q);
    static double d3(double q);
};

struct AnnulusRecord {
    int k{0};
    double Wk{0.0};         // 2^k / k^s
    double amplitude{0.0};  // 2^k / k^alpha
    std::vector<Idx2> cubes;  // lattice corners a: cube = prod (Wk a_j/3, Wk (a_j/3 + 1))
    double rMin{0.0}, rMax{0.0};  // radial extent of the bump supports
};

struct WeightField {
    int dim{2};
    double s{0.2};
    double alpha{0.99};
    double muScale{10.0};
    double h{1.0 / 1024};
    int k0{2};
    std::vector<AnnulusRecord> annuli;  // ascending k, only annuli that met Y

    bool emptyField() const { return annuli.empty(); }
    double innerSupportRadius() const;
    double outerSupportRadius() const;
};

WeightField build_weight(const std::vector<Vec2>& Y, int dim, double nu, double muScale,
                         double h, double alpha);

// Partial derivative of the weight at x; order = ax + ay <= 3.
double eval_weight(const WeightField& field, const Vec2& x, const std::array<int, 2>& deriv);

inline double eval_weight(const WeightField& field, const Vec2& x) {
    return eval_weight(field, x, {0, 0});
}

// Sum of the full covering bump family at x for cube side W (not just selected
// cubes); the partition bound says this lies in [1, 3^d] on the annulus.
double partition_sum(double W, const Vec2& x, int dim);

struct HypothesisReport {
    std::array<double, 4> cRegPerOrder{0.0, 0.0, 0.0, 0.0};  // max |D^a w| / <x>^{1-a}
    double cReg{0.0};
    double cGr{0.0};             // integral of G*(r) / (1+r^2)
    double cGrCoarse{0.0};       // previous ladder refinement, for convergence
    double cGrRelChange{0.0};
    double dampingLhsMax{0.0};   // max over Y of w(x) + |x| / (20 log(2+|x|)^alpha)
    double dampingConstSimple{0.0};      // mu + Cd
    double dampingConstLogImproved{0.0}; // mu / (Cd log(mu)^0.7)
    double dampingSlack{0.0};    // dampingConstSimple - dampingLhsMax
    int sampleBudget{0};
};

HypothesisReport verify_hypotheses(const WeightField& field, const std::vector<Vec2>& Y,
                                   double muScale, int sampleBudget = 10000, unsigned seed = 1,
                                   double Cd = 1.0);

// G(x) = integral over s in [1/2, 2] of |w(sx)| ds (adaptive quadrature).
double growth_G(const WeightField& field, const Vec2& x, double relTol = 1e-4);
// G*(r): maximum of G over a direction grid at radius r.
double growth_Gstar(const WeightField& field, double r, int directions = 64,
                    double relTol = 1e-4);

}  // namespace fuplab::weights
