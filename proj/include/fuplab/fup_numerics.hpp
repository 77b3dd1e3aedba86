// Discrete localization norms: DFT submatrix singular values, oscillatory
// kernel (Nystrom) norms with the logarithmic phase, and decay-exponent fits.
#pragma once

#include "fuplab/geometry.hpp"

#include <complex>
#include <string>
#include <vector>

namespace fuplab::fupnum {

using geometry::DyadicSet;
using geometry::Idx2;
using geometry::Vec2;

struct NormPoint {
    double scaleN{0.0};     // N (or 1/h)
    double h{0.0};
    double norm{0.0};
    std::string method;     // exact-svd | power-iteration | polar-circulant
    double residual{0.0};
    int iterations{0};
};

struct NormSeries {
    std::string setId;
    std::vector<NormPoint> points;
};

struct ExponentFit {
    double beta{0.0};       // slope of -log sigma against log(1/h)
    double logC{0.0};
    double r2{0.0};
    std::vector<double> residuals;
};

// Largest singular value of the |X| x |Y| submatrix of the unitary N-point
// tensor DFT, entries N^{-d/2} exp(-2 pi i <j,k> / N).
double dft_submatrix_norm(int N, const std::vector<Idx2>& X, const std::vector<Idx2>& Y, int d,
                          std::string* methodOut = nullptr, double* residualOut = nullptr,
                          int* iterationsOut = nullptr, bool forcePowerIteration = false);

struct LadderSpec {
    enum class Kind { Cantor, OrthogonalLines, FullBox };
    Kind kind{Kind::Cantor};
    int d{1};
    int base{3};
    std::vector<std::vector<int>> keptX;  // per-axis digit sets for X
    std::vector<std::vector<int>> keptY;  // empty => Y = X
    std::string id() const;
};

// Digit-set index lists at depth n (N = base^n).
std::vector<Idx2> ladder_indices(const LadderSpec& spec, int depth, bool forY);

NormSeries fup_decay_series(const LadderSpec& spec, const std::vector<int>& depths);

ExponentFit fit_exponent(const NormSeries& series);

enum class PhaseKind { EuclideanFourier, HyperbolicLog, CircleModel };

struct FIOSpec {
    PhaseKind phase{PhaseKind::HyperbolicLog};
    int dim{2};
    double chiLo{0.3};          // cutoff annulus in |x - x'|; chiLo <= 0 disables
    double chiHi{8.0};
    double chiTransition{0.1};  // relative smoothing width of the cutoff edges
    double rho{0.9};            // thickening exponent, in (3/4, 1)
    double C1{1.0};             // thickening prefactor
};

double phaseValue(const FIOSpec& spec, const Vec2& x, const Vec2& y);
double cutoffChi(const FIOSpec& spec, double separation);

struct FIONormResult {
    double norm{0.0};
    double coarseNorm{0.0};
    double relChange{0.0};
    bool converged{false};
    long quadPoints{0};
    std::string method;
};

// Nystrom norm of 1_{X(C1 h^rho)} B(h) 1_{X(C1 h^rho)} on a cartesian grid of
// spacing <= h/8; includes the halved-spacing refinement check.
FIONormResult fio_norm(const FIOSpec& spec, const DyadicSet& X, double h);

// Same operator for a rotation-invariant X (circle of the given radius):
// polar grid, block-circulant modes, exact singular values of the same
// Nystrom matrix.
FIONormResult fio_norm_circle(const FIOSpec& spec, double radius, double h);

// 1D model operator on the circle (uniform angular grid, circulant).
FIONormResult fio_norm_circle_model(const FIOSpec& spec, double h);

// Single-grid polar evaluation at an explicit spacing (no refinement check);
// exposed so tests can cross-validate the block-circulant reduction against a
// dense decomposition of the same matrix.
double fio_norm_circle_raw(const FIOSpec& spec, double radius, double h, double spacing,
                           long* pointsOut = nullptr);

struct HessianStats {
    double supNorm{0.0};    // sup of the largest singular value
    double supRatio{0.0};   // sup of s_max/s_min
};

// Mixed second-derivative statistics of the phase over off-diagonal pairs.
HessianStats phase_hessian_stats(const FIOSpec& spec,
                                 const std::vector<std::pair<Vec2, Vec2>>& pairs);

// Closed-form mixed Hessian for the supported phases.
Eigen::Matrix2d phase_mixed_hessian(const FIOSpec& spec, const Vec2& x, const Vec2& y);

}  // namespace fuplab::fupnum
