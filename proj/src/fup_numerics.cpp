#include "fuplab/fup_numerics.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fuplab::fupnum {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cplx = std::complex<double>;

constexpr int kExactSvdLimit = 4096;
constexpr long kStoredMatrixLimit = 6000;
constexpr unsigned kPowerSeed = 0x5eedfab5u;

MatrixXcd dftSubmatrix(int N, const std::vector<Idx2>& X, const std::vector<Idx2>& Y, int d) {
    const double scale = std::pow(static_cast<double>(N), -0.5 * d);
    const double twoPiOverN = 2.0 * M_PI / static_cast<double>(N);
    MatrixXcd A(static_cast<long>(X.size()), static_cast<long>(Y.size()));
    for (size_t i = 0; i < X.size(); ++i) {
        for (size_t j = 0; j < Y.size(); ++j) {
            long dot = static_cast<long>(X[i].x()) * Y[j].x();
            if (d == 2) dot += static_cast<long>(X[i].y()) * Y[j].y();
            const double phase = -twoPiOverN * static_cast<double>(dot % N);
            A(static_cast<long>(i), static_cast<long>(j)) =
                scale * cplx(std::cos(phase), std::sin(phase));
        }
    }
    return A;
}

double gramLargestSingular(const MatrixXcd& A) {
    // Exact dense route via the Hermitian Gram matrix on the smaller side.
    if (A.cols() <= A.rows()) {
        const MatrixXcd G = A.adjoint() * A;
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(G, Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }
    const MatrixXcd G = A * A.adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(G, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double powerIteration(const MatrixXcd& A, double relResidual, double* residualOut,
                      int* iterationsOut) {
    std::mt19937 rng(kPowerSeed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXcd v(A.cols());
    for (long i = 0; i < v.size(); ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v.normalize();
    double lambda = 0.0, residual = 0.0;
    int it = 0;
    for (; it < 10000; ++it) {
        const VectorXcd w = A.adjoint() * (A * v);
        lambda = w.norm();
        if (lambda == 0.0) break;
        residual = (w - lambda * v).norm() / lambda;
        v = w / lambda;
        if (residual < relResidual) break;
    }
    if (residualOut) *residualOut = residual;
    if (iterationsOut) *iterationsOut = it + 1;
    return std::sqrt(lambda);
}

}  // namespace

double dft_submatrix_norm(int N, const std::vector<Idx2>& X, const std::vector<Idx2>& Y, int d,
                          std::string* methodOut, double* residualOut, int* iterationsOut,
                          bool forcePowerIteration) {
    if (N <= 0) throw std::domain_error("dft_submatrix_norm: N must be positive");
    if (d != 1 && d != 2) throw std::domain_error("dft_submatrix_norm: d must be 1 or 2");
    if (X.empty() || Y.empty()) {
        if (methodOut) *methodOut = "empty";
        return 0.0;
    }
    for (const auto* S : {&X, &Y})
        for (const Idx2& c : *S)
            if (c.x() < 0 || c.x() >= N || (d == 2 && (c.y() < 0 || c.y() >= N)))
                throw std::domain_error("dft_submatrix_norm: index outside [0,N)^d");

    const MatrixXcd A = dftSubmatrix(N, X, Y, d);
    if (!forcePowerIteration && std::max(A.rows(), A.cols()) <= kExactSvdLimit) {
        if (methodOut) *methodOut = "exact-svd";
        if (residualOut) *residualOut = 0.0;
        if (iterationsOut) *iterationsOut = 0;
        return gramLargestSingular(A);
    }
    if (methodOut) *methodOut = "power-iteration";
    return powerIteration(A, 1e-8, residualOut, iterationsOut);
}

std::string LadderSpec::id() const {
    switch (kind) {
        case Kind::Cantor: {
            std::string s = "cantor-b" + std::to_string(base) + "-d" + std::to_string(d);
            return s;
        }
        case Kind::OrthogonalLines:
            return "orthogonal-lines";
        case Kind::FullBox:
            return "full-box-d" + std::to_string(d);
    }
    return "unknown";
}

std::vector<Idx2> ladder_indices(const LadderSpec& spec, int depth, bool forY) {
    long N = 1;
    for (int i = 0; i < depth; ++i) {
        N *= spec.base;
        if (N > (1L << 22)) throw std::domain_error("ladder_indices: N too large");
    }
    std::vector<Idx2> out;
    switch (spec.kind) {
        case LadderSpec::Kind::Cantor: {
            const auto& kept = (forY && !spec.keptY.empty()) ? spec.keptY : spec.keptX;
            if (static_cast<int>(kept.size()) != spec.d)
                throw std::invalid_argument("ladder_indices: digit sets do not match dimension");
            std::array<std::vector<long>, 2> axis;
            for (int ax = 0; ax < spec.d; ++ax) {
                std::vector<long> cur{0};
                for (int l = 0; l < depth; ++l) {
                    std::vector<long> next;
                    for (long p : cur)
                        for (int dig : kept[ax]) next.push_back(p * spec.base + dig);
                    cur.swap(next);
                }
                axis[ax] = std::move(cur);
            }
            if (spec.d == 1) {
                for (long i : axis[0]) out.emplace_back(static_cast<int>(i), 0);
            } else {
                if (axis[0].size() * axis[1].size() > (1u << 22))
                    throw std::domain_error("ladder_indices: index set too large");
                for (long i : axis[0])
                    for (long j : axis[1]) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
            break;
        }
        case LadderSpec::Kind::OrthogonalLines: {
            if (spec.d != 2)
                throw std::invalid_argument("ladder_indices: orthogonal lines need d = 2");
            for (long i = 0; i < N; ++i)
                out.emplace_back(forY ? Idx2(0, static_cast<int>(i))
                                      : Idx2(static_cast<int>(i), 0));
            break;
        }
        case LadderSpec::Kind::FullBox: {
            if (spec.d == 1) {
                for (long i = 0; i < N; ++i) out.emplace_back(static_cast<int>(i), 0);
            } else {
                if (N * N > (1L << 22)) throw std::domain_error("ladder_indices: N^2 too large");
                for (long i = 0; i < N; ++i)
                    for (long j = 0; j < N; ++j)
                        out.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
            break;
        }
    }
    return out;
}

NormSeries fup_decay_series(const LadderSpec& spec, const std::vector<int>& depths) {
    if (depths.empty()) throw std::invalid_argument("fup_decay_series: empty depth list");
    for (size_t i = 1; i < depths.size(); ++i)
        if (depths[i] <= depths[i - 1])
            throw std::invalid_argument("fup_decay_series: depths must increase");
    NormSeries series;
    series.setId = spec.id();
    for (int depth : depths) {
        long N = 1;
        for (int i = 0; i < depth; ++i) N *= spec.base;
        NormPoint pt;
        pt.scaleN = static_cast<double>(N);
        pt.h = 1.0 / static_cast<double>(N);
        const auto X = ladder_indices(spec, depth, false);
        const auto Y = ladder_indices(spec, depth, true);
        pt.norm = dft_submatrix_norm(static_cast<int>(N), X, Y, spec.d, &pt.method,
                                     &pt.residual, &pt.iterations);
        series.points.push_back(pt);
    }
    return series;
}

ExponentFit fit_exponent(const NormSeries& series) {
    const size_t n = series.points.size();
    if (n < 4) throw std::invalid_argument("fit_exponent: needs at least 4 points");
    for (const auto& p : series.points)
        if (!(p.norm > 0.0))
            throw std::domain_error("fit_exponent: zero norm makes the fit degenerate");

    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd y(n);
    for (size_t i = 0; i < n; ++i) {
        A(i, 0) = std::log(1.0 / series.points[i].h);
        A(i, 1) = 1.0;
        y(i) = -std::log(series.points[i].norm);
    }
    const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
    ExponentFit fit;
    fit.beta = coef(0);
    fit.logC = coef(1);
    const Eigen::VectorXd pred = A * coef;
    const double meanY = y.mean();
    double ssRes = 0.0, ssTot = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y(i) - pred(i);
        fit.residuals.push_back(r);
        ssRes += r * r;
        ssTot += (y(i) - meanY) * (y(i) - meanY);
    }
    fit.r2 = ssTot > 0.0 ? 1.0 - ssRes / ssTot : 1.0;
    return fit;
}

// ---------------------------------------------------------------------------
// Oscillatory kernels

double cutoffChi(const FIOSpec& spec, double separation) {
    if (spec.chiLo <= 0.0) return 1.0;
    const double w = spec.chiTransition * (spec.chiHi - spec.chiLo);
    auto rise = [](double u) {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        const double a = std::exp(-1.0 / u);
        const double b = std::exp(-1.0 / (1.0 - u));
        return a / (a + b);
    };
    return rise((separation - spec.chiLo) / w) * rise((spec.chiHi - separation) / w);
}

double phaseValue(const FIOSpec& spec, const Vec2& x, const Vec2& y) {
    switch (spec.phase) {
        case PhaseKind::EuclideanFourier:
            return spec.dim == 2 ? -x.dot(y) : -x.x() * y.x();
        case PhaseKind::HyperbolicLog: {
            const double R = (x - y).norm();
            return 2.0 * std::log(2.0 * R /
                                  std::sqrt((1.0 + x.squaredNorm()) * (1.0 + y.squaredNorm())));
        }
        case PhaseKind::CircleModel: {
            const double d = x.x() - y.x();
            return std::log(2.0 - 2.0 * std::cos(d));
        }
    }
    return 0.0;
}

Eigen::Matrix2d phase_mixed_hessian(const FIOSpec& spec, const Vec2& x, const Vec2& y) {
    Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
    switch (spec.phase) {
        case PhaseKind::EuclideanFourier:
            H = -Eigen::Matrix2d::Identity();
            if (spec.dim == 1) H(1, 1) = 0.0;
            break;
        case PhaseKind::HyperbolicLog: {
            // the factor 2 in the phase doubles the raw curvature scale; the
            // singular-value ratio of (-I + 2 v v^T) stays 1 either way
            const Vec2 diff = x - y;
            const double R = diff.norm();
            if (R == 0.0)
                throw std::domain_error("phase_mixed_hessian: grid touches the diagonal");
            const Vec2 v = diff / R;
            H = 2.0 * (-Eigen::Matrix2d::Identity() + 2.0 * v * v.transpose()) / (R * R);
            break;
        }
        case PhaseKind::CircleModel: {
            const double d = x.x() - y.x();
            if (std::sin(0.5 * d) == 0.0)
                throw std::domain_error("phase_mixed_hessian: grid touches the diagonal");
            const double s = std::sin(0.5 * d);
            H(0, 0) = -0.5 / (s * s);
            break;
        }
    }
    return H;
}

HessianStats phase_hessian_stats(const FIOSpec& spec,
                                 const std::vector<std::pair<Vec2, Vec2>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("phase_hessian_stats: empty grid");
    HessianStats st;
    for (const auto& [x, y] : pairs) {
        const Eigen::Matrix2d H = phase_mixed_hessian(spec, x, y);
        double sMax, sMin;
        if (spec.dim == 1 || spec.phase == PhaseKind::CircleModel) {
            sMax = sMin = std::abs(H(0, 0));
        } else {
            Eigen::JacobiSVD<Eigen::Matrix2d> svd(H);
            sMax = svd.singularValues()(0);
            sMin = svd.singularValues()(1);
        }
        if (sMin == 0.0)
            throw std::domain_error("phase_hessian_stats: singular mixed Hessian");
        st.supNorm = std::max(st.supNorm, sMax);
        st.supRatio = std::max(st.supRatio, sMax / sMin);
    }
    return st;
}

namespace {

void validateFioArgs(const FIOSpec& spec, double h) {
    if (!(h > 0.0 && h < 1.0 / 100.0))
        throw std::domain_error("fio_norm: h must lie in (0, 1/100)");
    if (!(spec.rho > 0.75 && spec.rho < 1.0))
        throw std::domain_error("fio_norm: rho must lie in (3/4, 1)");
    if (!(spec.C1 > 0.0)) throw std::domain_error("fio_norm: C1 must be positive");
}

double cartesianNorm(const FIOSpec& spec, const DyadicSet& X, double h, double spacing,
                     long* pointsOut, std::string* methodOut) {
    using geometry::DyadicSet;
    const double w = spec.C1 * std::pow(h, spec.rho);
    int depth = X.depth;
    DyadicSet grid = X;
    while (grid.box.side / std::pow(static_cast<double>(grid.base), depth) > spacing) {
        ++depth;
        if (depth > 40) throw std::domain_error("fio_norm: spacing too fine for the grid");
    }
    if (depth != X.depth)
        grid = geometry::affine_image(X, 1.0, Vec2(0.0, 0.0), X.base, depth, X.box);
    grid = geometry::neighborhood(grid, w);

    const long M = static_cast<long>(grid.cells.size());
    if (pointsOut) *pointsOut = M;
    if (M == 0) return 0.0;
    if (M > kStoredMatrixLimit)
        throw std::domain_error(
            "fio_norm: quadrature grid exceeds the dense budget; use the polar route for "
            "rotation-invariant sets");

    const double cs = grid.cellSide();
    const double cellWeight = spec.dim == 2 ? cs * cs : cs;
    const double prefactor =
        std::pow(2.0 * M_PI * h, -0.5 * spec.dim) * cellWeight;

    std::vector<Vec2> pts(M);
    for (long i = 0; i < M; ++i) pts[i] = grid.cellCenter(grid.cells[i]);

    MatrixXcd A(M, M);
    for (long i = 0; i < M; ++i) {
        for (long j = 0; j < M; ++j) {
            const double sep = (pts[i] - pts[j]).norm();
            const double chi = cutoffChi(spec, sep);
            if (chi == 0.0) {
                A(i, j) = 0.0;
                continue;
            }
            const double ph = phaseValue(spec, pts[i], pts[j]) / h;
            A(i, j) = prefactor * chi * cplx(std::cos(ph), std::sin(ph));
        }
    }
    if (M <= kExactSvdLimit) {
        if (methodOut) *methodOut = "exact-svd";
        return gramLargestSingular(A);
    }
    if (methodOut) *methodOut = "power-iteration";
    return powerIteration(A, 1e-8, nullptr, nullptr);
}

long next5Smooth(long n) {
    // Smallest 5-smooth integer >= n (keeps FFT lengths fast).
    long best = 1;
    while (best < n) best *= 2;
    for (long p2 = 1; p2 < 2 * n; p2 *= 2) {
        for (long p3 = p2; p3 < 2 * n; p3 *= 3) {
            for (long p5 = p3; p5 < 2 * n; p5 *= 5) {
                if (p5 >= n) {
                    best = std::min(best, p5);
                    break;
                }
            }
        }
    }
    return best;
}

double polarCirculantNorm(const FIOSpec& spec, double radius, double h, double spacing,
                          long* pointsOut) {
    const double w = spec.C1 * std::pow(h, spec.rho);
    const double rLo = radius - w, rHi = radius + w;
    if (rLo <= 0.0) throw std::domain_error("fio_norm_circle: thickening swallows the origin");
    const int nr = std::max(2, static_cast<int>(std::ceil(2.0 * w / spacing)));
    const double dr = 2.0 * w / nr;
    const long nTheta = next5Smooth(static_cast<long>(std::ceil(2.0 * M_PI * rHi / spacing)));
    const double dTheta = 2.0 * M_PI / static_cast<double>(nTheta);
    if (pointsOut) *pointsOut = static_cast<long>(nr) * nTheta;

    std::vector<double> r(nr), sqrtW(nr);
    for (int i = 0; i < nr; ++i) {
        r[i] = rLo + (i + 0.5) * dr;
        sqrtW[i] = std::sqrt(r[i] * dr * dTheta);
    }
    const double prefactor = 1.0 / (2.0 * M_PI * h);  // (2 pi h)^{-d/2}, d = 2

    Eigen::FFT<double> fft;
    std::vector<cplx> row(nTheta), spec_(nTheta);

    auto kernelRow = [&](int i, int j, std::vector<cplx>& out) {
        const double ri = r[i], rj = r[j];
        const double fac = prefactor * sqrtW[i] * sqrtW[j];
        const double si2 = 1.0 + ri * ri, sj2 = 1.0 + rj * rj;
        for (long c = 0; c < nTheta; ++c) {
            const double th = dTheta * static_cast<double>(c);
            const double chord2 =
                ri * ri + rj * rj - 2.0 * ri * rj * std::cos(th);
            const double sep = std::sqrt(std::max(chord2, 0.0));
            const double chi = cutoffChi(spec, sep);
            if (chi == 0.0 || sep == 0.0) {
                out[c] = 0.0;
                continue;
            }
            const double ph = 2.0 * std::log(2.0 * sep / std::sqrt(si2 * sj2)) / h;
            out[c] = fac * chi * cplx(std::cos(ph), std::sin(ph));
        }
    };

    // Pass 1: Frobenius mass of every angular mode.
    std::vector<double> fro2(nTheta, 0.0);
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nr; ++j) {
            kernelRow(i, j, row);
            fft.fwd(spec_, row);
            for (long m = 0; m < nTheta; ++m) fro2[m] += std::norm(spec_[m]);
        }
    }
    std::vector<long> order(nTheta);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](long a, long b) { return fro2[a] > fro2[b]; });

    // Pass 2: exact top-mode singular values, pruned by the Frobenius bound.
    double best = 0.0;
    const long chunk = 512;
    std::vector<MatrixXcd> blocks;
    for (long start = 0; start < nTheta; start += chunk) {
        const long count = std::min(chunk, nTheta - start);
        if (best * best >= fro2[order[start]]) break;  // remaining modes cannot win
        blocks.assign(count, MatrixXcd::Zero(nr, nr));
        for (int i = 0; i < nr; ++i) {
            for (int j = 0; j < nr; ++j) {
                kernelRow(i, j, row);
                fft.fwd(spec_, row);
                for (long t = 0; t < count; ++t) blocks[t](i, j) = spec_[order[start + t]];
            }
        }
        for (long t = 0; t < count; ++t) {
            if (best * best >= fro2[order[start + t]]) break;
            Eigen::JacobiSVD<MatrixXcd> svd(blocks[t]);
            best = std::max(best, svd.singularValues()(0));
        }
    }
    return best;
}

}  // namespace

FIONormResult fio_norm(const FIOSpec& spec, const DyadicSet& X, double h) {
    validateFioArgs(spec, h);
    FIONormResult res;
    res.coarseNorm = cartesianNorm(spec, X, h, h / 4.0, nullptr, nullptr);
    res.norm = cartesianNorm(spec, X, h, h / 8.0, &res.quadPoints, &res.method);
    res.relChange = res.norm > 0.0 ? std::abs(res.norm - res.coarseNorm) / res.norm : 0.0;
    res.converged = res.relChange < 0.02;
    return res;
}

double fio_norm_circle_raw(const FIOSpec& spec, double radius, double h, double spacing,
                           long* pointsOut) {
    validateFioArgs(spec, h);
    if (spec.phase != PhaseKind::HyperbolicLog)
        throw std::invalid_argument("fio_norm_circle: implemented for the hyperbolic-log phase");
    return polarCirculantNorm(spec, radius, h, spacing, pointsOut);
}

FIONormResult fio_norm_circle(const FIOSpec& spec, double radius, double h) {
    validateFioArgs(spec, h);
    if (spec.phase != PhaseKind::HyperbolicLog)
        throw std::invalid_argument("fio_norm_circle: implemented for the hyperbolic-log phase");
    FIONormResult res;
    res.method = "polar-circulant";
    res.coarseNorm = polarCirculantNorm(spec, radius, h, h / 4.0, nullptr);
    res.norm = polarCirculantNorm(spec, radius, h, h / 8.0, &res.quadPoints);
    res.relChange = res.norm > 0.0 ? std::abs(res.norm - res.coarseNorm) / res.norm : 0.0;
    res.converged = res.relChange < 0.02;
    return res;
}

FIONormResult fio_norm_circle_model(const FIOSpec& spec, double h) {
    validateFioArgs(spec, h);
    const long n = next5Smooth(static_cast<long>(std::ceil(2.0 * M_PI / (h / 8.0))));
    const double dPhi = 2.0 * M_PI / static_cast<double>(n);
    std::vector<cplx> row(n), sp(n);
    for (long c = 0; c < n; ++c) {
        const double d = dPhi * static_cast<double>(c);
        const double chord = 2.0 * std::abs(std::sin(0.5 * d));
        const double chi = cutoffChi(spec, chord);
        if (chi == 0.0 || chord == 0.0) {
            row[c] = 0.0;
            continue;
        }
        const double ph = std::log(2.0 - 2.0 * std::cos(d)) / h;
        row[c] = (dPhi / (2.0 * M_PI * std::sqrt(h))) * chi * cplx(std::cos(ph), std::sin(ph));
    }
    Eigen::FFT<double> fft;
    fft.fwd(sp, row);
    FIONormResult res;
    res.method = "circulant-1d";
    res.quadPoints = n;
    for (long m = 0; m < n; ++m) res.norm = std::max(res.norm, std::abs(sp[m]));
    res.coarseNorm = res.norm;
    res.converged = true;
    return res;
}

}  // namespace fuplab::fupnum
