#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fuplab/fup_numerics.hpp"
#include "fuplab/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace fuplab;
using namespace fuplab::fupnum;
using geometry::DyadicSet;
using geometry::Idx2;
using geometry::Vec2;

namespace {

std::vector<Idx2> fullIndices(int N, int d) {
    std::vector<Idx2> out;
    for (int i = 0; i < N; ++i) {
        if (d == 1)
            out.emplace_back(i, 0);
        else
            for (int j = 0; j < N; ++j) out.emplace_back(i, j);
    }
    return out;
}

// Independent oracle: assemble the submatrix and run a full dense SVD.
double svdOracle(int N, const std::vector<Idx2>& X, const std::vector<Idx2>& Y, int d) {
    Eigen::MatrixXcd A(X.size(), Y.size());
    const double scale = std::pow(static_cast<double>(N), -0.5 * d);
    for (size_t i = 0; i < X.size(); ++i)
        for (size_t j = 0; j < Y.size(); ++j) {
            long dot = static_cast<long>(X[i].x()) * Y[j].x() +
                       static_cast<long>(X[i].y()) * Y[j].y();
            const double ph = -2.0 * M_PI * static_cast<double>(dot % N) / N;
            A(i, j) = scale * std::complex<double>(std::cos(ph), std::sin(ph));
        }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()(0);
}

}  // namespace

TEST_CASE("full submatrix is unitary") {
    CHECK(dft_submatrix_norm(16, fullIndices(16, 1), fullIndices(16, 1), 1) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dft_submatrix_norm(8, fullIndices(8, 2), fullIndices(8, 2), 2) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single entry and empty sets") {
    const std::vector<Idx2> one{Idx2(0, 0)};
    CHECK(dft_submatrix_norm(25, one, one, 1) == doctest::Approx(1.0 / 5.0).epsilon(1e-14));
    CHECK(dft_submatrix_norm(9, {}, one, 1) == 0.0);
    CHECK_THROWS_AS(dft_submatrix_norm(0, one, one, 1), std::domain_error);
    CHECK_THROWS_AS(dft_submatrix_norm(4, {Idx2(4, 0)}, one, 1), std::domain_error);
}

TEST_CASE("orthogonal line pair pins the norm at 1") {
    for (int N : {4, 9, 27, 81}) {
        LadderSpec spec;
        spec.kind = LadderSpec::Kind::OrthogonalLines;
        spec.d = 2;
        const auto X = ladder_indices(spec, 1, false);  // depth unused below
        std::vector<Idx2> Xr, Yr;
        for (int i = 0; i < N; ++i) {
            Xr.emplace_back(i, 0);
            Yr.emplace_back(0, i);
        }
        CHECK(dft_submatrix_norm(N, Xr, Yr, 2) == doctest::Approx(1.0).epsilon(1e-10));
        (void)X;
    }
}

TEST_CASE("norm agrees with the dense SVD oracle on random sets") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        const int N = 16 + trial * 7;
        std::uniform_int_distribution<int> pick(0, N - 1);
        std::vector<Idx2> X, Y;
        for (int i = 0; i < 1 + trial * 3; ++i) {
            X.emplace_back(pick(rng), 0);
            Y.emplace_back(pick(rng), 0);
        }
        std::sort(X.begin(), X.end(), [](auto& a, auto& b) { return a.x() < b.x(); });
        X.erase(std::unique(X.begin(), X.end(), [](auto& a, auto& b) { return a.x() == b.x(); }),
                X.end());
        std::sort(Y.begin(), Y.end(), [](auto& a, auto& b) { return a.x() < b.x(); });
        Y.erase(std::unique(Y.begin(), Y.end(), [](auto& a, auto& b) { return a.x() == b.x(); }),
                Y.end());
        const double got = dft_submatrix_norm(N, X, Y, 1);
        CHECK(got == doctest::Approx(svdOracle(N, X, Y, 1)).epsilon(1e-10));
    }
}

TEST_CASE("symmetry and monotonicity") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> pick(0, 63);
    std::vector<Idx2> X, Y;
    for (int i = 0; i < 12; ++i) {
        X.emplace_back(pick(rng), pick(rng));
        Y.emplace_back(pick(rng), pick(rng));
    }
    auto dedupe = [](std::vector<Idx2>& v) {
        std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
            return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
        });
        v.erase(std::unique(v.begin(), v.end(),
                            [](auto& a, auto& b) { return a.x() == b.x() && a.y() == b.y(); }),
                v.end());
    };
    dedupe(X);
    dedupe(Y);
    SUBCASE("adjoint symmetry") {
        CHECK(dft_submatrix_norm(64, X, Y, 2) ==
              doctest::Approx(dft_submatrix_norm(64, Y, X, 2)).epsilon(1e-10));
    }
    SUBCASE("monotone under set inclusion") {
        std::vector<Idx2> Xbig = X;
        Xbig.emplace_back(1, 1);
        Xbig.emplace_back(2, 5);
        dedupe(Xbig);
        CHECK(dft_submatrix_norm(64, X, Y, 2) <=
              dft_submatrix_norm(64, Xbig, Y, 2) + 1e-10);
    }
}

TEST_CASE("power iteration matches the exact path") {
    std::mt19937 rng(13);
    for (int N : {64, 128, 512}) {
        std::uniform_int_distribution<int> pick(0, N - 1);
        std::vector<Idx2> X;
        for (int i = 0; i < N / 3; ++i) X.emplace_back(pick(rng), 0);
        std::sort(X.begin(), X.end(), [](auto& a, auto& b) { return a.x() < b.x(); });
        X.erase(std::unique(X.begin(), X.end(), [](auto& a, auto& b) { return a.x() == b.x(); }),
                X.end());
        std::string m1, m2;
        double res = 0.0;
        const double exact = dft_submatrix_norm(N, X, X, 1, &m1);
        const double power = dft_submatrix_norm(N, X, X, 1, &m2, &res, nullptr, true);
        CHECK(m1 == "exact-svd");
        CHECK(m2 == "power-iteration");
        CHECK(power == doctest::Approx(exact).epsilon(1e-6));
        CHECK(res <= 1e-8);
    }
}

TEST_CASE("cantor decay series") {
    LadderSpec spec;
    spec.kind = LadderSpec::Kind::Cantor;
    spec.base = 3;
    spec.d = 1;
    spec.keptX = {{0, 2}};
    SUBCASE("one-dimensional norms decrease strictly") {
        const auto series = fup_decay_series(spec, {2, 3, 4, 5, 6, 7});
        REQUIRE(series.points.size() == 6);
        for (size_t i = 1; i < series.points.size(); ++i)
            CHECK(series.points[i].norm < series.points[i - 1].norm);
        const auto fit = fit_exponent(series);
        CHECK(fit.beta > 0.0);
        // frozen regression baseline for the fitted decay exponent
        CHECK(fit.beta == doctest::Approx(0.086004).epsilon(2e-3));
        CHECK(fit.r2 > 0.97);
    }
    SUBCASE("two-dimensional product norms decrease strictly") {
        LadderSpec spec2 = spec;
        spec2.d = 2;
        spec2.keptX = {{0, 2}, {0, 2}};
        const auto series = fup_decay_series(spec2, {2, 3, 4});
        for (size_t i = 1; i < series.points.size(); ++i)
            CHECK(series.points[i].norm < series.points[i - 1].norm);
    }
    SUBCASE("depth ladders must increase") {
        CHECK_THROWS_AS(fup_decay_series(spec, {3, 3}), std::invalid_argument);
        CHECK_THROWS_AS(fup_decay_series(spec, {}), std::invalid_argument);
    }
}

TEST_CASE("exponent fitting") {
    SUBCASE("exact power law is recovered to machine precision") {
        NormSeries s;
        s.setId = "synthetic";
        for (int k = 2; k <= 7; ++k) {
            NormPoint p;
            p.h = std::pow(2.0, -k);
            p.scaleN = 1.0 / p.h;
            p.norm = std::pow(p.h, 0.3);
            s.points.push_back(p);
        }
        const auto fit = fit_exponent(s);
        CHECK(fit.beta == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("constant series fits zero") {
        NormSeries s;
        for (int k = 2; k <= 6; ++k) {
            NormPoint p;
            p.h = std::pow(2.0, -k);
            p.norm = 0.77;
            s.points.push_back(p);
        }
        CHECK(fit_exponent(s).beta == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("degenerate input is rejected") {
        NormSeries s;
        for (int k = 0; k < 4; ++k) {
            NormPoint p;
            p.h = std::pow(2.0, -k - 2);
            p.norm = k == 2 ? 0.0 : 0.5;
            s.points.push_back(p);
        }
        CHECK_THROWS_AS(fit_exponent(s), std::domain_error);
        s.points.pop_back();
        for (auto& p : s.points) p.norm = 0.5;
        CHECK_THROWS_AS(fit_exponent(s), std::invalid_argument);
    }
}

TEST_CASE("phase values and cutoffs") {
    FIOSpec spec;
    spec.phase = PhaseKind::HyperbolicLog;
    const Vec2 x(0.3, -0.2), y(-0.5, 0.9);
    const double R = (x - y).norm();
    CHECK(phaseValue(spec, x, y) ==
          doctest::Approx(2.0 * std::log(2.0 * R /
                                         std::sqrt((1 + x.squaredNorm()) * (1 + y.squaredNorm()))))
              .epsilon(1e-14));
    CHECK(cutoffChi(spec, 0.1) == 0.0);
    CHECK(cutoffChi(spec, 4.0) == doctest::Approx(1.0));
    CHECK(cutoffChi(spec, 8.5) == 0.0);
    FIOSpec open = spec;
    open.chiLo = 0.0;
    CHECK(cutoffChi(open, 123.0) == 1.0);
}

TEST_CASE("mixed hessian statistics") {
    FIOSpec hyp;
    hyp.phase = PhaseKind::HyperbolicLog;
    SUBCASE("hyperbolic-log ratio is exactly one off the diagonal") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        std::vector<std::pair<Vec2, Vec2>> pairs;
        while (pairs.size() < 400) {
            const Vec2 a(u(rng), u(rng)), b(u(rng), u(rng));
            if ((a - b).norm() > 0.3) pairs.emplace_back(a, b);
        }
        const auto st = phase_hessian_stats(hyp, pairs);
        CHECK(st.supRatio == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("closed form matches finite differences") {
        const Vec2 x(0.4, 0.7), y(-0.8, 0.1);
        const auto H = phase_mixed_hessian(hyp, x, y);
        const double step = 1e-4;  // large enough to beat cancellation noise
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                Vec2 ei(0, 0), ej(0, 0);
                ei[i] = step;
                ej[j] = step;
                const double fd = (phaseValue(hyp, x + ei, y + ej) -
                                   phaseValue(hyp, x + ei, y - ej) -
                                   phaseValue(hyp, x - ei, y + ej) +
                                   phaseValue(hyp, x - ei, y - ej)) /
                                  (4.0 * step * step);
                CHECK(H(i, j) == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
    SUBCASE("euclidean phase has unit hessian") {
        FIOSpec euc;
        euc.phase = PhaseKind::EuclideanFourier;
        euc.dim = 2;
        const auto st = phase_hessian_stats(euc, {{Vec2(0.5, 0.5), Vec2(-0.5, 0.25)}});
        CHECK(st.supNorm == doctest::Approx(1.0));
        CHECK(st.supRatio == doctest::Approx(1.0));
    }
    SUBCASE("norm scale carries the phase factor") {
        const auto st = phase_hessian_stats(hyp, {{Vec2(0.5, 0.0), Vec2(-0.5, 0.0)}});
        CHECK(st.supNorm == doctest::Approx(2.0).epsilon(1e-12));  // 2/R^2 at R = 1
    }
    SUBCASE("hessian norm scales like the inverse square separation") {
        auto supAt = [&](double rMin) {
            std::vector<std::pair<Vec2, Vec2>> pairs;
            for (int k = 0; k < 64; ++k) {
                const double th = 2.0 * M_PI * k / 64;
                pairs.emplace_back(Vec2(0, 0), rMin * Vec2(std::cos(th), std::sin(th)));
            }
            return phase_hessian_stats(hyp, pairs).supNorm;
        };
        CHECK(supAt(0.15) == doctest::Approx(4.0 * supAt(0.3)).epsilon(1e-9));
    }
    SUBCASE("diagonal touch is an error") {
        CHECK_THROWS_AS(phase_hessian_stats(hyp, {{Vec2(0.1, 0.1), Vec2(0.1, 0.1)}}),
                        std::domain_error);
    }
}

TEST_CASE("zero cutoff kills the kernel") {
    FIOSpec spec;
    spec.phase = PhaseKind::HyperbolicLog;
    spec.chiLo = 5.0;
    spec.chiHi = 5.5;  // no pair of thickened-circle points is that far apart
    const double got = fio_norm_circle_raw(spec, 1.0, 0.0078125, 0.02);
    CHECK(got == 0.0);
}

TEST_CASE("block-circulant reduction equals the dense decomposition") {
    FIOSpec spec;
    spec.phase = PhaseKind::HyperbolicLog;
    spec.rho = 0.9;
    spec.C1 = 0.5;
    const double h = 0.009;
    const double radius = 0.6;
    const double spacing = 0.02;  // deliberately coarse so the dense matrix fits

    long pts = 0;
    const double got = fio_norm_circle_raw(spec, radius, h, spacing, &pts);

    // independently rebuild the same polar Nystrom matrix and BDCSVD it
    const double w = spec.C1 * std::pow(h, spec.rho);
    const int nr = std::max(2, static_cast<int>(std::ceil(2.0 * w / spacing)));
    const double dr = 2.0 * w / nr;
    long nTheta = static_cast<long>(std::ceil(2.0 * M_PI * (radius + w) / spacing));
    // match the library's 5-smooth rounding
    auto next5 = [](long n) {
        long best = 1;
        while (best < n) best *= 2;
        for (long p2 = 1; p2 < 2 * n; p2 *= 2)
            for (long p3 = p2; p3 < 2 * n; p3 *= 3)
                for (long p5 = p3; p5 < 2 * n; p5 *= 5)
                    if (p5 >= n) {
                        best = std::min(best, p5);
                        break;
                    }
        return best;
    };
    nTheta = next5(nTheta);
    const double dTheta = 2.0 * M_PI / nTheta;
    REQUIRE(nr * nTheta == pts);
    REQUIRE(nr * nTheta < 3000);

    Eigen::MatrixXcd A(nr * nTheta, nr * nTheta);
    for (long a = 0; a < nr * nTheta; ++a) {
        const int ia = static_cast<int>(a % nr);
        const long ta = a / nr;
        const double ra = radius - w + (ia + 0.5) * dr;
        const Vec2 xa = ra * Vec2(std::cos(ta * dTheta), std::sin(ta * dTheta));
        for (long b = 0; b < nr * nTheta; ++b) {
            const int ib = static_cast<int>(b % nr);
            const long tb = b / nr;
            const double rb = radius - w + (ib + 0.5) * dr;
            const Vec2 xb = rb * Vec2(std::cos(tb * dTheta), std::sin(tb * dTheta));
            const double sep = (xa - xb).norm();
            const double chi = cutoffChi(spec, sep);
            if (chi == 0.0 || sep == 0.0) {
                A(a, b) = 0.0;
                continue;
            }
            const double ph = phaseValue(spec, xa, xb) / h;
            A(a, b) = (1.0 / (2.0 * M_PI * h)) * chi *
                      std::complex<double>(std::cos(ph), std::sin(ph)) *
                      std::sqrt(ra * dr * dTheta) * std::sqrt(rb * dr * dTheta);
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
    CHECK(got == doctest::Approx(svd.singularValues()(0)).epsilon(1e-9));
}

TEST_CASE("euclidean cartesian kernel reproduces the unitary norm") {
    FIOSpec spec;
    spec.phase = PhaseKind::EuclideanFourier;
    spec.dim = 1;
    spec.chiLo = 0.0;  // no cutoff
    spec.rho = 0.9;
    spec.C1 = 0.01;  // negligible thickening: the box itself
    DyadicSet box;
    box.dim = 1;
    box.base = 2;
    box.depth = 0;
    box.cells = {Idx2(0, 0)};
    box.normalize();
    const double h = 0.009;
    const auto res = fio_norm(spec, box, h);
    CHECK(res.converged);
    // the full-box localized unitary transform has norm 1 (DFT cross-check)
    CHECK(res.norm == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("cartesian kernel route on a small planar set") {
    FIOSpec spec;
    spec.phase = PhaseKind::HyperbolicLog;
    spec.chiLo = 0.05;
    spec.chiHi = 8.0;
    spec.rho = 0.9;
    spec.C1 = 0.5;
    DyadicSet tiny;
    tiny.dim = 2;
    tiny.base = 2;
    tiny.depth = 6;  // cells of side 2/64
    tiny.cells = {Idx2(20, 40), Idx2(44, 28)};
    tiny.normalize();
    const auto res = fio_norm(spec, tiny, 0.009);
    CHECK(res.norm > 0.0);
    CHECK(res.quadPoints > 100);
    CHECK(res.relChange < 0.02);
    CHECK(res.converged);
}

TEST_CASE("circle model operator is bounded and h-stable") {
    FIOSpec spec;
    spec.phase = PhaseKind::CircleModel;
    const auto a = fio_norm_circle_model(spec, 0.009);
    const auto b = fio_norm_circle_model(spec, 0.0045);
    CHECK(a.norm > 0.0);
    CHECK(b.norm > 0.0);
    // uniform boundedness of the model operator: no blow-up when h halves
    CHECK(b.norm < 4.0 * a.norm + 1.0);
}
