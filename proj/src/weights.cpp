#include "fuplab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace fuplab::weights {

namespace {

constexpr double kS = 0.2;

double wK(int k) { return std::pow(2.0, k) / std::pow(static_cast<double>(k), kS); }

double norm2(const Vec2& x, int dim) {
    return dim == 2 ? x.norm() : std::abs(x.x());
}

}  // namespace

double BumpProfile::value(double q) {
    if (q >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - q));
}

double BumpProfile::d1(double q) {
    if (q >= 1.0) return 0.0;
    const double inv = 1.0 / (1.0 - q);
    return value(q) * (-inv * inv);
}

double BumpProfile::d2(double q) {
    if (q >= 1.0) return 0.0;
    const double inv = 1.0 / (1.0 - q);
    const double p1 = -inv * inv;
    const double p2 = -2.0 * inv * inv * inv;
    return value(q) * (p1 * p1 + p2);
}

double BumpProfile::d3(double q) {
    if (q >= 1.0) return 0.0;
    const double inv = 1.0 / (1.0 - q);
    const double p1 = -inv * inv;
    const double p2 = -2.0 * inv * inv * inv;
    const double p3 = -6.0 * inv * inv * inv * inv;
    return value(q) * (p1 * p1 * p1 + 3.0 * p1 * p2 + p3);
}

double WeightField::innerSupportRadius() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& a : annuli) r = std::min(r, a.rMin);
    return r;
}

double WeightField::outerSupportRadius() const {
    double r = 0.0;
    for (const auto& a : annuli) r = std::max(r, a.rMax);
    return r;
}

WeightField build_weight(const std::vector<Vec2>& Y, int dim, double nu, double muScale,
                         double h, double alpha) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("build_weight: dim must be 1 or 2");
    if (!(nu > 0.0 && nu < 1.0 / 3.0))
        throw std::domain_error("build_weight: nu must lie in (0, 1/3)");
    if (!(muScale > 1.0)) throw std::domain_error("build_weight: muScale must exceed 1");
    if (!(h > 0.0 && h < 1.0)) throw std::domain_error("build_weight: h must lie in (0,1)");
    const double gammaLines = nu / std::log(1.0 / nu);
    if (!(alpha > 1.0 - 0.1 * gammaLines && alpha < 1.0))
        throw std::domain_error(
            "build_weight: alpha must lie in (1 - 0.1 nu/log(1/nu), 1)");
    const double bound = 3.0 / h;
    for (const Vec2& p : Y)
        if (std::abs(p.x()) > bound || (dim == 2 && std::abs(p.y()) > bound))
            throw std::invalid_argument("build_weight: Y leaves [-3/h, 3/h]^d");

    WeightField field;
    field.dim = dim;
    field.s = kS;
    field.alpha = alpha;
    field.muScale = muScale;
    field.h = h;

    const double sqrtD = std::sqrt(static_cast<double>(dim));
    int k0 = 2;
    while (!(wK(k0) > muScale / (2.0 * sqrtD))) {
        ++k0;
        if (k0 > 1000) throw std::domain_error("build_weight: muScale too large");
    }
    field.k0 = k0;
    if (Y.empty()) return field;

    // Bucket Y points into the closed annuli A_k = {2^k <= |x| <= 2^{k+1}}, k >= k0.
    std::map<int, std::vector<Vec2>> byAnnulus;
    for (const Vec2& p : Y) {
        const double r = norm2(p, dim);
        if (r <= 0.0) continue;
        const int kf = static_cast<int>(std::floor(std::log2(r)));
        for (int k = kf - 1; k <= kf + 1; ++k) {
            if (k < k0) continue;
            const double lo = std::pow(2.0, k), hi = std::pow(2.0, k + 1);
            if (r >= lo && r <= hi) byAnnulus[k].push_back(p);
        }
    }

    for (auto& [k, pts] : byAnnulus) {
        AnnulusRecord rec;
        rec.k = k;
        rec.Wk = wK(k);
        rec.amplitude = std::pow(2.0, k) / std::pow(static_cast<double>(k), alpha);
        std::set<std::pair<int, int>> cubes;
        const double W = rec.Wk;
        for (const Vec2& p : pts) {
            // Open cubes (W a/3, W (a/3+1)) containing p, at most 3 per axis.
            std::array<std::vector<int>, 2> axisIdx;
            for (int ax = 0; ax < dim; ++ax) {
                const double t = 3.0 * p[ax] / W;
                for (int a = static_cast<int>(std::floor(t)) - 3;
                     a <= static_cast<int>(std::floor(t)) + 1; ++a)
                    if (t - 3.0 < a && a < t) axisIdx[ax].push_back(a);
            }
            if (dim == 1) {
                for (int a : axisIdx[0]) cubes.insert({a, 0});
            } else {
                for (int a : axisIdx[0])
                    for (int b : axisIdx[1]) cubes.insert({a, b});
            }
        }
        rec.rMin = std::numeric_limits<double>::infinity();
        rec.rMax = 0.0;
        for (const auto& [a, b] : cubes) {
            rec.cubes.emplace_back(a, b);
            Vec2 c(W * (a + 1.5) / 3.0, dim == 2 ? W * (b + 1.5) / 3.0 : 0.0);
            const double rc = norm2(c, dim);
            rec.rMin = std::min(rec.rMin, std::max(0.0, rc - W / 2.0));
            rec.rMax = std::max(rec.rMax, rc + W / 2.0);
        }
        field.annuli.push_back(std::move(rec));
    }
    return field;
}

namespace {

// Partial derivative of amplitude * profile(|2(x-c)/W|^2) with respect to the
// requested multi-index, order <= 3.
double bumpDerivative(const Vec2& x, const Vec2& c, double W, const std::array<int, 2>& deriv,
                      int dim) {
    const double kappa = 2.0 / W;
    Vec2 u = kappa * (x - c);
    if (dim == 1) u.y() = 0.0;
    const double q = u.squaredNorm();
    if (q >= 1.0) return 0.0;
    const int order = deriv[0] + deriv[1];
    switch (order) {
        case 0:
            return BumpProfile::value(q);
        case 1: {
            const int i = deriv[0] == 1 ? 0 : 1;
            return BumpProfile::d1(q) * 2.0 * u[i] * kappa;
        }
        case 2: {
            int i, j;
            if (deriv[0] == 2) i = j = 0;
            else if (deriv[1] == 2) i = j = 1;
            else { i = 0; j = 1; }
            const double term = BumpProfile::d2(q) * 4.0 * u[i] * u[j] +
                                (i == j ? BumpProfile::d1(q) * 2.0 : 0.0);
            return term * kappa * kappa;
        }
        case 3: {
            int idx[3], t = 0;
            for (int a = 0; a < deriv[0]; ++a) idx[t++] = 0;
            for (int a = 0; a < deriv[1]; ++a) idx[t++] = 1;
            const int i = idx[0], j = idx[1], k = idx[2];
            double term = BumpProfile::d3(q) * 8.0 * u[i] * u[j] * u[k];
            term += BumpProfile::d2(q) * 4.0 *
                    ((i == j ? u[k] : 0.0) + (i == k ? u[j] : 0.0) + (j == k ? u[i] : 0.0));
            return term * kappa * kappa * kappa;
        }
        default:
            throw std::invalid_argument("eval_weight: derivative order above 3 unsupported");
    }
}

}  // namespace

double eval_weight(const WeightField& field, const Vec2& x, const std::array<int, 2>& deriv) {
    if (deriv[0] < 0 || deriv[1] < 0 || deriv[0] + deriv[1] > 3)
        throw std::invalid_argument("eval_weight: derivative order above 3 unsupported");
    if (field.dim == 1 && deriv[1] != 0)
        throw std::invalid_argument("eval_weight: y-derivative of a 1-dimensional field");
    const double r = norm2(x, field.dim);
    double total = 0.0;
    for (const auto& rec : field.annuli) {
        if (r < rec.rMin || r > rec.rMax) continue;
        const double W = rec.Wk;
        // Candidate cubes whose open support can contain x.
        std::array<std::vector<int>, 2> axisIdx;
        for (int ax = 0; ax < field.dim; ++ax) {
            const double t = 3.0 * x[ax] / W;
            for (int a = static_cast<int>(std::floor(t)) - 3;
                 a <= static_cast<int>(std::floor(t)) + 1; ++a)
                if (t - 3.0 < a && a < t) axisIdx[ax].push_back(a);
        }
        auto hasCube = [&rec](int a, int b) {
            return std::binary_search(
                rec.cubes.begin(), rec.cubes.end(), Idx2(a, b),
                [](const Idx2& u, const Idx2& v) {
                    return u.x() != v.x() ? u.x() < v.x() : u.y() < v.y();
                });
        };
        double sum = 0.0;
        if (field.dim == 1) {
            for (int a : axisIdx[0])
                if (hasCube(a, 0))
                    sum += bumpDerivative(x, Vec2(W * (a + 1.5) / 3.0, 0.0), W, deriv, 1);
        } else {
            for (int a : axisIdx[0])
                for (int b : axisIdx[1])
                    if (hasCube(a, b))
                        sum += bumpDerivative(
                            x, Vec2(W * (a + 1.5) / 3.0, W * (b + 1.5) / 3.0), W, deriv, 2);
        }
        total += -rec.amplitude * sum;
    }
    return total;
}

double partition_sum(double W, const Vec2& x, int dim) {
    double sum = 0.0;
    std::array<std::vector<int>, 2> axisIdx;
    for (int ax = 0; ax < dim; ++ax) {
        const double t = 3.0 * x[ax] / W;
        for (int a = static_cast<int>(std::floor(t)) - 3;
             a <= static_cast<int>(std::floor(t)) + 1; ++a)
            if (t - 3.0 < a && a < t) axisIdx[ax].push_back(a);
    }
    if (dim == 1) {
        for (int a : axisIdx[0])
            sum += bumpDerivative(x, Vec2(W * (a + 1.5) / 3.0, 0.0), W, {0, 0}, 1);
    } else {
        for (int a : axisIdx[0])
            for (int b : axisIdx[1])
                sum += bumpDerivative(x, Vec2(W * (a + 1.5) / 3.0, W * (b + 1.5) / 3.0), W,
                                      {0, 0}, 2);
    }
    return sum;
}

namespace {

double adaptiveSimpson(const std::function<double(double)>& f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptiveSimpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptiveSimpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double relTol,
                 double scaleHint) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = relTol * std::max(std::abs(whole), scaleHint);
    return adaptiveSimpson(f, a, b, fa, fm, fb, whole, tol, 24);
}

}  // namespace

double growth_G(const WeightField& field, const Vec2& x, double relTol) {
    if (field.emptyField()) return 0.0;
    auto f = [&](double s) { return std::abs(eval_weight(field, s * x)); };
    // Integrand is piecewise smooth; split at annulus support crossings.
    const double r = norm2(x, field.dim);
    if (r == 0.0) return 0.0;
    std::vector<double> cuts{0.5, 2.0};
    for (const auto& rec : field.annuli) {
        for (double bound : {rec.rMin, rec.rMax}) {
            const double s = bound / r;
            if (s > 0.5 && s < 2.0) cuts.push_back(s);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    const double hint = field.outerSupportRadius() * 1e-12;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) total += integrate(f, cuts[i], cuts[i + 1], relTol, hint);
    return total;
}

double growth_Gstar(const WeightField& field, double r, int directions, double relTol) {
    if (field.emptyField() || r <= 0.0) return 0.0;
    if (field.dim == 1) {
        return std::max(growth_G(field, Vec2(r, 0.0), relTol),
                        growth_G(field, Vec2(-r, 0.0), relTol));
    }
    double best = 0.0;
    for (int k = 0; k < directions; ++k) {
        const double th = 2.0 * M_PI * k / directions;
        best = std::max(best, growth_G(field, r * Vec2(std::cos(th), std::sin(th)), relTol));
    }
    return best;
}

namespace {

double cgrLadderQuadrature(const WeightField& field, int pointsPerOctave, int directions) {
    const double rIn = field.innerSupportRadius() / 2.0;
    const double rOut = field.outerSupportRadius() * 2.0;
    if (!(rOut > rIn)) return 0.0;
    // Log-spaced trapezoid on [rIn, rOut]; G* vanishes outside the support.
    const int octaves = static_cast<int>(std::ceil(std::log2(rOut / rIn)));
    const int n = std::max(2, pointsPerOctave * octaves);
    double total = 0.0;
    double prevR = rIn, prevV = growth_Gstar(field, rIn, directions) / (1.0 + rIn * rIn);
    for (int i = 1; i <= n; ++i) {
        const double r = rIn * std::pow(rOut / rIn, static_cast<double>(i) / n);
        const double v = growth_Gstar(field, r, directions) / (1.0 + r * r);
        total += 0.5 * (prevV + v) * (r - prevR);
        prevR = r;
        prevV = v;
    }
    return total;
}

}  // namespace

HypothesisReport verify_hypotheses(const WeightField& field, const std::vector<Vec2>& Y,
                                   double muScale, int sampleBudget, unsigned seed, double Cd) {
    HypothesisReport rep;
    rep.sampleBudget = sampleBudget;
    rep.dampingConstSimple = muScale + Cd;
    rep.dampingConstLogImproved =
        muScale > 1.0 ? muScale / (Cd * std::pow(std::log(muScale), 0.7)) : muScale;

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    if (!field.emptyField()) {
        // Regularity: random samples across each annulus support plus cube centers.
        for (const auto& rec : field.annuli) {
            const int perAnnulus =
                std::max(16, sampleBudget / std::max(1, static_cast<int>(field.annuli.size())));
            for (int i = 0; i < perAnnulus; ++i) {
                Vec2 x;
                if (i < static_cast<int>(rec.cubes.size())) {
                    const Idx2 a = rec.cubes[i];
                    x = Vec2(rec.Wk * (a.x() + 1.5) / 3.0,
                             field.dim == 2 ? rec.Wk * (a.y() + 1.5) / 3.0 : 0.0);
                    // jitter inside the bump support
                    const double rr = 0.5 * rec.Wk * unit(rng);
                    const double th = 2.0 * M_PI * unit(rng);
                    x += rr * Vec2(std::cos(th), field.dim == 2 ? std::sin(th) : 0.0);
                    if (field.dim == 1) x.y() = 0.0;
                } else {
                    const double r = rec.rMin + (rec.rMax - rec.rMin) * unit(rng);
                    const double th = 2.0 * M_PI * unit(rng);
                    x = field.dim == 2 ? r * Vec2(std::cos(th), std::sin(th)) : Vec2(r, 0.0);
                }
                const double jx = std::sqrt(1.0 + x.squaredNorm());
                for (int order = 0; order <= 3; ++order) {
                    double maxAbs = 0.0;
                    for (int ax = 0; ax <= order; ++ax) {
                        const std::array<int, 2> mi{order - ax, ax};
                        if (field.dim == 1 && mi[1] > 0) continue;
                        maxAbs = std::max(maxAbs, std::abs(eval_weight(field, x, mi)));
                    }
                    rep.cRegPerOrder[order] = std::max(
                        rep.cRegPerOrder[order], maxAbs / std::pow(jx, 1.0 - order));
                }
            }
        }
        rep.cReg = *std::max_element(rep.cRegPerOrder.begin(), rep.cRegPerOrder.end());

        const int dirs = field.dim == 2 ? 64 : 2;
        rep.cGrCoarse = cgrLadderQuadrature(field, 8, dirs);
        rep.cGr = cgrLadderQuadrature(field, 16, dirs);
        rep.cGrRelChange = rep.cGr > 0.0 ? std::abs(rep.cGr - rep.cGrCoarse) / rep.cGr : 0.0;
    }

    double lhsMax = -std::numeric_limits<double>::infinity();
    for (const Vec2& p : Y) {
        const double r = norm2(p, field.dim);
        const double lhs =
            eval_weight(field, p) + r / (20.0 * std::pow(std::log(2.0 + r), field.alpha));
        lhsMax = std::max(lhsMax, lhs);
    }
    rep.dampingLhsMax = Y.empty() ? 0.0 : lhsMax;
    rep.dampingSlack = rep.dampingConstSimple - rep.dampingLhsMax;
    return rep;
}

}  // namespace fuplab::weights
