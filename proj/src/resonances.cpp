#include "fuplab/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fuplab::resonances {

void SurfaceSpectrum::validate() const {
    if (mu.empty()) throw std::invalid_argument("SurfaceSpectrum: empty eigenvalue list");
    if (mu[0] != 0.0) throw std::invalid_argument("SurfaceSpectrum: mu_0 must be 0");
    for (size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] < 0.0) throw std::domain_error("SurfaceSpectrum: negative eigenvalue");
        if (i > 0 && mu[i] < mu[i - 1])
            throw std::invalid_argument("SurfaceSpectrum: eigenvalues must be nondecreasing");
    }
}

SurfaceSpectrum demo_spectrum() {
    SurfaceSpectrum s;
    s.mu = {0.0, 0.1, 0.25, 2.0, 5.5, 11.0, 17.25};
    s.source = "demo";
    return s;
}

ResonanceTable fuchsian_resonances(const SurfaceSpectrum& spec, int nMax) {
    spec.validate();
    if (nMax < 0) throw std::invalid_argument("fuchsian_resonances: nMax must be >= 0");

    ResonanceTable table;
    table.maxReSNontrivial = -std::numeric_limits<double>::infinity();

    ResonanceEntry zero;
    zero.k = 0;
    zero.n = 0;
    zero.s = cplx(1.0, 0.0);
    zero.lambda = cplx(0.0, 0.0);
    zero.trivial = true;
    table.entries.push_back(zero);

    for (size_t k = 1; k < spec.mu.size(); ++k) {
        const double mu = spec.mu[k];
        const cplx root = std::sqrt(cplx(0.25 - mu, 0.0));      // sqrt(1/4 - mu_k)
        const cplx rootL = std::sqrt(cplx(mu - 0.25, 0.0));     // sqrt(mu_k - 1/4)
        for (int n = 0; n <= nMax; ++n) {
            for (int sign = +1; sign >= -1; sign -= 2) {
                ResonanceEntry e;
                e.k = static_cast<int>(k);
                e.n = n;
                e.s = cplx(0.5 - n, 0.0) + static_cast<double>(sign) * root;
                // lambda from its own formula; the +- pair is matched to the
                // s branch it belongs to (the pairing flips across mu = 1/4,
                // and the two coincide at the coalescence point).
                const cplx lamShift(0.0, -(n + 0.5));
                const cplx lamPlus = rootL + lamShift;
                const cplx lamMinus = -rootL + lamShift;
                const cplx target = cplx(0.0, 1.0) * (e.s - 1.0);
                e.lambda = std::abs(lamPlus - target) <= std::abs(lamMinus - target) ? lamPlus
                                                                                    : lamMinus;
                e.lowLying = (n == 0 && mu < 0.25 && sign > 0);
                table.entries.push_back(e);
                table.maxReSNontrivial = std::max(table.maxReSNontrivial, e.s.real());
            }
        }
    }
    return table;
}

GapReport essential_gap(const ResonanceTable& table) {
    if (table.entries.empty()) throw std::invalid_argument("essential_gap: empty table");
    GapReport rep;
    double maxRe = -std::numeric_limits<double>::infinity();
    for (const auto& e : table.entries) {
        if (e.trivial) continue;
        if (e.lowLying) {
            rep.lowLying.push_back(e);
            continue;
        }
        maxRe = std::max(maxRe, e.s.real());
        if (e.s.real() > 0.5 + 1e-12) rep.violators.push_back(e);
    }
    rep.gap = std::isfinite(maxRe) ? 1.0 - maxRe : std::numeric_limits<double>::infinity();
    return rep;
}

// ---------------------------------------------------------------------------
// Scattering-coefficient oracle

cplx gammaFn(cplx z) {
    // Lanczos approximation, g = 7, 9 coefficients.
    static const double g = 7.0;
    static const double c[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059, 12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6,
                                1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // Reflection formula.
        return M_PI / (std::sin(M_PI * z) * gammaFn(1.0 - z));
    }
    z -= 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
    const cplx t = z + g + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cplx poschl_teller_jost(double mu, cplx s) {
    if (mu < 0.0) throw std::domain_error("poschl_teller_jost: mu must be >= 0");
    const cplx lambda = cplx(0.0, 1.0) * (s - 1.0);
    const cplx ik = cplx(0.0, 1.0) * lambda;
    const cplx xi = -0.5 + std::sqrt(cplx(0.25 - mu, 0.0));
    // 1/t(k) with t the transmission amplitude; poles of the Gamma factors in
    // the denominator are exactly the scattering poles.
    return gammaFn(-ik) * gammaFn(1.0 - ik) / (gammaFn(1.0 + xi - ik) * gammaFn(-xi - ik));
}

double normalized_jost(double mu, cplx s, double probeRadius, int probePoints) {
    const double center = std::abs(poschl_teller_jost(mu, s));
    double probeMax = 0.0;
    for (int i = 0; i < probePoints; ++i) {
        const double th = 2.0 * M_PI * i / probePoints;
        const cplx sp = s + probeRadius * cplx(std::cos(th), std::sin(th));
        probeMax = std::max(probeMax, std::abs(poschl_teller_jost(mu, sp)));
    }
    if (probeMax == 0.0) return 0.0;
    return center / probeMax;
}

namespace {

struct OdeState {
    cplx g;   // compensated amplitude, u = e^{i lambda t} g
    cplx dg;  // derivative with respect to the contour parameter
};

// Along t = sigma e^{i theta}:  w'' = 2 i lambda e^{i theta} w' + e^{2 i theta} V(t) w.
OdeState derivative(const OdeState& y, double sigma, double mu, cplx lambda, cplx phase) {
    const cplx t = sigma * phase;
    const cplx ch = std::cosh(t);
    const cplx V = mu / (ch * ch);
    OdeState d;
    d.g = y.dg;
    d.dg = -2.0 * cplx(0.0, 1.0) * lambda * phase * y.dg + phase * phase * V * y.g;
    return d;
}

OdeState rk4Step(const OdeState& y, double sigma, double hstep, double mu, cplx lambda,
                 cplx phase) {
    auto add = [](const OdeState& a, const OdeState& b, double f) {
        return OdeState{a.g + f * b.g, a.dg + f * b.dg};
    };
    const OdeState k1 = derivative(y, sigma, mu, lambda, phase);
    const OdeState k2 = derivative(add(y, k1, hstep / 2), sigma + hstep / 2, mu, lambda, phase);
    const OdeState k3 = derivative(add(y, k2, hstep / 2), sigma + hstep / 2, mu, lambda, phase);
    const OdeState k4 = derivative(add(y, k3, hstep), sigma + hstep, mu, lambda, phase);
    OdeState out;
    out.g = y.g + hstep / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
    out.dg = y.dg + hstep / 6.0 * (k1.dg + 2.0 * k2.dg + 2.0 * k3.dg + k4.dg);
    return out;
}

// Adaptive step-doubling RK4 from sigma0 to sigma1.
OdeState integrate(OdeState y, double sigma0, double sigma1, double mu, cplx lambda, cplx phase,
                   double tol) {
    double t = sigma0;
    double hstep = (sigma1 - sigma0) / 256.0;
    const double dir = sigma1 > sigma0 ? 1.0 : -1.0;
    int guard = 0;
    while (dir * (sigma1 - t) > 1e-14 && ++guard < 4000000) {
        if (dir * hstep > dir * (sigma1 - t)) hstep = sigma1 - t;
        const OdeState full = rk4Step(y, t, hstep, mu, lambda, phase);
        const OdeState h1 = rk4Step(y, t, hstep / 2, mu, lambda, phase);
        const OdeState h2 = rk4Step(h1, t + hstep / 2, hstep / 2, mu, lambda, phase);
        const double scale = std::abs(h2.g) + std::abs(h2.dg) + 1e-300;
        const double err = (std::abs(h2.g - full.g) + std::abs(h2.dg - full.dg)) / scale;
        if (err < tol) {
            y = h2;
            t += hstep;
            if (err < tol / 64.0) hstep *= 2.0;
        } else {
            hstep /= 2.0;
        }
    }
    return y;
}

}  // namespace

double poschl_teller_wronskian(double mu, cplx s, double T, double tol) {
    if (mu < 0.0) throw std::domain_error("poschl_teller_wronskian: mu must be >= 0");
    const cplx lambda = cplx(0.0, 1.0) * (s - 1.0);
    const double a = lambda.real();
    const double b = lambda.imag();
    if (std::abs(a) < 0.05)
        throw std::domain_error(
            "poschl_teller_wronskian: needs an oscillatory pole (|Re lambda| >= 0.05); use the "
            "coefficient formula for purely imaginary lambda");

    // Rotate the contour t = sigma e^{i theta} so the outgoing wave decays
    // outward: Re(i lambda e^{i theta}) = -(b cos th + a sin th) < 0. Backward
    // integration along the ray then keeps it dominant over the contaminant.
    double cosTheta = 0.3;
    if (b < 0.0) cosTheta = std::min(0.3, std::abs(a) / (2.0 * std::abs(b)));
    const double theta = std::copysign(std::acos(cosTheta), a);
    const cplx phase(std::cos(theta), std::sin(theta));
    const double sigmaMax = std::max(T, 18.0 / cosTheta);

    OdeState y{cplx(1.0, 0.0), cplx(0.0, 0.0)};
    y = integrate(y, sigmaMax, 0.0, mu, lambda, phase, tol);
    if (!(std::isfinite(std::abs(y.g)) && std::isfinite(std::abs(y.dg))))
        throw std::runtime_error("poschl_teller_wronskian: integration failure");
    const cplx f0 = y.g;                                        // f_+(0)
    const cplx df0 = cplx(0.0, 1.0) * lambda * y.g + y.dg / phase;  // f_+'(0) in t
    // Even potential: f_-(t) = f_+(-t), so W(f_-, f_+)(0) = 2 f_+(0) f_+'(0).
    const cplx W = 2.0 * f0 * df0;
    const double lam = std::max(std::abs(lambda), 1e-6);
    const double n2 = std::norm(f0) * lam + std::norm(df0) / lam;
    return std::abs(W) / std::max(n2, 1e-300);
}

}  // namespace fuplab::resonances
