// Explicit resonances for warped-product hyperbolic quotients via the
// separated radial problem, with a scattering-coefficient cross-check.
#pragma once

#include <complex>
#include <string>
#include <vector>

namespace fuplab::resonances {

using cplx = std::complex<double>;

struct SurfaceSpectrum {
    std::vector<double> mu;  // 0 = mu_0 < mu_1 <= mu_2 <= ...
    std::string source{"user-supplied"};

    void validate() const;
};

// A bundled spectrum for demos and tests (not a genuine surface spectrum).
SurfaceSpectrum demo_spectrum();

struct ResonanceEntry {
    int k{0};
    int n{0};
    cplx s{0.0, 0.0};
    cplx lambda{0.0, 0.0};  // computed from its own formula, = i(s-1)
    bool trivial{false};    // the k = 0 pole s = 1
    bool lowLying{false};   // k >= 1, n = 0, mu_k < 1/4, the + branch in (1/2, 1]
};

struct ResonanceTable {
    std::vector<ResonanceEntry> entries;
    double maxReSNontrivial{0.0};  // over entries with s != 1
};

ResonanceTable fuchsian_resonances(const SurfaceSpectrum& spec, int nMax);

struct GapReport {
    double gap{0.0};  // 1 - max Re s over non-trivial, non-low-lying entries
    std::vector<ResonanceEntry> violators;   // Re s > 1/2 outside the buckets
    std::vector<ResonanceEntry> lowLying;
};

GapReport essential_gap(const ResonanceTable& table);

// Complex gamma (Lanczos approximation).
cplx gammaFn(cplx z);

// Reciprocal transmission coefficient of -d^2/dt^2 + mu sech^2(t) at the
// spectral parameter lambda = i(s-1); zero exactly at the scattering poles.
cplx poschl_teller_jost(double mu, cplx s);

// |J(s)| normalized by the maximum of |J| on a probe circle around s.
double normalized_jost(double mu, cplx s, double probeRadius = 0.1, int probePoints = 16);

// Independent route: integrate the stationary equation with outgoing
// asymptotics from both sides and return the normalized matching Wronskian.
double poschl_teller_wronskian(double mu, cplx s, double T = 20.0, double tol = 1e-10);

}  // namespace fuplab::resonances
