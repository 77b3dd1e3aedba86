// Explicit constant chains: porosity -> damping -> localization exponent and
// the limit-set chain down to the spectral-gap exponent.
#pragma once

#include "fuplab/bigfloat.hpp"

#include <string>
#include <vector>

namespace fuplab::constants {

struct ChainInputs {
    double nu{0.1};        // porosity, in (0, 1/3)
    int d{2};
    double Cd{1.0};        // dimensional constant, >= 1
    double h{1.0 / 1024};  // scale, in (0, 1/100)
    double muScale{10.0};  // lower porosity scale, > 1
    double c1{0.5};        // damping bandwidth, in (0,1)
    double Cphi{1.0}, cphi{1.0};
    double delta{1.5};     // limit-set regularity exponent, in (1,2)
    double Cmu{1.0}, Carc{1.0}, K{1.0};
    double c3Star{0.01};   // admissibility threshold for c3
};

struct ReportEntry {
    std::string name;
    LogLogReal value;
    std::string provenance;  // formula that produced the value, or "measured"
};

struct ConstantChainReport {
    std::string chain;
    std::vector<ReportEntry> entries;

    const ReportEntry* find(const std::string& name) const;
};

// log(-log beta) = (Cd nu^-2 log(1/nu)) ^ (Cd nu^-1 log(1/nu))
LogLogReal beta_fup(double nu, int d, double Cd);

struct DampingParams {
    double alpha;  // 1 - nu/(Cd log(1/nu))
    double c2;     // c1^Cd / (Cd exp(c1 nu mu / (Cd log(1/nu))))
    double c3;     // c1 nu / (Cd log(1/nu))
};

DampingParams damping_params(double nu, double muScale, double c1, int d, double Cd);

struct GammaPair {
    double lines;  // nu / (Cd log(1/nu))
    double balls;  // nu^d / (Cd (1 + log(1/nu)))
};

GammaPair gamma_exponent(double nu, int d, double Cd);

struct HsExponentResult {
    LogLogReal R1;
    LogLogReal T0;
    LogLogReal T;
    LogLogReal beta;            // always representable: log(-log beta) stays plain
    LogLogReal logLogCstar;     // log(log C*), always representable
    // C* and gamma0 exceed every representation layer once R1 = exp(huge);
    // they are exposed only when the chain stays shallow.
    bool intermediatesRepresentable{true};
    LogLogReal Cstar;
    LogLogReal gamma0;
};

// Core exponent formulas, callable with an externally supplied C*.
HsExponentResult hs_exponent_core(int L, const LogLogReal& Cstar, double Cphi, double cphi,
                                 const LogLogReal* Toverride = nullptr);

HsExponentResult hs_exponent_chain(int L, double c1, double c2, double c3, double alpha, int d,
                                double Cd, double Cphi, double cphi, double c3Star = 0.01,
                                const LogLogReal* Toverride = nullptr);

struct SpectralGapChain {
    double cMuTilde;       // 20000 Cmu
    double cArcTilde;      // 200 Carc
    LogLogReal cOut;       // 2 (4 * 5^delta * cMuTilde^2)^(1/(delta-1))
    LogLogReal nuChain;    // 1 / (200 cOut cArcTilde^2)
    LogLogReal alpha1;     // 1 / (10 cOut cArcTilde)
    LogLogReal nuHeadline; // 1 / (10^8 (10^11 Cmu^2)^(1/(delta-1)) Carc^2)
    bool headlineIsLowerBound;
    // betaTilde = beta(nuHeadline, 2) / 2. Its loglog mantissa log(-log beta)
    // usually exceeds any float's exponent range; the next log down,
    // log(log(-log betaTilde)), is always emitted.
    bool betaTildeRepresentable{false};
    LogLogReal betaTilde;
    LogLogReal betaTildeLogLogNegLog;
};

SpectralGapChain spectral_gap_chain(double delta, double Cmu, double Carc, double Cd);

double arc_constant_from_K(double K);  // 10 e^{8K}

ConstantChainReport report_fup_chain(const ChainInputs& in);
ConstantChainReport report_damping_chain(const ChainInputs& in);
ConstantChainReport report_gap_chain(const ChainInputs& in);
ConstantChainReport report_hs_chain(const ChainInputs& in);

}  // namespace fuplab::constants
