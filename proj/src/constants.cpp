#include "fuplab/constants.hpp"

#include <algorithm>
#include <cmath>

namespace fuplab::constants {

namespace {

const double kPlainLogLimit = 200.0;   // |log v| below this stays Plain
const double kExpArgLimit = 1.0e9;     // largest x with exp(x) representable

BigFloat bfLog(const BigFloat& x) { return log(x); }

BigFloat logAddExp(const BigFloat& a, const BigFloat& b) {
    if (a < b) return b + log1p(exp(a - b));
    return a + log1p(exp(b - a));
}

}  // namespace

LogLogReal LogLogReal::fromValue(const BigFloat& v) {
    LogLogReal r;
    if (v == 0) return r;
    if (v < 0) {
        r.rep_ = Rep::Plain;
        r.m_ = v;
        r.sign_ = -1;
        return r;
    }
    const BigFloat lv = bfLog(v);
    if (abs(lv) <= kPlainLogLimit) {
        r.rep_ = Rep::Plain;
        r.m_ = v;
    } else {
        r.rep_ = Rep::Log;
        r.m_ = lv;
    }
    r.sign_ = 1;
    return r;
}

LogLogReal LogLogReal::fromLog(const BigFloat& logv) {
    LogLogReal r;
    r.sign_ = 1;
    if (abs(logv) <= kPlainLogLimit) {
        r.rep_ = Rep::Plain;
        r.m_ = exp(logv);
    } else {
        r.rep_ = Rep::Log;
        r.m_ = logv;
    }
    return r;
}

LogLogReal LogLogReal::fromLogLog(const BigFloat& m) {
    if (m <= bfLog(BigFloat(kPlainLogLimit))) return fromLog(-exp(m));
    LogLogReal r;
    r.rep_ = Rep::LogLog;
    r.m_ = m;
    r.sign_ = 1;
    return r;
}

std::optional<BigFloat> LogLogReal::logValue() const {
    if (sign_ <= 0) return std::nullopt;
    switch (rep_) {
        case Rep::Plain:
            return bfLog(m_);
        case Rep::Log:
            return m_;
        case Rep::LogLog:
            if (m_ > kExpArgLimit) return std::nullopt;
            return -exp(m_);
    }
    return std::nullopt;
}

std::optional<BigFloat> LogLogReal::logNegLog() const {
    if (sign_ <= 0) return std::nullopt;
    switch (rep_) {
        case Rep::Plain:
            if (m_ >= 1) return std::nullopt;
            return bfLog(-bfLog(m_));
        case Rep::Log:
            if (m_ >= 0) return std::nullopt;
            return bfLog(-m_);
        case Rep::LogLog:
            return m_;
    }
    return std::nullopt;
}

std::optional<BigFloat> LogLogReal::toBigFloat() const {
    if (sign_ == 0) return BigFloat(0);
    if (rep_ == Rep::Plain) return m_;
    if (rep_ == Rep::Log && m_ <= kExpArgLimit && m_ >= -kExpArgLimit)
        return exp(m_);
    return std::nullopt;
}

std::optional<double> LogLogReal::toDouble() const {
    if (sign_ == 0) return 0.0;
    if (rep_ == Rep::Plain) {
        const double d = m_.convert_to<double>();
        if (std::isfinite(d)) return d;
        return std::nullopt;
    }
    if (rep_ == Rep::Log) {
        if (m_ > 700 || m_ < -700) return std::nullopt;
        return std::exp(m_.convert_to<double>());
    }
    return std::nullopt;  // LogLog values always underflow a double
}

bool LogLogReal::operator<(const LogLogReal& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_;
    if (sign_ == 0) return false;
    if (sign_ < 0) {
        // Both negative Plain.
        return m_ < o.m_;
    }
    const bool aDeep = rep_ == Rep::LogLog && m_ > kExpArgLimit;
    const bool bDeep = o.rep_ == Rep::LogLog && o.m_ > kExpArgLimit;
    if (aDeep && bDeep) return m_ > o.m_;
    if (aDeep) return true;
    if (bDeep) return false;
    return *logValue() < *o.logValue();
}

LogLogReal LogLogReal::mul(const LogLogReal& o) const {
    if (sign_ == 0 || o.sign_ == 0) return LogLogReal{};
    if (sign_ > 0 && o.sign_ > 0) {
        const auto la = logValue();
        const auto lb = o.logValue();
        if (la && lb) return fromLog(*la + *lb);
        // One factor too deep to expand: the other is absorbed into its scale.
        const LogLogReal& deep = (rep_ == Rep::LogLog) ? *this : o;
        return deep;
    }
    if (rep_ == Rep::Plain && o.rep_ == Rep::Plain) return fromValue(m_ * o.m_);
    throw std::domain_error("LogLogReal: mixed-sign product outside plain range");
}

LogLogReal LogLogReal::powd(double e) const {
    if (sign_ == 0) return LogLogReal{};
    if (sign_ < 0) throw std::domain_error("LogLogReal: power of a negative value");
    if (e == 0.0) return fromValue(BigFloat(1));
    if (rep_ == Rep::LogLog && m_ > kExpArgLimit) {
        if (e < 0) throw std::domain_error("LogLogReal: negative power of a deep value");
        return fromLogLog(m_ + bfLog(BigFloat(e)));
    }
    return fromLog(*logValue() * BigFloat(e));
}

LogLogReal LogLogReal::expOf(const LogLogReal& x) {
    if (x.sign_ == 0) return fromValue(BigFloat(1));
    if (x.sign_ < 0) {
        if (x.rep_ != Rep::Plain) throw std::domain_error("LogLogReal: exp of deep negative");
        return fromLog(x.m_);
    }
    if (x.rep_ == Rep::Plain) return fromLog(x.m_);
    if (x.rep_ == Rep::Log) {
        if (x.m_ > bfLog(BigFloat(kExpArgLimit)))
            throw std::overflow_error("LogLogReal: exp argument beyond representable tower");
        return fromLog(exp(x.m_));
    }
    throw std::domain_error("LogLogReal: exp of a loglog value");
}

LogLogReal LogLogReal::expOfNeg(const LogLogReal& x) {
    if (x.sign_ == 0) return fromValue(BigFloat(1));
    if (x.sign_ < 0) throw std::domain_error("LogLogReal: expOfNeg expects a positive argument");
    if (x.rep_ == Rep::Plain) return fromLog(-x.m_);
    if (x.rep_ == Rep::Log) return fromLogLog(x.m_);
    throw std::domain_error("LogLogReal: expOfNeg of a loglog value");
}

std::string LogLogReal::repTag() const {
    switch (rep_) {
        case Rep::Plain:
            return "plain";
        case Rep::Log:
            return "log";
        case Rep::LogLog:
            return "loglog";
    }
    return "plain";
}

std::string LogLogReal::mantissaString() const {
    return m_.str(std::numeric_limits<BigFloat>::max_digits10);
}

LogLogReal LogLogReal::parse(const std::string& repTag, const std::string& mantissa, int sign) {
    LogLogReal r;
    r.m_ = BigFloat(mantissa);
    r.sign_ = sign;
    if (repTag == "plain")
        r.rep_ = Rep::Plain;
    else if (repTag == "log")
        r.rep_ = Rep::Log;
    else if (repTag == "loglog")
        r.rep_ = Rep::LogLog;
    else
        throw std::invalid_argument("LogLogReal: unknown representation tag");
    return r;
}

// ---------------------------------------------------------------------------

const ReportEntry* ConstantChainReport::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

namespace {

// log of E = (Cd nu^-2 |log nu|)^(Cd nu^-1 |log nu|); beta = exp(-exp(E)),
// so E = log(-log beta) and this value is log(log(-log beta)).
BigFloat logTowerExponent(const BigFloat& logNu, double Cd) {
    const BigFloat absLogNu = -logNu;  // log(1/nu), positive
    const BigFloat logBase = bfLog(BigFloat(Cd)) - 2 * logNu + bfLog(absLogNu);
    if (-logNu > kExpArgLimit)
        throw std::overflow_error("beta_fup: nu too small for the representable tower");
    const BigFloat expo = BigFloat(Cd) * exp(-logNu) * absLogNu;
    return expo * logBase;
}

LogLogReal betaFupFromLogNu(const BigFloat& logNu, double Cd) {
    const BigFloat inner = logTowerExponent(logNu, Cd);
    if (inner > kExpArgLimit)
        throw std::overflow_error(
            "beta_fup: log(-log beta) exceeds the representable tower for this nu");
    return LogLogReal::fromLogLog(exp(inner));
}

void requireNuRange(double nu) {
    if (!(nu > 0.0 && nu < 1.0 / 3.0))
        throw std::domain_error("constants: nu must lie in (0, 1/3)");
}

}  // namespace

LogLogReal beta_fup(double nu, int d, double Cd) {
    requireNuRange(nu);
    if (d < 1) throw std::domain_error("beta_fup: dimension must be >= 1");
    if (!(Cd >= 1.0)) throw std::domain_error("beta_fup: Cd must be >= 1");
    return betaFupFromLogNu(bfLog(BigFloat(nu)), Cd);
}

DampingParams damping_params(double nu, double muScale, double c1, int d, double Cd) {
    requireNuRange(nu);
    if (!(muScale > 1.0)) throw std::domain_error("damping_params: muScale must exceed 1");
    if (!(c1 > 0.0 && c1 < 1.0)) throw std::domain_error("damping_params: c1 must lie in (0,1)");
    if (d < 1 || !(Cd >= 1.0)) throw std::domain_error("damping_params: bad d or Cd");
    const double absLog = std::log(1.0 / nu);
    DampingParams p;
    p.alpha = 1.0 - nu / (Cd * absLog);
    p.c3 = c1 * nu / (Cd * absLog);
    const double logC2 = Cd * std::log(c1) - std::log(Cd) - c1 * nu * muScale / (Cd * absLog);
    p.c2 = std::exp(logC2);
    return p;
}

GammaPair gamma_exponent(double nu, int d, double Cd) {
    requireNuRange(nu);
    if (d < 1 || !(Cd >= 1.0)) throw std::domain_error("gamma_exponent: bad d or Cd");
    const double absLog = std::log(1.0 / nu);
    GammaPair g;
    g.lines = nu / (Cd * absLog);
    g.balls = std::pow(nu, d) / (Cd * (1.0 + absLog));
    return g;
}

HsExponentResult hs_exponent_core(int L, const LogLogReal& Cstar, double Cphi, double cphi,
                                 const LogLogReal* Toverride) {
    if (L < 3) throw std::domain_error("hs_exponent_core: L must be >= 3");
    if (!(Cphi > 0.0 && cphi > 0.0))
        throw std::domain_error("hs_exponent_core: Cphi and cphi must be positive");
    const auto logCstarOpt = Cstar.logValue();
    if (!logCstarOpt) throw std::overflow_error("hs_exponent_core: C* beyond representable tower");
    const BigFloat logCstar = *logCstarOpt;
    const BigFloat logL = bfLog(BigFloat(L));

    // T0 = ceil(log(2 Cphi C*^2 + sqrt(4 Cphi^2 C*^4 + cphi^2)) / log L)
    const BigFloat lA = bfLog(BigFloat(2) * Cphi) + 2 * logCstar;
    const BigFloat lSqrt = logAddExp(bfLog(BigFloat(4) * Cphi * Cphi) + 4 * logCstar,
                                     2 * bfLog(BigFloat(cphi))) /
                           2;
    const BigFloat lSum = logAddExp(lA, lSqrt);
    BigFloat t0 = lSum / logL;
    if (t0 < BigFloat(1e18)) t0 = ceil(t0);  // past integer resolution ceil is identity
    if (t0 < 1) t0 = 1;
    HsExponentResult res;
    res.Cstar = Cstar;
    res.logLogCstar = LogLogReal::fromValue(logCstar > 0 ? bfLog(logCstar) : BigFloat(0));
    res.T0 = LogLogReal::fromValue(t0);
    res.T = res.T0;
    if (Toverride && *Toverride > res.T0) res.T = *Toverride;

    const auto logT = res.T.logValue();
    if (!logT) throw std::overflow_error("hs_exponent_core: T beyond representable tower");

    // gamma0(T) = (1 - cphi^2 / L^{2(T-1)}) / (2 C*^2)
    BigFloat corr = 0;  // log(1 - cphi^2 L^{-2(T-1)})
    bool corrExact = false;
    if (res.T.rep() == LogLogReal::Rep::Plain) {
        const BigFloat expArg = 2 * bfLog(BigFloat(cphi)) - 2 * (res.T.mantissa() - 1) * logL;
        if (expArg > -kPlainLogLimit) {
            const BigFloat x = exp(expArg);
            if (x >= 1)
                throw std::domain_error(
                    "hs_exponent_core: gamma0 <= 0, inconsistent parameters (T < T0)");
            corr = log1p(-x);
            corrExact = true;
        }
    }
    if (!corrExact) corr = 0;
    const BigFloat logGamma0 = corr - bfLog(BigFloat(2)) - 2 * logCstar;
    res.gamma0 = LogLogReal::fromLog(logGamma0);

    // beta = -log(1 - gamma0/2) / (T log L)
    BigFloat logNumer;
    if (logGamma0 > -kPlainLogLimit) {
        const BigFloat x = exp(logGamma0) / 2;
        logNumer = bfLog(-log1p(-x));
    } else {
        logNumer = logGamma0 - bfLog(BigFloat(2));
    }
    res.beta = LogLogReal::fromLog(logNumer - *logT - bfLog(logL));
    return res;
}

HsExponentResult hs_exponent_chain(int L, double c1, double c2, double c3, double alpha, int d,
                                double Cd, double Cphi, double cphi, double c3Star,
                                const LogLogReal* Toverride) {
    for (double v : {c1, c2, c3, alpha})
        if (!(v > 0.0 && v < 1.0))
            throw std::domain_error("hs_exponent_chain: c1, c2, c3, alpha must lie in (0,1)");
    if (!(c3 < c3Star))
        throw std::domain_error("hs_exponent_chain: c3 must lie below the admissibility threshold");
    if (L < 3 || d < 1 || !(Cd >= 1.0))
        throw std::domain_error("hs_exponent_chain: bad L, d or Cd");

    const BigFloat bc3(c3);
    const BigFloat t1 = 2 * bfLog(BigFloat(2 * d) / bc3);
    const BigFloat t2 = exp(bfLog(BigFloat(16) * M_PI * Cd / bc3) / (1.0 - alpha));
    const BigFloat t3 = exp(bfLog(BigFloat(4)) / (1.0 - alpha));
    const BigFloat absLogC1 = bfLog(BigFloat(1) / BigFloat(c1));
    const BigFloat t4 = 8 * (d * bfLog(BigFloat(d) * absLogC1) - bfLog(bc3));
    const BigFloat t5 = 2 * bfLog(4 * bfLog(BigFloat(2) * Cd / (BigFloat(c2) * BigFloat(c2))));
    const BigFloat t6 = 4 * bfLog(BigFloat(8 * d));
    const BigFloat logR1 = std::max({t1, t2, t3, t4, t5, t6});

    if (logR1 <= kExpArgLimit) {
        // Shallow regime: C* is materializable in log form.
        BigFloat logCstar;
        if (logR1 <= kPlainLogLimit) {
            const BigFloat r1 = exp(logR1);
            logCstar = bc3 * (r1 + 2) * pow(log1p(r1), BigFloat(-alpha)) / 2;
        } else {
            logCstar = bc3 / 2 * exp(logR1) * pow(logR1, BigFloat(-alpha));
        }
        HsExponentResult core = hs_exponent_core(L, LogLogReal::fromLog(logCstar), Cphi, cphi,
                                                Toverride);
        core.R1 = LogLogReal::fromLog(logR1);
        return core;
    }

    // Deep regime: R1 = exp(huge). log C* = (c3/2) R1 log(R1)^{-alpha} itself
    // overflows, but log(log C*) stays plain; every displayed quantity is
    // carried one log level down. Corrections of relative size 1/R1 and the
    // Cphi/cphi terms are below representable resolution here.
    HsExponentResult res;
    res.R1 = LogLogReal::fromLog(logR1);
    const BigFloat logLogCstar = bfLog(bc3 / 2) + logR1 - alpha * bfLog(logR1);
    res.logLogCstar = LogLogReal::fromValue(logLogCstar);
    res.intermediatesRepresentable = false;
    const BigFloat logL = bfLog(BigFloat(L));
    // T0 = log(2 Cphi C*^2 + ...)/log L ~ 2 log C* / log L
    res.T0 = LogLogReal::fromLog(logLogCstar + bfLog(BigFloat(2)) - bfLog(logL));
    res.T = res.T0;
    if (Toverride && *Toverride > res.T0) res.T = *Toverride;
    // -log beta = 2 log C* + log(2 T log L) + log 2 ~ 2 log C*
    res.beta = LogLogReal::fromLogLog(logLogCstar + bfLog(BigFloat(2)));
    return res;
}

SpectralGapChain spectral_gap_chain(double delta, double Cmu, double Carc, double Cd) {
    if (!(delta > 1.0 && delta < 2.0))
        throw std::domain_error(
            "spectral_gap_chain: delta must lie in (1,2); delta <= 1 is the singular circle case "
            "(use the resonance route)");
    if (!(Cmu >= 1.0 && Carc >= 1.0))
        throw std::domain_error("spectral_gap_chain: Cmu and Carc must be >= 1");
    if (!(Cd >= 1.0)) throw std::domain_error("spectral_gap_chain: Cd must be >= 1");

    SpectralGapChain g;
    g.cMuTilde = 20000.0 * Cmu;
    g.cArcTilde = 200.0 * Carc;

    const BigFloat bDelta(delta);
    const BigFloat logCout =
        bfLog(BigFloat(2)) +
        (bfLog(BigFloat(4)) + bDelta * bfLog(BigFloat(5)) + 2 * bfLog(BigFloat(g.cMuTilde))) /
            (bDelta - 1);
    g.cOut = LogLogReal::fromLog(logCout);

    const BigFloat logNuChain =
        -(bfLog(BigFloat(200)) + logCout + 2 * bfLog(BigFloat(g.cArcTilde)));
    g.nuChain = LogLogReal::fromLog(logNuChain);
    g.alpha1 = LogLogReal::fromLog(-(bfLog(BigFloat(10)) + logCout + bfLog(BigFloat(g.cArcTilde))));

    const BigFloat logNuHead =
        -(bfLog(BigFloat(1e8)) +
          (bfLog(BigFloat(1e11)) + 2 * bfLog(BigFloat(Cmu))) / (bDelta - 1) +
          2 * bfLog(BigFloat(Carc)));
    g.nuHeadline = LogLogReal::fromLog(logNuHead);
    g.headlineIsLowerBound = g.nuHeadline <= g.nuChain;

    // betaTilde = beta(nuHeadline, 2) / 2. The halving shifts -log beta by
    // log 2, invisible at this depth; log(log(-log betaTilde)) always fits.
    const BigFloat inner = logTowerExponent(logNuHead, Cd);
    g.betaTildeLogLogNegLog = LogLogReal::fromValue(inner);
    g.betaTildeRepresentable = inner <= kExpArgLimit;
    if (g.betaTildeRepresentable) g.betaTilde = LogLogReal::fromLogLog(exp(inner));
    return g;
}

double arc_constant_from_K(double K) {
    if (!(K >= 1.0)) throw std::domain_error("arc_constant_from_K: K must be >= 1");
    if (K > 85.0) throw std::overflow_error("arc_constant_from_K: K too large for a double");
    return 10.0 * std::exp(8.0 * K);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

ReportEntry entry(const std::string& name, const LogLogReal& v, const std::string& prov) {
    return ReportEntry{name, v, prov};
}

ReportEntry entryD(const std::string& name, double v, const std::string& prov) {
    return ReportEntry{name, LogLogReal::fromValue(BigFloat(v)), prov};
}

}  // namespace

ConstantChainReport report_fup_chain(const ChainInputs& in) {
    ConstantChainReport rep;
    rep.chain = "fup";
    const LogLogReal beta = beta_fup(in.nu, in.d, in.Cd);
    rep.entries.push_back(entryD("nu", in.nu, "input"));
    rep.entries.push_back(entryD("d", in.d, "input"));
    rep.entries.push_back(entryD("Cd", in.Cd, "input"));
    rep.entries.push_back(entry(
        "beta", beta,
        "beta = exp(-exp((Cd nu^-2 log(1/nu))^(Cd nu^-1 log(1/nu))))"));
    rep.entries.push_back(entry("log_neg_log_beta", LogLogReal::fromValue(*beta.logNegLog()),
                                "log(-log beta), the loglog mantissa of beta"));
    return rep;
}

ConstantChainReport report_damping_chain(const ChainInputs& in) {
    ConstantChainReport rep;
    rep.chain = "damping";
    const DampingParams p = damping_params(in.nu, in.muScale, in.c1, in.d, in.Cd);
    const GammaPair g = gamma_exponent(in.nu, in.d, in.Cd);
    rep.entries.push_back(entryD("nu", in.nu, "input"));
    rep.entries.push_back(entryD("mu_scale", in.muScale, "input"));
    rep.entries.push_back(entryD("c1", in.c1, "input"));
    rep.entries.push_back(entryD("alpha", p.alpha, "alpha = 1 - nu/(Cd log(1/nu))"));
    rep.entries.push_back(
        entryD("c2", p.c2, "c2 = c1^Cd / (Cd exp(c1 nu mu / (Cd log(1/nu))))"));
    rep.entries.push_back(entryD("c3", p.c3, "c3 = c1 nu / (Cd log(1/nu))"));
    rep.entries.push_back(entryD("gamma_lines", g.lines, "gamma = nu/(Cd log(1/nu))"));
    rep.entries.push_back(
        entryD("gamma_balls", g.balls, "gamma = nu^d/(Cd (1 + log(1/nu)))"));
    return rep;
}

ConstantChainReport report_gap_chain(const ChainInputs& in) {
    ConstantChainReport rep;
    rep.chain = "gap";
    const SpectralGapChain g = spectral_gap_chain(in.delta, in.Cmu, in.Carc, in.Cd);
    rep.entries.push_back(entryD("delta", in.delta, "input"));
    rep.entries.push_back(entryD("Cmu", in.Cmu, "input"));
    rep.entries.push_back(entryD("Carc", in.Carc, "input"));
    rep.entries.push_back(entryD("Cmu_tilde", g.cMuTilde, "Cmu_tilde = 20000 Cmu"));
    rep.entries.push_back(entryD("Carc_tilde", g.cArcTilde, "Carc_tilde = 200 Carc"));
    rep.entries.push_back(
        entry("C_out", g.cOut, "C_out = 2 (4 * 5^delta * Cmu_tilde^2)^(1/(delta-1))"));
    rep.entries.push_back(
        entry("nu_chain", g.nuChain, "nu = 1/(200 C_out Carc_tilde^2)"));
    rep.entries.push_back(entry("alpha1", g.alpha1, "alpha1 = 1/(10 C_out Carc_tilde)"));
    rep.entries.push_back(entry(
        "nu_headline", g.nuHeadline, "nu = 1/(10^8 (10^11 Cmu^2)^(1/(delta-1)) Carc^2)"));
    rep.entries.push_back(entryD("headline_is_lower_bound", g.headlineIsLowerBound ? 1.0 : 0.0,
                                 "nu_headline <= nu_chain"));
    if (g.betaTildeRepresentable)
        rep.entries.push_back(
            entry("beta_tilde", g.betaTilde, "beta_tilde = beta(nu_headline, 2)/2"));
    rep.entries.push_back(entry("log_log_neg_log_beta_tilde", g.betaTildeLogLogNegLog,
                                "log(log(-log beta_tilde)); beta_tilde = beta(nu_headline, 2)/2"));
    if (in.K >= 1.0)
        rep.entries.push_back(
            entryD("Carc_from_K", arc_constant_from_K(in.K), "Carc = 10 e^{8K}"));
    return rep;
}

ConstantChainReport report_hs_chain(const ChainInputs& in) {
    ConstantChainReport rep;
    rep.chain = "hs";
    const DampingParams p = damping_params(in.nu, in.muScale, in.c1, in.d, in.Cd);
    const int L = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(in.d)) / in.nu));
    const HsExponentResult hs = hs_exponent_chain(L, in.c1, p.c2, p.c3, p.alpha, in.d, in.Cd,
                                               in.Cphi, in.cphi, in.c3Star);
    rep.entries.push_back(entryD("L", L, "L = ceil(sqrt(d)/nu)"));
    rep.entries.push_back(entryD("c1", in.c1, "input"));
    rep.entries.push_back(entryD("c2", p.c2, "damping chain"));
    rep.entries.push_back(entryD("c3", p.c3, "damping chain"));
    rep.entries.push_back(entryD("alpha", p.alpha, "damping chain"));
    rep.entries.push_back(entry("R1", hs.R1, "R1 = max of six closed-form terms"));
    rep.entries.push_back(entry("log_log_C_star", hs.logLogCstar,
                                "log(log C*); C* = exp[c3 (R1+2) (log(1+R1))^-alpha / 2]"));
    if (hs.intermediatesRepresentable) {
        rep.entries.push_back(entry(
            "C_star", hs.Cstar, "C* = exp[c3 (R1+2) (log(1+R1))^-alpha / 2]"));
        rep.entries.push_back(
            entry("gamma0", hs.gamma0, "gamma0(T) = (1 - cphi^2/L^{2(T-1)}) / (2 C*^2)"));
    }
    rep.entries.push_back(entry(
        "T0", hs.T0, "T0 = ceil(log(2 Cphi C*^2 + sqrt(4 Cphi^2 C*^4 + cphi^2)) / log L)"));
    rep.entries.push_back(entry("T", hs.T, "T = max(T0, override)"));
    rep.entries.push_back(entry("beta", hs.beta, "beta = -log(1 - gamma0(T)/2) / (T log L)"));
    return rep;
}

}  // namespace fuplab::constants
