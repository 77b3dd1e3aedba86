// High-precision scalar and the layered log representation used by the
// constant chains, whose values overflow any fixed-exponent float.
#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace fuplab::constants {

using BigFloat = boost::multiprecision::cpp_bin_float_50;  // 168 significand bits

// A positive (or signed plain) real stored at the magnitude layer where its
// mantissa stays representable:
//   Plain   value = sign * m
//   Log     value = exp(m)                  (positive, huge or tiny)
//   LogLog  value = exp(-exp(m))            (in (0,1), astronomically small)
class LogLogReal {
public:
    enum class Rep { Plain, Log, LogLog };

    LogLogReal() : rep_(Rep::Plain), m_(0), sign_(0) {}

    static LogLogReal fromValue(const BigFloat& v);
    static LogLogReal fromLog(const BigFloat& logv);      // value = exp(logv)
    static LogLogReal fromLogLog(const BigFloat& m);      // value = exp(-exp(m))

    Rep rep() const { return rep_; }
    const BigFloat& mantissa() const { return m_; }
    int sign() const { return sign_; }
    bool isZero() const { return sign_ == 0; }
    bool isPositive() const { return sign_ > 0; }

    // log(value); absent when the value is 0, negative, or too deep to expand.
    std::optional<BigFloat> logValue() const;
    // log(-log(value)) for values in (0,1).
    std::optional<BigFloat> logNegLog() const;

    std::optional<double> toDouble() const;  // only when in double range
    std::optional<BigFloat> toBigFloat() const;  // expanded value when it fits

    bool operator<(const LogLogReal& o) const;
    bool operator>(const LogLogReal& o) const { return o < *this; }
    bool operator<=(const LogLogReal& o) const { return !(o < *this); }
    bool operator>=(const LogLogReal& o) const { return !(*this < o); }

    LogLogReal mul(const LogLogReal& o) const;
    LogLogReal powd(double e) const;
    static LogLogReal expOf(const LogLogReal& x);   // exp(x), x plain-representable
    static LogLogReal expOfNeg(const LogLogReal& x);  // exp(-x) for positive x

    std::string repTag() const;
    std::string mantissaString() const;
    static LogLogReal parse(const std::string& repTag, const std::string& mantissa, int sign);

private:
    Rep rep_;
    BigFloat m_;
    int sign_;  // 0 only for the Plain zero
};

}  // namespace fuplab::constants
