#include "kfactor/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/core.h>

#include "kfactor/errors.hpp"

namespace kfactor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Factorials up to this argument are summed exactly; beyond it the Stirling
// series below is accurate to well under 1e-16 relative.
constexpr std::uint64_t kStirlingCutoff = 1024;

const std::array<double, kStirlingCutoff + 1>& log_factorial_table() {
    static const auto table = [] {
        std::array<double, kStirlingCutoff + 1> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (std::uint64_t i = 1; i <= kStirlingCutoff; ++i) {
            acc += std::log(static_cast<long double>(i));
            t[i] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

double stirling_log_factorial(double m) {
    // ln m! = m ln m - m + ln(2 pi m)/2 + 1/(12m) - 1/(360m^3) + 1/(1260m^5) - 1/(1680m^7)
    const double inv = 1.0 / m;
    const double inv2 = inv * inv;
    const double series =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    return m * std::log(m) - m + 0.5 * std::log(2.0 * std::numbers::pi * m) + series;
}

}  // namespace

LogReal LogReal::from_log(double log_mag, int sign) {
    LogReal r;
    if (sign == 0 || log_mag == -kInf) return r;
    r.sign_ = sign > 0 ? 1 : -1;
    r.log_mag_ = log_mag;
    return r;
}

LogReal LogReal::from_double(double x) {
    if (x == 0.0) return {};
    return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

double LogReal::log_abs() const { return sign_ == 0 ? -kInf : log_mag_; }

double LogReal::to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_mag_);
}

bool LogReal::fits_double() const {
    if (sign_ == 0) return true;
    return log_mag_ < 709.0 && log_mag_ > -708.0;
}

LogReal LogReal::inverse() const {
    if (sign_ == 0) throw invalid_input("LogReal: inverse of zero");
    return from_log(-log_mag_, sign_);
}

LogReal LogReal::pow(double exponent) const {
    if (sign_ == 0) {
        if (exponent == 0.0) return one();
        if (exponent < 0.0) throw invalid_input("LogReal: negative power of zero");
        return {};
    }
    if (sign_ < 0) throw invalid_input("LogReal: real power of a negative value");
    return from_log(log_mag_ * exponent);
}

LogReal LogReal::operator-() const {
    LogReal r = *this;
    r.sign_ = -r.sign_;
    return r;
}

LogReal& LogReal::operator*=(const LogReal& rhs) {
    if (sign_ == 0 || rhs.sign_ == 0) {
        *this = {};
        return *this;
    }
    sign_ *= rhs.sign_;
    log_mag_ += rhs.log_mag_;
    return *this;
}

LogReal& LogReal::operator/=(const LogReal& rhs) { return *this *= rhs.inverse(); }

LogReal& LogReal::operator+=(const LogReal& rhs) {
    if (rhs.sign_ == 0) return *this;
    if (sign_ == 0) {
        *this = rhs;
        return *this;
    }
    const bool this_bigger = log_mag_ >= rhs.log_mag_;
    const LogReal& big = this_bigger ? *this : rhs;
    const LogReal& small = this_bigger ? rhs : *this;
    const double delta = small.log_mag_ - big.log_mag_;  // <= 0
    LogReal r;
    if (big.sign_ == small.sign_) {
        r.sign_ = big.sign_;
        r.log_mag_ = big.log_mag_ + std::log1p(std::exp(delta));
    } else {
        if (delta == 0.0) {
            *this = {};
            return *this;
        }
        r.sign_ = big.sign_;
        r.log_mag_ = big.log_mag_ + std::log1p(-std::exp(delta));
    }
    *this = r;
    return *this;
}

LogReal& LogReal::operator-=(const LogReal& rhs) { return *this += -rhs; }

bool operator==(const LogReal& a, const LogReal& b) {
    if (a.sign_ != b.sign_) return false;
    return a.sign_ == 0 || a.log_mag_ == b.log_mag_;
}

bool operator<(const LogReal& a, const LogReal& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    if (a.sign_ == 0) return false;
    return a.sign_ > 0 ? a.log_mag_ < b.log_mag_ : a.log_mag_ > b.log_mag_;
}

double log_factorial(std::uint64_t m) {
    if (m <= kStirlingCutoff) return log_factorial_table()[m];
    return stirling_log_factorial(static_cast<double>(m));
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -kInf;
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_multinomial(std::uint64_t n, std::span<const std::uint64_t> parts) {
    std::uint64_t total = 0;
    double result = log_factorial(n);
    for (auto p : parts) {
        total += p;
        result -= log_factorial(p);
    }
    if (total != n)
        throw invalid_input(fmt::format("log_multinomial: parts sum to {} but n = {}", total, n));
    return result;
}

double log_multinomial(std::uint64_t n, std::initializer_list<std::uint64_t> parts) {
    return log_multinomial(n, std::span<const std::uint64_t>(parts.begin(), parts.size()));
}

std::string check_summation_hypotheses(const SummationInput& in) {
    if (in.Z < 2) return fmt::format("Z >= 2 (got Z = {})", in.Z);
    if (in.A.size() != static_cast<std::size_t>(in.Z) || in.B.size() != static_cast<std::size_t>(in.Z))
        return fmt::format("A and B must have exactly Z = {} entries", in.Z);
    if (!(in.c_hat > 0.0 && in.c_hat < 1.0 / 3.0))
        return fmt::format("0 < c_hat < 1/3 (got c_hat = {})", in.c_hat);
    double A2 = 0.0, C1 = kInf, C2 = -kInf;
    for (int i = 1; i <= in.Z; ++i) {
        const double a = in.A[i - 1];
        const double b = in.B[i - 1];
        if (!std::isfinite(a) || !std::isfinite(b)) return fmt::format("A({0}) and B({0}) finite", i);
        if (a < 0.0) return fmt::format("A({}) >= 0 (got {})", i, a);
        if (1.0 - (i - 1) * b < 0.0) return fmt::format("1 - (i-1)B(i) >= 0 at i = {} (B = {})", i, b);
        A2 = std::max(A2, a);
        C1 = std::min(C1, a * b);
        C2 = std::max(C2, a * b);
    }
    if (A2 / in.Z > in.c_hat) return fmt::format("A2/Z <= c_hat (A2/Z = {})", A2 / in.Z);
    if (std::max(std::fabs(C1), std::fabs(C2)) > in.c_hat)
        return fmt::format("|C| <= c_hat (C in [{}, {}])", C1, C2);
    return {};
}

SummationBounds sum_bounds(const SummationInput& in) {
    if (auto failed = check_summation_hypotheses(in); !failed.empty())
        throw invalid_input("sum_bounds: hypothesis violated: " + failed);

    SummationBounds out;
    out.A1 = kInf;
    out.A2 = -kInf;
    out.C1 = kInf;
    out.C2 = -kInf;
    for (int i = 0; i < in.Z; ++i) {
        out.A1 = std::min(out.A1, in.A[i]);
        out.A2 = std::max(out.A2, in.A[i]);
        out.C1 = std::min(out.C1, in.A[i] * in.B[i]);
        out.C2 = std::max(out.C2, in.A[i] * in.B[i]);
    }

    double term = 1.0;
    double sum = 1.0;
    for (int i = 1; i <= in.Z; ++i) {
        const double a = in.A[i - 1];
        const double factor = 1.0 - (i - 1) * in.B[i - 1];
        if (a == 0.0 || factor == 0.0) break;  // n_j = 0 for j >= i
        term *= a * factor / i;
        sum += term;
    }
    out.sum = sum;

    const double slack = std::pow(2.0 * std::numbers::e * in.c_hat, in.Z);
    out.sigma1 = std::exp(out.A1 - 0.5 * out.A1 * out.C2) - slack;
    out.sigma2 = std::exp(out.A2 - 0.5 * out.A2 * out.C1 + 0.5 * out.A2 * out.C1 * out.C1) + slack;
    return out;
}

}  // namespace kfactor
