#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace kfactor {

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Products and quotients add and subtract magnitudes; sums use log-sum-exp,
/// so values like C(n-1,d)^n stay representable long after a double would
/// overflow. Zero is represented by sign 0 and its log magnitude is ignored.
class LogReal {
public:
    constexpr LogReal() = default;

    static LogReal zero() { return {}; }
    static LogReal one() { return from_log(0.0); }
    static LogReal from_log(double log_mag, int sign = 1);
    static LogReal from_double(double x);

    int sign() const { return sign_; }
    bool is_zero() const { return sign_ == 0; }
    // ln|x|; -inf for zero.
    double log_abs() const;
    // Plain double value; +-inf when the magnitude does not fit.
    double to_double() const;
    // True when to_double() is finite and, for nonzero values, not denormal.
    bool fits_double() const;

    LogReal inverse() const;
    LogReal pow(double exponent) const;

    LogReal operator-() const;
    LogReal& operator*=(const LogReal& rhs);
    LogReal& operator/=(const LogReal& rhs);
    LogReal& operator+=(const LogReal& rhs);
    LogReal& operator-=(const LogReal& rhs);

    friend LogReal operator*(LogReal a, const LogReal& b) { return a *= b; }
    friend LogReal operator/(LogReal a, const LogReal& b) { return a /= b; }
    friend LogReal operator+(LogReal a, const LogReal& b) { return a += b; }
    friend LogReal operator-(LogReal a, const LogReal& b) { return a -= b; }

    friend bool operator==(const LogReal& a, const LogReal& b);
    friend bool operator<(const LogReal& a, const LogReal& b);

private:
    int sign_ = 0;
    double log_mag_ = 0.0;
};

/// ln(m!). Exact summation of logs below a cutoff, Stirling series above it.
double log_factorial(std::uint64_t m);

/// ln C(n, k); -inf when k > n.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// ln( n! / prod(parts_i!) ). Throws invalid_input if the parts do not sum to n.
double log_multinomial(std::uint64_t n, std::span<const std::uint64_t> parts);
double log_multinomial(std::uint64_t n, std::initializer_list<std::uint64_t> parts);

// Hypotheses of the summation lemma: Z >= 2, A(i) >= 0, 1-(i-1)B(i) >= 0,
// 0 < c_hat < 1/3, and max{A/Z, |C|} <= c_hat over A in [A1,A2], C in [C1,C2].
// A and B are indexed from i = 1, stored at position i-1.
struct SummationInput {
    int Z = 2;
    std::vector<double> A;
    std::vector<double> B;
    double c_hat = 0.1;
};

struct SummationBounds {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sum = 0.0;
    // min/max of A(i) and of A(i)B(i) over 1 <= i <= Z.
    double A1 = 0.0, A2 = 0.0, C1 = 0.0, C2 = 0.0;
};

/// Evaluates n_0..n_Z with n_0 = 1 and n_i/n_{i-1} = A(i)(1-(i-1)B(i))/i,
/// truncating to zero from the first i where either factor vanishes, and
/// returns the partial sum together with the sandwich bounds
///   sigma1 = exp(A1 - A1*C2/2) - (2e c_hat)^Z
///   sigma2 = exp(A2 - A2*C1/2 + A2*C1^2/2) + (2e c_hat)^Z.
/// A violated hypothesis throws invalid_input naming the failed condition.
SummationBounds sum_bounds(const SummationInput& input);

/// Returns an empty string when the hypotheses hold, otherwise a description
/// of the first one that fails.
std::string check_summation_hypotheses(const SummationInput& input);

}  // namespace kfactor
