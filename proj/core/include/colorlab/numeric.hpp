#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace colorlab {

/// Arbitrary-precision non-negative integer for exact solution counts.
using BigCount = boost::multiprecision::cpp_int;

BigCount big_pow(std::int64_t base, std::int64_t exp);

/// Natural log of a positive BigCount (splits off high bits when the value
/// exceeds double range).
double log_of(const BigCount& x);

/// A non-negative real carried in natural-log space. Exact zero is a flag,
/// never -inf arithmetic.
class LogValue {
 public:
  LogValue() : log_(0.0), zero_(true) {}
  static LogValue zero() { return LogValue(); }
  static LogValue from_log(double log_value) { return LogValue(log_value, false); }
  static LogValue from_value(double value);

  bool is_zero() const { return zero_; }
  /// Natural log; invalid to call on the zero value.
  double log() const { return log_; }
  double value() const { return zero_ ? 0.0 : std::exp(log_); }

  LogValue operator*(const LogValue& other) const {
    if (zero_ || other.zero_) return zero();
    return from_log(log_ + other.log_);
  }
  LogValue operator/(const LogValue& other) const;
  LogValue operator+(const LogValue& other) const;

 private:
  LogValue(double log_value, bool zero) : log_(log_value), zero_(zero) {}
  double log_;
  bool zero_;
};

/// log(sum exp(x_i)) with a shared running maximum; summation-order changes
/// perturb the result only at machine precision.
double log_sum_exp(std::span<const double> logs);

/// Accumulates a log-sum-exp incrementally, rescaling to the running maximum.
class LogSumAccumulator {
 public:
  void add(const LogValue& v);
  void add_log(double log_value);
  LogValue total() const;

 private:
  bool any_ = false;
  double max_ = 0.0;
  double sum_ = 0.0;  // sum of exp(x - max_)
};

/// ln Gamma(x+1) = ln x!
inline double ln_factorial(double x) { return std::lgamma(x + 1.0); }

/// ln C(a, b); exact -inf cases are the caller's concern (requires 0<=b<=a).
double ln_binomial(double a, double b);

/// ln multinomial(n; counts).
double ln_multinomial(std::int64_t n, std::span<const std::int64_t> counts);

}  // namespace colorlab
