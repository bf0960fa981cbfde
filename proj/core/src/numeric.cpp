#include "colorlab/numeric.hpp"

#include <algorithm>

#include "colorlab/errors.hpp"

namespace colorlab {

BigCount big_pow(std::int64_t base, std::int64_t exp) {
  if (base < 0 || exp < 0) throw ValidationError("big_pow: negative argument");
  BigCount out = 1;
  BigCount b = base;
  while (exp > 0) {
    if (exp & 1) out *= b;
    b *= b;
    exp >>= 1;
  }
  return out;
}

double log_of(const BigCount& x) {
  if (x <= 0) throw ValidationError("log_of: value must be positive");
  const unsigned bits = boost::multiprecision::msb(x);
  if (bits <= 900) return std::log(x.convert_to<double>());
  const unsigned shift = bits - 900;
  const BigCount top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

LogValue LogValue::from_value(double value) {
  if (value < 0.0) throw ValidationError("LogValue: negative value");
  if (value == 0.0) return zero();
  return from_log(std::log(value));
}

LogValue LogValue::operator/(const LogValue& other) const {
  if (other.zero_) throw ValidationError("LogValue: division by zero");
  if (zero_) return zero();
  return from_log(log_ - other.log_);
}

LogValue LogValue::operator+(const LogValue& other) const {
  if (zero_) return other;
  if (other.zero_) return *this;
  const double hi = std::max(log_, other.log_);
  const double lo = std::min(log_, other.log_);
  return from_log(hi + std::log1p(std::exp(lo - hi)));
}

double log_sum_exp(std::span<const double> logs) {
  if (logs.empty()) throw ValidationError("log_sum_exp: empty input");
  const double mx = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double x : logs) sum += std::exp(x - mx);
  return mx + std::log(sum);
}

void LogSumAccumulator::add(const LogValue& v) {
  if (!v.is_zero()) add_log(v.log());
}

void LogSumAccumulator::add_log(double log_value) {
  if (!any_) {
    any_ = true;
    max_ = log_value;
    sum_ = 1.0;
    return;
  }
  if (log_value <= max_) {
    sum_ += std::exp(log_value - max_);
  } else {
    sum_ = sum_ * std::exp(max_ - log_value) + 1.0;
    max_ = log_value;
  }
}

LogValue LogSumAccumulator::total() const {
  if (!any_) return LogValue::zero();
  return LogValue::from_log(max_ + std::log(sum_));
}

double ln_binomial(double a, double b) {
  return ln_factorial(a) - ln_factorial(b) - ln_factorial(a - b);
}

double ln_multinomial(std::int64_t n, std::span<const std::int64_t> counts) {
  double out = ln_factorial(static_cast<double>(n));
  for (std::int64_t c : counts) out -= ln_factorial(static_cast<double>(c));
  return out;
}

}  // namespace colorlab
