#include "ergo/phase.hpp"

#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>

#include "ergo/errors.hpp"

namespace ergo {
namespace {

constexpr double kTwo32 = 4294967296.0;
constexpr std::int64_t kSmallMultiplier = std::int64_t{1} << 40;
// Largest double below 1.
constexpr double kBelowOne = 0x1.fffffffffffffp-1;

std::pair<double, double> two_sum(double a, double b) {
  const double s = a + b;
  const double bp = s - a;
  const double e = (a - (s - bp)) + (b - bp);
  return {s, e};
}

}  // namespace

double frac(double x) {
  const double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double circle_distance(double a, double b) {
  const double d = frac(a - b);
  return std::min(d, 1.0 - d);
}

std::complex<double> cis(double turns) {
  const double t = turns - std::round(turns);
  const double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

Phase::Phase(double value) { assign(value, 0.0); }

Phase Phase::product(double a, double b) {
  const double p = a * b;
  const double e = std::fma(a, b, -p);
  Phase r;
  r.assign(p - std::floor(p), e);
  return r;
}

std::int64_t Phase::assign(double a, double b) {
  auto [s, e] = two_sum(a, b);
  const double fl = std::floor(s);
  auto carry = static_cast<std::int64_t>(fl);
  auto [h, l] = two_sum(s, -fl);
  std::tie(h, l) = two_sum(h, l + e);
  if (h >= 1.0) {
    ++carry;
    std::tie(h, l) = two_sum(h - 1.0, l);
  } else if (h < 0.0) {
    --carry;
    const auto [u, r] = two_sum(h, 1.0);
    std::tie(h, l) = two_sum(u, l + r);
  }
  hi_ = h;
  lo_ = l;
  if (hi_ == 0.0 && lo_ < 0.0) {
    // real value sits just below an integer
    --carry;
    std::tie(h, l) = two_sum(1.0, lo_);
    if (h >= 1.0) {
      h = kBelowOne;
      l = (1.0 - kBelowOne) + lo_;
    }
    hi_ = h;
    lo_ = l;
  }
  return carry;
}

double Phase::value() const {
  const double r = hi_ + lo_;
  return (r >= 1.0 || r < 0.0) ? 0.0 : r;
}

double Phase::centered() const {
  if (hi_ >= 0.5) return (hi_ - 1.0) + lo_;
  return hi_ + lo_;
}

Phase& Phase::operator+=(const Phase& other) {
  add_with_carry(other);
  return *this;
}

std::int64_t Phase::add_with_carry(const Phase& other) {
  auto [s, e] = two_sum(hi_, other.hi_);
  return assign(s, e + (lo_ + other.lo_));
}

Phase Phase::operator-() const {
  Phase r;
  r.assign(-hi_, -lo_);
  return r;
}

Phase& Phase::operator-=(const Phase& other) { return *this += -other; }

Phase Phase::times(std::int64_t m) const {
  if (m > -kSmallMultiplier && m < kSmallMultiplier) {
    const auto md = static_cast<double>(m);
    const double p = md * hi_;
    const double e = std::fma(md, hi_, -p);
    Phase r;
    r.assign(p - std::floor(p), e);
    r += Phase(md * lo_);
    return r;
  }
  // m = high * 2^32 + low with 0 <= low < 2^32
  const std::int64_t low = m & 0xffffffffLL;
  const std::int64_t high = (m - low) / (std::int64_t{1} << 32);
  Phase scaled;
  const double h32 = hi_ * kTwo32;
  scaled.assign(h32 - std::floor(h32), lo_ * kTwo32);
  return scaled.times(high) + times(low);
}

Phase Phase::times(int128 m) const {
  if (m >= INT64_MIN && m <= INT64_MAX) return times(static_cast<std::int64_t>(m));
  const auto low = static_cast<std::int64_t>(m & 0xffffffff);
  const int128 high = (m - low) >> 32;
  Phase scaled;
  const double h32 = hi_ * kTwo32;
  scaled.assign(h32 - std::floor(h32), lo_ * kTwo32);
  return scaled.times(high) + times(low);
}

Phase Phase::times(double d) const {
  const double p = hi_ * d;
  const double e = std::fma(hi_, d, -p);
  Phase r;
  r.assign(p - std::floor(p), e);
  r += Phase(lo_ * d);
  return r;
}

std::complex<double> cis(const Phase& phase) { return cis(phase.centered()); }

std::int64_t floor_affine(double x, std::int64_t n, double alpha) {
  constexpr std::int64_t kLimit = std::int64_t{1} << 53;
  if (n <= -kLimit || n >= kLimit) {
    throw ResourceError("orbit exponent " + std::to_string(n) + " exceeds 2^53");
  }
  const auto nd = static_cast<double>(n);
  const double p = nd * alpha;
  const double e = std::fma(nd, alpha, -p);
  const double fp = std::floor(p);
  auto [t, te] = two_sum(x, p - fp);
  const double ft = std::floor(t);
  const double rem = (t - ft) + (te + e);
  double result = fp + ft;
  if (rem < 0.0) result -= 1.0;
  if (rem >= 1.0) result += 1.0;
  return static_cast<std::int64_t>(result);
}

std::complex<double> geometric_mean(const Phase& theta, std::int64_t count) {
  const double c = theta.centered();
  const double den = std::sin(std::numbers::pi * c);
  if (den == 0.0) return {1.0, 0.0};
  const double a = theta.times(count).centered();
  const double modulus = std::sin(std::numbers::pi * a) / (static_cast<double>(count) * den);
  return modulus * cis(0.5 * (a - c));
}

}  // namespace ergo
