#pragma once

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

#include "erwalk/errors.hpp"

namespace erwalk {

enum class Clamp { none, low, high };

inline std::string_view to_string(Clamp c) {
  switch (c) {
    case Clamp::none: return "none";
    case Clamp::low: return "low";
    case Clamp::high: return "high";
  }
  return "none";
}

template <std::floating_point Scalar>
struct Inversion {
  Scalar p{};
  Clamp clamped = Clamp::none;
};

/// Solves f(p) = target for f strictly decreasing on [lo, hi] by bisection.
///
/// Targets above f(lo) return lo flagged Clamp::low; targets below f(hi)
/// return hi flagged Clamp::high. Only the bracket ends are checked for
/// monotonicity.
template <std::floating_point Scalar, class Fn>
Inversion<Scalar> invert_monotone_decreasing(Scalar target, Fn&& f, Scalar lo, Scalar hi,
                                             Scalar tol) {
  if (!(lo < hi)) throw DomainError("inversion bracket needs lo < hi");
  if (!(tol > Scalar(0))) throw DomainError("inversion tolerance must be > 0");
  if (std::isnan(target)) throw DomainError("inversion target is NaN");

  const Scalar f_lo = f(lo);
  const Scalar f_hi = f(hi);
  if (f_lo < f_hi)
    throw MonotonicityError("evaluator increases across [" + std::to_string(double(lo)) + ", " +
                            std::to_string(double(hi)) + "]: f(lo)=" +
                            std::to_string(double(f_lo)) + " < f(hi)=" +
                            std::to_string(double(f_hi)));
  if (target > f_lo) return {lo, Clamp::low};
  if (target < f_hi) return {hi, Clamp::high};
  if (target == f_lo) return {lo, Clamp::none};
  if (target == f_hi) return {hi, Clamp::none};

  Scalar a = lo, b = hi, fa = f_lo, fb = f_hi;
  while (b - a > tol) {
    const Scalar mid = a + (b - a) / Scalar(2);
    if (mid <= a || mid >= b) break;
    const Scalar fm = f(mid);
    if (fm == target) return {mid, Clamp::none};
    if (fm > target) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  const Scalar mid = a + (b - a) / Scalar(2);
  const Scalar fm = f(mid);
  Scalar best = mid, best_res = std::abs(fm - target);
  if (std::abs(fa - target) < best_res) {
    best = a;
    best_res = std::abs(fa - target);
  }
  if (std::abs(fb - target) < best_res) best = b;
  return {best, Clamp::none};
}

}  // namespace erwalk
