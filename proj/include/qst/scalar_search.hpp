// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QST_SCALAR_SEARCH_HPP_
#define QST_SCALAR_SEARCH_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>

#include "qst/errors.hpp"

namespace qst {

template <typename F>
concept ScalarFunction = requires(const F &f, double x) {
  { f(x) } -> std::convertible_to<double>;
};

struct ScalarOptimum {
  double x;
  double value;
};

/// Best of `points` equally spaced samples of f on [lo, hi], both ends
/// included.
template <ScalarFunction F>
ScalarOptimum grid_maximum(const F &f, double lo, double hi, std::size_t points) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ParameterError("window", "need finite lo < hi");
  }
  if (points < 2) throw ParameterError("grid", "need at least two points");
  const double step = (hi - lo) / double(points - 1);
  ScalarOptimum best{lo, f(lo)};
  for (std::size_t k = 1; k < points; ++k) {
    const double x = k + 1 == points ? hi : lo + step * double(k);
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

/// Golden-section maximization of f on [lo, hi] until the bracket is no
/// wider than rel_tol * max(1, |x|).
template <ScalarFunction F>
ScalarOptimum golden_section_maximum(const F &f, double lo, double hi, double rel_tol) {
  if (!(lo <= hi)) throw ParameterError("bracket", "need lo <= hi");
  constexpr double inv_phi = 0.6180339887498948482;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int iter = 0; iter < 500; ++iter) {
    const double scale = std::max(1.0, std::max(std::abs(a), std::abs(b)));
    if (b - a <= rel_tol * scale) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarOptimum best = fc >= fd ? ScalarOptimum{c, fc} : ScalarOptimum{d, fd};
  const double fa = f(lo), fb = f(hi);
  if (fa > best.value) best = {lo, fa};
  if (fb > best.value) best = {hi, fb};
  return best;
}

/// Root of g on [lo, hi] by bisection, given g(lo) and g(hi) of opposite
/// sign (or zero). Stops when |g| <= f_tol or the bracket collapses.
template <ScalarFunction F>
double bisect_root(const F &g, double lo, double hi, double f_tol) {
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo < 0.0) == (ghi < 0.0)) throw ParameterError("bracket", "no sign change");
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    const double gm = g(mid);
    if (std::abs(gm) <= f_tol) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qst

#endif  // QST_SCALAR_SEARCH_HPP_
