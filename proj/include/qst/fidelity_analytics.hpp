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

#ifndef QST_FIDELITY_ANALYTICS_HPP_
#define QST_FIDELITY_ANALYTICS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qst/channel.hpp"
#include "qst/dynamics.hpp"
#include "qst/errors.hpp"
#include "qst/linalg.hpp"
#include "qst/scalar_search.hpp"

namespace qst {

inline constexpr double kDegenerateCoefficient = 1e-14;
inline constexpr int kPhiNodes = 64;
inline constexpr int kFitGrid = 201;
inline constexpr double kFitTolerance = 1e-9;

// ---------------------------------------------------------------------------
// One-qubit transfer: F(x) = a x^2 + b x + c with x = cos(theta).

struct QuadraticFidelity {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double fit_residual = 0.0;

  double operator()(double x) const { return (a * x + b) * x + c; }

  /// Bloch-sphere average; x is uniform on [-1, 1].
  double average() const { return a / 3.0 + c; }

  double min_value() const { return extremum(false); }
  double max_value() const { return extremum(true); }

  /// Vertex position, when it lies strictly inside (-1, 1).
  std::optional<double> interior_vertex() const {
    if (std::abs(a) <= kDegenerateCoefficient) return std::nullopt;
    const double xv = -b / (2.0 * a);
    if (xv > -1.0 && xv < 1.0) return xv;
    return std::nullopt;
  }

 private:
  double extremum(bool want_max) const {
    double best = want_max ? std::max((*this)(-1.0), (*this)(1.0))
                           : std::min((*this)(-1.0), (*this)(1.0));
    if (const auto xv = interior_vertex()) {
      best = want_max ? std::max(best, (*this)(*xv)) : std::min(best, (*this)(*xv));
    }
    return best;
  }
};

/// Vacuum channel closed form with arrival amplitude a_1^N = r e^{i phi}.
inline QuadraticFidelity vacuum_quadratic(complex_t arrival) {
  const double r = std::abs(arrival);
  const double rc = arrival.real();  // r cos(phi)
  return {(r * r - rc) / 2.0, (1.0 - r * r) / 2.0, (1.0 + rc) / 2.0, 0.0};
}

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
inline ComplexVector bloch_state(double theta, double phi) {
  ComplexVector psi(2);
  psi(0) = std::cos(theta / 2.0);
  psi(1) = std::polar(std::sin(theta / 2.0), phi);
  return psi;
}

namespace detail {

struct PhiAverage {
  double mean;
  double spread;
};

inline PhiAverage phi_average(const KrausSet &kraus, double x) {
  const double theta = std::acos(std::clamp(x, -1.0, 1.0));
  double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int k = 0; k < kPhiNodes; ++k) {
    const double f =
        fidelity_kraus_sum_unchecked(kraus, bloch_state(theta, 2.0 * kPi * k / kPhiNodes));
    sum += f;
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  return {sum / kPhiNodes, hi - lo};
}

}  // namespace detail

/// Fidelity at x = cos(theta), averaged over phi on 64 uniform nodes.
inline double phi_averaged_fidelity(const KrausSet &kraus, double x) {
  return detail::phi_average(kraus, x).mean;
}

/// Quadratic through the phi-averaged fidelity at x = -1, 0, 1, checked on
/// a 201-point grid. The vacuum scenario must also be phi independent.
inline QuadraticFidelity quadratic_reduce_one_qubit(const KrausSet &kraus) {
  if (is_two_qubit(kraus.scenario)) {
    throw ParameterError("kraus", "quadratic reduction needs a one-qubit channel");
  }
  const double fm = phi_averaged_fidelity(kraus, -1.0);
  const double f0 = phi_averaged_fidelity(kraus, 0.0);
  const double fp = phi_averaged_fidelity(kraus, 1.0);
  QuadraticFidelity q{(fp + fm) / 2.0 - f0, (fp - fm) / 2.0, f0, 0.0};

  double residual = 0.0, spread = 0.0;
  for (int k = 0; k < kFitGrid; ++k) {
    const double x = -1.0 + 2.0 * k / (kFitGrid - 1);
    const auto avg = detail::phi_average(kraus, x);
    residual = std::max(residual, std::abs(avg.mean - q(x)));
    spread = std::max(spread, avg.spread);
  }
  q.fit_residual = residual;
  if (residual > kFitTolerance) {
    throw ModelError("fidelity is not quadratic in cos(theta)", residual);
  }
  if (kraus.scenario == Scenario::OneQubitVacuum && spread > 1e-10) {
    throw ModelError("vacuum-channel fidelity depends on phi", spread);
  }
  const double slack = 1e-9;
  if (q.min_value() < -slack || q.max_value() > 1.0 + slack) {
    throw ModelError("quadratic fidelity leaves [0, 1]",
                     std::max(-q.min_value(), q.max_value() - 1.0));
  }
  return q;
}

// ---------------------------------------------------------------------------
// Two-qubit transfer: F(C) = A - B C^2.

struct TwoQubitAffine {
  double A = 1.0;
  double B = 0.0;

  double operator()(double concurrence) const { return A - B * concurrence * concurrence; }
  /// <C^2> = 2/5 over Haar-random two-qubit pure states.
  double average() const { return A - 0.4 * B; }
  double support_lo() const { return std::min(A, A - B); }
  double support_hi() const { return std::max(A, A - B); }
};

inline void check_affine(const TwoQubitAffine &f) {
  const double slack = 1e-9;
  for (double v : {f.A, f.A - f.B}) {
    if (v < -slack || v > 1.0 + slack) {
      throw ModelError("two-qubit fidelity endpoint outside [0, 1]", v < 0 ? -v : v - 1.0);
    }
  }
}

/// Closed-form A(t), B(t) of the two-qubit vacuum channel in terms of the
/// amplitudes out of sites 1, 2 and the pair (1, 2).
template <TransitionAmplitudes Amps>
TwoQubitAffine two_qubit_affine(const Amps &amps, int n_sites) {
  require_sites(Scenario::TwoQubitVacuum, n_sites);
  const int n = n_sites;
  double s = 0.0;
  for (int j = 1; j <= n - 2; ++j) {
    s += std::norm(amps.a(1, j) + amps.b(1, 2, j, n));
    s += std::norm(amps.a(2, j) + amps.b(1, 2, j, n - 1));
  }
  const complex_t x = amps.a(1, n - 1);
  const complex_t y = amps.a(2, n);
  const complex_t bb = amps.b(1, 2, n - 1, n);
  const complex_t cross = x * std::conj(y);
  const complex_t mixed = (x + y) * (1.0 + std::conj(bb));
  const double squares = 6.0 * (std::norm(x) + std::norm(y) + std::norm(bb));
  TwoQubitAffine out;
  out.A = (14.0 + 2.0 * s + 2.0 * (2.0 * cross + 2.0 * bb + 4.0 * mixed).real() + squares) / 72.0;
  out.B = (-10.0 + 5.0 * s - 2.0 * (4.0 * cross + 4.0 * bb - mixed).real() + squares) / 72.0;
  check_affine(out);
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form averages.

inline void check_modulus(double r) {
  if (!(r >= 0.0 && r <= 1.0 + 1e-12)) throw ParameterError("r", "must lie in [0, 1]");
}

inline double avg_fidelity_one_qubit_vacuum(double r, double phi) {
  check_modulus(r);
  return 0.5 + r * std::cos(phi) / 3.0 + r * r / 6.0;
}

/// 1/3 + sum_{k<N} |u_k + v_k|^2 / (6 (N-2)) with u_k = sum_j a_j^k and
/// v_k = sum_j b_{1j}^{kN}, j over the bulk sites 2..N-1.
inline double uniform_channel_average(const ComplexVector &u, const ComplexVector &v, int n_sites) {
  return 1.0 / 3.0 + (u + v).squaredNorm() / (6.0 * (n_sites - 2));
}

template <TransitionAmplitudes Amps>
double avg_fidelity_one_qubit_uniform(const Amps &amps, int n_sites) {
  require_sites(Scenario::OneQubitUniform, n_sites);
  const int n = n_sites;
  ComplexVector u = ComplexVector::Zero(n - 1), v = ComplexVector::Zero(n - 1);
  for (int k = 1; k <= n - 1; ++k) {
    for (int j = 2; j <= n - 1; ++j) {
      u(k - 1) += amps.a(j, k);
      v(k - 1) += amps.b(1, j, k, n);
    }
  }
  return uniform_channel_average(u, v, n);
}

// ---------------------------------------------------------------------------
// Minimum fidelity of the vacuum channel.

enum class MinBranch {
  /// r = 1, phi = 0: F = 1 everywhere.
  Constant,
  /// r > 1/3 and phi in [phi*, 2 pi - phi*]: minimum at the vertex.
  InteriorVertex,
  /// theta = pi, f_min = r^2.
  Pole,
};

struct MinFidelityResult {
  double theta_star;
  double f_min;
  MinBranch branch;
};

inline MinFidelityResult min_fidelity_closed_form(double r, double phi) {
  check_modulus(r);
  r = std::min(r, 1.0);
  const QuadraticFidelity q = vacuum_quadratic(std::polar(r, phi));
  if (std::abs(q.a) <= kDegenerateCoefficient && std::abs(q.b) <= kDegenerateCoefficient) {
    return {kPi, q(-1.0), MinBranch::Constant};
  }
  if (r > 1.0 / 3.0) {
    const double phi_star = std::acos(std::clamp((3.0 * r * r - 1.0) / (2.0 * r), -1.0, 1.0));
    const double wrapped = std::fmod(std::fmod(phi, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
    if (wrapped >= phi_star && wrapped <= 2.0 * kPi - phi_star) {
      const double x = std::clamp((r * r - 1.0) / (2.0 * r * (r - std::cos(phi))), -1.0, 1.0);
      return {std::acos(x), q(x), MinBranch::InteriorVertex};
    }
  }
  return {kPi, q(-1.0), MinBranch::Pole};
}

// ---------------------------------------------------------------------------
// Fidelity distributions.

enum class PdfKind { OneQubitQuadratic, TwoQubitAffine, Delta, Mixture };

/// Analytic distribution of F over uniformly random pure inputs.
class FidelityPdf {
 public:
  static FidelityPdf delta(double at) {
    FidelityPdf p(PdfKind::Delta);
    p.lo_ = p.hi_ = at;
    return p;
  }

  static FidelityPdf quadratic(const QuadraticFidelity &q) {
    if (std::abs(q.a) <= kDegenerateCoefficient && std::abs(q.b) <= kDegenerateCoefficient) {
      return delta(q.c);
    }
    FidelityPdf p(PdfKind::OneQubitQuadratic);
    p.quad_ = q;
    p.lo_ = q.min_value();
    p.hi_ = q.max_value();
    return p;
  }

  static FidelityPdf affine(const TwoQubitAffine &f) {
    if (std::abs(f.B) <= kDegenerateCoefficient) return delta(f.A);
    FidelityPdf p(PdfKind::TwoQubitAffine);
    p.affine_ = f;
    p.lo_ = f.support_lo();
    p.hi_ = f.support_hi();
    return p;
  }

  /// Weighted mixture; weights are normalized here.
  static FidelityPdf mixture(std::vector<FidelityPdf> parts, std::vector<double> weights) {
    if (parts.empty() || parts.size() != weights.size()) {
      throw ParameterError("mixture", "need matching, nonempty components and weights");
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw ParameterError("mixture", "weights must be nonnegative");
      total += w;
    }
    if (!(total > 0.0)) throw ParameterError("mixture", "weights sum to zero");
    FidelityPdf p(PdfKind::Mixture);
    p.lo_ = std::numeric_limits<double>::infinity();
    p.hi_ = -p.lo_;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      weights[k] /= total;
      p.lo_ = std::min(p.lo_, parts[k].lo_);
      p.hi_ = std::max(p.hi_, parts[k].hi_);
    }
    p.parts_ = std::move(parts);
    p.weights_ = std::move(weights);
    return p;
  }

  PdfKind kind() const noexcept { return kind_; }
  double support_lo() const noexcept { return lo_; }
  double support_hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  const QuadraticFidelity &quadratic_params() const { return quad_; }
  const TwoQubitAffine &affine_params() const { return affine_; }
  const std::vector<FidelityPdf> &components() const { return parts_; }
  const std::vector<double> &weights() const { return weights_; }

  /// Density at F; +infinity on a delta atom or an integrable singularity.
  double density(double f) const {
    switch (kind_) {
      case PdfKind::Delta:
        return f == lo_ ? std::numeric_limits<double>::infinity() : 0.0;
      case PdfKind::OneQubitQuadratic:
        return quadratic_density(f);
      case PdfKind::TwoQubitAffine: {
        const double u = (affine_.A - f) / affine_.B;
        if (u < 0.0 || u > 1.0) return 0.0;
        return 1.5 / std::abs(affine_.B) * std::sqrt(1.0 - u);
      }
      case PdfKind::Mixture: {
        double d = 0.0;
        for (std::size_t k = 0; k < parts_.size(); ++k) d += weights_[k] * parts_[k].density(f);
        return d;
      }
    }
    return 0.0;
  }

  /// P(F' <= f), exact.
  double cdf(double f) const {
    switch (kind_) {
      case PdfKind::Delta:
        return f >= lo_ ? 1.0 : 0.0;
      case PdfKind::OneQubitQuadratic:
        return quadratic_cdf(f);
      case PdfKind::TwoQubitAffine: {
        const double u = std::clamp((affine_.A - f) / affine_.B, 0.0, 1.0);
        const double tail = std::pow(1.0 - u, 1.5);
        return affine_.B > 0.0 ? tail : 1.0 - tail;
      }
      case PdfKind::Mixture: {
        double p = 0.0;
        for (std::size_t k = 0; k < parts_.size(); ++k) p += weights_[k] * parts_[k].cdf(f);
        return std::clamp(p, 0.0, 1.0);
      }
    }
    return 0.0;
  }

  double mean() const {
    switch (kind_) {
      case PdfKind::Delta:
        return lo_;
      case PdfKind::OneQubitQuadratic:
        return quad_.average();
      case PdfKind::TwoQubitAffine:
        return affine_.average();
      case PdfKind::Mixture: {
        double m = 0.0;
        for (std::size_t k = 0; k < parts_.size(); ++k) m += weights_[k] * parts_[k].mean();
        return m;
      }
    }
    return 0.0;
  }

  /// Points where the density is singular or not smooth, support ends
  /// included, sorted and deduplicated.
  std::vector<double> breakpoints() const {
    std::vector<double> pts{lo_, hi_};
    collect_breakpoints(pts);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  /// Points where the density diverges: vertex values of quadratic parts and
  /// atoms of mixtures.
  std::vector<double> singular_points() const {
    std::vector<double> pts;
    collect_singular(pts);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

 private:
  explicit FidelityPdf(PdfKind kind) : kind_(kind) {}

  bool linear() const { return std::abs(quad_.a) <= kDegenerateCoefficient; }

  double quadratic_density(double f) const {
    if (f < lo_ || f > hi_) return 0.0;
    const double a = quad_.a, b = quad_.b, c = quad_.c;
    if (linear()) return 0.5 / std::abs(b);
    const double disc = b * b - 4.0 * a * (c - f);
    if (disc < 0.0) return 0.0;
    if (disc == 0.0) return std::numeric_limits<double>::infinity();
    const auto [x1, x2] = roots(f);
    int count = 0;
    for (double x : {x1, x2})
      if (x >= -1.0 && x <= 1.0) ++count;
    return count / (2.0 * std::sqrt(disc));
  }

  // Real roots of a x^2 + b x + (c - f), ascending; requires disc >= 0.
  std::pair<double, double> roots(double f) const {
    const double a = quad_.a, b = quad_.b, c = quad_.c;
    const double sq = std::sqrt(std::max(0.0, b * b - 4.0 * a * (c - f)));
    const double qq = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double x1, x2;
    if (qq == 0.0) {
      x1 = x2 = 0.0;
    } else {
      x1 = qq / a;
      x2 = (c - f) / qq;
    }
    if (x1 > x2) std::swap(x1, x2);
    return {x1, x2};
  }

  double quadratic_cdf(double f) const {
    if (f < lo_) return 0.0;
    if (f >= hi_) return 1.0;
    const double a = quad_.a, b = quad_.b, c = quad_.c;
    if (linear()) {
      // F(x) <= f  <=>  b x <= f - c
      const double x = (f - c) / b;
      const double below = b > 0.0 ? std::clamp(x, -1.0, 1.0) + 1.0 : 1.0 - std::clamp(x, -1.0, 1.0);
      return std::clamp(below / 2.0, 0.0, 1.0);
    }
    const double disc = b * b - 4.0 * a * (c - f);
    if (disc <= 0.0) return a > 0.0 ? 0.0 : 1.0;
    const auto [x1, x2] = roots(f);
    const double inside = std::max(0.0, std::min(x2, 1.0) - std::max(x1, -1.0));
    // a > 0: F <= f between the roots; a < 0: outside them.
    const double measure = a > 0.0 ? inside : 2.0 - inside;
    return std::clamp(measure / 2.0, 0.0, 1.0);
  }

  void collect_breakpoints(std::vector<double> &pts) const {
    if (kind_ == PdfKind::OneQubitQuadratic) {
      pts.push_back(quad_(-1.0));
      pts.push_back(quad_(1.0));
      if (const auto xv = quad_.interior_vertex()) pts.push_back(quad_(*xv));
    }
    for (const auto &p : parts_) {
      pts.push_back(p.lo_);
      pts.push_back(p.hi_);
      p.collect_breakpoints(pts);
    }
  }

  void collect_singular(std::vector<double> &pts) const {
    if (kind_ == PdfKind::Delta) pts.push_back(lo_);
    if (kind_ == PdfKind::OneQubitQuadratic)
      if (const auto xv = quad_.interior_vertex()) pts.push_back(quad_(*xv));
    for (const auto &p : parts_) p.collect_singular(pts);
  }

  PdfKind kind_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  QuadraticFidelity quad_{};
  TwoQubitAffine affine_{};
  std::vector<FidelityPdf> parts_;
  std::vector<double> weights_;
};

/// pdf(F) = sum over roots x(F) in [-1, 1] of 1 / (2 sqrt(b^2 - 4a(c - F))).
inline FidelityPdf pdf_from_quadratic(const QuadraticFidelity &q) { return FidelityPdf::quadratic(q); }

/// Image of pdf(C) = 3C sqrt(1 - C^2) under F = A - B C^2.
inline FidelityPdf pdf_two_qubit(const TwoQubitAffine &f) { return FidelityPdf::affine(f); }

/// pdf(C) = 3 C sqrt(1 - C^2) on [0, 1].
inline double concurrence_density(double c) {
  if (c < 0.0 || c > 1.0) return 0.0;
  return 3.0 * c * std::sqrt(1.0 - c * c);
}

inline double concurrence_cdf(double c) {
  if (c <= 0.0) return 0.0;
  if (c >= 1.0) return 1.0;
  return 1.0 - std::pow(1.0 - c * c, 1.5);
}

struct CurvePoint {
  double f;
  double density;
  double cdf;
};

/// Density and CDF sampled for export. Every segment between breakpoints
/// is graded toward both ends, where the density may be singular or nearly
/// so, and the trapezoid rule over the rows recovers the mass. Rows never
/// sit on a singular point. A delta is a single row with infinite density.
inline std::vector<CurvePoint> sample_curve(const FidelityPdf &pdf, int resolution) {
  if (resolution < 2) throw ParameterError("resolution", "need at least 2 points");
  if (pdf.kind() == PdfKind::Delta) {
    return {{pdf.support_lo(), std::numeric_limits<double>::infinity(), 1.0}};
  }
  const std::vector<double> pts = pdf.breakpoints();
  const std::vector<double> sing = pdf.singular_points();
  auto singular = [&](double x) {
    return !std::isfinite(pdf.density(x)) ||
           std::any_of(sing.begin(), sing.end(), [&](double s) { return s == x; });
  };
  const int segments = static_cast<int>(pts.size()) - 1;
  const int per = std::max(16, resolution / std::max(1, segments));
  std::vector<CurvePoint> out;
  for (int s = 0; s < segments; ++s) {
    const double p0 = pts[s], p1 = pts[s + 1];
    if (!(p1 > p0)) continue;
    const bool sl = singular(p0), sr = singular(p1);
    for (int k = 0; k <= per; ++k) {
      if (k == 0 && !out.empty() && !sl) continue;  // shared with the previous segment
      double u = double(k) / per;
      if (k == 0 && sl) u = 0.25 / per;
      if (k == per && sr) u = 1.0 - 0.25 / per;
      const double u4 = std::pow(u, 4), v4 = std::pow(1.0 - u, 4);
      const double g = u4 / (u4 + v4);
      double f = u < 0.5 ? p0 + (p1 - p0) * g : p1 - (p1 - p0) * (v4 / (u4 + v4));
      if ((sl && f <= p0) || (sr && f >= p1)) continue;
      if (!out.empty() && f <= out.back().f) continue;
      const double d = pdf.density(f);
      if (!std::isfinite(d)) continue;  // rounded onto a singular point
      out.push_back({f, d, pdf.cdf(f)});
    }
  }
  return out;
}

inline double trapezoid_mass(const std::vector<CurvePoint> &curve) {
  double m = 0.0;
  for (std::size_t k = 1; k < curve.size(); ++k)
    m += 0.5 * (curve[k].f - curve[k - 1].f) * (curve[k].density + curve[k - 1].density);
  return m;
}

// ---------------------------------------------------------------------------
// Average fidelity as a function of time, for scans.

namespace detail {

// Entries <row|U(t)|source> for fixed (source, row) pairs, evaluated as
// W exp(-i w t) with W(p, m) = V(row_p, m) (V^T source_p)_m.
class SpectralProbe {
 public:
  SpectralProbe() = default;
  SpectralProbe(const SpectralPropagator &prop,
                const std::vector<std::pair<ComplexVector, Eigen::Index>> &entries)
      : eigenvalues_(prop.extended_eigenvalues()),
        weights_(static_cast<Eigen::Index>(entries.size()), prop.dimension()) {
    const RealMatrix &v = prop.eigenvectors();
    for (std::size_t p = 0; p < entries.size(); ++p) {
      const ComplexVector coeff = v.transpose().cast<complex_t>() * entries[p].first;
      weights_.row(static_cast<Eigen::Index>(p)) =
          v.row(entries[p].second).cast<complex_t>().cwiseProduct(coeff.transpose());
    }
  }

  ComplexVector values(double t) const {
    if (weights_.rows() == 0) return {};
    return weights_ * unit_phases(eigenvalues_, t);
  }

 private:
  ExtVector eigenvalues_;
  ComplexMatrix weights_;
};

inline ComplexVector unit(Eigen::Index dim, Eigen::Index at) {
  ComplexVector e = ComplexVector::Zero(dim);
  e(at) = 1.0;
  return e;
}

}  // namespace detail

/// Site whose arrival phase the auxiliary field cancels: a_1^N for the
/// one-qubit scenarios, a_1^{N-1} for two-qubit transfer.
inline std::pair<int, int> reference_transition(Scenario s, int n_sites) {
  return is_two_qubit(s) ? std::pair{1, n_sites - 1} : std::pair{1, n_sites};
}

/// Uniform field that makes the reference amplitude real and positive at
/// time t. An excitation gains exp(2 i b t) under the field b.
inline double aux_field_for(complex_t reference, double t) {
  if (t == 0.0 || reference == 0.0) return 0.0;
  return -std::arg(reference) / (2.0 * t);
}

/// <F>(t) for one scenario, evaluated from a handful of spectral sums.
/// With `phase_corrected` each t is evaluated under the auxiliary field
/// tuned for that t.
class AverageFidelityScan {
 public:
  AverageFidelityScan(const ChainDynamics &dyn, Scenario scenario, bool phase_corrected)
      : scenario_(scenario), n_(dyn.n_sites()), corrected_(phase_corrected) {
    require_sites(scenario, n_);
    const int n = n_;
    const SectorBasis &b2 = dyn.basis(2);
    const auto d1 = dyn.propagator(1).dimension();
    const auto d2 = dyn.propagator(2).dimension();
    auto pair = [&](int i, int j) {
      return static_cast<Eigen::Index>(detail::pair_index(b2, i, j));
    };
    std::vector<std::pair<ComplexVector, Eigen::Index>> one, two;
    const auto [ref_from, ref_to] = reference_transition(scenario, n);
    one.push_back({detail::unit(d1, ref_from - 1), ref_to - 1});
    switch (scenario) {
      case Scenario::OneQubitVacuum:
        break;
      case Scenario::OneQubitUniform: {
        ComplexVector u = ComplexVector::Zero(d1), v = ComplexVector::Zero(d2);
        for (int j = 2; j <= n - 1; ++j) {
          u(j - 1) = 1.0;
          v(pair(1, j)) = 1.0;
        }
        for (int k = 1; k <= n - 1; ++k) {
          one.push_back({u, k - 1});
          two.push_back({v, pair(k, n)});
        }
        break;
      }
      case Scenario::TwoQubitVacuum: {
        for (int src : {1, 2})
          for (int j = 1; j <= n; ++j) one.push_back({detail::unit(d1, src - 1), j - 1});
        const ComplexVector e12 = detail::unit(d2, pair(1, 2));
        for (int j = 1; j <= n - 2; ++j) {
          two.push_back({e12, pair(j, n)});
          two.push_back({e12, pair(j, n - 1)});
        }
        two.push_back({e12, pair(n - 1, n)});
        break;
      }
    }
    probe1_ = detail::SpectralProbe(dyn.propagator(1), one);
    probe2_ = detail::SpectralProbe(dyn.propagator(2), two);
    pair_dim_ = d2;
    for (const auto &[src, row] : two) pair_rows_.push_back(row);
  }

  Scenario scenario() const noexcept { return scenario_; }
  bool phase_corrected() const noexcept { return corrected_; }

  complex_t reference_amplitude(double t) const { return probe1_.values(t)(0); }

  double aux_field(double t) const { return aux_field_for(reference_amplitude(t), t); }

  double operator()(double t) const {
    const ComplexVector one = probe1_.values(t);
    const ComplexVector two = probe2_.values(t);
    const complex_t ph = corrected_ && std::abs(one(0)) > 0.0
                             ? std::conj(one(0)) / std::abs(one(0))
                             : complex_t(1.0);
    const int n = n_;
    switch (scenario_) {
      case Scenario::OneQubitVacuum: {
        const complex_t a = one(0) * ph;
        return avg_fidelity_one_qubit_vacuum(std::min(1.0, std::abs(a)), std::arg(a));
      }
      case Scenario::OneQubitUniform:
        return uniform_channel_average(one.tail(n - 1) * ph, two * (ph * ph), n);
      case Scenario::TwoQubitVacuum: {
        SourceAmplitudes amps(t, n);
        amps.add_one(1, one.segment(1, n) * ph);
        amps.add_one(2, one.segment(1 + n, n) * ph);
        ComplexVector col = ComplexVector::Zero(pair_dim_);
        for (std::size_t p = 0; p < pair_rows_.size(); ++p)
          col(pair_rows_[p]) = two(static_cast<Eigen::Index>(p)) * ph * ph;
        amps.add_two(1, 2, std::move(col));
        return two_qubit_affine(amps, n).average();
      }
    }
    return 0.0;
  }

 private:
  Scenario scenario_;
  int n_;
  bool corrected_;
  detail::SpectralProbe probe1_;
  detail::SpectralProbe probe2_;
  Eigen::Index pair_dim_ = 0;
  std::vector<Eigen::Index> pair_rows_;
};

// ---------------------------------------------------------------------------
// Optimal and target times.

struct TimeWindow {
  double lo;
  double hi;
};

struct ProtocolTuning {
  double t_opt;
  /// Uniform auxiliary field that cancels the reference arrival phase at t_opt.
  double b_aux;
  double achieved_avg_fidelity;
  TimeWindow window;
  std::size_t grid;
};

inline constexpr std::size_t kDefaultGrid = 200000;

/// pi / |w_1 - w_2| for the two one-excitation eigenmodes that carry the
/// most weight on site 1: half the period of the dominant two-mode beat.
inline double transfer_time_estimate(const ChainDynamics &dyn) {
  const SpectralPropagator &p = dyn.propagator(1);
  const RealVector weight = p.eigenvectors().row(0).transpose().cwiseAbs2();
  Eigen::Index first = 0, second = -1;
  weight.maxCoeff(&first);
  for (Eigen::Index k = 0; k < weight.size(); ++k) {
    if (k == first) continue;
    if (second < 0 || weight(k) > weight(second)) second = k;
  }
  return kPi / std::abs(p.eigenvalues()(first) - p.eigenvalues()(second));
}

inline TimeWindow default_window(const ChainDynamics &dyn) {
  const double t = transfer_time_estimate(dyn);
  return {0.5 * t, 1.5 * t};
}

/// Grid scan of <F>(t) then golden-section refinement around the best grid
/// point to 1e-8 relative resolution.
inline ProtocolTuning find_optimal_time(const AverageFidelityScan &scan, TimeWindow window,
                                        std::size_t grid = kDefaultGrid) {
  if (!(window.lo < window.hi) || !(window.lo >= 0.0) || !std::isfinite(window.hi)) {
    throw ParameterError("window", "need finite 0 <= t_lo < t_hi");
  }
  if (grid < 100) throw ParameterError("grid", "need at least 100 points");
  const ScalarOptimum coarse = grid_maximum(scan, window.lo, window.hi, grid);
  const double step = (window.hi - window.lo) / double(grid - 1);
  const ScalarOptimum fine =
      golden_section_maximum(scan, std::max(window.lo, coarse.x - step),
                             std::min(window.hi, coarse.x + step), 1e-8);
  const ScalarOptimum best = fine.value >= coarse.value ? fine : coarse;
  return {best.x, scan.aux_field(best.x), best.value, window, grid};
}

inline ProtocolTuning find_optimal_time(const ChainDynamics &dyn, Scenario scenario,
                                        bool phase_corrected, std::optional<TimeWindow> window = {},
                                        std::size_t grid = kDefaultGrid) {
  const AverageFidelityScan scan(dyn, scenario, phase_corrected);
  return find_optimal_time(scan, window.value_or(default_window(dyn)), grid);
}

/// Largest t < t_opt with <F>(t) = target: steps back from t_opt by one
/// grid spacing until <F> drops below the target, then bisects.
inline double time_for_target_avg(const AverageFidelityScan &scan, double target,
                                  const ProtocolTuning &tuning) {
  if (!(target > 0.0 && target < 1.0)) throw ParameterError("target", "must lie in (0, 1)");
  const double peak = tuning.achieved_avg_fidelity;
  // Acceptance is 1e-9; bisection continues well below it so protocols
  // tuned to the same target are comparable to that precision.
  constexpr double tol = 1e-9;
  constexpr double bisect_tol = 1e-13;
  if (target > peak + tol) {
    throw RangeError("target <F> = " + std::to_string(target) +
                         " is unreachable; peak <F> = " + std::to_string(peak),
                     peak);
  }
  if (std::abs(peak - target) <= tol) return tuning.t_opt;
  const double step = (tuning.window.hi - tuning.window.lo) / double(tuning.grid - 1);
  double hi = tuning.t_opt;
  for (;;) {
    const double lo = std::max(0.0, hi - step);
    const double flo = scan(lo);
    if (flo < target) {
      return bisect_root([&](double t) { return scan(t) - target; }, lo, hi, bisect_tol);
    }
    if (lo == 0.0) {
      throw RangeError("no crossing of target <F> before t_opt", peak);
    }
    hi = lo;
  }
}

}  // namespace qst

#endif  // QST_FIDELITY_ANALYTICS_HPP_
