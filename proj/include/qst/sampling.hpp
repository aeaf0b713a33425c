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

#ifndef QST_SAMPLING_HPP_
#define QST_SAMPLING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "qst/channel.hpp"
#include "qst/errors.hpp"
#include "qst/fidelity_analytics.hpp"
#include "qst/linalg.hpp"

namespace qst {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// mt19937_64 keyed by (seed, stream_id). Uniforms and normals are derived
/// from raw engine bits here rather than through <random> distributions, whose
/// output is implementation defined; sequences are reproducible across builds.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(key(seed, stream_id)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Independent child stream, e.g. one per work chunk.
  RandomStream split(std::uint64_t child) const {
    return {seed_, splitmix64(stream_id_ ^ splitmix64(child + 0x5851f42d4c957f2dULL))};
  }

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal by Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    spare_ = rad * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return rad * std::cos(2.0 * kPi * u2);
  }

  /// Standard complex normal, E|z|^2 = 1.
  complex_t complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
  }

 private:
  static std::uint64_t key(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct BlochAngles {
  double theta;
  double phi;
};

/// theta = arccos(1 - 2u), phi = 2 pi v.
inline BlochAngles sample_bloch(RandomStream &rng) {
  const double u = rng.uniform();
  const double v = rng.uniform();
  return {std::acos(1.0 - 2.0 * u), 2.0 * kPi * v};
}

/// Haar U(2): Gram-Schmidt on a complex Ginibre matrix.
inline ComplexMatrix sample_haar_unitary_2(RandomStream &rng) {
  ComplexMatrix g(2, 2);
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 2; ++r) g(r, c) = rng.complex_normal();
  ComplexVector c0 = g.col(0);
  c0.normalize();
  ComplexVector c1 = g.col(1) - c0 * c0.dot(g.col(1));
  c1.normalize();
  ComplexMatrix u(2, 2);
  u.col(0) = c0;
  u.col(1) = c1;
  return u;
}

/// Haar-random unit vector in C^4.
inline ComplexVector sample_two_qubit_pure(RandomStream &rng) {
  ComplexVector v(4);
  for (int k = 0; k < 4; ++k) v(k) = rng.complex_normal();
  return v / v.norm();
}

/// 2 |psi_00 psi_11 - psi_01 psi_10|
inline double concurrence(const ComplexVector &state) {
  require_normalized(state, 4);
  return std::min(1.0, 2.0 * std::abs(state(0) * state(3) - state(1) * state(2)));
}

/// sqrt((1 - s)/2)|00> + sqrt((1 + s)/2)|11>, concurrence sqrt(1 - s^2).
inline ComplexVector schmidt_state(double s) {
  if (!(s >= -1.0 && s <= 1.0)) throw ParameterError("s", "must lie in [-1, 1]");
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = std::sqrt((1.0 - s) / 2.0);
  psi(3) = std::sqrt((1.0 + s) / 2.0);
  return psi;
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Exact local-unitary averages via the single-qubit Clifford group.

/// The 24 single-qubit Cliffords modulo phase, generated by H and S.
inline const std::vector<ComplexMatrix> &single_qubit_cliffords() {
  static const std::vector<ComplexMatrix> group = [] {
    ComplexMatrix h(2, 2), s(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    h /= std::sqrt(2.0);
    s << 1.0, 0.0, 0.0, kI;
    // Canonical phase: first entry with |z| > 1e-9 made real positive.
    auto key = [](const ComplexMatrix &u) {
      Eigen::Index k = 0;
      while (std::abs(u(k / 2, k % 2)) < 1e-9) ++k;
      const complex_t z = u(k / 2, k % 2);
      const ComplexMatrix v = u * (std::abs(z) / z);
      std::vector<long long> out;
      for (Eigen::Index i = 0; i < 4; ++i) {
        out.push_back(std::llround(v(i / 2, i % 2).real() * 1e6));
        out.push_back(std::llround(v(i / 2, i % 2).imag() * 1e6));
      }
      return out;
    };
    std::vector<ComplexMatrix> g{ComplexMatrix::Identity(2, 2)};
    std::set<std::vector<long long>> seen{key(g[0])};
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (const ComplexMatrix *gen : {&h, &s}) {
        ComplexMatrix v = *gen * g[i];
        if (seen.insert(key(v)).second) g.push_back(std::move(v));
      }
    }
    if (g.size() != 24) throw NumericError("Clifford closure failed", double(g.size()));
    return g;
  }();
  return group;
}

/// Average of the channel fidelity over local unitaries u1 (x) u2 applied to
/// psi. Exact: the fidelity has degree two in each local unitary and its
/// conjugate, and the Clifford group is a unitary 2-design.
inline double twirled_fidelity(const KrausSet &kraus, const ComplexVector &psi) {
  if (!is_two_qubit(kraus.scenario)) throw ParameterError("kraus", "needs two-qubit channel");
  require_normalized(psi, 4);
  const auto &cl = single_qubit_cliffords();
  double sum = 0.0;
  for (const auto &u : cl)
    for (const auto &v : cl) sum += fidelity_kraus_sum_unchecked(kraus, kron(u, v) * psi);
  return sum / double(cl.size() * cl.size());
}

/// A and A - B from the exact twirl at C = 0 and C = 1.
inline TwoQubitAffine twirled_affine(const KrausSet &kraus) {
  const double f0 = twirled_fidelity(kraus, schmidt_state(1.0));
  const double f1 = twirled_fidelity(kraus, schmidt_state(0.0));
  return {f0, f0 - f1};
}

// ---------------------------------------------------------------------------
// Histograms and Monte Carlo.

class Histogram {
 public:
  explicit Histogram(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) throw ParameterError("edges", "need at least two edges");
    for (std::size_t k = 1; k < edges_.size(); ++k)
      if (!(edges_[k] > edges_[k - 1])) throw ParameterError("edges", "must increase strictly");
    counts_.assign(edges_.size() - 1, 0);
  }

  static Histogram uniform(double lo, double hi, std::size_t bins) {
    if (bins == 0 || !(hi > lo)) throw ParameterError("bins", "need bins >= 1 and lo < hi");
    std::vector<double> e(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) e[k] = lo + (hi - lo) * double(k) / double(bins);
    e.back() = hi;
    return Histogram(std::move(e));
  }

  /// Out-of-range values are clamped into the end bins; the last bin is
  /// closed on the right.
  void add(double x) {
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    std::ptrdiff_t bin = (it - edges_.begin()) - 1;
    bin = std::clamp<std::ptrdiff_t>(bin, 0, std::ptrdiff_t(counts_.size()) - 1);
    ++counts_[static_cast<std::size_t>(bin)];
    ++n_samples_;
  }

  void merge(const Histogram &other) {
    if (other.edges_ != edges_) throw ParameterError("edges", "histograms differ");
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
    n_samples_ += other.n_samples_;
  }

  const std::vector<double> &edges() const noexcept { return edges_; }
  const std::vector<std::uint64_t> &counts() const noexcept { return counts_; }
  std::uint64_t n_samples() const noexcept { return n_samples_; }
  std::size_t bins() const noexcept { return counts_.size(); }

  double normalized_density(std::size_t bin) const {
    if (n_samples_ == 0) return 0.0;
    return double(counts_[bin]) / (double(n_samples_) * (edges_[bin + 1] - edges_[bin]));
  }

 private:
  std::vector<double> edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_samples_ = 0;
};

inline constexpr std::size_t kChunkSize = 1 << 14;

/// Runs body(chunk, begin, end, rng) over fixed-size chunks of [0, n), each
/// with the child stream `rng.split(chunk)`, on up to `threads` workers. The
/// chunking does not depend on the thread count.
template <typename Body>
void for_each_chunk(std::size_t n, const RandomStream &rng, unsigned threads, Body &&body) {
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, chunks)));
  auto work = [&](unsigned tid) {
    for (std::size_t c = tid; c < chunks; c += threads) {
      RandomStream child = rng.split(c);
      body(c, c * kChunkSize, std::min(n, (c + 1) * kChunkSize), child);
    }
  };
  if (threads == 1) {
    work(0);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  for (auto &th : pool) th.join();
}

/// F values for n uniformly random inputs: Bloch-sphere states for
/// one-qubit channels; Haar two-qubit states for two-qubit channels, where
/// each sample is the local-unitary average A - B C(psi)^2 with A, B taken
/// from the exact twirl.
inline std::vector<double> mc_fidelity_samples(const KrausSet &kraus, std::size_t n,
                                               const RandomStream &rng, unsigned threads = 0) {
  if (n == 0) throw ParameterError("n", "need at least one sample");
  std::vector<double> out(n);
  if (is_two_qubit(kraus.scenario)) {
    const TwoQubitAffine ab = twirled_affine(kraus);
    for_each_chunk(n, rng, threads, [&](std::size_t, std::size_t b, std::size_t e, RandomStream &r) {
      for (std::size_t i = b; i < e; ++i) {
        const ComplexVector psi = sample_two_qubit_pure(r);
        const double c = std::min(1.0, 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2)));
        out[i] = ab(c);
      }
    });
  } else {
    for_each_chunk(n, rng, threads, [&](std::size_t, std::size_t b, std::size_t e, RandomStream &r) {
      for (std::size_t i = b; i < e; ++i) {
        const auto [theta, phi] = sample_bloch(r);
        out[i] = fidelity_kraus_sum_unchecked(kraus, bloch_state(theta, phi));
      }
    });
  }
  return out;
}

inline Histogram histogram_of(const std::vector<double> &samples, std::vector<double> edges) {
  Histogram h(std::move(edges));
  for (double x : samples) h.add(x);
  return h;
}

inline Histogram mc_fidelity_histogram(const KrausSet &kraus, std::size_t n,
                                       std::vector<double> edges, const RandomStream &rng,
                                       unsigned threads = 0) {
  return histogram_of(mc_fidelity_samples(kraus, n, rng, threads), std::move(edges));
}

struct McEstimate {
  double mean;
  double stderr_;
  std::size_t n;
};

inline McEstimate summarize(const std::vector<double> &x) {
  const double n = double(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n), x.size()};
}

/// Channel fidelity averaged over independent Haar local unitaries applied
/// to the Schmidt state with s = sqrt(1 - C^2) (or -s when `negative_s`).
inline McEstimate mc_local_unitary_fidelity(const KrausSet &kraus, double c, std::size_t n,
                                            const RandomStream &rng, bool negative_s = false,
                                            unsigned threads = 0) {
  if (!is_two_qubit(kraus.scenario)) throw ParameterError("kraus", "needs two-qubit channel");
  if (!(c >= 0.0 && c <= 1.0)) throw ParameterError("C", "must lie in [0, 1]");
  if (n == 0) throw ParameterError("n", "need at least one sample");
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const ComplexVector psi = schmidt_state(negative_s ? -s : s);
  std::vector<double> f(n);
  for_each_chunk(n, rng, threads, [&](std::size_t, std::size_t b, std::size_t e, RandomStream &r) {
    for (std::size_t i = b; i < e; ++i) {
      const ComplexMatrix u1 = sample_haar_unitary_2(r);
      const ComplexMatrix u2 = sample_haar_unitary_2(r);
      f[i] = fidelity_kraus_sum_unchecked(kraus, kron(u1, u2) * psi);
    }
  });
  return summarize(f);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov distances.

/// sup |ECDF - CDF| over a sample set. Ties and atoms of the reference
/// distribution are handled through left limits of both functions.
template <typename Cdf>
double ks_distance(std::vector<double> samples, const Cdf &cdf) {
  if (samples.empty()) throw ParameterError("samples", "empty");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double x = samples[i];
    const double left = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    const double right = cdf(x);
    d = std::max({d, std::abs(double(i) / n - left), std::abs(double(j) / n - right)});
    i = j;
  }
  return d;
}

inline double ks_distance(const std::vector<double> &samples, const FidelityPdf &pdf) {
  return ks_distance(samples, [&](double f) { return pdf.cdf(f); });
}

/// KS distance evaluated at the bin edges of a histogram.
inline double ks_distance(const Histogram &h, const FidelityPdf &pdf) {
  if (h.n_samples() == 0) throw ParameterError("histogram", "empty");
  const double n = double(h.n_samples());
  double cum = 0.0;
  double d = std::abs(pdf.cdf(std::nextafter(h.edges().front(), -1e300)));
  for (std::size_t k = 0; k < h.bins(); ++k) {
    cum += double(h.counts()[k]);
    const double edge = h.edges()[k + 1];
    const double ref = k + 1 == h.bins() ? pdf.cdf(edge) : pdf.cdf(std::nextafter(edge, -1e300));
    d = std::max(d, std::abs(cum / n - ref));
  }
  return d;
}

/// Default binning: `bins` uniform bins on [lo - eps, 1].
inline std::vector<double> default_edges(double support_lo, std::size_t bins) {
  const double lo = std::max(0.0, std::min(support_lo, 1.0) - 1e-6);
  return Histogram::uniform(std::min(lo, 1.0 - 1e-6), 1.0, bins).edges();
}

}  // namespace qst

#endif  // QST_SAMPLING_HPP_
