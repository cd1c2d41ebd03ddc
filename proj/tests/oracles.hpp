#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerics; inputs and outputs are plain vectors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr long double kTwoPiL = 2.0L * 3.141592653589793238462643383279502884L;

// phi(t) = sum_k a[k-1] t^k, by explicit powers.
inline long double phase(const std::vector<double>& a, long double t) {
  long double s = 0.0L, p = 1.0L;
  for (double c : a) {
    p *= t;
    s += static_cast<long double>(c) * p;
  }
  return s;
}

// Composite Simpson on a fixed grid of `intervals` (even) subintervals.
inline cplx simpson_osc(const std::vector<double>& a, std::size_t intervals = 1'000'000) {
  if (intervals % 2) ++intervals;
  const long double h = 1.0L / static_cast<long double>(intervals);
  long double re = 0.0L, im = 0.0L;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const long double w = (i == 0 || i == intervals) ? 1.0L : (i % 2 ? 4.0L : 2.0L);
    const long double ph = phase(a, static_cast<long double>(i) * h);
    re += w * std::cos(ph);
    im += w * std::sin(ph);
  }
  return {static_cast<double>(re * h / 3.0L), static_cast<double>(im * h / 3.0L)};
}

// int_0^1 exp(i a t) dt.
inline cplx linear_osc(double a) {
  if (a == 0.0) return {1.0, 0.0};
  // exp(ia) - 1 = -2 sin^2(a/2) + i sin(a), free of cancellation.
  const double h = std::sin(0.5 * a);
  const cplx num{-2.0 * h * h, std::sin(a)};
  return num / cplx{0.0, a};
}

// Brute-force integer kernel search of A* for an integer n x d matrix:
// every nu with ||nu||_inf <= box and sum_j nu_j a_jk = 0 for all k.
inline std::vector<std::vector<std::int64_t>> kernel_search(const std::vector<std::vector<std::int64_t>>& rows,
                                                            int box) {
  const std::size_t n = rows.size(), d = rows.front().size();
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> nu(n, -box);
  for (;;) {
    bool zero = std::all_of(nu.begin(), nu.end(), [](auto v) { return v == 0; });
    if (!zero) {
      bool in_kernel = true;
      for (std::size_t k = 0; k < d && in_kernel; ++k) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < n; ++j) s += nu[j] * rows[j][k];
        in_kernel = s == 0;
      }
      if (in_kernel) out.push_back(nu);
    }
    std::size_t i = n;
    while (i-- > 0) {
      if (nu[i] < box) {
        ++nu[i];
        break;
      }
      nu[i] = -box;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

// Heisenberg group as (n+2)x(n+2) upper unitriangular matrices
//   [1 x z; 0 I y; 0 0 1].
struct Matrix {
  std::size_t size;
  std::vector<double> a;
  double& at(std::size_t i, std::size_t j) { return a[i * size + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * size + j]; }
};

inline Matrix to_matrix(const std::vector<double>& x, const std::vector<double>& y, double z) {
  const std::size_t n = x.size(), s = n + 2;
  Matrix m{s, std::vector<double>(s * s, 0.0)};
  for (std::size_t i = 0; i < s; ++i) m.at(i, i) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    m.at(0, i + 1) = x[i];
    m.at(i + 1, s - 1) = y[i];
  }
  m.at(0, s - 1) = z;
  return m;
}

inline Matrix matmul(const Matrix& p, const Matrix& q) {
  Matrix r{p.size, std::vector<double>(p.a.size(), 0.0)};
  for (std::size_t i = 0; i < p.size; ++i)
    for (std::size_t k = 0; k < p.size; ++k)
      for (std::size_t j = 0; j < p.size; ++j) r.at(i, j) += p.at(i, k) * q.at(k, j);
  return r;
}

// Physicists' Hermite polynomial from the explicit sum, in long double.
inline long double hermite_poly(int n, long double t) {
  long double s = 0.0L;
  for (int k = 0; 2 * k <= n; ++k) {
    long double term = std::tgamma(static_cast<long double>(n + 1)) /
                       (std::tgamma(static_cast<long double>(k + 1)) * std::tgamma(static_cast<long double>(n - 2 * k + 1)));
    term *= std::pow(2.0L * t, n - 2 * k);
    s += (k % 2 ? -term : term);
  }
  return s;
}

inline long double hermite_function(int n, long double t) { return hermite_poly(n, t) * std::exp(-0.5L * t * t); }

// g_{q,m,h}(x,y,z) summed directly over a wide lattice window.
inline cplx oscillator(const std::vector<std::int64_t>& q, std::int64_t m, const std::vector<int>& h,
                       const std::vector<double>& x, const std::vector<double>& y, double z, int window = 40) {
  const long double mm = static_cast<long double>(m);
  const long double scale = std::sqrt(kTwoPiL * std::fabs(mm));
  long double ang = mm * z;
  for (std::size_t j = 0; j < q.size(); ++j) ang += static_cast<long double>(q[j]) * y[j];
  std::complex<long double> v = std::polar(1.0L, kTwoPiL * (ang - std::floor(ang)));
  for (std::size_t j = 0; j < q.size(); ++j) {
    std::complex<long double> s{0.0L, 0.0L};
    const long double u = x[j] + static_cast<long double>(q[j]) / mm;
    const long double c = std::round(-u);
    for (int k = -window; k <= window; ++k) {
      const long double kk = c + k;
      const long double ph = kk * mm * y[j];
      s += hermite_function(h[j], scale * (u + kk)) * std::polar(1.0L, kTwoPiL * (ph - std::floor(ph)));
    }
    v *= s;
  }
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

// |int_0^1 exp(i lambda <y, p(t)>) dt| by Simpson, with the curve given as
// coefficient rows.
inline double curve_psi(double lambda, const std::vector<double>& y, const std::vector<std::vector<double>>& rows,
                        std::size_t intervals = 400'000) {
  std::vector<double> a(rows.front().size(), 0.0);
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += lambda * y[j] * rows[j][k];
  return std::abs(simpson_osc(a, intervals));
}

// Exact torus threshold for n = 1: least N with {m a}_{m<=N} eps-dense, i.e.
// every circular gap between consecutive points at most 2 eps.
inline std::uint64_t exact_threshold_1d(double a, double eps, std::uint64_t max_n) {
  std::vector<double> pts;
  for (std::uint64_t m = 1; m <= max_n; ++m) {
    long double v = static_cast<long double>(m) * a;
    pts.push_back(static_cast<double>(v - std::floor(v)));
    std::vector<double> s = pts;
    std::sort(s.begin(), s.end());
    double gap = s.front() + 1.0 - s.back();
    for (std::size_t i = 1; i < s.size(); ++i) gap = std::max(gap, s[i] - s[i - 1]);
    if (gap <= 2.0 * eps) return m;
  }
  return 0;
}

}  // namespace oracle
