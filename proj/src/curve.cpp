#include "eqdist/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "eqdist/errors.hpp"

namespace eqdist {

namespace {

using boost::multiprecision::cpp_int;

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
  return s;
}

void check_shape(std::size_t n, std::size_t d, std::size_t size) {
  if (n == 0 || d == 0) throw DomainError("curve: n and d must be positive");
  if (size != n * d)
    throw DomainError("curve: expected " + std::to_string(n * d) + " coefficients, got " +
                      std::to_string(size));
}

}  // namespace

PolyCurve::PolyCurve(std::size_t n, std::size_t d, std::vector<double> coeffs)
    : n_(n), d_(d), coeffs_(std::move(coeffs)) {
  check_shape(n, d, coeffs_.size());
  bool any = false;
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw DomainError("curve: non-finite coefficient");
    any = any || a != 0.0;
  }
  if (!any) throw DomainError("curve: all coefficients are zero");
}

double PolyCurve::total_abs() const {
  double s = 0.0;
  for (double a : coeffs_) s += std::abs(a);
  return s;
}

RealVec PolyCurve::eval(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("curve: t outside [0, 1]");
  RealVec out(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    auto r = row(j);
    double acc = 0.0;
    for (std::size_t k = d_; k-- > 0;) acc = acc * t + r[k];
    out[j] = acc * t;
  }
  return out;
}

PolyCurve PolyCurve::dilate(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("dilate: lambda must be positive");
  std::vector<double> c = coeffs_;
  for (double& a : c) a *= lambda;
  return PolyCurve(n_, d_, std::move(c));
}

RealVec PolyCurve::apply_transpose(std::span<const std::int64_t> nu) const {
  if (nu.size() != n_) throw DomainError("apply_transpose: dimension mismatch");
  RealVec out(d_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    if (nu[j] == 0) continue;
    const double v = static_cast<double>(nu[j]);
    auto r = row(j);
    for (std::size_t k = 0; k < d_; ++k) out[k] += r[k] * v;
  }
  return out;
}

RealVec PolyCurve::apply_transpose(std::span<const double> y) const {
  if (y.size() != n_) throw DomainError("apply_transpose: dimension mismatch");
  RealVec out(d_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    auto r = row(j);
    for (std::size_t k = 0; k < d_; ++k) out[k] += r[k] * y[j];
  }
  return out;
}

RationalPolyCurve::RationalPolyCurve(std::size_t n, std::size_t d, std::vector<Rational> coeffs)
    : n_(n), d_(d), coeffs_(std::move(coeffs)) {
  check_shape(n, d, coeffs_.size());
  if (std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& r) { return r == 0; }))
    throw DomainError("curve: all coefficients are zero");
}

RationalPolyCurve RationalPolyCurve::from_real(const PolyCurve& curve) {
  std::vector<Rational> out;
  out.reserve(curve.coeffs().size());
  for (double a : curve.coeffs()) {
    int exp = 0;
    double mant = std::frexp(a, &exp);
    // mant * 2^53 is an exact integer.
    auto m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r = Rational(cpp_int(m));
    if (exp > 0) r *= Rational(cpp_int(1) << exp);
    if (exp < 0) r /= Rational(cpp_int(1) << -exp);
    out.push_back(r);
  }
  return RationalPolyCurve(curve.dim(), curve.degree(), std::move(out));
}

PolyCurve RationalPolyCurve::to_real() const {
  std::vector<double> c;
  c.reserve(coeffs_.size());
  for (const auto& r : coeffs_) c.push_back(static_cast<double>(r));
  return PolyCurve(n_, d_, std::move(c));
}

std::vector<IntVec> rational_kernel_basis(const RationalPolyCurve& curve) {
  const std::size_t rows = curve.degree();
  const std::size_t cols = curve.dim();
  // M = A*, M[k][j] = a_jk.
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols));
  for (std::size_t k = 0; k < rows; ++k)
    for (std::size_t j = 0; j < cols; ++j) m[k][j] = curve.coeff(j, k + 1);

  // Reduced row echelon form.
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t jj = c; jj < cols; ++jj) m[i][jj] -= f * m[r][jj];
    }
    pivot_cols.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;

  std::vector<IntVec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -m[i][free];

    cpp_int lcm = 1;
    for (const auto& x : v) {
      const cpp_int den = boost::multiprecision::denominator(x);
      lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
    }
    std::vector<cpp_int> iv;
    cpp_int g = 0;
    for (const auto& x : v) {
      cpp_int num = boost::multiprecision::numerator(x) * (lcm / boost::multiprecision::denominator(x));
      g = boost::multiprecision::gcd(g, num);
      iv.push_back(num);
    }
    int sign = 1;
    for (const auto& x : iv) {
      if (x != 0) {
        sign = x < 0 ? -1 : 1;
        break;
      }
    }
    IntVec out;
    for (auto& x : iv) {
      cpp_int y = x / g * sign;
      if (y > std::numeric_limits<std::int64_t>::max() || y < std::numeric_limits<std::int64_t>::min())
        throw ResourceError("rational_kernel_basis: kernel vector entry exceeds 64 bits");
      out.push_back(static_cast<std::int64_t>(y));
    }
    basis.push_back(std::move(out));
  }
  return basis;
}

RealKernelVerdict real_kernel_trivial(const PolyCurve& curve, double tol) {
  if (!(tol > 0.0)) throw DomainError("real_kernel_trivial: tol must be positive");
  const auto n = static_cast<Eigen::Index>(curve.dim());
  const auto d = static_cast<Eigen::Index>(curve.degree());
  Eigen::MatrixXd at(d, n);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index j = 0; j < n; ++j) at(k, j) = curve.coeff(j, k + 1);

  RealKernelVerdict v;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(at);
  const auto& s = svd.singularValues();
  v.sigma_max = s.size() ? s(0) : 0.0;
  // A* maps R^n -> R^d; with d < n the n-th singular value is zero.
  v.sigma_min = (d < n) ? 0.0 : s(n - 1);
  v.trivial = v.sigma_min > tol * v.sigma_max;
  // ||A*x||_1 >= ||A*x||_2 >= sigma_min ||x||_2 >= sigma_min ||x||_1 / sqrt(n).
  v.l1_lower_bound = v.trivial ? v.sigma_min / std::sqrt(static_cast<double>(n)) : 0.0;
  return v;
}

Rational parse_rational_token(const std::string& raw) {
  const std::string token = trim(raw);
  if (token.empty()) throw DomainError("empty numeric token");
  auto parse_decimal = [&](const std::string& s) -> Rational {
    // [sign] digits [. digits] [e|E [sign] digits]
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    cpp_int mant = 0;
    int scale = 0;
    bool digits = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      mant = mant * 10 + (s[i++] - '0');
      digits = true;
    }
    if (i < s.size() && s[i] == '.') {
      ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        mant = mant * 10 + (s[i++] - '0');
        --scale;
        digits = true;
      }
    }
    if (!digits) throw DomainError("malformed number '" + s + "'");
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
      ++i;
      std::size_t used = 0;
      int e = 0;
      try {
        e = std::stoi(s.substr(i), &used);
      } catch (const std::exception&) {
        throw DomainError("malformed exponent in '" + s + "'");
      }
      if (std::abs(e) > 400) throw DomainError("exponent out of range in '" + s + "'");
      i += used;
      scale += e;
    }
    if (i != s.size()) throw DomainError("malformed number '" + s + "'");
    Rational r(mant);
    cpp_int p = boost::multiprecision::pow(cpp_int(10), std::abs(scale));
    if (scale > 0) r *= Rational(p);
    if (scale < 0) r /= Rational(p);
    return neg ? Rational(-r) : r;
  };
  const auto slash = token.find('/');
  if (slash == std::string::npos) return parse_decimal(token);
  Rational num = parse_decimal(token.substr(0, slash));
  Rational den = parse_decimal(token.substr(slash + 1));
  if (den == 0) throw DomainError("zero denominator in '" + token + "'");
  return num / den;
}

RationalPolyCurve parse_rational_curve(const std::string& text) {
  std::size_t n = 0, d = 0;
  std::vector<Rational> coeffs;
  bool have_coeffs = false;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ';')) {
    field = trim(field);
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw DomainError("curve: expected key=value, got '" + field + "'");
    const std::string key = trim(field.substr(0, eq));
    const std::string value = trim(field.substr(eq + 1));
    if (key == "n" || key == "d") {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(value, &used);
      } catch (const std::exception&) {
        throw DomainError("curve: bad integer for " + key);
      }
      if (used != value.size() || v <= 0) throw DomainError("curve: " + key + " must be a positive integer");
      (key == "n" ? n : d) = static_cast<std::size_t>(v);
    } else if (key == "coeffs") {
      std::stringstream cs(value);
      std::string tok;
      while (std::getline(cs, tok, ',')) coeffs.push_back(parse_rational_token(tok));
      have_coeffs = true;
    } else {
      throw DomainError("curve: unknown key '" + key + "'");
    }
  }
  if (n == 0) throw DomainError("curve: missing n");
  if (d == 0) throw DomainError("curve: missing d");
  if (!have_coeffs) throw DomainError("curve: missing coeffs");
  return RationalPolyCurve(n, d, std::move(coeffs));
}

PolyCurve parse_curve(const std::string& text) { return parse_rational_curve(text).to_real(); }

}  // namespace eqdist
