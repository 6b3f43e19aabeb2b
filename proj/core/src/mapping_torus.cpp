#include "folcalc/mapping_torus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "folcalc/cohomology.hpp"
#include "folcalc/errors.hpp"

namespace folcalc::mapping_torus {

namespace {

std::size_t square_size(const auto& a) {
  require(!a.empty(), ErrorKind::InvalidArgument, "empty matrix");
  for (const auto& row : a) require(row.size() == a.size(), ErrorKind::DimensionMismatch, "matrix is not square");
  return a.size();
}

RationalMatrix identity(std::size_t n) {
  RationalMatrix m(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix c(a.size(), std::vector<Rational>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

RationalMatrix transpose(const RationalMatrix& a) {
  RationalMatrix t(a[0].size(), std::vector<Rational>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

RationalMatrix to_rational(const IntMatrix& a) {
  RationalMatrix r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (const auto& v : a[i]) r[i].emplace_back(v);
  return r;
}

std::optional<RationalMatrix> inverse(RationalMatrix a) {
  const std::size_t n = a.size();
  RationalMatrix inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    Rational s = 1 / a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] *= s;
      inv[c][j] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

bool symmetric(const RationalMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (a[i][j] != a[j][i]) return false;
  return true;
}

// Polynomials over F_p, coefficients from the constant term up.
using ModPoly = std::vector<int>;

void trim(ModPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

bool divides_mod(const ModPoly& g, ModPoly f, int p) {
  // g monic
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    int lead = f.back();
    std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) f[shift + i] = ((f[shift + i] - lead * g[i]) % p + p) % p;
    trim(f);
  }
  return f.empty();
}

bool irreducible_mod(const IntPoly& p, int prime) {
  const int deg = static_cast<int>(p.size()) - 1;
  ModPoly f(static_cast<std::size_t>(deg + 1));
  for (int i = 0; i <= deg; ++i) {
    mpz_class r = p[static_cast<std::size_t>(deg - i)] % prime;
    if (r < 0) r += prime;
    f[static_cast<std::size_t>(i)] = static_cast<int>(r.get_si());
  }
  for (int d = 1; d <= deg / 2; ++d) {
    int count = 1;
    for (int i = 0; i < d; ++i) count *= prime;
    for (int idx = 0; idx < count; ++idx) {
      ModPoly g(static_cast<std::size_t>(d + 1));
      int r = idx;
      for (int i = 0; i < d; ++i) {
        g[static_cast<std::size_t>(i)] = r % prime;
        r /= prime;
      }
      g[static_cast<std::size_t>(d)] = 1;
      if (divides_mod(g, f, prime)) return false;
    }
  }
  return true;
}

// Exact division of monic integer polynomials; nullopt when g does not divide f.
bool divides_int(const IntPoly& g, IntPoly f) {
  // both leading-first; g monic
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    mpz_class lead = f.front();
    for (std::size_t i = 0; i <= dg; ++i) f[i] -= lead * g[i];
    f.erase(f.begin());
  }
  return std::all_of(f.begin(), f.end(), [](const mpz_class& v) { return v == 0; });
}

// 0, -1, 1, -2, 2, ...
long long search_value(long long i) { return (i % 2 == 1) ? -(i + 1) / 2 : i / 2; }

}  // namespace

IntMatrix to_integer_matrix(const RationalMatrix& a) {
  const std::size_t n = square_size(a);
  IntMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& v : a[i]) {
      require(v.get_den() == 1, ErrorKind::NonIntegerMatrix, "entry " + rational_to_string(v) + " is not an integer");
      out[i].push_back(v.get_num());
    }
  return out;
}

mpz_class determinant(const IntMatrix& a) {
  square_size(a);
  RationalMatrix m = to_rational(a);
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det.get_num();
}

IntPoly characteristic_polynomial(const IntMatrix& a) {
  const std::size_t n = square_size(a);
  RationalMatrix ar = to_rational(a);
  std::vector<Rational> c(n + 1, 0);  // c[k] multiplies X^k
  c[n] = 1;
  RationalMatrix m(n, std::vector<Rational>(n, 0));
  for (std::size_t k = 1; k <= n; ++k) {
    m = multiply(ar, m);
    for (std::size_t i = 0; i < n; ++i) m[i][i] += c[n - k + 1];
    RationalMatrix am = multiply(ar, m);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am[i][i];
    c[n - k] = -tr / static_cast<long>(k);
  }
  IntPoly out;
  for (std::size_t k = n + 1; k-- > 0;) {
    require(c[k].get_den() == 1, ErrorKind::InvalidArgument, "characteristic polynomial is not integral");
    out.push_back(c[k].get_num());
  }
  return out;
}

bool annihilates(const IntPoly& p, const IntMatrix& a) {
  const std::size_t n = square_size(a);
  RationalMatrix ar = to_rational(a);
  // Horner: P(A) = (...((A + c1) A + c2) ...)
  RationalMatrix acc(n, std::vector<Rational>(n, 0));
  for (const auto& coeff : p) {
    acc = multiply(acc, ar);
    for (std::size_t i = 0; i < n; ++i) acc[i][i] += Rational(coeff);
  }
  for (const auto& row : acc)
    for (const auto& v : row)
      if (v != 0) return false;
  return true;
}

std::string poly_to_string(const IntPoly& p) {
  std::string s;
  const int deg = static_cast<int>(p.size()) - 1;
  for (int i = 0; i <= deg; ++i) {
    const mpz_class& c = p[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    int e = deg - i;
    mpz_class mag = abs(c);
    if (s.empty()) s += c < 0 ? "-" : "";
    else s += c < 0 ? " - " : " + ";
    if (mag != 1 || e == 0) s += mag.get_str();
    if (e >= 1) s += "X";
    if (e >= 2) s += "^" + std::to_string(e);
  }
  return s.empty() ? "0" : s;
}

std::string irreducibility_name(IrreducibilityKind k) {
  switch (k) {
    case IrreducibilityKind::IrreducibleModP: return "IrreducibleModP";
    case IrreducibilityKind::IrreducibleByFactorSearch: return "IrreducibleByFactorSearch";
    case IrreducibilityKind::ReducibleWithFactor: return "ReducibleWithFactor";
    case IrreducibilityKind::Unknown: return "Unknown";
  }
  return "?";
}

IrreducibilityCertificate irreducibility_certificate(const IntPoly& p) {
  require(!p.empty() && p.front() == 1, ErrorKind::InvalidArgument, "polynomial must be monic");
  const int deg = static_cast<int>(p.size()) - 1;
  if (deg > 6) fail(ErrorKind::Unsupported, "irreducibility certificates are limited to degree 6");
  IrreducibilityCertificate out;
  if (deg <= 1) {
    out.kind = IrreducibilityKind::IrreducibleByFactorSearch;
    return out;
  }
  for (int prime : {2, 3, 5, 7, 11})
    if (irreducible_mod(p, prime)) {
      out.kind = IrreducibilityKind::IrreducibleModP;
      out.prime = prime;
      return out;
    }

  // Bounded search for a monic integer factor of degree <= deg/2. Roots of a
  // monic factor are roots of p, so its coefficients are bounded by
  // binom(d, i) R^i <= deg (1 + R)^deg with R the largest root modulus.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) companion(0, i) = -p[static_cast<std::size_t>(i + 1)].get_d();
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1;
  double r = companion.eigenvalues().cwiseAbs().maxCoeff();
  double bound_d = std::ceil(deg * std::pow(1 + r, deg) * (1 + 1e-9));
  constexpr double kMaxCandidates = 5e6;
  for (int d = 1; d <= deg / 2; ++d) {
    double count = std::pow(2 * bound_d + 1, d);
    if (count > kMaxCandidates) return out;  // Unknown
  }
  const auto bound = static_cast<long long>(bound_d);
  const mpz_class& constant = p.back();
  for (int d = 1; d <= deg / 2; ++d) {
    std::vector<long long> idx(static_cast<std::size_t>(d), 0);
    const long long span = 2 * bound + 1;
    while (true) {
      IntPoly g{1};
      for (int i = 0; i < d; ++i) g.emplace_back(static_cast<long>(search_value(idx[static_cast<std::size_t>(i)])));
      const mpz_class& g0 = g.back();
      if (g0 != 0 && constant % g0 == 0 && divides_int(g, p)) {
        out.kind = IrreducibilityKind::ReducibleWithFactor;
        out.factor = g;
        return out;
      }
      if (g0 == 0 && constant == 0) {
        out.kind = IrreducibilityKind::ReducibleWithFactor;
        out.factor = IntPoly{1, 0};
        return out;
      }
      // Increment the last coefficient fastest so X - c factors come out in search order.
      int pos = d - 1;
      while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == span) idx[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
  }
  out.kind = IrreducibilityKind::IrreducibleByFactorSearch;
  return out;
}

Reciprocity reciprocity_check(const std::vector<double>& values, double rel_tol) {
  for (double v : values)
    require(v > 0, ErrorKind::NonPositiveEigenvalue, "reciprocity needs positive values, got " + std::to_string(v));
  std::vector<double> xs = values;
  std::sort(xs.begin(), xs.end());
  std::vector<bool> used(xs.size(), false);
  Reciprocity out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (std::abs(xs[i] - 1) <= rel_tol) {
      out.pairs.emplace_back(xs[i], xs[i]);
      continue;
    }
    bool found = false;
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (!used[j] && std::abs(xs[i] * xs[j] - 1) <= rel_tol) {
        used[j] = true;
        out.pairs.emplace_back(std::max(xs[i], xs[j]), std::min(xs[i], xs[j]));
        found = true;
        break;
      }
    if (!found) {
      out.unmatched = xs[i];
      return out;
    }
  }
  out.ok = true;
  return out;
}

MatrixReport analyze_matrix(const RationalMatrix& a, const std::vector<double>& leaf_eigs) {
  MatrixReport r;
  r.a = to_integer_matrix(a);
  const std::size_t n = r.a.size();
  r.det = determinant(r.a);
  r.det_one = r.det == 1;
  r.charpoly = characteristic_polynomial(r.a);
  r.cayley_hamilton = annihilates(r.charpoly, r.a);
  if (n <= 6) r.cond2 = irreducibility_certificate(r.charpoly);

  Eigen::MatrixXd ad(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ad(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r.a[i][j].get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(ad);
  auto ev = es.eigenvalues();
  bool real_positive = true;
  double prod = 1;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).imag()) > 1e-9 || ev(i).real() <= 0) real_positive = false;
    r.eigenvalues.push_back(ev(i).real());
    prod *= ev(i).real();
  }
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), std::greater<>());
  r.eigen_product_ok = real_positive && std::abs(prod - r.det.get_d()) <= 1e-9;
  bool well_conditioned = false;
  if (real_positive) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(es.eigenvectors().real());
    const auto& s = svd.singularValues();
    well_conditioned = s(s.size() - 1) > 1e-8 * s(0);
  }
  r.diagonalizable_positive = real_positive && well_conditioned;

  std::vector<bool> claimed(r.eigenvalues.size(), false);
  for (double target : leaf_eigs) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
      if (!claimed[i] && std::abs(r.eigenvalues[i] - target) <= 1e-2 * std::abs(target) &&
          (!best || std::abs(r.eigenvalues[i] - target) < std::abs(r.eigenvalues[*best] - target)))
        best = i;
    require(best.has_value(), ErrorKind::InvalidArgument,
            "no eigenvalue within 1% of leaf eigenvalue " + std::to_string(target));
    claimed[*best] = true;
  }
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) (claimed[i] ? r.mu : r.lambda).push_back(r.eigenvalues[i]);

  r.cond1 = true;
  for (double l : r.lambda) {
    if (std::abs(l - 1) <= 1e-9) r.cond1 = false;
    for (double m : r.mu)
      if (std::abs(l / m - 1) <= 1e-9) r.cond1 = false;
  }
  if (real_positive) r.reciprocity = reciprocity_check(r.lambda);
  return r;
}

RationalMatrix symplectic_from_symmetric(const RationalMatrix& x, const RationalMatrix& y) {
  const std::size_t n = square_size(x);
  require(square_size(y) == n, ErrorKind::DimensionMismatch, "X and Y must have the same size");
  require(symmetric(x) && symmetric(y), ErrorKind::InvalidArgument, "X and Y must be symmetric");
  auto xi = inverse(x);
  require(xi.has_value(), ErrorKind::InvalidArgument, "X is singular");
  RationalMatrix yxi = multiply(y, *xi), xiy = multiply(*xi, y), top = multiply(yxi, y);
  RationalMatrix s(2 * n, std::vector<Rational>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      s[i][j] = x[i][j] + top[i][j];
      s[i][n + j] = yxi[i][j];
      s[n + i][j] = xiy[i][j];
      s[n + i][n + j] = (*xi)[i][j];
    }
  require(is_symplectic(s), ErrorKind::InvalidArgument, "construction failed S^T J S = J");
  return s;
}

bool is_symplectic(const RationalMatrix& s) {
  const std::size_t m = square_size(s);
  if (m % 2 != 0) return false;
  const std::size_t n = m / 2;
  RationalMatrix j(m, std::vector<Rational>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    j[i][n + i] = 1;
    j[n + i][i] = -1;
  }
  return multiply(multiply(transpose(s), j), s) == j;
}

Rational rational_determinant(const RationalMatrix& a) {
  RationalMatrix m = a;
  const std::size_t n = square_size(m);
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

SuspensionForm build_suspension_form(const Eigen::MatrixXd& a, const std::vector<double>& leaf_eigs) {
  require(a.rows() == a.cols() && a.rows() > 0, ErrorKind::DimensionMismatch, "matrix is not square");
  const Eigen::Index n = a.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  for (Eigen::Index i = 0; i < n; ++i)
    require(std::abs(es.eigenvalues()(i).imag()) <= 1e-9 && es.eigenvalues()(i).real() > 0,
            ErrorKind::NonPositiveEigenvalue, "spectrum must be real and positive");
  Eigen::MatrixXd v = es.eigenvectors().real();
  Eigen::VectorXd ev = es.eigenvalues().real();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  require(svd.singularValues()(n - 1) > 1e-8 * svd.singularValues()(0), ErrorKind::InvalidArgument,
          "eigenframe is ill-conditioned");
  Eigen::MatrixXd coframe = v.inverse();  // rows beta_i with beta_i A = ev_i beta_i

  std::vector<bool> leaf(static_cast<std::size_t>(n), false);
  for (double target : leaf_eigs) {
    std::optional<Eigen::Index> best;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!leaf[static_cast<std::size_t>(i)] && std::abs(ev(i) - target) <= 1e-2 * std::abs(target) &&
          (!best || std::abs(ev(i) - target) < std::abs(ev(*best) - target)))
        best = i;
    require(best.has_value(), ErrorKind::InvalidArgument, "no eigenvalue near leaf eigenvalue " + std::to_string(target));
    leaf[static_cast<std::size_t>(*best)] = true;
  }
  std::vector<Eigen::Index> transverse;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!leaf[static_cast<std::size_t>(i)]) transverse.push_back(i);

  SuspensionForm out;
  out.omega = Eigen::MatrixXd::Zero(n + 1, n + 1);
  if (transverse.empty()) {
    out.degenerate = true;
    out.kernel_dim = static_cast<int>(n + 1);
    return out;
  }
  std::vector<double> lambdas;
  for (auto i : transverse) lambdas.push_back(ev(i));
  Reciprocity rec = reciprocity_check(lambdas);
  require(rec.ok, ErrorKind::InvalidArgument,
          "transverse eigenvalues are not closed under inversion (unmatched " +
              std::to_string(rec.unmatched.value_or(0)) + ")");
  out.pairs = rec.pairs;

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto take = [&](double value) {
    Eigen::Index best = -1;
    for (auto i : transverse)
      if (!used[static_cast<std::size_t>(i)] && (best < 0 || std::abs(ev(i) - value) < std::abs(ev(best) - value))) best = i;
    used[static_cast<std::size_t>(best)] = true;
    return best;
  };
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [xi, inv] : rec.pairs) {
    Eigen::Index i = take(xi), j = take(inv);
    Eigen::VectorXd bi = coframe.row(i).transpose(), bj = coframe.row(j).transpose();
    w += bi * bj.transpose() - bj * bi.transpose();
  }
  out.omega.topLeftCorner(n, n) = w;
  out.invariance_defect = (a.transpose() * w * a - w).cwiseAbs().maxCoeff();

  Eigen::JacobiSVD<Eigen::MatrixXd> ws(out.omega);
  const auto& sv = ws.singularValues();
  double tol = 1e-9 * std::max(1.0, sv(0));
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++out.rank;
  out.kernel_dim = static_cast<int>(n + 1) - out.rank;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!leaf[static_cast<std::size_t>(i)]) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n + 1);
    x.head(n) = v.col(i) / v.col(i).norm();
    out.kernel_defect = std::max(out.kernel_defect, (out.omega * x).cwiseAbs().maxCoeff());
  }
  Eigen::VectorXd dt = Eigen::VectorXd::Zero(n + 1);
  dt(n) = 1;
  out.kernel_defect = std::max(out.kernel_defect, (out.omega * dt).cwiseAbs().maxCoeff());
  return out;
}

SuspensionH1 suspension_h1_report(const std::vector<double>& mu) {
  SuspensionH1 out;
  out.dimension = cohom::suspension_h1(mu, true);
  out.generators.push_back("dt");
  for (std::size_t j = 0; j < mu.size(); ++j)
    if (std::abs(mu[j] - 1) <= 1e-9) out.generators.push_back("alpha_" + std::to_string(j + 1));
  return out;
}

}  // namespace folcalc::mapping_torus
