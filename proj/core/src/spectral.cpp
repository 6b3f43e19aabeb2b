#include "folcalc/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <optional>

#include "folcalc/errors.hpp"

namespace folcalc::spectral {

namespace {

// FFTW planning is not thread safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::size_t total_size(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

void validate(const GridData& f) {
  require(!f.dims.empty() && static_cast<int>(f.dims.size()) <= trig::kMaxDim, ErrorKind::DimensionMismatch,
          "grid dimension out of range");
  for (int d : f.dims) require(d >= 1, ErrorKind::InvalidArgument, "grid axis needs at least one point");
  require(f.values.size() == total_size(f.dims), ErrorKind::DimensionMismatch, "grid data size mismatch");
}

std::vector<std::complex<double>> transform(std::vector<std::complex<double>> data, const std::vector<int>& dims,
                                            int sign) {
  // FFTW is row-major (last index fastest); our axis 0 is fastest.
  std::vector<int> n(dims.rbegin(), dims.rend());
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex());
    plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), ptr, ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  return data;
}

// Signed frequency of DFT index j on an axis with n points; nullopt for Nyquist.
std::optional<int> signed_freq(int j, int n) {
  if (n % 2 == 0 && j == n / 2) return std::nullopt;
  return j <= n / 2 ? j : j - n;
}

std::vector<int> multi_index(std::size_t idx, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (std::size_t a = 0; a < dims.size(); ++a) {
    out[a] = static_cast<int>(idx % static_cast<std::size_t>(dims[a]));
    idx /= static_cast<std::size_t>(dims[a]);
  }
  return out;
}

}  // namespace

std::vector<double> derivative(const GridData& f, int axis) {
  validate(f);
  require(axis >= 0 && axis < static_cast<int>(f.dims.size()), ErrorKind::InvalidArgument, "axis out of range");
  std::vector<std::complex<double>> data(f.values.begin(), f.values.end());
  data = transform(std::move(data), f.dims, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto mi = multi_index(i, f.dims);
    auto k = signed_freq(mi[static_cast<std::size_t>(axis)], f.dims[static_cast<std::size_t>(axis)]);
    data[i] *= k ? std::complex<double>(0, *k * scale) : 0.0;
  }
  data = transform(std::move(data), f.dims, FFTW_BACKWARD);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
  return out;
}

TrigFit fit(const GridData& f, double drop_tol) {
  validate(f);
  const int dim = static_cast<int>(f.dims.size());
  std::vector<std::complex<double>> data(f.values.begin(), f.values.end());
  data = transform(std::move(data), f.dims, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(data.size());

  std::map<trig::Mode, std::complex<double>> coeffs;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto mi = multi_index(i, f.dims);
    trig::Mode k{};
    bool nyquist = false;
    for (int a = 0; a < dim; ++a) {
      auto s = signed_freq(mi[static_cast<std::size_t>(a)], f.dims[static_cast<std::size_t>(a)]);
      if (!s) nyquist = true;
      else k[static_cast<std::size_t>(a)] = *s;
    }
    if (!nyquist) coeffs[k] = data[i] * scale;
  }

  trig::TrigPoly poly(dim);
  for (const auto& [k, c] : coeffs) {
    if (trig::is_zero_mode(k)) {
      if (std::abs(c.real()) >= drop_tol) poly.add_term_unchecked(k, CRat(rational_from_double(c.real()), Rational(0)));
      continue;
    }
    if (!trig::is_positive_mode(k)) continue;
    auto it = coeffs.find(trig::negate(k));
    std::complex<double> partner = it == coeffs.end() ? 0.0 : std::conj(it->second);
    std::complex<double> avg = 0.5 * (c + partner);  // exact Hermitian pairing
    if (std::abs(avg) < drop_tol) continue;
    CRat r(rational_from_double(avg.real()), rational_from_double(avg.imag()));
    poly.add_term_unchecked(k, r);
    poly.add_term_unchecked(trig::negate(k), r.conj());
  }

  TrigFit out{poly, 0};
  trig::CompiledTrig eval(poly);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    std::vector<double> theta(static_cast<std::size_t>(dim));
    auto mi = multi_index(i, f.dims);
    for (int a = 0; a < dim; ++a)
      theta[static_cast<std::size_t>(a)] =
          2 * M_PI * mi[static_cast<std::size_t>(a)] / static_cast<double>(f.dims[static_cast<std::size_t>(a)]);
    out.residual = std::max(out.residual, std::abs(eval(theta) - f.values[i]));
  }
  return out;
}

}  // namespace folcalc::spectral
