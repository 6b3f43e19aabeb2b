#include "folcalc/moser.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "folcalc/errors.hpp"
#include "folcalc/parallel.hpp"
#include "folcalc/spectral.hpp"

namespace folcalc::moser {

namespace {

void require_one_form(const BigradedForm& f, const char* what) {
  for (const auto& [m, c] : f.terms())
    require(popcount(m) == 1, ErrorKind::InvalidArgument, std::string(what) + " must be a one-form");
}

std::string describe_point(double t, const Eigen::VectorXd& state) {
  std::ostringstream os;
  os << "t=" << t << " at (";
  for (Eigen::Index i = 0; i < state.size(); ++i) os << (i ? ", " : "") << state(i);
  os << ")";
  return os.str();
}

double monomial_value(const poly::Exponent& e, const Eigen::VectorXd& state, int n, int k) {
  double v = 1;
  for (int j = 0; j < k; ++j)
    for (int p = 0; p < e[static_cast<std::size_t>(j)]; ++p) v *= state(n + j);
  return v;
}

double pfaffian(const Eigen::MatrixXd& a) {
  const auto m = a.rows();
  if (m == 0) return 1;
  if (m == 2) return a(0, 1);
  double sum = 0;
  for (Eigen::Index j = 1; j < m; ++j) {
    if (a(0, j) == 0) continue;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 1; i < m; ++i)
      if (i != j) keep.push_back(i);
    Eigen::MatrixXd sub(m - 2, m - 2);
    for (std::size_t r = 0; r < keep.size(); ++r)
      for (std::size_t c = 0; c < keep.size(); ++c)
        sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(keep[r], keep[c]);
    sum += ((j % 2 == 1) ? 1.0 : -1.0) * a(0, j) * pfaffian(sub);
  }
  return sum;
}

// Sup over 2r-subsets of |Pf|, i.e. the sup-norm of the coefficients of omega^r / r!.
double power_margin(const Eigen::MatrixXd& w, int r) {
  if (r == 0) return 1;
  double best = 0;
  for (Mask s : subsets_of_size(range_mask(0, static_cast<int>(w.rows())), 2 * r)) {
    auto idx = mask_indices(s);
    Eigen::MatrixXd sub(2 * r, 2 * r);
    for (int i = 0; i < 2 * r; ++i)
      for (int j = 0; j < 2 * r; ++j) sub(i, j) = w(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    best = std::max(best, std::abs(pfaffian(sub)));
  }
  return best;
}

double sum_abs_coefficients(const BigradedForm& f) {
  double s = 0;
  for (const auto& [m, c] : f.terms())
    for (const auto& [k, v] : c.terms()) s += std::abs(v.to_complex());
  return s;
}

std::vector<double> sample_times(const ProlongOptions& o) {
  require(o.dt > 0 && o.t_max >= o.dt, ErrorKind::InvalidArgument, "need 0 < dt <= t_max");
  std::vector<double> ts{0.0, o.dt};
  for (double t : o.sample_times) {
    require(t >= 0 && t <= o.t_max * (1 + 1e-12), ErrorKind::InvalidArgument, "sample time outside [0, t_max]");
    ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts)
    if (out.empty() || t - out.back() > 1e-15) out.push_back(t);
  return out;
}

}  // namespace

ExtensionCheck verify_extension(const BigradedForm& beta, const BigradedForm& beta_ext) {
  require(beta.base() == beta_ext.base(), ErrorKind::DimensionMismatch, "beta and its extension live on different bases");
  require(beta.is_foliated(), ErrorKind::InvalidArgument, "beta must be a foliated form");
  require_one_form(beta, "beta");
  require_one_form(beta_ext, "beta_ext");
  require(foliated::leaf_restriction(beta_ext) == beta, ErrorKind::NotAnExtension,
          "beta_ext does not restrict to beta on the leaves");
  BigradedForm d = foliated::exterior_d(beta_ext);
  for (int a = 0; a < beta.base()->k(); ++a) {
    BigradedForm c = foliated::interior(a, d);
    require(c.is_zero(), ErrorKind::NotBasicDifferential,
            "i_V d(beta_ext) = " + c.to_string() + " for leaf field " + std::to_string(a));
  }
  return ExtensionCheck{d};
}

MoserSystem::MoserSystem(const GotayModel& model, const BigradedForm& beta_ext)
    : n_(model.space.n()), k_(model.space.fibers) {
  require(beta_ext.base() == model.space.base, ErrorKind::DimensionMismatch, "beta_ext lives on another base");
  require_one_form(beta_ext, "beta_ext");
  BigradedForm d = foliated::exterior_d(beta_ext);
  const int dim = n_ + k_;
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) {
      const auto& om = model.matrix(a, b);
      TrigPoly db = (b < n_) ? d.coeff(bit(a) | bit(b)) : TrigPoly(n_);
      if (om.is_zero() && db.is_zero()) continue;
      Entry e;
      e.a = a;
      e.b = b;
      for (const auto& [ex, c] : om.terms()) e.omega.emplace_back(ex, trig::CompiledTrig(c));
      e.dbeta = trig::CompiledTrig(db);
      entries_.push_back(std::move(e));
    }
  for (int b = 0; b < n_; ++b) rhs_.emplace_back(beta_ext.coeff(bit(b)));
  const auto& base = *model.space.base;
  for (int i = 0; i < n_; ++i)
    for (int a = 0; a < n_; ++a) {
      frame_.emplace_back(base.frame(i, a));
      coframe_.emplace_back(base.coframe(i, a));
    }
}

Eigen::MatrixXd MoserSystem::omega(double t, const Eigen::VectorXd& state) const {
  const int dim = n_ + k_;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  std::span<const double> theta(state.data(), static_cast<std::size_t>(n_));
  for (const auto& e : entries_) {
    double v = 0;
    for (const auto& [ex, c] : e.omega) v += c(theta) * monomial_value(ex, state, n_, k_);
    if (!e.dbeta.is_zero()) v -= t * e.dbeta(theta);
    m(e.a, e.b) = v;
    m(e.b, e.a) = -v;
  }
  return m;
}

Eigen::MatrixXd MoserSystem::frame_at(std::span<const double> theta) const {
  Eigen::MatrixXd f(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int a = 0; a < n_; ++a) f(i, a) = frame_[static_cast<std::size_t>(i * n_ + a)](theta);
  return f;
}

Eigen::MatrixXd MoserSystem::coframe_at(std::span<const double> theta) const {
  Eigen::MatrixXd f(n_, n_);
  for (int a = 0; a < n_; ++a)
    for (int i = 0; i < n_; ++i) f(a, i) = coframe_[static_cast<std::size_t>(a * n_ + i)](theta);
  return f;
}

Eigen::MatrixXd MoserSystem::coordinate_omega(double t, const Eigen::VectorXd& state) const {
  const int dim = n_ + k_;
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(dim, dim);
  c.topLeftCorner(n_, n_) = coframe_at(std::span<const double>(state.data(), static_cast<std::size_t>(n_)));
  return c.transpose() * omega(t, state) * c;
}

Eigen::VectorXd MoserSystem::field(double t, const Eigen::VectorXd& state) const {
  const int dim = n_ + k_;
  require(state.size() == dim, ErrorKind::DimensionMismatch, "state has the wrong dimension");
  Eigen::MatrixXd m = omega(t, state);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  std::span<const double> theta(state.data(), static_cast<std::size_t>(n_));
  for (int a = 0; a < n_; ++a) b(a) = rhs_[static_cast<std::size_t>(a)](theta);
  // (i_X omega)(E_B) = sum_A X^A omega(E_A, E_B), i.e. M^T X = b.
  Eigen::MatrixXd mt = m.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(mt);
  Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (!(lu.rcond() > 1e-12) || !(pivots.minCoeff() > 1e-12 * pivots.maxCoeff())) fail(ErrorKind::SingularAtPoint, "omega_t degenerate at " + describe_point(t, state));
  Eigen::VectorXd x = lu.solve(b);
  double scale = mt.cwiseAbs().rowwise().sum().maxCoeff() * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
  double residual = (mt * x - b).cwiseAbs().maxCoeff();
  if (scale > 0 && residual > 1e-12 * scale)
    fail(ErrorKind::SingularAtPoint, "Moser solve residual too large at " + describe_point(t, state));
  return x;
}

Eigen::VectorXd MoserSystem::velocity(double t, const Eigen::VectorXd& state) const {
  Eigen::VectorXd x = field(t, state);
  Eigen::VectorXd v(n_ + k_);
  v.head(n_) = frame_at(std::span<const double>(state.data(), static_cast<std::size_t>(n_))) * x.head(n_);
  v.tail(k_) = x.tail(k_);
  return v;
}

Eigen::VectorXd MoserSystem::flow(const Eigen::VectorXd& state, double t, double dt) const {
  if (t == 0) return state;
  require(dt > 0, ErrorKind::InvalidArgument, "dt must be positive");
  const int steps = std::max(1, static_cast<int>(std::ceil(t / dt - 1e-9)));
  const double h = t / steps;
  Eigen::VectorXd s = state;
  for (int i = 0; i < steps; ++i) {
    double t0 = i * h;
    Eigen::VectorXd k1 = velocity(t0, s);
    Eigen::VectorXd k2 = velocity(t0 + h / 2, s + h / 2 * k1);
    Eigen::VectorXd k3 = velocity(t0 + h / 2, s + h / 2 * k2);
    Eigen::VectorXd k4 = velocity(t0 + h, s + h * k3);
    s += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return s;
}

Eigen::VectorXd moser_field(const GotayModel& model, const BigradedForm& beta_ext, double t,
                            std::span<const double> theta, std::span<const double> y) {
  MoserSystem sys(model, beta_ext);
  require(static_cast<int>(theta.size()) == sys.n() && static_cast<int>(y.size()) == sys.fibers(),
          ErrorKind::DimensionMismatch, "point has the wrong dimension");
  Eigen::VectorXd s(sys.dim());
  for (int i = 0; i < sys.n(); ++i) s(i) = theta[static_cast<std::size_t>(i)];
  for (int j = 0; j < sys.fibers(); ++j) s(sys.n() + j) = y[static_cast<std::size_t>(j)];
  return sys.field(t, s);
}

std::vector<double> graph_rank_margins(const Presymplectic& p, const GridSpec& grid, const std::vector<double>& sigma,
                                       int half_rank) {
  const auto& base = *p.base();
  const int n = base.n(), k = base.k();
  require(static_cast<int>(grid.points.size()) == n, ErrorKind::DimensionMismatch, "grid needs one size per axis");
  const std::size_t npts = grid.size();
  require(sigma.size() == npts * static_cast<std::size_t>(k), ErrorKind::DimensionMismatch, "section size mismatch");

  // du[i][j][pt] = d u_i / d theta_j
  std::vector<std::vector<std::vector<double>>> du(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    spectral::GridData g{grid.points, std::vector<double>(npts)};
    for (std::size_t pt = 0; pt < npts; ++pt) g.values[pt] = sigma[pt * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) du[static_cast<std::size_t>(i)].push_back(spectral::derivative(g, j));
  }

  std::vector<std::pair<Mask, trig::CompiledTrig>> omega;
  for (const auto& [m, c] : p.omega().terms()) omega.emplace_back(m, trig::CompiledTrig(c));
  std::vector<std::vector<std::pair<Mask, trig::CompiledTrig>>> de(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (const auto& [m, c] : base.d_coframe(i)) de[static_cast<std::size_t>(i)].emplace_back(m, trig::CompiledTrig(c));
  std::vector<trig::CompiledTrig> frame;
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) frame.emplace_back(base.frame(i, a));

  std::vector<double> out(npts);
  for (std::size_t pt = 0; pt < npts; ++pt) {
    auto theta = grid.point(pt);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    auto put = [&](Mask m, double v) {
      auto idx = mask_indices(m);
      w(idx[0], idx[1]) += v;
      w(idx[1], idx[0]) -= v;
    };
    for (const auto& [m, c] : omega) put(m, c(theta));
    for (int i = 0; i < k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      // du_i(E_a) = sum_j F(j, a) d_j u_i
      for (int a = 0; a < n; ++a) {
        double dua = 0;
        for (int j = 0; j < n; ++j) dua += frame[static_cast<std::size_t>(j * n + a)](theta) * du[ui][static_cast<std::size_t>(j)][pt];
        if (a == i) continue;
        // -(du_i ^ e^i)(E_a, E_i) = -du_i(E_a)
        w(a, i) -= dua;
        w(i, a) += dua;
      }
      double u = sigma[pt * static_cast<std::size_t>(k) + ui];
      for (const auto& [m, c] : de[ui]) put(m, -u * c(theta));
    }
    out[pt] = power_margin(w, half_rank);
  }
  return out;
}

DeformationPath prolong(const GotayModel& model, const BigradedForm& beta, const BigradedForm& beta_ext,
                        const ProlongOptions& options) {
  verify_extension(beta, beta_ext);
  const Presymplectic& p = model.presymplectic;
  const int n = model.space.n(), k = model.space.fibers;
  require(static_cast<int>(options.grid.points.size()) == n, ErrorKind::DimensionMismatch, "grid needs one size per axis");
  require(options.newton_max_iter >= 1 && options.fd_step > 0, ErrorKind::InvalidArgument, "bad Newton settings");
  MoserSystem sys(model, beta_ext);

  DeformationPath path;
  path.grid = options.grid;
  path.fibers = k;
  path.half_rank = (n - k) / 2;
  path.times = sample_times(options);
  const std::size_t npts = options.grid.size();
  const auto uk = static_cast<std::size_t>(k);

  std::vector<double> beta_grid(npts * uk);
  {
    std::vector<trig::CompiledTrig> bc;
    for (int i = 0; i < k; ++i) bc.emplace_back(beta.coeff(bit(i)));
    for (std::size_t pt = 0; pt < npts; ++pt) {
      auto th = options.grid.point(pt);
      for (std::size_t i = 0; i < uk; ++i) beta_grid[pt * uk + i] = bc[i](th);
    }
  }
  path.initial_margin = std::numeric_limits<double>::infinity();
  for (double m : graph_rank_margins(p, options.grid, std::vector<double>(npts * uk, 0.0), path.half_rank))
    path.initial_margin = std::min(path.initial_margin, m);

  for (std::size_t ti = 0; ti < path.times.size(); ++ti) {
    const double t = path.times[ti];
    std::vector<double> sec(npts * uk, 0.0), res(npts, 0.0);
    parallel_for(npts, options.threads, [&](std::size_t pt) {
      auto th = options.grid.point(pt);
      Eigen::VectorXd u = Eigen::VectorXd::Zero(k);
      if (ti == 1) {
        for (std::size_t i = 0; i < uk; ++i) u(static_cast<Eigen::Index>(i)) = t * beta_grid[pt * uk + i];
      } else if (ti >= 2) {
        const auto& s1 = path.sections[ti - 1];
        const auto& s0 = path.sections[ti - 2];
        double r = (t - path.times[ti - 1]) / (path.times[ti - 1] - path.times[ti - 2]);
        for (std::size_t i = 0; i < uk; ++i)
          u(static_cast<Eigen::Index>(i)) = s1[pt * uk + i] + r * (s1[pt * uk + i] - s0[pt * uk + i]);
      }
      auto residual = [&](const Eigen::VectorXd& uu) {
        Eigen::VectorXd s(n + k);
        for (int a = 0; a < n; ++a) s(a) = th[static_cast<std::size_t>(a)];
        s.tail(k) = uu;
        return Eigen::VectorXd(sys.flow(s, t, options.dt).tail(k));
      };
      Eigen::VectorXd g = residual(u);
      for (int it = 0; it < options.newton_max_iter && g.cwiseAbs().maxCoeff() > 1e-14; ++it) {
        Eigen::MatrixXd jac(k, k);
        for (int j = 0; j < k; ++j) {
          Eigen::VectorXd up = u;
          up(j) += options.fd_step;
          jac.col(j) = (residual(up) - g) / options.fd_step;
        }
        Eigen::VectorXd step = jac.partialPivLu().solve(-g);
        if (!step.allFinite()) break;
        u += step;
        g = residual(u);
        if (step.cwiseAbs().maxCoeff() < 1e-15) break;
      }
      double r = g.cwiseAbs().maxCoeff();
      if (!(r <= options.newton_tol)) {
        std::ostringstream os;
        os << "graph reconstruction failed at t=" << t << ", grid point " << pt << " (residual " << r << ")";
        fail(ErrorKind::NewtonDivergence, os.str());
      }
      for (std::size_t i = 0; i < uk; ++i) sec[pt * uk + i] = u(static_cast<Eigen::Index>(i));
      res[pt] = r;
    });

    TimeDiagnostics d;
    d.t = t;
    for (double v : sec) d.max_abs_sigma = std::max(d.max_abs_sigma, std::abs(v));
    for (double v : res) d.newton_residual = std::max(d.newton_residual, v);
    if (t > 0)
      for (std::size_t i = 0; i < sec.size(); ++i)
        d.fd_residual = std::max(d.fd_residual, std::abs((sec[i] - path.sections[0][i]) / t - beta_grid[i]));
    auto margins = graph_rank_margins(p, options.grid, sec, path.half_rank);
    d.rank_margin = *std::min_element(margins.begin(), margins.end());

    std::optional<std::vector<TrigPoly>> fitted;
    if (options.fit) {
      std::vector<TrigPoly> polys;
      BigradedForm j_sigma(p.base());
      double fit_res = 0;
      for (std::size_t i = 0; i < uk; ++i) {
        spectral::GridData g{options.grid.points, std::vector<double>(npts)};
        for (std::size_t pt = 0; pt < npts; ++pt) g.values[pt] = sec[pt * uk + i];
        auto f = spectral::fit(g);
        fit_res = std::max(fit_res, f.residual);
        j_sigma.add_term(bit(static_cast<int>(i)), f.poly);
        polys.push_back(std::move(f.poly));
      }
      BigradedForm omega_fit = p.omega() - foliated::exterior_d(j_sigma);
      d.fit_residual = fit_res;
      d.fit_excess = sum_abs_coefficients(gotay::wedge_power(omega_fit, path.half_rank + 1));
      fitted = std::move(polys);
    }
    path.sections.push_back(std::move(sec));
    path.point_margin.push_back(std::move(margins));
    path.point_residual.push_back(std::move(res));
    path.fitted.push_back(std::move(fitted));
    path.diagnostics.push_back(d);
  }
  return path;
}

SymplecticityCheck flow_symplecticity(const MoserSystem& system, double t, double dt, int samples, std::uint64_t seed,
                                      double fiber_scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI), fiber(-fiber_scale, fiber_scale);
  const int dim = system.dim();
  const double h = 1e-5;
  SymplecticityCheck out;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x(i) = i < system.n() ? angle(rng) : fiber(rng);
    Eigen::VectorXd fx = system.flow(x, t, dt);
    Eigen::MatrixXd jac(dim, dim);
    for (int c = 0; c < dim; ++c) {
      Eigen::VectorXd xp = x, xm = x;
      xp(c) += h;
      xm(c) -= h;
      jac.col(c) = (system.flow(xp, t, dt) - system.flow(xm, t, dt)) / (2 * h);
    }
    Eigen::MatrixXd pulled = jac.transpose() * system.coordinate_omega(t, fx) * jac;
    out.max_defect = std::max(out.max_defect, (pulled - system.coordinate_omega(0, x)).cwiseAbs().maxCoeff());
    ++out.samples;
  }
  return out;
}

}  // namespace folcalc::moser
