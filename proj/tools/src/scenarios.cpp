#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <variant>

#include "folcalc/cohomology.hpp"
#include "folcalc/contact.hpp"
#include "folcalc/errors.hpp"
#include "folcalc/gotay.hpp"
#include "folcalc/kuranishi.hpp"
#include "folcalc/mapping_torus.hpp"
#include "folcalc/moser.hpp"
#include "folcalc_cli/cli.hpp"

namespace folcalc::cli {

using foliated::BigradedForm;
using foliated::Presymplectic;
using gotay::GridSpec;
using trig::TrigPoly;

namespace {

class Claims {
 public:
  void pass(const std::string& name, Json detail = nullptr) { add(name, "pass", std::move(detail)); }
  void fail(const std::string& name, Json detail = nullptr) { add(name, "fail", std::move(detail)); }
  void unknown(const std::string& name, Json detail = nullptr) { add(name, "inconclusive", std::move(detail)); }
  void check(const std::string& name, bool ok, Json detail = nullptr) {
    ok ? pass(name, std::move(detail)) : fail(name, std::move(detail));
  }

  const Json& list() const { return list_; }
  int exit_code() const { return failed_ ? kCertifiedFailure : inconclusive_ ? kInconclusive : kPass; }
  std::string verdict() const { return failed_ ? "fail" : inconclusive_ ? "inconclusive" : "pass"; }

 private:
  void add(const std::string& name, const std::string& status, Json detail) {
    Json c;
    c["name"] = name;
    c["status"] = status;
    if (!detail.is_null()) c["detail"] = std::move(detail);
    list_.push_back(std::move(c));
    failed_ = failed_ || status == "fail";
    inconclusive_ = inconclusive_ || status == "inconclusive";
  }

  Json list_ = Json::array();
  bool failed_ = false;
  bool inconclusive_ = false;
};

struct Ctx {
  Json& manifest;
  ObjectReader& top;
  const RunOptions& options;
  std::uint64_t seed;
  Json results = Json::object();
  Json overrides = Json::object();
  Claims claims;
  RunResult& out;

  Presymplectic geometry() { return parse_geometry(top.required("geometry"), "/geometry"); }
  ObjectReader inputs() { return ObjectReader(top.required("inputs"), "/inputs"); }
  ObjectReader numerics() { return ObjectReader(manifest["numerics"], "/numerics"); }
  ObjectReader expect() { return ObjectReader(manifest["expect"], "/expect"); }
  void parsed() { top.finish(); }

  GridSpec grid(ObjectReader& r, int dim, int def) {
    if (options.grid) {
      r.optional("grid");
      manifest["numerics"]["grid"] = *options.grid;
      overrides["grid"] = *options.grid;
      return GridSpec::uniform(dim, *options.grid);
    }
    Json* g = r.optional("grid");
    if (!g) {
      manifest["numerics"]["grid"] = def;
      return GridSpec::uniform(dim, def);
    }
    if (g->is_number_integer()) {
      long long pts = g->get<long long>();
      if (pts < 1) throw ManifestError(r.path("grid"), "grid size must be positive");
      return GridSpec::uniform(dim, static_cast<int>(pts));
    }
    if (!g->is_array() || g->size() != static_cast<std::size_t>(dim))
      throw ManifestError(r.path("grid"), "expected an integer or " + std::to_string(dim) + " per-axis sizes");
    GridSpec out;
    for (std::size_t i = 0; i < g->size(); ++i) {
      long long pts = as_integer((*g)[i], pointer_child(r.path("grid"), i));
      if (pts < 1) throw ManifestError(pointer_child(r.path("grid"), i), "grid size must be positive");
      out.points.push_back(static_cast<int>(pts));
    }
    return out;
  }
};

BigradedForm one_form(Json& v, const std::string& pointer, const foliated::BasePtr& base, bool foliated_only) {
  BigradedForm f = parse_form(v, pointer, base);
  if (!f.is_zero() && f.degree() != 1) throw ManifestError(pointer, "expected a one-form");
  if (foliated_only && !f.is_foliated()) throw ManifestError(pointer, "expected a foliated (leafwise) one-form");
  return f;
}

Json form_report(const BigradedForm& f) {
  Json j;
  j["text"] = form_text(f);
  j["exact"] = form_json(f);
  return j;
}

Json trig_report(const TrigPoly& p) {
  Json j;
  j["text"] = trig_text(p);
  j["exact"] = trig_json(p);
  return j;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json grid_json(const GridSpec& g) { return g.points; }

Json num_list(const std::vector<double>& vs, double tolerance) {
  Json out = Json::array();
  for (double v : vs) out.push_back(num(v, tolerance));
  return out;
}

// ---------------------------------------------------------------------------

void coisotropic_scenario(Ctx& c) {
  Presymplectic p = c.geometry();
  ObjectReader in = c.inputs();
  BigradedForm alpha = one_form(in.required("section"), in.path("section"), p.base(), true);
  in.finish();
  ObjectReader nr = c.numerics();
  GridSpec grid = c.grid(nr, p.base()->n(), 16);
  double margin_tol = nr.number_or("margin_tol", 1e-9);
  nr.finish();
  ObjectReader ex = c.expect();
  std::optional<bool> expected;
  if (Json* e = ex.optional("coisotropic")) {
    if (!e->is_boolean()) throw ManifestError(ex.path("coisotropic"), "expected a boolean");
    expected = e->get<bool>();
  }
  ex.finish();
  c.parsed();

  auto model = gotay::build_gotay(p);
  auto sp = gotay::section_pullback(model, gotay::section_of(alpha));
  c.results["graph_form"] = form_report(sp.via_formula);
  c.results["routes_agree"] = sp.agree;
  c.claims.check("pullback_routes_agree", sp.agree);

  const int half = (p.base()->n() + p.base()->k()) / 2;
  auto verdict = gotay::coisotropic_check(sp.via_formula, half, grid, false, margin_tol);
  c.results["grid"] = grid_json(grid);
  c.results["ambient_half_dimension"] = exact(half);
  bool coisotropic = std::holds_alternative<gotay::Coisotropic>(verdict);
  if (coisotropic) {
    const auto& v = std::get<gotay::Coisotropic>(verdict);
    c.results["verdict"] = "Coisotropic";
    c.results["half_rank"] = exact(v.half_rank);
    c.results["margin"] = num(v.margin, margin_tol);
  } else {
    const auto& v = std::get<gotay::NotCoisotropic>(verdict);
    c.results["verdict"] = "NotCoisotropic";
    c.results["reason"] = v.reason;
    c.results["component"] = mask_indices(v.component);
    c.results["witness"] = num_list(v.witness, 0);
    c.results["value"] = num(v.value, margin_tol);
  }
  if (expected) c.claims.check("coisotropic", coisotropic == *expected);
  else c.claims.pass("verdict_certified");
}

// ---------------------------------------------------------------------------

void dnu_kernel_scenario(Ctx& c) {
  Presymplectic p = c.geometry();
  if (p.base()->name() != "t3-example")
    throw ManifestError("/geometry", "dnu-kernel runs on the \"t3-example\" preset");
  ObjectReader in = c.inputs();
  long long axis = in.integer_or("axis", 1);
  if (axis < 0 || axis > 2) throw ManifestError(in.path("axis"), "axis must lie in [0, 3)");
  TrigPoly g = parse_trig(in.required("g"), in.path("g"), 3);
  std::optional<long long> family_max;
  if (Json* f = in.optional("family_max")) {
    family_max = as_integer(*f, in.path("family_max"));
    if (*family_max < 0 || *family_max > 40) throw ManifestError(in.path("family_max"), "must lie in [0, 40]");
  }
  in.finish();
  ObjectReader nr = c.numerics();
  nr.finish();
  ObjectReader ex = c.expect();
  std::optional<bool> expect_in;
  std::optional<TrigPoly> expect_l;
  std::optional<long long> expect_rank;
  if (Json* e = ex.optional("in_kernel")) {
    if (!e->is_boolean()) throw ManifestError(ex.path("in_kernel"), "expected a boolean");
    expect_in = e->get<bool>();
  }
  if (Json* e = ex.optional("l")) expect_l = parse_trig(*e, ex.path("l"), 3);
  if (Json* e = ex.optional("family_rank")) expect_rank = as_integer(*e, ex.path("family_rank"));
  ex.finish();
  c.parsed();

  const int ax = static_cast<int>(axis);
  auto verdict = cohom::dnu_kernel_test(g, ax);
  bool in_kernel = std::holds_alternative<cohom::InKernel>(verdict);
  c.results["g"] = trig_report(g);
  if (in_kernel) {
    c.results["verdict"] = "InKernel";
    c.results["l"] = trig_report(std::get<cohom::InKernel>(verdict).l);
  } else {
    c.results["verdict"] = "NotInKernel";
    c.results["derivative"] = trig_report(std::get<cohom::NotInKernel>(verdict).derivative);
  }

  // Second route: d_nabla*-exactness of the cochain representative of d_nu[g e^0].
  BigradedForm alpha = BigradedForm::monomial(p.base(), bit(0), g);
  auto bott = cohom::bott_star_exactness(foliated::d_nu_rep(alpha));
  if (bott.potential) c.results["bott_route"] = "potential found";
  else if (bott.certificate) c.results["bott_route"] = "certified non-exact";
  else c.results["bott_route"] = "inconclusive";
  if (!bott.potential && !bott.certificate) c.claims.unknown("routes_agree");
  else c.claims.check("routes_agree", in_kernel == bott.potential.has_value());

  if (expect_in) c.claims.check("in_kernel", in_kernel == *expect_in);
  if (expect_l) c.claims.check("quotient_l", in_kernel && std::get<cohom::InKernel>(verdict).l == *expect_l);

  if (family_max) {
    Json fam = Json::array();
    std::vector<TrigPoly> gs;
    bool all = true;
    TrigPoly cosine = TrigPoly::cos_axis(3, ax);
    for (long long n = 0; n <= *family_max; ++n) {
      TrigPoly gn = trig::tp_pow(cosine, static_cast<int>(n));
      gs.push_back(gn);
      auto v = cohom::dnu_kernel_test(gn, ax);
      Json row;
      row["n"] = n;
      if (auto* k = std::get_if<cohom::InKernel>(&v)) {
        TrigPoly expected = n == 0 ? TrigPoly(3) : trig::tp_pow(cosine, static_cast<int>(n - 1)) * Rational(static_cast<long>(-n));
        row["verdict"] = "InKernel";
        row["l"] = trig_text(k->l);
        row["matches_minus_n_cos_pow"] = k->l == expected;
        all = all && k->l == expected;
      } else {
        row["verdict"] = "NotInKernel";
        all = false;
      }
      fam.push_back(row);
    }
    std::size_t rank = cohom::class_independence(gs);
    c.results["family"] = fam;
    c.results["family_rank"] = exact(rank);
    c.claims.check("family_in_kernel", all);
    if (expect_rank) c.claims.check("family_rank", static_cast<long long>(rank) == *expect_rank);
  }
  if (!expect_in && !expect_l && !family_max) c.claims.pass("verdict_certified");
}

// ---------------------------------------------------------------------------

Json exactness_json(const cohom::ExactnessVerdict& v) {
  Json j;
  if (auto* e = std::get_if<cohom::ExactWithPrimitive>(&v)) {
    j["kind"] = "ExactWithPrimitive";
    j["primitive"] = form_report(e->primitive);
  } else if (auto* n = std::get_if<cohom::NotExactCertified>(&v)) {
    j["kind"] = "NotExactCertified";
    j["component"] = mask_indices(n->component);
    j["averaged_axes"] = n->axes;
    j["average"] = trig_report(n->certificate);
  } else {
    const auto& i = std::get<cohom::InconclusiveOnBox>(v);
    j["kind"] = "InconclusiveOnBox";
    j["box"] = i.box.bound;
    j["unknowns"] = exact(i.unknowns);
  }
  return j;
}

void kuranishi_scenario(Ctx& c) {
  Presymplectic p = c.geometry();
  ObjectReader in = c.inputs();
  BigradedForm beta = one_form(in.required("beta"), in.path("beta"), p.base(), true);
  in.finish();
  ObjectReader nr = c.numerics();
  std::optional<linsolve::Box> box;
  if (Json* b = nr.optional("box")) {
    long long bound = as_integer(*b, nr.path("box"));
    if (bound < 0) throw ManifestError(nr.path("box"), "box bound must be non-negative");
    box = linsolve::Box::uniform(p.base()->n(), static_cast<int>(bound));
  }
  nr.finish();
  ObjectReader ex = c.expect();
  std::optional<std::string> expected;
  if (Json* e = ex.optional("status")) {
    expected = as_string(*e, ex.path("status"));
    if (*expected != "unobstructed" && *expected != "obstructed")
      throw ManifestError(ex.path("status"), "expected \"unobstructed\" or \"obstructed\"");
  }
  ex.finish();
  c.parsed();

  kuranishi::KuranishiVerdict v = [&] {
    try {
      return kuranishi::kuranishi(p, beta, box);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotLeafwiseClosed) throw ManifestError("/inputs/beta", e.what());
      throw;
    }
  }();
  BigradedForm oracle = kuranishi::lambda2_oracle(gotay::build_gotay(p), beta, beta);
  c.results["beta"] = form_report(beta);
  c.results["lambda2"] = form_report(v.lambda2_value);
  c.results["oracle_agrees"] = oracle == v.lambda2_value;
  c.claims.check("lambda2_routes_agree", oracle == v.lambda2_value);
  c.results["status"] = kuranishi::status_name(v.status);
  c.results["certificate"] = exactness_json(v.certificate);
  if (v.kernel_potential) {
    Json comps = Json::array();
    for (const auto& f : v.kernel_potential->components) comps.push_back(form_report(f));
    c.results["kernel_potential"] = comps;
  }
  if (v.status == kuranishi::Status::Inconclusive) {
    c.claims.unknown("status");
  } else if (expected) {
    bool obstructed = v.status == kuranishi::Status::ObstructedCertified;
    c.claims.check("status", obstructed == (*expected == "obstructed"), "expected " + *expected);
  } else {
    c.claims.pass("status");
  }
}

// ---------------------------------------------------------------------------

void moser_scenario(Ctx& c) {
  Presymplectic p = c.geometry();
  const int n = p.base()->n();
  const int k = p.base()->k();
  ObjectReader in = c.inputs();
  BigradedForm beta = one_form(in.required("beta"), in.path("beta"), p.base(), true);
  BigradedForm ext = one_form(in.required("beta_ext"), in.path("beta_ext"), p.base(), false);
  std::optional<BigradedForm> expected;
  if (Json* e = in.optional("expected_section")) expected = one_form(*e, in.path("expected_section"), p.base(), true);
  in.finish();

  ObjectReader nr = c.numerics();
  moser::ProlongOptions opt;
  opt.grid = c.grid(nr, n, 16);
  if (c.options.dt) {
    nr.optional("dt");
    c.manifest["numerics"]["dt"] = *c.options.dt;
    c.overrides["dt"] = *c.options.dt;
    opt.dt = *c.options.dt;
  } else {
    opt.dt = nr.number_or("dt", opt.dt);
  }
  opt.t_max = nr.number_or("t_max", opt.t_max);
  if (!(opt.dt > 0) || !(opt.t_max >= opt.dt)) throw ManifestError("/numerics", "need 0 < dt <= t_max");
  if (Json* s = nr.optional("sample_times")) {
    opt.sample_times = as_number_list(*s, nr.path("sample_times"));
  } else {
    opt.sample_times = {opt.t_max / 4, opt.t_max / 2, opt.t_max};
    c.manifest["numerics"]["sample_times"] = opt.sample_times;
  }
  for (std::size_t i = 0; i < opt.sample_times.size(); ++i)
    if (opt.sample_times[i] < 0 || opt.sample_times[i] > opt.t_max * (1 + 1e-12))
      throw ManifestError(pointer_child(nr.path("sample_times"), i), "sample time outside [0, t_max]");
  opt.newton_tol = nr.number_or("newton_tol", opt.newton_tol);
  opt.newton_max_iter = static_cast<int>(nr.integer_or("newton_max_iter", opt.newton_max_iter));
  opt.fd_step = nr.number_or("fd_step", opt.fd_step);
  opt.fit = nr.bool_or("fit", opt.fit);
  double margin_ratio = nr.number_or("margin_ratio", 0.5);
  double section_tol = nr.number_or("section_tol", 1e-8);
  nr.finish();
  ObjectReader ex = c.expect();
  ex.finish();
  c.parsed();
  opt.threads = c.options.threads;

  try {
    moser::verify_extension(beta, ext);
  } catch (const Error& e) {
    throw ManifestError("/inputs/beta_ext", e.what());
  }

  auto model = gotay::build_gotay(p);
  moser::DeformationPath path;
  try {
    path = moser::prolong(model, beta, ext, opt);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularAtPoint) {
      c.results["error"] = e.what();
      c.claims.fail("flow_regular", e.what());
      return;
    }
    if (e.kind() == ErrorKind::NewtonDivergence) {
      c.results["error"] = e.what();
      c.claims.unknown("newton_converged", e.what());
      return;
    }
    throw;
  }

  c.results["grid"] = grid_json(path.grid);
  c.results["half_rank"] = exact(path.half_rank);
  c.results["initial_margin"] = num(path.initial_margin, 1e-9);
  const double margin_floor = margin_ratio * path.initial_margin;
  Json times = Json::array();
  double min_margin = path.initial_margin;
  double max_newton = 0;
  for (std::size_t ti = 0; ti < path.times.size(); ++ti) {
    const auto& d = path.diagnostics[ti];
    Json row;
    row["t"] = exact(d.t);
    row["max_abs_sigma"] = num(d.max_abs_sigma, opt.newton_tol);
    row["fd_residual"] = num(d.fd_residual, opt.dt);
    row["rank_margin"] = num(d.rank_margin, margin_floor);
    row["newton_residual"] = num(d.newton_residual, opt.newton_tol);
    if (d.fit_residual) row["fit_residual"] = num(*d.fit_residual, 1e-8);
    if (d.fit_excess) row["fit_excess"] = num(*d.fit_excess, 1e-8);
    times.push_back(row);
    min_margin = std::min(min_margin, d.rank_margin);
    max_newton = std::max(max_newton, d.newton_residual);
  }
  c.results["times"] = times;
  if (!path.fitted.empty() && path.fitted.back()) {
    Json fit = Json::array();
    for (const auto& s : *path.fitted.back()) fit.push_back(trig_text(s));
    c.results["final_fitted_section"] = fit;
  }
  c.claims.check("rank_margin", min_margin >= margin_floor, num(min_margin, margin_floor));
  c.claims.check("newton_converged", max_newton <= opt.newton_tol, num(max_newton, opt.newton_tol));

  if (expected) {
    std::vector<trig::CompiledTrig> comp;
    for (int i = 0; i < k; ++i) comp.emplace_back(expected->coeff(bit(i)));
    double dev = 0;
    for (std::size_t ti = 0; ti < path.times.size(); ++ti)
      for (std::size_t pt = 0; pt < path.grid.size(); ++pt) {
        auto theta = path.grid.point(pt);
        for (int i = 0; i < k; ++i) {
          double want = path.times[ti] * comp[static_cast<std::size_t>(i)](theta);
          dev = std::max(dev, std::abs(path.sections[ti][pt * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] - want));
        }
      }
    c.results["section_deviation"] = num(dev, section_tol);
    c.claims.check("expected_section", dev <= section_tol, num(dev, section_tol));
  }

  std::string csv = "t";
  for (int a = 0; a < n; ++a) csv += ",theta" + std::to_string(a);
  for (int i = 0; i < k; ++i) csv += ",y" + std::to_string(i);
  csv += ",rank_margin,newton_residual\n";
  for (std::size_t ti = 0; ti < path.times.size(); ++ti)
    for (std::size_t pt = 0; pt < path.grid.size(); ++pt) {
      csv += fmt(path.times[ti]);
      for (double th : path.grid.point(pt)) csv += "," + fmt(th);
      for (int i = 0; i < k; ++i) csv += "," + fmt(path.sections[ti][pt * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)]);
      double margin = ti < path.point_margin.size() && pt < path.point_margin[ti].size() ? path.point_margin[ti][pt] : 0;
      double resid = ti < path.point_residual.size() && pt < path.point_residual[ti].size() ? path.point_residual[ti][pt] : 0;
      csv += "," + fmt(margin) + "," + fmt(resid) + "\n";
    }
  c.out.diagnostics_csv = std::move(csv);

  auto series = [&](const std::string& name, auto get) {
    std::string s = "t," + name + "\n";
    for (const auto& d : path.diagnostics) s += fmt(d.t) + "," + fmt(get(d)) + "\n";
    c.out.plotdata.emplace_back(name + ".csv", s);
  };
  series("fd_residual", [](const moser::TimeDiagnostics& d) { return d.fd_residual; });
  series("rank_margin", [](const moser::TimeDiagnostics& d) { return d.rank_margin; });
  series("max_abs_sigma", [](const moser::TimeDiagnostics& d) { return d.max_abs_sigma; });
}

// ---------------------------------------------------------------------------

void contact_scenario(Ctx& c) {
  Presymplectic p = c.geometry();
  ObjectReader in = c.inputs();
  bool rummler = in.bool_or("rummler", true);
  std::vector<BigradedForm> alphas;
  {
    Json& a = in.required("alphas");
    if (!a.is_array() || a.empty()) throw ManifestError(in.path("alphas"), "expected a non-empty array of one-forms");
    for (std::size_t i = 0; i < a.size(); ++i) alphas.push_back(one_form(a[i], pointer_child(in.path("alphas"), i), p.base(), false));
  }
  const std::size_t q = alphas.size();
  std::vector<std::vector<Rational>> hs;
  if (Json* h = in.optional("h")) {
    if (!h->is_array()) throw ManifestError(in.path("h"), "expected an array of h-vectors");
    for (std::size_t i = 0; i < h->size(); ++i) {
      std::string at = pointer_child(in.path("h"), i);
      const Json& row = (*h)[i];
      if (!row.is_array() || row.size() != q) throw ManifestError(at, "expected " + std::to_string(q) + " entries");
      hs.emplace_back();
      for (std::size_t j = 0; j < q; ++j) hs.back().push_back(parse_rational_value(row[j], pointer_child(at, j)));
    }
  }
  if (Json* rh = in.optional("random_h")) {
    ObjectReader r(*rh, in.path("random_h"));
    long long den = r.integer_or("denominator", 16);
    long long max_num = r.integer_or("max_numerator", 4);
    long long count = as_integer(r.required("count"), r.path("count"));
    r.finish();
    if (count < 0 || count > 10000) throw ManifestError(r.path("count"), "count must lie in [0, 10000]");
    if (den < 1) throw ManifestError(r.path("denominator"), "denominator must be positive");
    if (max_num < 0) throw ManifestError(r.path("max_numerator"), "must be non-negative");
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<long long> draw(-max_num, max_num);
    for (long long s = 0; s < count; ++s) {
      hs.emplace_back();
      for (std::size_t j = 0; j < q; ++j) hs.back().push_back(Rational(static_cast<long>(draw(rng))) / static_cast<long>(den));
    }
  }
  if (hs.empty()) throw ManifestError("/inputs", "give \"h\" or \"random_h\"");
  in.finish();
  ObjectReader nr = c.numerics();
  GridSpec grid = c.grid(nr, p.base()->n(), 8);
  nr.finish();
  ObjectReader ex = c.expect();
  ex.finish();
  c.parsed();

  Json slices = Json::array();
  bool all = true;
  for (const auto& h : hs) {
    contact::ContactReport r = [&] {
      try {
        return contact::contact_model_check(p, alphas, h, grid);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::DimensionMismatch)
          throw ManifestError("/inputs/alphas", e.what());
        throw;
      }
    }();
    Json row;
    Json hj = Json::array();
    for (const auto& v : h) hj.push_back(rational_json(v));
    row["h"] = hj;
    row["factor"] = exact(rational_json(r.factor));
    row["degenerate"] = r.degenerate;
    row["matches"] = r.matches;
    row["volume_margin"] = num(r.volume_margin, 1e-9);
    slices.push_back(row);
    all = all && r.matches;
  }
  c.results["grid"] = grid_json(grid);
  c.results["slices"] = slices;
  c.claims.check("slices_match_factor", all);

  if (rummler) {
    auto r = contact::rummler_check(p, alphas, grid);
    Json j;
    j["ok"] = r.ok;
    j["leaf_margin"] = num(r.leaf_margin, 1e-9);
    if (r.failed_block) j["failed_block"] = {r.failed_block->first, r.failed_block->second};
    j["detail"] = r.detail;
    c.results["rummler"] = j;
    c.claims.check("rummler", r.ok);
  }
}

// ---------------------------------------------------------------------------

Json matrix_json(const mapping_torus::RationalMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rational_json(v));
    out.push_back(r);
  }
  return out;
}

Json poly_json(const mapping_torus::IntPoly& p) {
  Json out = Json::array();
  for (const auto& v : p) out.push_back(v.get_str());
  return out;
}

mapping_torus::MatrixReport analyze_or_reject(const mapping_torus::RationalMatrix& a, const std::vector<double>& leaf) {
  try {
    return mapping_torus::analyze_matrix(a, leaf);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonIntegerMatrix || e.kind() == ErrorKind::DimensionMismatch)
      throw ManifestError("/inputs/matrix", e.what());
    if (e.kind() == ErrorKind::InvalidArgument) throw ManifestError("/inputs/leaf_eigs", e.what());
    throw;
  }
}

Json h1_json(const mapping_torus::SuspensionH1& h) {
  Json j;
  j["dimension"] = exact(h.dimension);
  j["generators"] = h.generators;
  j["assumes_dense_leaves"] = true;
  return j;
}

void anosov_scenario(Ctx& c) {
  ObjectReader in = c.inputs();
  auto a = parse_matrix(in.required("matrix"), in.path("matrix"));
  auto leaf = as_number_list(in.required("leaf_eigs"), in.path("leaf_eigs"));
  std::optional<std::pair<mapping_torus::RationalMatrix, mapping_torus::RationalMatrix>> from;
  if (Json* s = in.optional("symplectic_from")) {
    ObjectReader r(*s, in.path("symplectic_from"));
    auto x = parse_matrix(r.required("X"), r.path("X"));
    auto y = parse_matrix(r.required("Y"), r.path("Y"));
    r.finish();
    from.emplace(std::move(x), std::move(y));
  }
  in.finish();
  ObjectReader nr = c.numerics();
  double eigen_tol = nr.number_or("eigen_tol", 0.01);
  double form_tol = nr.number_or("form_tol", 1e-9);
  nr.finish();
  ObjectReader ex = c.expect();
  std::optional<std::vector<mpz_class>> expect_poly;
  std::optional<std::vector<double>> expect_eigs;
  if (Json* e = ex.optional("charpoly")) {
    if (!e->is_array()) throw ManifestError(ex.path("charpoly"), "expected an array of integers");
    expect_poly.emplace();
    for (std::size_t i = 0; i < e->size(); ++i) {
      Rational v = parse_rational_value((*e)[i], pointer_child(ex.path("charpoly"), i));
      if (v.get_den() != 1) throw ManifestError(pointer_child(ex.path("charpoly"), i), "expected an integer");
      expect_poly->push_back(v.get_num());
    }
  }
  if (Json* e = ex.optional("eigenvalues")) expect_eigs = as_number_list(*e, ex.path("eigenvalues"));
  ex.finish();
  c.parsed();

  auto r = analyze_or_reject(a, leaf);
  c.results["det"] = exact(r.det.get_str());
  c.results["charpoly"] = poly_json(r.charpoly);
  c.results["charpoly_text"] = mapping_torus::poly_to_string(r.charpoly);
  c.results["eigenvalues"] = num_list(r.eigenvalues, 1e-9);
  c.results["mu"] = num_list(r.mu, 1e-9);
  c.results["lambda"] = num_list(r.lambda, 1e-9);
  Json cond2;
  cond2["kind"] = mapping_torus::irreducibility_name(r.cond2.kind);
  if (r.cond2.prime) cond2["prime"] = r.cond2.prime;
  if (!r.cond2.factor.empty()) cond2["factor"] = mapping_torus::poly_to_string(r.cond2.factor);
  c.results["irreducibility"] = cond2;
  Json pairs = Json::array();
  for (const auto& [x, y] : r.reciprocity.pairs) pairs.push_back({num(x, 1e-8), num(y, 1e-8)});
  c.results["reciprocal_pairs"] = pairs;

  c.claims.check("det_one", r.det_one);
  c.claims.check("cayley_hamilton", r.cayley_hamilton);
  c.claims.check("diagonalizable_positive", r.diagonalizable_positive);
  c.claims.check("cond1", r.cond1);
  switch (r.cond2.kind) {
    case mapping_torus::IrreducibilityKind::IrreducibleModP:
    case mapping_torus::IrreducibilityKind::IrreducibleByFactorSearch: c.claims.pass("cond2_irreducible"); break;
    case mapping_torus::IrreducibilityKind::ReducibleWithFactor: c.claims.fail("cond2_irreducible"); break;
    case mapping_torus::IrreducibilityKind::Unknown: c.claims.unknown("cond2_irreducible"); break;
  }
  c.claims.check("reciprocity", r.reciprocity.ok);

  if (r.diagonalizable_positive && r.reciprocity.ok) {
    const auto n = static_cast<Eigen::Index>(r.a.size());
    Eigen::MatrixXd ad(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) ad(i, j) = r.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get_d();
    auto f = mapping_torus::build_suspension_form(ad, leaf);
    Json j;
    j["degenerate"] = f.degenerate;
    j["rank"] = exact(f.rank);
    j["kernel_dimension"] = exact(f.kernel_dim);
    j["kernel_defect"] = num(f.kernel_defect, form_tol);
    j["invariance_defect"] = num(f.invariance_defect, form_tol);
    c.results["suspension_form"] = j;
    bool ok = !f.degenerate && f.rank == static_cast<int>(r.lambda.size()) && f.kernel_defect <= form_tol &&
              f.invariance_defect <= form_tol;
    c.claims.check("suspension_form", ok);
  }
  c.results["suspension_h1"] = h1_json(mapping_torus::suspension_h1_report(r.mu));

  if (from) {
    mapping_torus::RationalMatrix s;
    try {
      s = mapping_torus::symplectic_from_symmetric(from->first, from->second);
    } catch (const Error& e) {
      throw ManifestError("/inputs/symplectic_from", e.what());
    }
    c.results["symplectic_matrix"] = matrix_json(s);
    c.results["symplectic_det"] = exact(rational_json(mapping_torus::rational_determinant(s)));
    c.claims.check("symplectic_reproduces_matrix", s == a && mapping_torus::is_symplectic(s));
  }
  if (expect_poly) c.claims.check("expected_charpoly", *expect_poly == r.charpoly);
  if (expect_eigs) {
    bool ok = expect_eigs->size() == r.eigenvalues.size();
    std::vector<bool> used(r.eigenvalues.size(), false);
    for (double want : *expect_eigs) {
      bool found = false;
      for (std::size_t i = 0; ok && i < r.eigenvalues.size(); ++i)
        if (!used[i] && std::abs(r.eigenvalues[i] - want) <= eigen_tol) {
          used[i] = true;
          found = true;
          break;
        }
      ok = ok && found;
    }
    c.claims.check("expected_eigenvalues", ok, num(eigen_tol, 0));
  }
}

void suspension_scenario(Ctx& c) {
  ObjectReader in = c.inputs();
  std::vector<double> mu;
  if (in.has("mu")) {
    mu = as_number_list(in.required("mu"), in.path("mu"));
    if (in.has("matrix") || in.has("leaf_eigs")) throw ManifestError("/inputs", "give either \"mu\" or \"matrix\" with \"leaf_eigs\"");
  } else {
    auto a = parse_matrix(in.required("matrix"), in.path("matrix"));
    auto leaf = as_number_list(in.required("leaf_eigs"), in.path("leaf_eigs"));
    mu = analyze_or_reject(a, leaf).mu;
  }
  in.finish();
  ObjectReader nr = c.numerics();
  nr.finish();
  ObjectReader ex = c.expect();
  std::optional<long long> expected;
  if (Json* e = ex.optional("dimension")) expected = as_integer(*e, ex.path("dimension"));
  ex.finish();
  c.parsed();

  auto h = mapping_torus::suspension_h1_report(mu);
  c.results["mu"] = num_list(mu, 1e-9);
  c.results["h1"] = h1_json(h);
  if (expected) c.claims.check("dimension", static_cast<long long>(h.dimension) == *expected);
  else c.claims.pass("dimension");
}

}  // namespace

RunResult run_manifest(Json manifest, const RunOptions& options) {
  if (!manifest.is_object()) throw ManifestError("", "expected a JSON object");
  // Create optional sections up front: later insertions would move sibling nodes.
  if (!manifest.contains("numerics")) manifest["numerics"] = Json::object();
  if (!manifest.contains("expect")) manifest["expect"] = Json::object();
  ObjectReader top(manifest, "");
  std::string version = as_string(top.required("version"), "/version");
  if (version != "1") throw ManifestError("/version", "unsupported manifest version '" + version + "'");
  std::string scenario = as_string(top.required("scenario"), "/scenario");
  if (std::find(kScenarios.begin(), kScenarios.end(), scenario) == kScenarios.end())
    throw ManifestError("/scenario", "unknown scenario '" + scenario + "'");
  std::string description = top.string_or("description", "");
  std::uint64_t seed = 0;
  if (options.seed) {
    top.optional("seed");
    manifest["seed"] = *options.seed;
    seed = *options.seed;
  } else {
    long long s = top.integer_or("seed", 0);
    if (s < 0) throw ManifestError("/seed", "seed must be non-negative");
    seed = static_cast<std::uint64_t>(s);
  }
  top.optional("numerics");
  top.optional("expect");

  RunResult result;
  Ctx ctx{manifest, top, options, seed, Json::object(), Json::object(), {}, result};
  if (options.seed) ctx.overrides["seed"] = *options.seed;
  if (scenario == "coisotropic-check") coisotropic_scenario(ctx);
  else if (scenario == "dnu-kernel") dnu_kernel_scenario(ctx);
  else if (scenario == "kuranishi") kuranishi_scenario(ctx);
  else if (scenario == "moser-prolong") moser_scenario(ctx);
  else if (scenario == "contact-slices") contact_scenario(ctx);
  else if (scenario == "anosov-check") anosov_scenario(ctx);
  else suspension_scenario(ctx);

  result.exit_code = ctx.claims.exit_code();
  Json& r = result.report;
  r["folcalc_version"] = kVersion;
  r["scenario"] = scenario;
  r["description"] = description;
  r["seed"] = seed;
  r["manifest"] = manifest;
  r["overrides"] = ctx.overrides;
  r["results"] = std::move(ctx.results);
  r["claims"] = ctx.claims.list();
  r["verdict"] = ctx.claims.verdict();
  r["exit_code"] = result.exit_code;
  return result;
}

}  // namespace folcalc::cli
