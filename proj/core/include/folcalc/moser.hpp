#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "folcalc/gotay.hpp"
#include "folcalc/trig_poly.hpp"

namespace folcalc::moser {

using foliated::BigradedForm;
using foliated::Presymplectic;
using gotay::GotayModel;
using gotay::GridSpec;
using trig::TrigPoly;

struct ExtensionCheck {
  BigradedForm d_beta_ext;
};

// beta_ext must restrict to beta on leaves and have i_V d(beta_ext) = 0 for
// every leafwise frame field V.
ExtensionCheck verify_extension(const BigradedForm& beta, const BigradedForm& beta_ext);

// Numeric form of omega_t = Omega_G - t p*d(beta_ext) on T^n x R^k.
// States are (theta_0..theta_{n-1}, y_0..y_{k-1}) in coordinates; frame
// quantities use the basis {E_a, d/dy_j}.
class MoserSystem {
 public:
  MoserSystem(const GotayModel& model, const BigradedForm& beta_ext);

  int n() const { return n_; }
  int fibers() const { return k_; }
  int dim() const { return n_ + k_; }

  Eigen::MatrixXd omega(double t, const Eigen::VectorXd& state) const;
  Eigen::MatrixXd coordinate_omega(double t, const Eigen::VectorXd& state) const;
  Eigen::MatrixXd frame_at(std::span<const double> theta) const;
  Eigen::MatrixXd coframe_at(std::span<const double> theta) const;
  // Frame components of X_t with i_X omega_t = p*beta_ext; throws SingularAtPoint.
  Eigen::VectorXd field(double t, const Eigen::VectorXd& state) const;
  Eigen::VectorXd velocity(double t, const Eigen::VectorXd& state) const;
  // RK4 from time 0 to t with ceil(t / dt) equal steps.
  Eigen::VectorXd flow(const Eigen::VectorXd& state, double t, double dt) const;

 private:
  struct Entry {
    int a = 0;
    int b = 0;
    std::vector<std::pair<poly::Exponent, trig::CompiledTrig>> omega;
    trig::CompiledTrig dbeta;
  };
  int n_ = 0;
  int k_ = 0;
  std::vector<Entry> entries_;
  std::vector<trig::CompiledTrig> rhs_;
  std::vector<trig::CompiledTrig> frame_;
  std::vector<trig::CompiledTrig> coframe_;
};

Eigen::VectorXd moser_field(const GotayModel& model, const BigradedForm& beta_ext, double t,
                            std::span<const double> theta, std::span<const double> y);

struct ProlongOptions {
  double t_max = 0.1;
  double dt = 1e-3;
  GridSpec grid;
  // Extra sample times in (0, t_max]; 0 and dt are always sampled.
  std::vector<double> sample_times;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  double fd_step = 1e-7;
  bool fit = true;
  int threads = 1;
};

struct TimeDiagnostics {
  double t = 0;
  double max_abs_sigma = 0;
  double fd_residual = 0;  // max |(sigma_t - sigma_0) / t - beta|, 0 at t = 0
  double rank_margin = 0;  // min over the grid
  double newton_residual = 0;
  std::optional<double> fit_residual;
  std::optional<double> fit_excess;  // sum of |coefficients| of omega_fit^{r+1}
};

struct DeformationPath {
  GridSpec grid;
  int fibers = 0;
  int half_rank = 0;
  double initial_margin = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> sections;  // [time][point * fibers + i]
  std::vector<std::vector<double>> point_margin;
  std::vector<std::vector<double>> point_residual;
  std::vector<std::optional<std::vector<TrigPoly>>> fitted;
  std::vector<TimeDiagnostics> diagnostics;
};

DeformationPath prolong(const GotayModel& model, const BigradedForm& beta, const BigradedForm& beta_ext,
                        const ProlongOptions& options);

// Per-point sup of |omega^r / r!| for omega = omega_C - d(j sigma), sigma
// sampled on the grid (values laid out as [point * k + i]); derivatives are spectral.
std::vector<double> graph_rank_margins(const Presymplectic& p, const GridSpec& grid, const std::vector<double>& sigma,
                                       int half_rank);

struct SymplecticityCheck {
  double max_defect = 0;  // max |phi_t^* omega_t - Omega_G| over sampled points and entries
  int samples = 0;
};
SymplecticityCheck flow_symplecticity(const MoserSystem& system, double t, double dt, int samples, std::uint64_t seed,
                                      double fiber_scale = 0.05);

}  // namespace folcalc::moser
