#include "omnisim/nls_reference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace omnisim {

namespace {

using Vector12 = Eigen::Matrix<double, 12, 1>;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Jacobian = Eigen::Matrix<double, 6, 12>;

// Unknowns are x = (u_1..u_6, alpha_1..alpha_6) with n_i = |u_i|, which
// keeps speeds nonnegative without explicit constraints.
Vector6 residual(const Vector12& x, const Vector6& desired,
                 const VehicleParams& params, const RotorGeometry& geometry) {
  ActuatorState state;
  for (int i = 0; i < kNumRotors; ++i) {
    state.speed[i] = std::abs(x(i));
    state.tilt[i] = x(6 + i);
  }
  return to_vector(body_wrench(state, params, geometry)) - desired;
}

Jacobian numeric_jacobian(const Vector12& x, const Vector6& desired,
                          const VehicleParams& params,
                          const RotorGeometry& geometry, double speed_scale) {
  Jacobian j;
  for (int k = 0; k < 12; ++k) {
    const double h = (k < 6) ? 1e-7 * speed_scale : 1e-6;
    Vector12 xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    j.col(k) = (residual(xp, desired, params, geometry) -
                residual(xm, desired, params, geometry)) /
               (2.0 * h);
  }
  return j;
}

}  // namespace

const NlsSolution& NlsResult::best() const {
  if (solutions.empty()) {
    throw std::runtime_error("nls_reference_allocate: no start converged");
  }
  return *std::min_element(solutions.begin(), solutions.end(),
                           [](const NlsSolution& a, const NlsSolution& b) {
                             return a.f_dec_norm < b.f_dec_norm;
                           });
}

NlsResult nls_reference_allocate(const Wrench& desired,
                                 const VehicleParams& params,
                                 const RotorGeometry& geometry,
                                 const NlsOptions& options) {
  const Vector6 target = to_vector(desired);
  const double hover_speed =
      std::sqrt(params.mass * params.gravity /
                (kNumRotors * params.lift_coeff));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> speed_dist(0.2, 1.5);
  std::uniform_real_distribution<double> tilt_dist(-kPi, kPi);

  NlsResult result;
  for (int start = 0; start < options.num_starts; ++start) {
    Vector12 x;
    if (start == 0) {
      for (int i = 0; i < 6; ++i) {
        x(i) = hover_speed;
        x(6 + i) = 0.0;
      }
    } else {
      for (int i = 0; i < 6; ++i) x(i) = speed_dist(rng) * hover_speed;
      for (int i = 0; i < 6; ++i) x(6 + i) = tilt_dist(rng);
    }

    Vector6 r = residual(x, target, params, geometry);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
      if (std::sqrt(cost) < options.residual_tol) break;
      const Jacobian j =
          numeric_jacobian(x, target, params, geometry, hover_speed);
      const Eigen::Matrix<double, 12, 12> jtj = j.transpose() * j;
      const Vector12 g = j.transpose() * r;

      bool accepted = false;
      for (int attempt = 0; attempt < 12; ++attempt) {
        Eigen::Matrix<double, 12, 12> damped = jtj;
        damped.diagonal().array() += lambda * (jtj.diagonal().array() + 1e-12);
        const Vector12 step = damped.ldlt().solve(-g);
        const Vector12 trial = x + step;
        const Vector6 trial_r = residual(trial, target, params, geometry);
        const double trial_cost = trial_r.squaredNorm();
        if (trial_cost < cost) {
          x = trial;
          r = trial_r;
          cost = trial_cost;
          lambda = std::max(lambda * 0.3, 1e-12);
          accepted = true;
          break;
        }
        lambda *= 6.0;
      }
      if (!accepted) break;
    }

    if (std::sqrt(cost) < options.residual_tol) {
      NlsSolution s;
      double quartic = 0.0;
      for (int i = 0; i < kNumRotors; ++i) {
        s.speed[i] = std::abs(x(i));
        s.tilt[i] = x(6 + i);
        quartic += s.speed[i] * s.speed[i] * s.speed[i] * s.speed[i];
      }
      s.residual_norm = std::sqrt(cost);
      s.f_dec_norm = params.lift_coeff * std::sqrt(quartic);
      result.solutions.push_back(s);
    }
  }
  return result;
}

}  // namespace omnisim
