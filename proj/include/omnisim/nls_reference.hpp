#pragma once

#include <cstdint>
#include <vector>

#include "omnisim/allocation.hpp"
#include "omnisim/rotor_wrench.hpp"
#include "omnisim/vehicle.hpp"

// Offline reference allocator: multi-start Levenberg-Marquardt least squares
// over squared speeds and tilt angles, minimizing the wrench residual of the
// geometric forward model. Far too slow for a control loop; used by tests and
// benchmarks to certify the linear allocator (exactness and minimum norm)
// through an independent route.

namespace omnisim {

struct NlsOptions {
  int num_starts = 10;
  int max_iterations = 200;
  double residual_tol = 1e-8;  // N, acceptance threshold on the 2-norm
  std::uint64_t seed = 0;
};

struct NlsSolution {
  std::array<double, kNumRotors> speed{};
  std::array<double, kNumRotors> tilt{};
  double residual_norm = 0.0;
  double f_dec_norm = 0.0;  // mu * sqrt(sum n_i^4)
};

struct NlsResult {
  std::vector<NlsSolution> solutions;  // every start that converged
  bool converged() const { return !solutions.empty(); }
  // Solution with the smallest decomposed-force norm.
  const NlsSolution& best() const;
};

NlsResult nls_reference_allocate(const Wrench& desired,
                                 const VehicleParams& params,
                                 const RotorGeometry& geometry,
                                 const NlsOptions& options = {});

}  // namespace omnisim
