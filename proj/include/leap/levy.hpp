#ifndef LEAP_LEVY_HPP
#define LEAP_LEVY_HPP

#include <random>
#include <stdexcept>

namespace leap::levy {

/// Mantegna scale factor:
/// sigma_mu = [ G(1+b) sin(pi b/2) / ( G((1+b)/2) b 2^((b-1)/2) ) ]^(1/b)
/// Valid for 0 < beta <= 2.
double sigma_mu(double beta);

struct LevyParams {
  double beta = 1.5;
  double sigma_mu = 0.0;  // derived from beta
  double sigma_v = 1.0;

  static LevyParams make(double beta);
};

/// One heavy-tailed step s = mu / |v|^(1/beta), mu ~ N(0, sigma_mu^2),
/// v ~ N(0, sigma_v^2). |v| underflow is handled by bounded resampling.
double levy_step(const LevyParams& params, std::mt19937_64& rng);

/// Uniform draw in [v_min, v_max).
double brownian_step(double v_min, double v_max, std::mt19937_64& rng);

/// Initial-velocity rule: fresh Levy draw L and Brownian draw R;
/// returns L when L > R, else R.
double init_velocity(const LevyParams& params, double v_min, double v_max,
                     std::mt19937_64& rng);

}  // namespace leap::levy

#endif
