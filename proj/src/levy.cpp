#include "leap/levy.hpp"

#include <cmath>

namespace leap::levy {

namespace {

// sin(pi x) with the argument reduced before multiplying by pi, so that
// integer x gives an exact zero (plain sin(M_PI * x) leaves ~1e-16 noise,
// which the 1/beta root inflates to ~1e-8 at beta = 2).
double sin_pi(double x) {
  double k = std::round(x);
  double r = x - k;
  double s = std::sin(M_PI * r);
  return static_cast<long long>(k) % 2 == 0 ? s : -s;
}

}  // namespace

double sigma_mu(double beta) {
  if (!(beta > 0.0 && beta <= 2.0))
    throw std::invalid_argument("beta must be in (0, 2]");
  double num = std::tgamma(1.0 + beta) * sin_pi(beta / 2.0);
  double den = std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
  return std::pow(num / den, 1.0 / beta);
}

LevyParams LevyParams::make(double beta) {
  LevyParams p;
  p.beta = beta;
  p.sigma_mu = levy::sigma_mu(beta);
  p.sigma_v = 1.0;
  return p;
}

double levy_step(const LevyParams& params, std::mt19937_64& rng) {
  std::normal_distribution<double> mu_dist(0.0, params.sigma_mu);
  std::normal_distribution<double> v_dist(0.0, params.sigma_v);
  double mu = mu_dist(rng);
  constexpr double kTiny = 1e-300;
  double v = 0.0;
  for (int i = 0; i < 64; ++i) {
    v = v_dist(rng);
    if (std::abs(v) > kTiny) break;
  }
  if (std::abs(v) <= kTiny) v = kTiny;
  return mu / std::pow(std::abs(v), 1.0 / params.beta);
}

double brownian_step(double v_min, double v_max, std::mt19937_64& rng) {
  if (!(v_min < v_max)) throw std::invalid_argument("require v_min < v_max");
  std::uniform_real_distribution<double> dist(v_min, v_max);
  return dist(rng);
}

double init_velocity(const LevyParams& params, double v_min, double v_max,
                     std::mt19937_64& rng) {
  double levy_draw = levy_step(params, rng);
  double brownian_draw = brownian_step(v_min, v_max, rng);
  return levy_draw > brownian_draw ? levy_draw : brownian_draw;
}

}  // namespace leap::levy
