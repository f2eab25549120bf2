#ifndef PAIRSPEC_MOLLIFIER_HPP
#define PAIRSPEC_MOLLIFIER_HPP

#include <cmath>
#include <stdexcept>

#include "pairspec/params.hpp"
#include "pairspec/quadrature.hpp"

namespace pairspec {

/// Spherically symmetric C^inf bump profile exp(-1/(1-rho^2)) on rho < 1,
/// in two normalizations: unit mass (the smoothing weight g) and unit L^2
/// norm (the coherent-state envelope f, which also carries the moments
/// ||x f||_2 and ||grad f||_2 needed by the phase-space shift kappa).
struct Mollifier {
  enum class Kind { symbol_bump, coherent_bump };

  Kind kind = Kind::symbol_bump;
  int d = 0;
  double norm_c = 0;       // profile prefactor fixing the normalization
  double x_moment = 0;     // ||x f||_{L^2}, coherent bump only
  double grad_moment = 0;  // ||grad f||_{L^2}, coherent bump only

  /// Profile value at radius rho (0 outside the unit ball).
  double density(double rho) const {
    if (rho >= 1.0) return 0.0;
    const double e = std::exp(-1.0 / (1.0 - rho * rho));
    return norm_c * e;
  }

  /// Quadrature of rho^k * density^pow over the unit ball (radial measure).
  static double radial_moment(int d, int k, double pow_exp) {
    auto f = [&](double rho) {
      const double e = std::exp(-pow_exp / (1.0 - rho * rho));
      if (e == 0.0) return 0.0;
      return std::pow(rho, k + d - 1) * e;
    };
    return d * ball_volume(d) * quad::adaptive(f, 0.0, 1.0, 1e-13).value;
  }

  static Mollifier symbol_bump(int d) {
    Mollifier m;
    m.kind = Kind::symbol_bump;
    m.d = d;
    m.norm_c = 1.0 / radial_moment(d, 0, 1.0);  // unit mass
    return m;
  }

  static Mollifier coherent_bump(int d) {
    Mollifier m;
    m.kind = Kind::coherent_bump;
    m.d = d;
    m.norm_c = 1.0 / std::sqrt(radial_moment(d, 0, 2.0));  // unit L^2 norm
    m.x_moment = m.norm_c * std::sqrt(radial_moment(d, 2, 2.0));
    // |grad f| = f * 2 rho / (1-rho^2)^2
    auto g2 = [&](double rho) {
      const double e = std::exp(-2.0 / (1.0 - rho * rho));
      if (e == 0.0) return 0.0;
      const double u = 2.0 * rho / ((1.0 - rho * rho) * (1.0 - rho * rho));
      return u * u * e * std::pow(rho, d - 1);
    };
    m.grad_moment =
        m.norm_c * std::sqrt(d * ball_volume(d) * quad::adaptive(g2, 0.0, 1.0, 1e-13).value);
    return m;
  }
};

}  // namespace pairspec

#endif
