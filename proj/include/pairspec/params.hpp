#ifndef PAIRSPEC_PARAMS_HPP
#define PAIRSPEC_PARAMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace pairspec {

/// Momentum vector xi = (eta, zeta) with xi[0] = eta and xi.tail(d-1) = zeta.
using Momentum = Eigen::VectorXd;

/// Volume of the unit ball in R^d.
inline double ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("ball_volume: d must be >= 1");
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// Mass pair and total momentum of the two-body system, together with the
/// derived dimensionless quantities used throughout the symbol family.
struct PhysParams {
  double m_plus = 0;   // mass of the "+" particle, > 0
  double m_minus = 0;  // mass of the "-" particle, > 0
  double p = 0;        // total momentum magnitude, > 0

  double M = 0;         // m_plus + m_minus
  double mu_plus = 0;   // m_plus / M
  double mu_minus = 0;  // m_minus / M
  double tau = 0;       // M / p
  double mu_tilde = 0;  // (mu_minus - mu_plus) / 2
  double mu_hat = 0;    // 1 - 4 mu_tilde^2, in (0, 1]

  static PhysParams from_masses(double m_plus, double m_minus, double p) {
    if (!(m_plus > 0) || !(m_minus > 0))
      throw std::invalid_argument("PhysParams: masses must be positive");
    if (!(p > 0)) throw std::invalid_argument("PhysParams: p must be positive");
    PhysParams par;
    par.m_plus = m_plus;
    par.m_minus = m_minus;
    par.p = p;
    par.M = m_plus + m_minus;
    par.mu_plus = m_plus / par.M;
    par.mu_minus = m_minus / par.M;
    par.tau = par.M / p;
    par.mu_tilde = 0.5 * (par.mu_minus - par.mu_plus);
    par.mu_hat = 1.0 - 4.0 * par.mu_tilde * par.mu_tilde;
    return par;
  }

  /// Convenience constructor from the reduced quantities (mu_plus, tau); the
  /// absolute mass scale is fixed by p.
  static PhysParams from_reduced(double mu_plus, double tau, double p) {
    if (!(mu_plus > 0) || !(mu_plus < 1))
      throw std::invalid_argument("PhysParams: mu_plus must lie in (0,1)");
    if (!(tau > 0)) throw std::invalid_argument("PhysParams: tau must be positive");
    const double M = tau * p;
    return from_masses(mu_plus * M, (1.0 - mu_plus) * M, p);
  }

  /// Minimum point of T_+ resp. T_-: (+mu_plus, 0, ...) resp. (-mu_minus, 0, ...).
  Momentum e_plus(int d) const {
    Momentum e = Momentum::Zero(d);
    e[0] = mu_plus;
    return e;
  }
  Momentum e_minus(int d) const {
    Momentum e = Momentum::Zero(d);
    e[0] = -mu_minus;
    return e;
  }

  /// Several estimates assume the regime tau = M/p <= 1; callers that depend
  /// on it reject the parameter set otherwise.
  void require_regime() const {
    if (tau > 1.0)
      throw std::domain_error("PhysParams: regime tau = M/p <= 1 required, got tau = " +
                              std::to_string(tau));
  }
};

}  // namespace pairspec

#endif
