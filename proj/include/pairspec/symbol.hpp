#ifndef PAIRSPEC_SYMBOL_HPP
#define PAIRSPEC_SYMBOL_HPP

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

#include "pairspec/mollifier.hpp"
#include "pairspec/params.hpp"
#include "pairspec/quadrature.hpp"

namespace pairspec {
namespace symbol {

enum class Sign { plus, minus };

/// T_pm(xi) = sqrt((eta -+ mu_pm)^2 + |zeta|^2 + mu_pm^2 tau^2).
/// Lower bound mu_pm * tau, attained at e_pm.
template <class Derived>
typename Derived::Scalar kinetic_t(Sign s, const Eigen::MatrixBase<Derived>& xi,
                                   const PhysParams& par) {
  using S = typename Derived::Scalar;
  if (xi.size() < 1) throw std::invalid_argument("kinetic_t: xi must have dimension >= 1");
  const S mu = S(s == Sign::plus ? par.mu_plus : par.mu_minus);
  const S eta = xi[0];
  const S shifted = (s == Sign::plus) ? eta - mu : eta + mu;
  S z2 = S(0);
  for (Eigen::Index i = 1; i < xi.size(); ++i) z2 += xi[i] * xi[i];
  const S m2 = mu * mu * S(par.tau) * S(par.tau);
  using std::sqrt;
  return sqrt(shifted * shifted + z2 + m2);
}

/// Kinetic symbol H_p(xi) = T_+ + T_- - sqrt(1 + tau^2); nonnegative, convex,
/// rotationally symmetric in zeta, with its unique zero at xi = 0.
template <class Derived>
typename Derived::Scalar h(const Eigen::MatrixBase<Derived>& xi, const PhysParams& par) {
  using S = typename Derived::Scalar;
  using std::sqrt;
  const S rest = sqrt(S(1) + S(par.tau) * S(par.tau));
  return kinetic_t(Sign::plus, xi, par) + kinetic_t(Sign::minus, xi, par) - rest;
}

/// Massless limit |e_+ - xi| + |e_- - xi| - 1: zero exactly on the segment
/// [e_-, e_+] (the printed constant -2 is inconsistent with |e_+ - e_-| = 1).
template <class Derived>
typename Derived::Scalar h_massless(const Eigen::MatrixBase<Derived>& xi,
                                    const PhysParams& par) {
  using S = typename Derived::Scalar;
  using std::sqrt;
  S z2 = S(0);
  for (Eigen::Index i = 1; i < xi.size(); ++i) z2 += xi[i] * xi[i];
  const S dp = xi[0] - S(par.mu_plus);
  const S dm = xi[0] + S(par.mu_minus);
  return sqrt(dp * dp + z2) + sqrt(dm * dm + z2) - S(1);
}

/// Dilated symbol G_{p,delta}(xi) = H_p((1-delta) eta, zeta).
template <class Derived>
typename Derived::Scalar g_delta(const Eigen::MatrixBase<Derived>& xi, double delta,
                                 const PhysParams& par) {
  if (!(delta > 0.0) && delta != 0.0)
    throw std::invalid_argument("g_delta: delta must be in [0, 1/2)");
  if (delta < 0.0 || delta >= 0.5)
    throw std::invalid_argument("g_delta: delta must be in [0, 1/2)");
  using S = typename Derived::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, 1> y = xi;
  y[0] *= (S(1) - S(delta));
  return h(y, par);
}

enum class ScaleVariant { plain, dilated };

/// Admissible upper limit for the mollification radius r.
inline double max_scale_radius(const PhysParams& par, ScaleVariant v) {
  const double m = std::min(par.mu_plus, par.mu_minus);
  return v == ScaleVariant::plain ? 0.5 * m : m;
}

/// Position-dependent mollification scale sigma_r(xi): zero outside the balls
/// B_r^{+-} around the conical points, r * exp(-1/(1 - (tau_pm/r)^2)) inside.
/// The dilated variant centers the balls at e_{pm,delta} = e_pm / (1-delta).
inline double mollifier_scale(const Eigen::Ref<const Momentum>& xi, double r,
                              const PhysParams& par, ScaleVariant variant,
                              double delta = 0.0) {
  if (!(r > 0) || r >= max_scale_radius(par, variant))
    throw std::invalid_argument("mollifier_scale: r out of admissible range");
  if (variant == ScaleVariant::dilated && (delta <= 0.0 || delta >= 0.5))
    throw std::invalid_argument("mollifier_scale: dilated variant needs delta in (0,1/2)");
  const double stretch = variant == ScaleVariant::dilated ? 1.0 / (1.0 - delta) : 1.0;
  double z2 = xi.size() > 1 ? xi.tail(xi.size() - 1).squaredNorm() : 0.0;
  double best = 0.0;
  for (const double center : {par.mu_plus * stretch, -par.mu_minus * stretch}) {
    const double de = xi[0] - center;
    const double t2 = de * de + z2;
    if (t2 < r * r) {
      const double x2 = t2 / (r * r);
      best = std::max(best, r * std::exp(-1.0 / (1.0 - x2)));
    }
  }
  return best;
}

enum class SmoothMode { h_smoothed, g_smoothed };

namespace detail {

/// Convolution of a radial-in-zeta symbol with the mass-1 bump at scale sigma:
/// integral over the unit ball of f(xi - sigma t) g(t) dt. The rotational
/// symmetry of the symbols in zeta reduces the angular integral to one
/// azimuthal angle; the radial integral is split at the sphere through the
/// nearest conical point, where the integrand loses smoothness.
template <class F>
double ball_convolution(const F& f, const Eigen::Ref<const Momentum>& xi, double sigma,
                        const Mollifier& g, double cone_rho) {
  const int d = static_cast<int>(xi.size());
  const auto& rad = quad::gl32();
  static const quad::Rule pol = quad::gauss_legendre(20);
  constexpr int n_phi = 24;  // trapezoid on the periodic azimuth

  const double znorm = xi.size() > 1 ? xi.tail(d - 1).norm() : 0.0;

  auto shell_mean = [&](double rho) -> double {
    // plain average of f over the sphere |t| = rho
    if (d == 1) {
      return 0.5 * (f(xi[0] - sigma * rho, 0.0) + f(xi[0] + sigma * rho, 0.0));
    }
    if (d == 2) {
      double acc = 0.0;
      for (int j = 0; j < n_phi; ++j) {
        const double th = 2.0 * M_PI * (j + 0.5) / n_phi;
        acc += f(xi[0] - sigma * rho * std::cos(th),
                 std::abs(znorm - sigma * rho * std::sin(th)));
      }
      return acc / n_phi;
    }
    // d = 3: polar axis along eta; cos(theta) uniform on [-1,1] under the
    // surface measure, azimuth handled by trapezoid.
    double acc = 0.0;
    for (int i = 0; i < pol.x.size(); ++i) {
      const double c = pol.x[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      const double eta = xi[0] - sigma * rho * c;
      double inner = 0.0;
      for (int j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * M_PI * (j + 0.5) / n_phi;
        const double zz = std::hypot(znorm - sigma * rho * s * std::cos(phi),
                                     sigma * rho * s * std::sin(phi));
        inner += f(eta, zz);
      }
      acc += pol.w[i] * inner / n_phi;
    }
    return 0.5 * acc;
  };

  auto radial = [&](double lo, double hi) -> double {
    double s = 0.0;
    const double c = 0.5 * (lo + hi), hl = 0.5 * (hi - lo);
    for (int i = 0; i < rad.x.size(); ++i) {
      const double rho = c + hl * rad.x[i];
      const double surf = (d == 1) ? 2.0 : d * ball_volume(d) * std::pow(rho, d - 1);
      s += rad.w[i] * surf * g.density(rho) * shell_mean(rho);
    }
    return hl * s;
  };

  if (cone_rho > 1e-12 && cone_rho < 1.0 - 1e-12)
    return radial(0.0, cone_rho) + radial(cone_rho, 1.0);
  return radial(0.0, 1.0);
}

}  // namespace detail

/// Mollified symbol H_{p,sigma}(xi) (h_smoothed) or G_{p,delta,sigma_r}(xi)
/// (g_smoothed). Where sigma_r vanishes the unsmoothed symbol is returned
/// exactly; inside the balls the convolution with the mass-1 bump is
/// evaluated by product Gauss rules over the unit ball.
inline double smooth_symbol(const Eigen::Ref<const Momentum>& xi, double r,
                            const PhysParams& par, SmoothMode mode, const Mollifier& g,
                            double quad_tol = 1e-8, double delta = 0.0) {
  if (g.kind != Mollifier::Kind::symbol_bump)
    throw std::invalid_argument("smooth_symbol: needs the mass-1 symbol bump");
  (void)quad_tol;  // fixed product rules exceed the default tolerance
  const int d = static_cast<int>(xi.size());
  const ScaleVariant var =
      mode == SmoothMode::h_smoothed ? ScaleVariant::plain : ScaleVariant::dilated;
  const double sigma = mollifier_scale(xi, r, par, var, delta);

  auto base = [&](double eta, double zabs) -> double {
    Momentum y = Momentum::Zero(d);
    y[0] = eta;
    if (d > 1) y[1] = zabs;
    return mode == SmoothMode::h_smoothed ? h(y, par) : g_delta(y, delta, par);
  };
  if (sigma == 0.0) {
    const double zn = d > 1 ? xi.tail(d - 1).norm() : 0.0;
    return base(xi[0], zn);
  }

  // distance from xi to the nearest conical point of the convolved symbol,
  // in units of sigma (the integrand kinks on that sphere when < 1)
  const double stretch = mode == SmoothMode::g_smoothed ? 1.0 / (1.0 - delta) : 1.0;
  const double z2 = d > 1 ? xi.tail(d - 1).squaredNorm() : 0.0;
  double cone = std::numeric_limits<double>::infinity();
  for (const double c : {par.mu_plus * stretch, -par.mu_minus * stretch}) {
    const double de = xi[0] - c;
    cone = std::min(cone, std::sqrt(de * de + z2));
  }
  return detail::ball_convolution(base, xi, sigma, g, cone / sigma);
}

struct WindowCheck {
  bool in_window = false;        // xi in W(nu, p) = {|eta| >= 3p} U {|zeta|^2 >= nu p}
  bool inequality_holds = true;  // value >= nu / (2 sqrt(3)) whenever in_window
  double value = 0;              // p * H_p(xi / p), the unrescaled kinetic symbol
};

/// Momentum-window lower bound for the unrescaled kinetic symbol. The check
/// works with the rescaled H_p, so the symbol is evaluated at xi/p and
/// multiplied back by p.
inline WindowCheck momentum_window_check(const Eigen::Ref<const Momentum>& xi, double nu,
                                         const PhysParams& par) {
  if (!(par.p >= nu && nu >= par.M))
    throw std::invalid_argument("momentum_window_check: requires p >= nu >= M");
  WindowCheck out;
  const double eta = std::abs(xi[0]);
  const double z2 = xi.size() > 1 ? xi.tail(xi.size() - 1).squaredNorm() : 0.0;
  out.in_window = (eta >= 3.0 * par.p) || (z2 >= nu * par.p);
  out.value = par.p * h((xi / par.p).eval(), par);
  if (out.in_window) out.inequality_holds = out.value >= nu / (2.0 * std::sqrt(3.0));
  return out;
}

}  // namespace symbol
}  // namespace pairspec

#endif
