#ifndef PAIRSPEC_QUADRATURE_HPP
#define PAIRSPEC_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace pairspec {

/// Thrown when an improper integral is detected to diverge at the configured
/// truncation thresholds.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

namespace quad {

struct Rule {
  Eigen::VectorXd x;  // nodes on [-1, 1]
  Eigen::VectorXd w;  // weights
};

/// Gauss-Legendre rule via Golub-Welsch on the Jacobi matrix.
inline Rule gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  r.x = es.eigenvalues();
  r.w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return r;
}

inline const Rule& gl7() {
  static const Rule r = gauss_legendre(7);
  return r;
}
inline const Rule& gl15() {
  static const Rule r = gauss_legendre(15);
  return r;
}
inline const Rule& gl32() {
  static const Rule r = gauss_legendre(32);
  return r;
}

template <class F>
double fixed_gl(const F& f, double a, double b, const Rule& r) {
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + hl * r.x[i]);
  return hl * s;
}

struct Result {
  double value = 0;
  double error = 0;      // absolute error estimate
  long evaluations = 0;  // integrand evaluations
};

namespace detail {

template <class F>
void adapt_rec(const F& f, double a, double b, double whole, double tol_abs, int depth,
               Result& out) {
  const double mid = 0.5 * (a + b);
  const double left = fixed_gl(f, a, mid, gl15());
  const double right = fixed_gl(f, mid, b, gl15());
  out.evaluations += 30;
  const double delta = left + right - whole;
  if (std::abs(delta) <= tol_abs || depth >= 48) {
    out.value += left + right;
    out.error += std::abs(delta);
    return;
  }
  adapt_rec(f, a, mid, left, 0.5 * tol_abs, depth + 1, out);
  adapt_rec(f, mid, b, right, 0.5 * tol_abs, depth + 1, out);
}

}  // namespace detail

/// Adaptive Gauss quadrature on a finite interval. The tolerance is relative
/// to the accumulated integral, with an absolute floor for integrals near 0.
template <class F>
Result adaptive(const F& f, double a, double b, double rel_tol = 1e-10,
                double abs_floor = 0.0) {
  Result out;
  if (a == b) return out;
  const double whole = fixed_gl(f, a, b, gl15());
  out.evaluations = 15;
  const double probe = fixed_gl(f, a, b, gl7());
  out.evaluations += 7;
  double scale = std::max(std::abs(whole), std::abs(probe));
  double tol_abs = std::max(rel_tol * scale, abs_floor);
  if (tol_abs == 0.0) tol_abs = std::numeric_limits<double>::min();
  detail::adapt_rec(f, a, b, whole, tol_abs, 0, out);
  return out;
}

/// Integral over [a, infinity) for integrands with eventually power-law decay.
/// Panels grow geometrically; after the panel contributions fall below the
/// tolerance the remainder is bounded by a geometric tail fitted to the last
/// panels and added to the error estimate. A tail whose fitted panel ratio
/// does not decay signals divergence.
template <class F>
Result to_infinity(const F& f, double a, double scale0, double rel_tol = 1e-10) {
  Result out;
  double lo = a;
  double width = std::max(scale0, 1e-300);
  double prev_panel = std::numeric_limits<double>::quiet_NaN();
  int flat_panels = 0;
  for (int k = 0; k < 4000; ++k) {
    const double hi = lo + width;
    Result panel = adaptive(f, lo, hi, rel_tol);
    out.value += panel.value;
    out.error += panel.error;
    out.evaluations += panel.evaluations;
    const double ap = std::abs(panel.value);
    if (!std::isnan(prev_panel) && prev_panel > 0) {
      const double ratio = ap / prev_panel;
      if (ratio >= 0.999 && ap > 1e-13 * std::abs(out.value)) {
        if (++flat_panels >= 12)
          throw DivergenceError("to_infinity: integrand tail does not decay");
      } else {
        flat_panels = 0;
      }
      if (ap <= rel_tol * std::abs(out.value) && ratio < 0.9) {
        out.error += ap * ratio / (1.0 - ratio);  // geometric tail bound
        return out;
      }
    }
    if (ap == 0.0 && k > 2 && prev_panel == 0.0) return out;
    prev_panel = ap;
    lo = hi;
    width *= 2.0;
  }
  throw DivergenceError("to_infinity: no convergence within panel budget");
}

}  // namespace quad
}  // namespace pairspec

#endif
