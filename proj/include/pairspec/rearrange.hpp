#ifndef PAIRSPEC_REARRANGE_HPP
#define PAIRSPEC_REARRANGE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "pairspec/potential.hpp"
#include "pairspec/quadrature.hpp"

namespace pairspec {
namespace rearrange {

/// Power-law descriptor value = coeff * t^{-exponent} extending a sampled
/// monotone function beyond its grid.
struct PowerLaw {
  double coeff = 0;
  double exponent = 0;
};

/// Right-continuous step representation of a distribution function
/// nu(s) = measure{|f| > s}: nu(s) = nu[i] on [s[i], s[i+1]), zero at and
/// beyond the top threshold, and an optional power head for s below the grid
/// (unbounded-measure potentials).
struct DistributionFn {
  Eigen::VectorXd s;   // ascending thresholds
  Eigen::VectorXd nu;  // nonincreasing measures, nu[i] = nu(s[i])
  std::optional<PowerLaw> head;  // nu(s) for s < s[0]
  std::optional<PowerLaw> tail;  // nu(s) for s >= s[n-1] (unbounded functions)

  double operator()(double x) const {
    if (s.size() == 0) return 0.0;
    if (x < s[0]) {
      if (head) return head->coeff * std::pow(x, -head->exponent);
      return nu[0];
    }
    if (x >= s[s.size() - 1] && tail) return tail->coeff * std::pow(x, -tail->exponent);
    const double* b = s.data();
    const double* e = s.data() + s.size();
    const auto it = std::upper_bound(b, e, x);
    const Eigen::Index i = it - b - 1;
    return nu[i];
  }
};

/// Step representation of the nonincreasing rearrangement: f*(t) = f[i] on
/// [t[i-1], t[i]) with t[-1] = 0, plus an optional power head on [0, t_head)
/// and a tail descriptor (compact: zero beyond the grid; power law otherwise).
class RearrangedFn {
 public:
  Eigen::VectorXd t;  // ascending right endpoints, positive
  Eigen::VectorXd f;  // nonincreasing values on the intervals
  std::optional<PowerLaw> head;  // overrides f[0] on [0, t[0]) when set
  std::optional<PowerLaw> tail;  // f*(u) for u >= t[n-1]; nullopt = compact

  double operator()(double u) const {
    if (t.size() == 0) return 0.0;
    if (u < t[0]) {
      if (head) return head->coeff * std::pow(u, -head->exponent);
      return f[0];
    }
    if (u >= t[t.size() - 1]) {
      if (tail) return tail->coeff * std::pow(u, -tail->exponent);
      return 0.0;
    }
    const double* b = t.data();
    const double* e = t.data() + t.size();
    const auto it = std::upper_bound(b, e, u);
    return f[it - b];
  }

  /// int_0^T (f*)^q dt with T = +inf allowed (tail permitting).
  double moment(double q, double T = std::numeric_limits<double>::infinity()) const {
    double acc = 0;
    double prev = 0;
    const Eigen::Index n = t.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double hi = std::min(T, t[i]);
      if (hi <= prev) break;
      if (i == 0 && head) {
        acc += power_integral(*head, q, 0.0, hi);
      } else {
        acc += std::pow(f[i], q) * (hi - prev);
      }
      prev = hi;
    }
    if (T > prev && n > 0) {
      if (tail) acc += power_integral(*tail, q, prev, T);
      // compact tail contributes nothing
    }
    return acc;
  }

  /// Inverse step function; exact inverse of this representation. The power
  /// tail of f* becomes the small-s head of nu, a power head of f* becomes
  /// the large-s tail of nu.
  DistributionFn to_distribution() const {
    DistributionFn nu;
    std::vector<double> ss, nn;
    const Eigen::Index n = t.size();
    if (tail && tail->coeff > 0 && tail->exponent > 0) {
      nu.head = PowerLaw{std::pow(tail->coeff, 1.0 / tail->exponent), 1.0 / tail->exponent};
    } else {
      ss.push_back(0.0);
      nn.push_back(n > 0 ? t[n - 1] : 0.0);  // measure of the support
    }
    // threshold s = f[i]: measure {f* > s} = t[i-1]; plateaus keep the
    // smallest measure (the earliest interval carrying the value)
    for (Eigen::Index i = n - 1; i >= (head ? 1 : 0); --i) {
      const double s_val = f[i];
      const double measure = i > 0 ? t[i - 1] : 0.0;
      if (!ss.empty() && s_val == ss.back()) {
        nn.back() = measure;
        continue;
      }
      if (!ss.empty() && s_val < ss.back()) continue;
      ss.push_back(s_val);
      nn.push_back(measure);
    }
    if (head) {
      const double s_star = head->coeff * std::pow(t[0], -head->exponent);
      if (ss.empty() || s_star > ss.back()) {
        ss.push_back(s_star);
        nn.push_back(t[0]);
      }
      nu.tail = PowerLaw{std::pow(head->coeff, 1.0 / head->exponent), 1.0 / head->exponent};
    }
    nu.s = Eigen::Map<Eigen::VectorXd>(ss.data(), ss.size());
    nu.nu = Eigen::Map<Eigen::VectorXd>(nn.data(), nn.size());
    return nu;
  }

  static double power_integral(const PowerLaw& pl, double q, double a, double b) {
    // int_a^b (c u^{-alpha})^q du
    const double e = 1.0 - q * pl.exponent;
    const double cq = std::pow(pl.coeff, q);
    if (std::abs(e) < 1e-14) return cq * std::log(b / std::max(a, 1e-300));
    if (a == 0.0 && e < 0)
      throw DivergenceError("rearranged moment: head singularity too strong");
    if (!std::isfinite(b) && e > 0)
      throw DivergenceError("rearranged moment: tail does not decay fast enough");
    const double hi = std::isfinite(b) ? std::pow(b, e) : 0.0;
    const double lo = a > 0 ? std::pow(a, e) : 0.0;
    return cq * (hi - lo) / e;
  }
};

/// Distribution function of a radial potential on a threshold grid:
/// nu(s) = om_d r(s)^d with r(s) the level radius found by bisection
/// (closed form for the model family).
inline DistributionFn distribution_fn(const potential::Potential& V,
                                      const Eigen::VectorXd& s_grid) {
  const int d = V.d();
  const double om = ball_volume(d);
  DistributionFn out;
  out.s = s_grid;
  out.nu.resize(s_grid.size());
  const bool model = V.kind() == potential::Potential::Kind::model_theta;
  double r_hi_seed = 4.0 * V.scale();
  if (!model && !potential::radially_nonincreasing(V, 64.0 * V.scale()))
    throw std::invalid_argument("distribution_fn: potential must be radially nonincreasing");
  for (Eigen::Index i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    if (!(s > 0)) throw std::invalid_argument("distribution_fn: thresholds must be > 0");
    double r;
    if (model) {
      r = s >= 1.0 ? 0.0 : std::pow(V.weak_v() / s, V.theta() / d);
    } else if (V(0.0) <= s) {
      r = 0.0;
    } else {
      double lo = 0.0, hi = r_hi_seed;
      int guard = 0;
      while (V(hi) > s) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 400)
          throw std::runtime_error("distribution_fn: level radius not bracketable");
      }
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (V(mid) > s ? lo : hi) = mid;
      }
      r = 0.5 * (lo + hi);
    }
    out.nu[i] = om * std::pow(r, d);
  }
  // model family: attach the exact power head nu(s) = om_d (v/s)^theta
  if (model && s_grid[0] < 1.0)
    out.head = PowerLaw{om * std::pow(V.weak_v(), V.theta()), V.theta()};
  return out;
}

/// Generalized inverse f*(t) = inf{s : nu(s) <= t}. Tail and head power laws
/// of the output are the exact inverses of the input descriptors where
/// present; otherwise the tail is fitted on the last decade of samples.
inline RearrangedFn rearrangement(const DistributionFn& nu) {
  RearrangedFn out;
  const Eigen::Index n = nu.s.size();
  if (n == 0) return out;
  std::vector<double> ts, fs;
  // pieces from the top threshold downward: on t in [nu[i], nu[i-1]) the
  // inverse equals s[i]
  for (Eigen::Index i = n - 1; i >= 1; --i) {
    const double lo = nu.nu[i];
    const double hi = nu.nu[i - 1];
    if (hi > lo) {
      ts.push_back(hi);
      fs.push_back(nu.s[i]);
    }
  }
  std::reverse(ts.begin(), ts.end());
  std::reverse(fs.begin(), fs.end());
  out.t = Eigen::Map<Eigen::VectorXd>(ts.data(), ts.size());
  out.f = Eigen::Map<Eigen::VectorXd>(fs.data(), fs.size());
  if (nu.head) {
    // nu(s) = C s^{-beta} below the grid inverts to f*(t) = (C/t)^{1/beta}
    out.tail = PowerLaw{std::pow(nu.head->coeff, 1.0 / nu.head->exponent),
                        1.0 / nu.head->exponent};
  } else if (out.t.size() >= 4) {
    // least-squares log-log fit on the last decade of samples
    const double t_end = out.t[out.t.size() - 1];
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (Eigen::Index i = 0; i < out.t.size(); ++i) {
      if (out.t[i] >= 0.1 * t_end && out.f[i] > 0) {
        const double x = std::log(out.t[i]), y = std::log(out.f[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
      }
    }
    if (m >= 3 && nu.nu[n - 1] > 0) {
      const double det = m * sxx - sx * sx;
      if (std::abs(det) > 1e-12) {
        const double slope = (m * sxy - sx * sy) / det;
        const double inter = (sy - slope * sx) / m;
        out.tail = PowerLaw{std::exp(inter), -slope};
      }
    }
    // nu reaching zero means compact support: leave tail empty
  }
  return out;
}

/// Weak Lorentz quasi-norm sup_t t^{1/q} f*(t).
inline double weak_quasinorm(const RearrangedFn& f, double q) {
  if (!(q > 0)) throw std::invalid_argument("weak_quasinorm: q > 0");
  const double iq = 1.0 / q;
  double best = 0;
  if (f.head) {
    if (f.head->exponent > iq + 1e-12)
      throw DivergenceError("weak_quasinorm: head exponent steeper than -1/q");
    best = std::max(best, f.head->coeff * std::pow(f.t[0], iq - f.head->exponent));
    if (std::abs(f.head->exponent - iq) < 1e-12) best = std::max(best, f.head->coeff);
  }
  double prev = 0;
  for (Eigen::Index i = 0; i < f.t.size(); ++i) {
    if (i == 0 && f.head) { prev = f.t[0]; continue; }
    best = std::max(best, std::pow(f.t[i], iq) * f.f[i]);
    prev = f.t[i];
  }
  (void)prev;
  if (f.tail) {
    if (f.tail->exponent < iq - 1e-12)
      throw DivergenceError("weak_quasinorm: tail exponent shallower than -1/q");
    if (std::abs(f.tail->exponent - iq) < 1e-12) best = std::max(best, f.tail->coeff);
    else
      best = std::max(best,
                      f.tail->coeff * std::pow(f.t[f.t.size() - 1], iq - f.tail->exponent));
  }
  return best;
}

/// Asymptotic functionals (liminf, limsup of t^{1/q} f*(t) as t -> inf),
/// evaluated from the tail descriptor; when the fitted tail is critical
/// (exponent within 2% of 1/q) the spread of the last two sample decades
/// resolves oscillating tails with liminf < limsup.
inline std::pair<double, double> asym_functionals(const RearrangedFn& f, double q) {
  if (!(q > 0)) throw std::invalid_argument("asym_functionals: q > 0");
  const double iq = 1.0 / q;
  if (!f.tail) return {0.0, 0.0};
  const double rel = (f.tail->exponent - iq) * q;
  if (rel > 0.02) return {0.0, 0.0};
  if (rel < -0.02)
    throw DivergenceError("asym_functionals: tail shallower than -1/q, functionals infinite");
  // critical tail: scan the last two decades of samples
  const double t_end = f.t[f.t.size() - 1];
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Eigen::Index i = 0; i < f.t.size(); ++i) {
    if (f.t[i] >= 0.01 * t_end) {
      const double g = std::pow(f.t[i], iq) * f.f[i];
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
  }
  const double g_tail = f.tail->coeff;  // limit value when exponent == 1/q
  lo = std::min(lo, g_tail);
  hi = std::max(hi, g_tail);
  return {lo, hi};
}

/// Modified Cwikel average <q>(t_hat), evaluated through both the direct
/// mean-square form and the integration-by-parts form; the two must agree,
/// and the parts form is returned.
inline double q_average(const DistributionFn& nu, const RearrangedFn& q_star, double t_hat,
                        double agree_tol = 1e-8) {
  if (!(t_hat > 0)) throw std::invalid_argument("q_average: t_hat > 0");
  // direct form
  const double direct2 = q_star.moment(2.0, t_hat) / t_hat;
  // parts form
  const double qt = q_star(t_hat);
  double tail_int = 0;  // int_{qt}^inf s nu(s) ds
  const Eigen::Index n = nu.s.size();
  auto power_piece = [](const PowerLaw& pl, double a, double b) -> double {
    // int_a^b s * coeff s^{-beta} ds, b = inf allowed when beta > 2
    const double e = 2.0 - pl.exponent;
    if (std::abs(e) < 1e-14) return pl.coeff * std::log(b / a);
    if (!std::isfinite(b)) {
      if (e >= 0) throw DivergenceError("q_average: s nu(s) non-integrable at infinity");
      return -pl.coeff * std::pow(a, e) / e;
    }
    if (a <= 0.0 && e <= 0)
      throw DivergenceError("q_average: s nu(s) non-integrable at zero");
    return pl.coeff * (std::pow(b, e) - (a > 0 ? std::pow(a, e) : 0.0)) / e;
  };
  if (nu.head && qt < nu.s[0]) tail_int += power_piece(*nu.head, qt, nu.s[0]);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double a = std::max(nu.s[i], qt);
    const double b = nu.s[i + 1];
    if (b > a) tail_int += nu.nu[i] * 0.5 * (b * b - a * a);
  }
  if (nu.tail) {
    const double a = std::max(n > 0 ? nu.s[n - 1] : 0.0, qt);
    tail_int += power_piece(*nu.tail, a, std::numeric_limits<double>::infinity());
  } else if (n > 0 && nu.nu[n - 1] > 0) {
    throw std::invalid_argument("q_average: distribution grid must reach the essential sup");
  }
  const double parts2 = qt * qt + 2.0 / t_hat * tail_int;
  const double scale = std::max({direct2, parts2, 1e-300});
  if (std::abs(direct2 - parts2) > agree_tol * scale)
    throw std::runtime_error("q_average: direct and parts forms disagree");
  return std::sqrt(parts2);
}

/// Convenience overload deriving the distribution from the rearrangement.
inline double q_average(const RearrangedFn& q_star, double t_hat, double tol = 1e-8) {
  return q_average(q_star.to_distribution(), q_star, t_hat, tol);
}

}  // namespace rearrange
}  // namespace pairspec

#endif
