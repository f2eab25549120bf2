#ifndef PAIRSPEC_POTENTIAL_HPP
#define PAIRSPEC_POTENTIAL_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pairspec/params.hpp"
#include "pairspec/quadrature.hpp"

namespace pairspec {
namespace potential {

/// V_theta(r) = min{1, v r^{-d/theta}}.
inline double eval_model(double theta, double v, double r, int d) {
  if (!(theta > 0) || !(v > 0)) throw std::invalid_argument("eval_model: theta, v > 0");
  if (r < 0) throw std::invalid_argument("eval_model: r >= 0");
  if (r == 0.0) return 1.0;
  return std::min(1.0, v * std::pow(r, -double(d) / theta));
}

/// Radial potential profile. Evaluation is through a closure so that shifted
/// or rescaled copies stay cheap; the kind tag and parameters are kept for
/// the closed-form branches (norms, distribution functions).
class Potential {
 public:
  enum class Kind { model_theta, gaussian, table, analytic };

  Potential() = default;

  static Potential model_theta(int d, double theta, double v) {
    Potential V;
    V.d_ = d;
    V.kind_ = Kind::model_theta;
    V.theta_ = theta;
    V.v_ = v;
    V.scale_ = std::pow(v, theta / d);  // crossover radius, V = 1 inside
    V.eval_ = [theta, v, d](double r) { return eval_model(theta, v, r, d); };
    V.max_ = 1.0;
    return V;
  }

  static Potential gaussian(int d, double amplitude, double width) {
    if (!(width > 0)) throw std::invalid_argument("gaussian: width > 0");
    Potential V;
    V.d_ = d;
    V.kind_ = Kind::gaussian;
    V.amp_ = amplitude;
    V.width_ = width;
    V.scale_ = width;
    V.eval_ = [amplitude, width](double r) {
      const double u = r / width;
      return amplitude * std::exp(-u * u);
    };
    V.max_ = std::abs(amplitude);
    return V;
  }

  static Potential analytic(int d, std::function<double(double)> f, double scale = 1.0,
                            double max_abs = 0.0) {
    Potential V;
    V.d_ = d;
    V.kind_ = Kind::analytic;
    V.scale_ = scale;
    V.eval_ = std::move(f);
    V.max_ = max_abs;
    return V;
  }

  /// Sampled radial table; log-linear interpolation between samples where the
  /// bracket is strictly positive (linear otherwise), zero beyond the last
  /// sample, constant head below the first.
  static Potential table(int d, std::vector<double> r, std::vector<double> val) {
    if (r.size() != val.size() || r.empty())
      throw std::invalid_argument("table: need matching non-empty samples");
    for (size_t i = 1; i < r.size(); ++i)
      if (!(r[i] > r[i - 1]))
        throw std::invalid_argument("table: radii must be strictly increasing");
    Potential V;
    V.d_ = d;
    V.kind_ = Kind::table;
    V.scale_ = r.back();
    V.max_ = 0.0;
    for (double x : val) V.max_ = std::max(V.max_, std::abs(x));
    auto rs = std::make_shared<std::vector<double>>(std::move(r));
    auto vs = std::make_shared<std::vector<double>>(std::move(val));
    V.eval_ = [rs, vs](double x) -> double {
      const auto& R = *rs;
      const auto& F = *vs;
      if (x > R.back()) return 0.0;
      if (x <= R.front()) return F.front();
      const auto it = std::upper_bound(R.begin(), R.end(), x);
      const size_t i = size_t(it - R.begin()) - 1;
      const double r0 = R[i], r1 = R[i + 1], f0 = F[i], f1 = F[i + 1];
      if (r0 > 0 && f0 > 0 && f1 > 0) {
        const double t = (std::log(x) - std::log(r0)) / (std::log(r1) - std::log(r0));
        return std::exp((1.0 - t) * std::log(f0) + t * std::log(f1));
      }
      const double t = (x - r0) / (r1 - r0);
      return (1.0 - t) * f0 + t * f1;
    };
    return V;
  }

  double operator()(double r) const { return eval_(r); }

  int d() const { return d_; }
  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  double weak_v() const { return v_; }
  double amplitude() const { return amp_; }
  double width() const { return width_; }
  /// Characteristic radius used to seed improper quadratures.
  double scale() const { return scale_ > 0 ? scale_ : 1.0; }
  /// Upper bound for |V| (exact for the built-in kinds).
  double max_abs() const { return max_; }

  bool has_model_params() const { return kind_ == Kind::model_theta; }

 private:
  int d_ = 3;
  Kind kind_ = Kind::analytic;
  std::function<double(double)> eval_ = [](double) { return 0.0; };
  double theta_ = 0, v_ = 0, amp_ = 0, width_ = 0;
  double scale_ = 1.0;
  double max_ = 0.0;
};

/// V multiplied by a constant factor (used by the distribution identity
/// nu_q(s) = Xi_p(s^{-2} V)).
inline Potential scale_amplitude(const Potential& V, double c) {
  return Potential::analytic(
      V.d(), [V, c](double r) { return c * V(r); }, V.scale(), std::abs(c) * V.max_abs());
}

/// V shifted down by a constant (layer-cake slices V - s p in the pair frame).
inline Potential shift_down(const Potential& V, double s) {
  return Potential::analytic(
      V.d(), [V, s](double r) { return V(r) - s; }, V.scale(), V.max_abs() + std::abs(s));
}

/// Pair-frame rescaling V_p(y) = p^{-1} V(p^{-1} y).
class ScaledPotential {
 public:
  ScaledPotential(Potential base, double p) : base_(std::move(base)), p_(p) {
    if (!(p > 0)) throw std::invalid_argument("ScaledPotential: p > 0");
  }
  double operator()(double y_radius) const { return base_(y_radius / p_) / p_; }
  const Potential& base() const { return base_; }
  double p() const { return p_; }
  double max_abs() const { return base_.max_abs() / p_; }

 private:
  Potential base_;
  double p_;
};

inline ScaledPotential scale_to_pair_frame(const Potential& V, double p) {
  return ScaledPotential(V, p);
}

/// L^q norm of a radial potential, (d om_d int |V|^q r^{d-1} dr)^{1/q}.
/// Throws DivergenceError when the tail fails to decay.
inline double lq_norm(const Potential& V, double q, double rel_tol = 1e-10) {
  if (!(q >= 1)) throw std::invalid_argument("lq_norm: q >= 1 required");
  const int d = V.d();
  auto f = [&](double r) { return std::pow(std::abs(V(r)), q) * std::pow(r, d - 1); };
  const double R0 = 4.0 * V.scale();
  quad::Result head = quad::adaptive(f, 0.0, R0, rel_tol);
  quad::Result tail = quad::to_infinity(f, R0, R0, rel_tol);
  const double total = head.value + tail.value;
  return std::pow(d * ball_volume(d) * total, 1.0 / q);
}

/// Raw integral int |V|^q dy (the norm to the q-th power).
inline double lq_integral(const Potential& V, double q, double rel_tol = 1e-10) {
  return std::pow(lq_norm(V, q, rel_tol), q);
}

/// Text format: whitespace-separated "r value" lines, radii strictly
/// increasing; '#' starts a comment line.
inline Potential load_radial_table(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_radial_table: cannot open " + path);
  std::vector<double> rs, vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    double r, v;
    if (!(ss >> r)) continue;  // blank
    if (!(ss >> v))
      throw std::runtime_error("load_radial_table: malformed line " + std::to_string(lineno));
    std::string extra;
    if (ss >> extra)
      throw std::runtime_error("load_radial_table: trailing tokens on line " +
                               std::to_string(lineno));
    rs.push_back(r);
    vs.push_back(v);
  }
  if (rs.empty()) throw std::runtime_error("load_radial_table: empty file " + path);
  return Potential::table(d, std::move(rs), std::move(vs));
}

/// Numerical check that |V| is nonincreasing beyond some radius (sampled).
inline bool radially_nonincreasing(const Potential& V, double r_max, int samples = 512) {
  double prev = std::abs(V(0.0));
  double tol = 1e-12 * (std::abs(V.max_abs()) + 1.0);
  for (int i = 1; i <= samples; ++i) {
    const double r = r_max * i / samples;
    const double cur = std::abs(V(r));
    if (cur > prev + tol) return false;
    prev = cur;
  }
  return true;
}

}  // namespace potential
}  // namespace pairspec

#endif
