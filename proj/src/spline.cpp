#include "lmpcc/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmpcc {

namespace {

constexpr int kSubdivisions = 8;  // inversion-table nodes per segment

// 5-point Gauss-Legendre on [-1, 1].
constexpr double kGlNode[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
constexpr double kGlWeight[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};

// Natural cubic spline through (t_i, y_i): returns per-segment coefficients
// y(t) = a + b u + c u^2 + d u^3 with u = t - t_i.
void natural_cubic(const std::vector<double>& t, const std::vector<double>& y,
                   std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                   std::vector<double>& d) {
  const int n = static_cast<int>(t.size());
  std::vector<double> h(n - 1);
  for (int i = 0; i < n - 1; ++i) h[i] = t[i + 1] - t[i];

  // Tridiagonal solve for second derivatives M, natural boundary M0 = Mn-1 = 0.
  std::vector<double> diag(n, 2.0), upper(n, 0.0), rhs(n, 0.0), M(n, 0.0);
  std::vector<double> lower(n, 0.0);
  for (int i = 1; i < n - 1; ++i) {
    lower[i] = h[i - 1] / 6.0;
    diag[i] = (h[i - 1] + h[i]) / 3.0;
    upper[i] = h[i] / 6.0;
    rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
  }
  diag[0] = diag[n - 1] = 1.0;
  // Forward elimination over the interior rows.
  for (int i = 2; i < n - 1; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (int i = n - 2; i >= 1; --i) M[i] = (rhs[i] - upper[i] * M[i + 1]) / diag[i];

  a.resize(n - 1);
  b.resize(n - 1);
  c.resize(n - 1);
  d.resize(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    a[i] = y[i];
    b[i] = (y[i + 1] - y[i]) / h[i] - h[i] * (2.0 * M[i] + M[i + 1]) / 6.0;
    c[i] = M[i] / 2.0;
    d[i] = (M[i + 1] - M[i]) / (6.0 * h[i]);
  }
}

}  // namespace

PathSpline PathSpline::build(const std::vector<Eigen::Vector2d>& waypoints) {
  if (waypoints.size() < 4)
    throw std::invalid_argument("PathSpline: need at least 4 waypoints");
  for (size_t i = 1; i < waypoints.size(); ++i) {
    if ((waypoints[i] - waypoints[i - 1]).norm() < 1e-9)
      throw std::invalid_argument("PathSpline: duplicate consecutive waypoints");
  }

  PathSpline sp;
  const int n = static_cast<int>(waypoints.size());
  sp.knots_.resize(n);
  sp.knots_[0] = 0.0;
  for (int i = 1; i < n; ++i)
    sp.knots_[i] = sp.knots_[i - 1] + (waypoints[i] - waypoints[i - 1]).norm();

  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = waypoints[i].x();
    ys[i] = waypoints[i].y();
  }
  natural_cubic(sp.knots_, xs, sp.ax_, sp.bx_, sp.cx_, sp.dx_);
  natural_cubic(sp.knots_, ys, sp.ay_, sp.by_, sp.cy_, sp.dy_);

  // Cumulative arc length on a refined grid, for inverting s(t).
  sp.sub_t_.push_back(sp.knots_.front());
  sp.sub_s_.push_back(0.0);
  for (int i = 0; i < n - 1; ++i) {
    const double t0 = sp.knots_[i];
    const double t1 = sp.knots_[i + 1];
    for (int j = 1; j <= kSubdivisions; ++j) {
      const double ta = t0 + (t1 - t0) * (j - 1) / kSubdivisions;
      const double tb = t0 + (t1 - t0) * j / kSubdivisions;
      sp.sub_s_.push_back(sp.sub_s_.back() + sp.arc_between(ta, tb));
      sp.sub_t_.push_back(tb);
    }
  }
  sp.total_length_ = sp.sub_s_.back();
  return sp;
}

Eigen::Vector2d PathSpline::point_at(double t) const {
  const int n = static_cast<int>(knots_.size());
  int i = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  const double u = t - knots_[i];
  return {((dx_[i] * u + cx_[i]) * u + bx_[i]) * u + ax_[i],
          ((dy_[i] * u + cy_[i]) * u + by_[i]) * u + ay_[i]};
}

Eigen::Vector2d PathSpline::deriv_at(double t) const {
  const int n = static_cast<int>(knots_.size());
  int i = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  const double u = t - knots_[i];
  return {(3.0 * dx_[i] * u + 2.0 * cx_[i]) * u + bx_[i],
          (3.0 * dy_[i] * u + 2.0 * cy_[i]) * u + by_[i]};
}

Eigen::Vector2d PathSpline::deriv2_at(double t) const {
  const int n = static_cast<int>(knots_.size());
  int i = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  const double u = t - knots_[i];
  return {6.0 * dx_[i] * u + 2.0 * cx_[i], 6.0 * dy_[i] * u + 2.0 * cy_[i]};
}

double PathSpline::speed_at(double t) const { return deriv_at(t).norm(); }

double PathSpline::arc_between(double t0, double t1) const {
  const double mid = 0.5 * (t0 + t1);
  const double half = 0.5 * (t1 - t0);
  double acc = 0.0;
  for (int k = 0; k < 5; ++k) acc += kGlWeight[k] * speed_at(mid + half * kGlNode[k]);
  return acc * half;
}

double PathSpline::t_from_s(double s) const {
  const auto it = std::upper_bound(sub_s_.begin(), sub_s_.end(), s);
  int j = static_cast<int>(it - sub_s_.begin()) - 1;
  j = std::clamp(j, 0, static_cast<int>(sub_s_.size()) - 2);

  double lo = sub_t_[j], hi = sub_t_[j + 1];
  const double span_s = sub_s_[j + 1] - sub_s_[j];
  double t = lo + (hi - lo) * (span_s > 0.0 ? (s - sub_s_[j]) / span_s : 0.5);
  for (int iter = 0; iter < 30; ++iter) {
    const double g = sub_s_[j] + arc_between(sub_t_[j], t) - s;
    if (std::abs(g) < 1e-12 * std::max(1.0, total_length_)) break;
    if (g > 0.0)
      hi = t;
    else
      lo = t;
    const double sp = speed_at(t);
    double t_next = t - g / sp;
    if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi);
    t = t_next;
  }
  return t;
}

PathSpline::Sample PathSpline::sample_at_t(double t) const {
  Sample out;
  out.position = point_at(t);
  const Eigen::Vector2d d1 = deriv_at(t);
  const Eigen::Vector2d d2 = deriv2_at(t);
  out.heading = std::atan2(d1.y(), d1.x());
  const double sp2 = d1.squaredNorm();
  out.curvature = (d1.x() * d2.y() - d1.y() * d2.x()) / (sp2 * std::sqrt(sp2));
  return out;
}

PathSpline::Sample PathSpline::evaluate(double s) const {
  if (knots_.empty()) throw std::logic_error("spline: evaluate on an unbuilt path");
  const double sc = std::clamp(s, 0.0, total_length_);
  return sample_at_t(t_from_s(sc));
}

PathSpline::Sample PathSpline::evaluate_extended(double s) const {
  if (s >= 0.0 && s <= total_length_) return evaluate(s);
  const double s_end = (s < 0.0) ? 0.0 : total_length_;
  Sample end = evaluate(s_end);
  const Eigen::Vector2d tangent(std::cos(end.heading), std::sin(end.heading));
  end.position += (s - s_end) * tangent;
  end.curvature = 0.0;
  return end;
}

double PathSpline::project(const Eigen::Vector2d& p, double s_hint) const {
  double s = std::clamp(s_hint, 0.0, total_length_);
  for (int iter = 0; iter < 30; ++iter) {
    const Sample ref = evaluate(s);
    const Eigen::Vector2d tangent(std::cos(ref.heading), std::sin(ref.heading));
    const Eigen::Vector2d normal(-std::sin(ref.heading), std::cos(ref.heading));
    const Eigen::Vector2d diff = p - ref.position;
    const double e_lag = tangent.dot(diff);
    const double e_con = normal.dot(diff);
    const double slope = ref.curvature * e_con - 1.0;  // d e_lag / d s
    if (std::abs(slope) < 1e-9) break;
    const double s_next = std::clamp(s - e_lag / slope, 0.0, total_length_);
    if (std::abs(s_next - s) < 1e-10) return s_next;
    s = s_next;
  }
  return s;
}

}  // namespace lmpcc
