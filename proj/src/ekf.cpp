#include "navsim/ekf.hpp"

#include <cmath>

namespace navsim {

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

void symmetrize(Mat5& p) { p = ((p + p.transpose()) * 0.5).eval(); }

// Joseph-form measurement update shared by both sensors.
template <int M>
EkfState kalman_update(const EkfState& s,
                       const Eigen::Matrix<double, M, 5>& h,
                       const Eigen::Matrix<double, M, 1>& innovation,
                       const Eigen::Matrix<double, M, M>& r) {
  const Eigen::Matrix<double, M, M> innov_cov =
      h * s.cov * h.transpose() + r;
  const Eigen::Matrix<double, 5, M> gain =
      s.cov * h.transpose() * innov_cov.inverse();

  EkfState out;
  out.mean = s.mean + gain * innovation;
  out.mean(2) = normalize_angle(out.mean(2));
  const Mat5 ikh = Mat5::Identity() - gain * h;
  out.cov = ikh * s.cov * ikh.transpose() + gain * r * gain.transpose();
  symmetrize(out.cov);
  return out;
}

}  // namespace

EkfState EkfState::from(const Pose& p, const Twist& t, double initial_var) {
  EkfState s;
  s.mean << p.x, p.y, p.theta, t.v, t.w;
  s.cov = Mat5::Identity() * initial_var;
  return s;
}

Vec5 ekf_transition(const Vec5& x, double dt) {
  Vec5 out = x;
  out(0) += x(3) * std::cos(x(2)) * dt;
  out(1) += x(3) * std::sin(x(2)) * dt;
  out(2) = normalize_angle(x(2) + x(4) * dt);
  return out;
}

Mat5 ekf_transition_jacobian(const Vec5& x, double dt) {
  Mat5 f = Mat5::Identity();
  const double c = std::cos(x(2));
  const double sn = std::sin(x(2));
  f(0, 2) = -x(3) * sn * dt;
  f(0, 3) = c * dt;
  f(1, 2) = x(3) * c * dt;
  f(1, 3) = sn * dt;
  f(2, 4) = dt;
  return f;
}

EkfState ekf_predict(const EkfState& s, double dt, const EkfConfig& cfg) {
  EkfState out;
  out.mean = ekf_transition(s.mean, dt);
  const Mat5 f = ekf_transition_jacobian(s.mean, dt);
  out.cov = f * s.cov * f.transpose();
  out.cov.diagonal() += cfg.process_noise * dt;
  symmetrize(out.cov);
  return out;
}

EkfState ekf_update_odom(const EkfState& s, const Twist& z,
                         const EkfConfig& cfg) {
  if (!std::isfinite(z.v) || !std::isfinite(z.w)) return s;
  Eigen::Matrix<double, 2, 5> h = Eigen::Matrix<double, 2, 5>::Zero();
  h(0, 3) = 1.0;
  h(1, 4) = 1.0;
  const Eigen::Vector2d innovation{z.v - s.mean(3), z.w - s.mean(4)};
  const Eigen::Matrix2d r = cfg.odom_noise.asDiagonal();
  return kalman_update<2>(s, h, innovation, r);
}

EkfState ekf_update_gyro(const EkfState& s, double w_meas,
                         const EkfConfig& cfg) {
  if (!std::isfinite(w_meas)) return s;
  Eigen::Matrix<double, 1, 5> h = Eigen::Matrix<double, 1, 5>::Zero();
  h(0, 4) = 1.0;
  Eigen::Matrix<double, 1, 1> innovation;
  innovation << w_meas - s.mean(4);
  Eigen::Matrix<double, 1, 1> r;
  r << cfg.gyro_noise;
  return kalman_update<1>(s, h, innovation, r);
}

}  // namespace navsim
