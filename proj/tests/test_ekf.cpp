#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "navsim/ekf.hpp"
#include "navsim/rng.hpp"

using namespace navsim;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

TEST_CASE("predict with zero velocity only grows covariance") {
  EkfState s = EkfState::from(Pose{1.0, 2.0, 0.3}, Twist{0.0, 0.0});
  EkfConfig cfg;
  EkfState out = ekf_predict(s, 0.1, cfg);
  CHECK(out.mean(0) == 1.0);
  CHECK(out.mean(1) == 2.0);
  CHECK(out.mean(2) == doctest::Approx(0.3));
  for (int i = 0; i < 5; ++i) {
    CHECK(out.cov(i, i) >=
          s.cov(i, i) + cfg.process_noise(i) * 0.1 - 1e-12);
  }
}

TEST_CASE("predict advances the mean by one unicycle step") {
  EkfState s = EkfState::from(Pose{0, 0, 0}, Twist{1.0, 0.0});
  EkfState out = ekf_predict(s, 0.1, EkfConfig{});
  CHECK(out.mean(0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(out.mean(1) == 0.0);
  CHECK(out.mean(3) == 1.0);
  CHECK(out.mean(4) == 0.0);
}

TEST_CASE("transition jacobian hand entries") {
  Vec5 x;
  x << 0, 0, 0, 1.0, 0;
  const Mat5 F = ekf_transition_jacobian(x, 0.1);
  CHECK(F(0, 2) == doctest::Approx(0.0));          // d x' / d theta
  CHECK(F(1, 2) == doctest::Approx(0.1));          // d y' / d theta
  CHECK(F(0, 3) == doctest::Approx(0.1));          // d x' / d v
  CHECK(F(2, 4) == doctest::Approx(0.1));          // d theta' / d w
  CHECK(F(0, 0) == 1.0);
  CHECK(F(3, 3) == 1.0);
}

TEST_CASE("transition jacobian matches central differences") {
  Rng rng(21);
  const double dt = 0.1, eps = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    Vec5 x;
    x << rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3, 3),
        rng.uniform(-1, 1), rng.uniform(-2, 2);
    const Mat5 F = ekf_transition_jacobian(x, dt);
    for (int j = 0; j < 5; ++j) {
      Vec5 hi = x, lo = x;
      hi(j) += eps;
      lo(j) -= eps;
      const Vec5 fd = (ekf_transition(hi, dt) - ekf_transition(lo, dt)) /
                      (2.0 * eps);
      for (int i = 0; i < 5; ++i) {
        CHECK(F(i, j) == doctest::Approx(fd(i)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("odom update with zero innovation shrinks covariance only") {
  EkfState s = EkfState::from(Pose{0, 0, 0}, Twist{0.5, 0.2}, 0.1);
  EkfState out = ekf_update_odom(s, Twist{0.5, 0.2}, EkfConfig{});
  CHECK(out.mean.isApprox(s.mean, 1e-12));
  CHECK(out.cov(3, 3) < s.cov(3, 3));
  CHECK(out.cov(4, 4) < s.cov(4, 4));
  CHECK(out.cov(0, 0) <= s.cov(0, 0) + 1e-12);
}

TEST_CASE("uninformative odom measurement leaves the state nearly fixed") {
  EkfState s = EkfState::from(Pose{0, 0, 0}, Twist{0.5, 0.0}, 0.1);
  EkfConfig cfg;
  cfg.odom_noise << 1e12, 1e12;
  EkfState out = ekf_update_odom(s, Twist{1.5, 1.0}, cfg);
  CHECK(std::abs(out.mean(3) - s.mean(3)) < 1e-6);
  CHECK(std::abs(out.mean(4) - s.mean(4)) < 1e-6);
}

TEST_CASE("scalar kalman gain of one half") {
  // Prior variance 1, measurement variance 1, innovation 1 on the v
  // channel in isolation: the posterior mean moves by exactly 0.5.
  EkfState s;
  s.mean.setZero();
  s.cov.setZero();
  s.cov(3, 3) = 1.0;
  EkfConfig cfg;
  cfg.odom_noise << 1.0, 1.0;
  EkfState out = ekf_update_odom(s, Twist{1.0, 0.0}, cfg);
  CHECK(out.mean(3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.cov(3, 3) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("gyro update with zero innovation is a no-op on the mean") {
  EkfState s = EkfState::from(Pose{1, 1, 0.2}, Twist{0.3, 0.7}, 0.05);
  EkfState out = ekf_update_gyro(s, 0.7, EkfConfig{});
  CHECK(out.mean.isApprox(s.mean, 1e-12));
  CHECK(out.cov(4, 4) < s.cov(4, 4));
}

TEST_CASE("precise gyro dominates a diffuse prior") {
  EkfState s;
  s.mean.setZero();
  s.cov = Mat5::Identity() * 10.0;  // diffuse
  EkfConfig cfg;
  cfg.gyro_noise = cfg.odom_noise(1) / 100.0;
  EkfState out = ekf_update_gyro(s, 1.0, cfg);
  CHECK(out.mean(4) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("repeated gyro measurements never increase w variance") {
  EkfState s = EkfState::from(Pose{}, Twist{}, 1.0);
  EkfConfig cfg;
  double prev = s.cov(4, 4);
  for (int i = 0; i < 50; ++i) {
    s = ekf_update_gyro(s, 0.4, cfg);
    CHECK(s.cov(4, 4) <= prev + 1e-15);
    prev = s.cov(4, 4);
  }
}

TEST_CASE("non-finite measurements are rejected") {
  EkfState s = EkfState::from(Pose{1, 2, 0.3}, Twist{0.4, 0.1});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EkfState out = ekf_update_odom(s, Twist{nan, 0.1}, EkfConfig{});
  CHECK(out.mean == s.mean);
  CHECK(out.cov == s.cov);
  out = ekf_update_gyro(s, std::numeric_limits<double>::infinity(),
                        EkfConfig{});
  CHECK(out.mean == s.mean);
}

TEST_CASE("covariance stays symmetric PSD under random interleavings") {
  Rng rng(31);
  EkfState s = EkfState::from(Pose{}, Twist{}, 0.01);
  EkfConfig cfg;
  for (int i = 0; i < 500; ++i) {
    const double pick = rng.uniform(0.0, 1.0);
    if (pick < 0.4) {
      s = ekf_predict(s, 0.1, cfg);
    } else if (pick < 0.7) {
      s = ekf_update_odom(
          s, Twist{rng.uniform(-1, 1), rng.uniform(-2, 2)}, cfg);
    } else {
      s = ekf_update_gyro(s, rng.uniform(-2, 2), cfg);
    }
    CHECK((s.cov - s.cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat5> es(s.cov);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    CHECK(std::abs(normalize_angle(s.mean(2)) - s.mean(2)) < 1e-12);
  }
}
