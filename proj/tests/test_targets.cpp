#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "check_macros.hpp"
#include "lcsamp/diagnostics.hpp"
#include "lcsamp/errors.hpp"
#include "lcsamp/logistic.hpp"
#include "lcsamp/mixture.hpp"
#include "lcsamp/model.hpp"
#include "lcsamp/rng.hpp"
#include "lcsamp/special.hpp"

using lcsamp::GaussianMixtureTarget;
using lcsamp::LogisticData;
using lcsamp::LogisticGenConfig;
using lcsamp::LogisticModel;
using lcsamp::Mat;
using lcsamp::Rng;
using lcsamp::Vec;

namespace {

Vec random_vec(int p, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vec x(p);
  for (int i = 0; i < p; ++i) x(i) = nd(rng);
  return x;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double log1p_exp(double t) {  // log(1 + e^t)
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

// Ungrouped evaluation of the whitened ridge-logistic potential, built
// directly from the model's Z and the labels.
double naive_potential(const LogisticModel& m, const Vec& y_labels,
                       const Vec& y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < m.Z.rows(); ++i) {
    const double t = m.Z.row(i).dot(y);
    total += log1p_exp(t) - y_labels(i) * t;
  }
  return total + 0.5 * m.lambda * y.squaredNorm();
}

Vec naive_gradient(const LogisticModel& m, const Vec& y_labels, const Vec& y) {
  Vec g = m.lambda * y;
  for (Eigen::Index i = 0; i < m.Z.rows(); ++i) {
    const double t = m.Z.row(i).dot(y);
    g += (sigmoid(t) - y_labels(i)) * m.Z.row(i).transpose();
  }
  return g;
}

Mat naive_hessian(const LogisticModel& m, const Vec& y) {
  const int p = static_cast<int>(m.Z.cols());
  Mat H = m.lambda * Mat::Identity(p, p);
  for (Eigen::Index i = 0; i < m.Z.rows(); ++i) {
    const double s = sigmoid(m.Z.row(i).dot(y));
    H += s * (1.0 - s) * m.Z.row(i).transpose() * m.Z.row(i);
  }
  return H;
}

double spectral_norm(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

LogisticData synthetic(int p, long long n, std::uint64_t seed) {
  LogisticGenConfig cfg;
  cfg.p = p;
  cfg.n = n;
  cfg.seed = seed;
  return lcsamp::logistic_generate(cfg);
}

}  // namespace

// ------------------------------------------------------------------
// Gaussian mixture

TEST_CASE("mixture potential equals the negative log of the mixture density") {
  Vec a(3);
  a << 0.4, -0.3, 0.2;
  GaussianMixtureTarget mix(a);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Vec x = random_vec(3, rng, 2.0);
    const double direct = -std::log(std::exp(-0.5 * (x - a).squaredNorm()) +
                                    std::exp(-0.5 * (x + a).squaredNorm()));
    CHECK_REL(mix.potential(x), direct, 1e-12);
  }
}

TEST_CASE("mixture derivatives pass finite-difference checks") {
  Vec a(3);
  a << 0.4, -0.3, 0.2;
  GaussianMixtureTarget mix(a);
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const Vec x = random_vec(3, rng, 1.5);
    CHECK(lcsamp::fd_gradient_check(mix, x, lcsamp::default_fd_step(x)) < 1e-6);
    CHECK(lcsamp::fd_hessian_check(mix, x, lcsamp::default_fd_step(x)) < 1e-5);
  }
}

TEST_CASE("mixture Hessian at the origin is I - a a^T") {
  Vec a(4);
  a << 0.3, 0.1, -0.2, 0.4;
  GaussianMixtureTarget mix(a);
  const Mat expected = Mat::Identity(4, 4) - a * a.transpose();
  CHECK((lcsamp::dense_hessian(mix, Vec::Zero(4)) - expected).norm() < 1e-14);
}

TEST_CASE("mixture structured Hessian agrees with the dense one") {
  Vec a(4);
  a << 0.3, 0.1, -0.2, 0.4;
  GaussianMixtureTarget mix(a);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vec x = random_vec(4, rng, 1.5);
    const auto sh = mix.structured_hessian(x);
    Mat rebuilt = sh.background * Mat::Identity(4, 4);
    if (sh.direction.size() > 0) {
      rebuilt += (sh.dir_eigenvalue - sh.background) * sh.direction *
                 sh.direction.transpose();
    }
    CHECK((rebuilt - lcsamp::dense_hessian(mix, x)).norm() < 1e-13);
  }
  // a = 0 degenerates to the identity.
  GaussianMixtureTarget gauss(Vec::Zero(2));
  const auto sh = gauss.structured_hessian(Vec::Ones(2));
  CHECK(sh.background == doctest::Approx(1.0));
  CHECK(sh.direction.size() == 0);
}

TEST_CASE("mixture certificate matches the closed forms and survives probing") {
  Vec a = Vec::Constant(8, 0.25);  // |a|^2 = 1/2
  const auto cert = lcsamp::mixture_certificate(a);
  CHECK_REL(cert.m, 0.5, 1e-14);
  CHECK(cert.M == 1.0);
  REQUIRE(cert.L_f.has_value());
  CHECK_REL(*cert.L_f, std::pow(0.5, 2.5), 1e-14);

  GaussianMixtureTarget mix(a);
  const auto report = lcsamp::certificate_probe(mix, cert, 4000, 11);
  CHECK(report.n_pairs == 4000);
  CHECK(report.clean());
}

TEST_CASE("mixture construction requires |a| < 1") {
  Vec big = Vec::Constant(4, 0.51);
  CHECK_THROWS_AS(GaussianMixtureTarget{big}, lcsamp::domain_error);
  CHECK_THROWS_AS(GaussianMixtureTarget{Vec{}}, lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::mixture_certificate(big), lcsamp::domain_error);
  Vec edge = Vec::Zero(2);
  edge(0) = 1.0;
  CHECK_THROWS_AS(GaussianMixtureTarget{edge}, lcsamp::domain_error);
  Vec nan = Vec::Zero(2);
  nan(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(GaussianMixtureTarget{nan}, lcsamp::domain_error);
}

TEST_CASE("the potential's stationary point sits at c* a with c* = 0") {
  Vec a(2);
  a << 0.6, 0.3;
  CHECK_ABS(lcsamp::mixture_cstar(a), 0.0, 1e-10);
  GaussianMixtureTarget mix(a);
  Vec g0(2);
  mix.gradient(Vec::Zero(2), g0);
  CHECK(g0.norm() < 1e-14);
}

TEST_CASE("direct mixture draws are deterministic in the generator") {
  Vec a(3);
  a << 0.2, 0.1, -0.3;
  Rng r1(5), r2(5);
  for (int i = 0; i < 10; ++i) {
    const Vec x = lcsamp::mixture_direct_sample(a, r1);
    const Vec y = lcsamp::mixture_direct_sample(a, r2);
    CHECK((x - y).norm() == 0.0);
  }
}

TEST_CASE("direct mixture draws have the analytic moments and projection law") {
  Vec a(2);
  a << 0.6, 0.0;
  const long long n = 200000;
  Rng rng(8);
  Mat samples(n, 2);
  for (long long i = 0; i < n; ++i) {
    samples.row(i) = lcsamp::mixture_direct_sample(a, rng).transpose();
  }
  const Mat cov = Mat::Identity(2, 2) + a * a.transpose();
  const auto report = lcsamp::moment_check(samples, Vec::Zero(2), cov);
  CAPTURE(report.worst_mean_ratio);
  CAPTURE(report.worst_cov_ratio);
  CHECK(report.pass());

  // Projection onto e1 has the two-bump CDF with shift |a|.
  Vec e1(2);
  e1 << 1.0, 0.0;
  const Vec proj = lcsamp::project(samples, e1);
  const double ks = lcsamp::ks_distance(
      proj, [](double t) { return lcsamp::mixture_projection_cdf(t, 0.6); });
  CAPTURE(ks);
  CHECK(ks < 2.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("mixture projection cdf and density are consistent") {
  const double shift = 0.8;
  CHECK_ABS(lcsamp::mixture_projection_cdf(-12.0, shift), 0.0, 1e-12);
  CHECK_ABS(lcsamp::mixture_projection_cdf(12.0, shift), 1.0, 1e-12);
  CHECK_REL(lcsamp::mixture_projection_cdf(0.0, shift), 0.5, 1e-12);
  // No shift collapses to the standard normal.
  CHECK_REL(lcsamp::mixture_projection_cdf(1.3, 0.0), lcsamp::normal_cdf(1.3),
            1e-13);

  double prev = 0.0;
  for (double t = -6.0; t <= 6.0; t += 0.25) {
    const double c = lcsamp::mixture_projection_cdf(t, shift);
    CHECK(c >= prev);
    prev = c;
    const double fd = (lcsamp::mixture_projection_cdf(t + 5e-6, shift) -
                       lcsamp::mixture_projection_cdf(t - 5e-6, shift)) /
                      1e-5;
    CHECK_ABS(lcsamp::mixture_projection_density(t, shift), fd, 1e-8);
  }
  const double mass = test::integrate(
      [shift](double t) { return lcsamp::mixture_projection_density(t, shift); },
      -12.0, 12.0, 64);
  CHECK_REL(mass, 1.0, 1e-12);
}

// ------------------------------------------------------------------
// Logistic regression

TEST_CASE("logistic_generate is deterministic and normalized") {
  const LogisticData d1 = synthetic(3, 500, 12);
  const LogisticData d2 = synthetic(3, 500, 12);
  CHECK((d1.X - d2.X).norm() == 0.0);
  CHECK((d1.Y - d2.Y).norm() == 0.0);
  const LogisticData d3 = synthetic(3, 500, 13);
  CHECK((d1.X - d3.X).norm() > 0.0);

  const double entry = 1.0 / std::sqrt(3.0);
  for (Eigen::Index i = 0; i < d1.X.rows(); ++i) {
    CHECK_REL(d1.X.row(i).norm(), 1.0, 1e-12);
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(std::abs(std::abs(d1.X(i, j)) - entry) < 1e-12);
    }
    const double y = d1.Y(i);
    CHECK((y == 0.0 || y == 1.0));
  }
  // theta_true = 1 tilts labels positive on average.
  const double freq = d1.Y.mean();
  CAPTURE(freq);
  CHECK(freq > 0.4);
  CHECK(freq < 0.95);
}

TEST_CASE("logistic_generate warns when the design is under-determined") {
  std::ostringstream captured;
  auto* old = std::cerr.rdbuf(captured.rdbuf());
  (void)synthetic(4, 2, 1);
  std::cerr.rdbuf(old);
  CHECK(captured.str().find("n = 2 < p = 4") != std::string::npos);
}

TEST_CASE("logistic CSV round-trip") {
  test::TempDir dir;
  const LogisticData data = synthetic(3, 40, 21);
  const std::string x_path = dir.file("X.csv");
  const std::string y_path = dir.file("y.csv");
  lcsamp::write_logistic_csv(data, x_path, y_path,
                             nlohmann::json{{"seed", 21}});
  const LogisticData back = lcsamp::read_logistic_csv(x_path, y_path);
  CHECK((back.X - data.X).norm() == 0.0);
  CHECK((back.Y - data.Y).norm() == 0.0);
  CHECK(test::read_file(x_path + ".json").find("21") != std::string::npos);

  {
    FILE* f = std::fopen(dir.file("badlabels.csv").c_str(), "w");
    for (int i = 0; i < 40; ++i) std::fputs(i ? "1\n" : "0.5\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_WITH_SUBSTR(
      lcsamp::read_logistic_csv(x_path, dir.file("badlabels.csv")),
      lcsamp::io_error, "labels must be 0 or 1");
}

TEST_CASE("default_lambda is 3p/pi^2") {
  CHECK_REL(lcsamp::default_lambda(2), 0.607927101854027, 1e-12);
  CHECK_REL(lcsamp::default_lambda(5), 1.51981775463507, 1e-12);
  CHECK_REL(lcsamp::default_lambda(20), 6.07927101854027, 1e-12);
  CHECK_THROWS_AS((void)lcsamp::default_lambda(0), lcsamp::domain_error);
}

TEST_CASE("logistic_model whitens the design") {
  const LogisticData data = synthetic(2, 200, 7);
  const LogisticModel model = lcsamp::logistic_model(data, 0.75);
  const long long n = data.X.rows();
  const Mat sigma = data.X.transpose() * data.X / static_cast<double>(n);
  CHECK((model.A * sigma * model.A - Mat::Identity(2, 2)).norm() < 1e-10);
  CHECK((model.Z - data.X * model.A).norm() < 1e-12);
  CHECK(model.lambda == 0.75);
  CHECK(model.n == n);
  CHECK(model.g->tag() == "logistic");
  CHECK(model.g->dim() == 2);
}

TEST_CASE("logistic certificate carries lambda, lambda + n/4 and the tail bound") {
  const LogisticData data = synthetic(2, 200, 7);
  const LogisticModel model = lcsamp::logistic_model(data, 0.75);
  CHECK(model.cert.m == doctest::Approx(0.75));
  CHECK(model.cert.M == doctest::Approx(0.75 + 50.0));
  double max_row = 0.0;
  for (Eigen::Index i = 0; i < model.Z.rows(); ++i) {
    max_row = std::max(max_row, model.Z.row(i).norm());
  }
  REQUIRE(model.cert.L_f.has_value());
  CHECK_REL(*model.cert.L_f, 0.1 * 200.0 * max_row, 1e-12);
}

TEST_CASE("grouped logistic evaluation matches the ungrouped formulas") {
  // Synthetic designs collapse to a handful of distinct rows; a Gaussian
  // design leaves every row in its own group.  Both must agree with the
  // naive per-row sums.
  for (int variant = 0; variant < 2; ++variant) {
    LogisticData data;
    if (variant == 0) {
      data = synthetic(3, 150, 31);
    } else {
      Rng rng(32);
      data.X.resize(40, 3);
      for (int i = 0; i < 40; ++i)
        data.X.row(i) = random_vec(3, rng).transpose();
      data.Y.resize(40);
      for (int i = 0; i < 40; ++i) data.Y(i) = (i * 7) % 3 == 0 ? 1.0 : 0.0;
    }
    const LogisticModel model = lcsamp::logistic_model(data, 0.9);
    Rng rng(33);
    for (int trial = 0; trial < 8; ++trial) {
      const Vec y = random_vec(3, rng);
      CAPTURE(variant);
      CAPTURE(trial);
      CHECK_REL(model.g->potential(y), naive_potential(model, data.Y, y),
                1e-11);
      const Vec g = model.g->gradient(y);
      const Vec ng = naive_gradient(model, data.Y, y);
      CHECK((g - ng).norm() < 1e-10 * std::max(1.0, ng.norm()));
      const Mat H = lcsamp::dense_hessian(*model.g, y);
      const Mat nH = naive_hessian(model, y);
      CHECK((H - nH).norm() < 1e-10 * nH.norm());
      Vec v = random_vec(3, rng);
      Vec hv(3);
      model.g->hessian_vec(y, v, hv);
      CHECK((hv - nH * v).norm() < 1e-10 * nH.norm() * v.norm());
    }
  }
}

TEST_CASE("logistic potential passes finite-difference checks") {
  const LogisticData data = synthetic(2, 120, 9);
  const LogisticModel model = lcsamp::logistic_model(data, 0.6);
  Rng rng(10);
  for (int i = 0; i < 5; ++i) {
    const Vec y = random_vec(2, rng);
    CHECK(lcsamp::fd_gradient_check(*model.g, y, lcsamp::default_fd_step(y)) <
          1e-5);
    CHECK(lcsamp::fd_hessian_check(*model.g, y, lcsamp::default_fd_step(y)) <
          1e-4);
  }
}

TEST_CASE("whitened Hessian spectrum stays inside the certificate band") {
  const LogisticData data = synthetic(2, 80, 14);
  const LogisticModel model = lcsamp::logistic_model(data, 0.6);
  Rng rng(15);
  for (int i = 0; i < 10; ++i) {
    const Vec y = random_vec(2, rng, 1.5);
    Eigen::SelfAdjointEigenSolver<Mat> es(lcsamp::dense_hessian(*model.g, y));
    CHECK(es.eigenvalues().minCoeff() >= 0.6 - 1e-9);
    CHECK(es.eigenvalues().maxCoeff() <= 0.6 + 80.0 / 4.0 + 1e-9);
  }
}

TEST_CASE("the certified Hessian Lipschitz constant holds between random points") {
  const LogisticData data = synthetic(2, 100, 16);
  const LogisticModel model = lcsamp::logistic_model(data, 0.6);
  REQUIRE(model.cert.L_f.has_value());
  const double L = *model.cert.L_f;
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const Vec y1 = random_vec(2, rng, 1.2);
    const Vec y2 = random_vec(2, rng, 1.2);
    const double lhs = spectral_norm(lcsamp::dense_hessian(*model.g, y1) -
                                     lcsamp::dense_hessian(*model.g, y2));
    CHECK(lhs <= L * (y1 - y2).norm() * (1.0 + 1e-6) + 1e-12);
  }
}

TEST_CASE("logistic_model validates its inputs") {
  LogisticData data = synthetic(2, 30, 3);
  CHECK_THROWS_AS((void)lcsamp::logistic_model(data, 0.0),
                  lcsamp::domain_error);
  LogisticData bad = data;
  bad.Y(0) = 0.5;
  CHECK_THROWS_WITH_SUBSTR(lcsamp::logistic_model(bad, 0.6),
                           lcsamp::domain_error, "labels must be 0 or 1");
  bad = data;
  bad.Y.conservativeResize(10);
  CHECK_THROWS_AS((void)lcsamp::logistic_model(bad, 0.6), lcsamp::domain_error);
}

TEST_CASE("local curvature m_R decays from its center value to lambda") {
  const LogisticData data = synthetic(2, 150, 18);
  const LogisticModel model = lcsamp::logistic_model(data, 0.6);
  const auto sp = lcsamp::minimize_gd(*model.g, model.cert, Vec::Zero(2), 1e-10);

  double prev = lcsamp::logistic_m_R(model, sp.theta_star, 0.0);
  CHECK(prev > 0.6);
  for (double R : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double cur = lcsamp::logistic_m_R(model, sp.theta_star, R);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  CHECK_REL(lcsamp::logistic_m_R(model, sp.theta_star, 60.0), 0.6, 1e-9);
}

TEST_CASE("m_R matches the weighted Gram formula") {
  const LogisticData data = synthetic(2, 60, 19);
  const LogisticModel model = lcsamp::logistic_model(data, 0.8);
  Rng rng(20);
  const Vec y_star = random_vec(2, rng, 0.3);
  for (double R : {0.0, 0.7, 1.9}) {
    Mat B = Mat::Zero(2, 2);
    for (Eigen::Index i = 0; i < model.Z.rows(); ++i) {
      const double t = std::abs(model.Z.row(i).dot(y_star)) +
                       R * model.Z.row(i).norm();
      const double w = std::exp(t) / std::pow(1.0 + std::exp(t), 2.0);
      B += w * model.Z.row(i).transpose() * model.Z.row(i);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(B, Eigen::EigenvaluesOnly);
    CHECK_REL(lcsamp::logistic_m_R(model, y_star, R),
              0.8 + es.eigenvalues().minCoeff(), 1e-12);
  }
}

TEST_CASE("mu_R reproduces reference values") {
  CHECK_REL(lcsamp::logistic_mu_R(2, 0.6, 50.6, 2.0), 15.053806043580479,
            1e-9);
  CHECK_REL(lcsamp::logistic_mu_R(5, 1.5, 128.0, 1.2), 607.6828006137378,
            1e-9);
  CHECK_REL(lcsamp::logistic_mu_R(8, 0.5, 1.0, 6.0), 0.087613722815641033,
            1e-9);
}

TEST_CASE("mu_R agrees with direct quadrature of its defining integral") {
  CHECK_REL(lcsamp::logistic_mu_R(2, 0.6, 50.6, 2.0),
            test::mu_R_quad(2, 0.6, 50.6, 2.0), 1e-8);
  CHECK_REL(lcsamp::logistic_mu_R(3, 1.0, 10.0, 1.5),
            test::mu_R_quad(3, 1.0, 10.0, 1.5), 1e-8);
  CHECK_REL(lcsamp::logistic_mu_R(8, 0.5, 1.0, 6.0),
            test::mu_R_quad(8, 0.5, 1.0, 6.0), 1e-8);
}

TEST_CASE("mu_R is decreasing in the radius") {
  double prev = std::numeric_limits<double>::infinity();
  for (double R : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    const double mu = lcsamp::logistic_mu_R(4, 0.7, 20.0, R);
    CHECK(mu < prev);
    prev = mu;
  }
}

TEST_CASE("mu_R flags radii beyond numerical reach") {
  // At huge R the alternating series cancels to below double precision;
  // the evaluation must either refuse or return a vanishing tail mass.
  for (double R : {2e2, 2e3, 2e4}) {
    try {
      const double mu = lcsamp::logistic_mu_R(2, 0.5, 1.0, R);
      CHECK(mu >= 0.0);
      CHECK(mu < 1e-300);
    } catch (const lcsamp::domain_error& e) {
      CHECK(std::string(e.what()).find("precision") != std::string::npos);
    }
  }
}

TEST_CASE("mu_R validates its arguments") {
  CHECK_THROWS_AS((void)lcsamp::logistic_mu_R(0, 0.5, 1.0, 1.0),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::logistic_mu_R(2, 0.0, 1.0, 1.0),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::logistic_mu_R(2, 0.5, 0.0, 1.0),
                  lcsamp::domain_error);
  CHECK_THROWS_AS((void)lcsamp::logistic_mu_R(2, 0.5, 1.0, 0.0),
                  lcsamp::domain_error);
}

TEST_CASE("optimal_R reports a consistent, near-optimal choice") {
  const LogisticData data = synthetic(2, 200, 1);
  const LogisticModel model = lcsamp::logistic_model(data, lcsamp::default_lambda(2));
  const auto sp = lcsamp::minimize_gd(*model.g, model.cert, Vec::Zero(2), 1e-10);
  const double eps = 0.1;
  const auto choice = lcsamp::logistic_optimal_R(model, sp.theta_star, eps);

  const double r_hi = 10.0 / std::sqrt(model.lambda);
  CHECK(choice.R > 0.0);
  CHECK(choice.R <= r_hi * (1.0 + 1e-12));

  CHECK_REL(choice.m_2R,
            lcsamp::logistic_m_R(model, sp.theta_star, 2.0 * choice.R), 1e-12);
  const double m_at_R = lcsamp::logistic_m_R(model, sp.theta_star, choice.R);
  CHECK_REL(choice.mu_R, lcsamp::logistic_mu_R(2, m_at_R, model.cert.M, choice.R),
            1e-12);
  CHECK_REL(choice.gamma, 2.0 * eps / (2.0 * choice.mu_R), 1e-12);
  CHECK_REL(choice.barm,
            std::min(choice.m_2R, model.lambda + 0.5 * choice.gamma), 1e-12);
  CHECK(choice.barm > model.lambda);

  // No grid radius does meaningfully better than the chosen one.
  auto objective = [&](double R) {
    const double m2 = lcsamp::logistic_m_R(model, sp.theta_star, 2.0 * R);
    double branch;
    try {
      const double mu = lcsamp::logistic_mu_R(2, lcsamp::logistic_m_R(model, sp.theta_star, R),
                                              model.cert.M, R);
      branch = mu > 0.0 ? model.lambda + eps / (2.0 * mu)
                        : std::numeric_limits<double>::infinity();
    } catch (const lcsamp::domain_error&) {
      branch = std::numeric_limits<double>::infinity();
    }
    return std::min(m2, branch);
  };
  const double best = objective(choice.R);
  for (int k = 1; k <= 40; ++k) {
    const double r = r_hi * k / 40.0;
    CHECK(best >= objective(r) * (1.0 - 5e-3));
  }
}

TEST_CASE("optimal_R validates eps") {
  const LogisticData data = synthetic(2, 50, 2);
  const LogisticModel model = lcsamp::logistic_model(data, 0.6);
  CHECK_THROWS_AS(
      (void)lcsamp::logistic_optimal_R(model, Vec::Zero(2), 0.6),
      lcsamp::domain_error);
  CHECK_THROWS_AS(
      (void)lcsamp::logistic_optimal_R(model, Vec::Zero(2), 0.0),
      lcsamp::domain_error);
}
