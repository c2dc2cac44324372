#include "lcsamp/model.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "lcsamp/rng.hpp"

namespace lcsamp {

void TargetModel::hessian(const Vec&, Mat&) const {
  throw capability_error("model '" + tag() + "' provides no Hessian");
}

void TargetModel::hessian_vec(const Vec& x, const Vec& v, Vec& out) const {
  if (has_structured_hessian()) {
    const StructuredHessian sh = structured_hessian(x);
    if (sh.direction.size() == 0) {
      out = sh.background * v;
    } else {
      const double uv = sh.direction.dot(v);
      out = sh.background * v +
            (sh.dir_eigenvalue - sh.background) * uv * sh.direction;
    }
    return;
  }
  Mat h(dim(), dim());
  hessian(x, h);
  out.noalias() = h * v;
}

StructuredHessian TargetModel::structured_hessian(const Vec&) const {
  throw capability_error("model '" + tag() + "' provides no structured Hessian");
}

void validate_certificate(const ConvexityCertificate& cert) {
  if (!(cert.m >= 0.0) || !(cert.M > 0.0) || !(cert.m <= cert.M) ||
      !std::isfinite(cert.M)) {
    throw domain_error("certificate requires 0 <= m <= M with M > 0 finite");
  }
  if (cert.L_f && (!(*cert.L_f >= 0.0) || !std::isfinite(*cert.L_f))) {
    throw domain_error("certificate requires L_f >= 0 when present");
  }
}

double default_fd_step(const Vec& x) {
  const double amax = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return 1e-5 * (1.0 + amax);
}

namespace {

double probe_potential(const TargetModel& model, Vec& x, int coord, double delta) {
  const double saved = x[coord];
  x[coord] = saved + delta;
  const double f = model.potential(x);
  x[coord] = saved;
  if (!std::isfinite(f)) {
    throw domain_error("fd check: potential non-finite when perturbing coordinate " +
                       std::to_string(coord));
  }
  return f;
}

}  // namespace

Mat dense_hessian(const TargetModel& model, const Vec& x) {
  if (model.has_hessian()) return model.hessian(x);
  if (model.has_structured_hessian()) {
    const StructuredHessian sh = model.structured_hessian(x);
    Mat h = sh.background * Mat::Identity(model.dim(), model.dim());
    if (sh.direction.size() > 0) {
      h += (sh.dir_eigenvalue - sh.background) * sh.direction *
           sh.direction.transpose();
    }
    return h;
  }
  throw capability_error("model '" + model.tag() + "' provides no Hessian");
}

double fd_gradient_check(const TargetModel& model, const Vec& x, double step) {
  if (x.size() != model.dim()) {
    throw domain_error("fd_gradient_check: x has wrong dimension");
  }
  if (!(step > 0.0)) throw domain_error("fd_gradient_check: step must be > 0");
  const Vec grad = model.gradient(x);
  Vec probe = x;
  double worst = 0.0;
  for (int j = 0; j < x.size(); ++j) {
    const double fp = probe_potential(model, probe, j, step);
    const double fm = probe_potential(model, probe, j, -step);
    worst = std::max(worst, std::fabs((fp - fm) / (2.0 * step) - grad[j]));
  }
  return worst;
}

double fd_hessian_check(const TargetModel& model, const Vec& x, double step) {
  if (x.size() != model.dim()) {
    throw domain_error("fd_hessian_check: x has wrong dimension");
  }
  if (!(step > 0.0)) throw domain_error("fd_hessian_check: step must be > 0");
  const int p = model.dim();
  const Mat h = dense_hessian(model, x);

  Mat jac(p, p);
  Vec probe = x;
  Vec gp(p), gm(p);
  for (int j = 0; j < p; ++j) {
    const double saved = probe[j];
    probe[j] = saved + step;
    model.gradient(probe, gp);
    probe[j] = saved - step;
    model.gradient(probe, gm);
    probe[j] = saved;
    if (!gp.allFinite() || !gm.allFinite()) {
      throw domain_error("fd_hessian_check: gradient non-finite when perturbing coordinate " +
                         std::to_string(j));
    }
    jac.col(j) = (gp - gm) / (2.0 * step);
  }
  const Mat sym = 0.5 * (jac + jac.transpose());
  return (sym - h).cwiseAbs().maxCoeff();
}

ViolationReport certificate_probe(const TargetModel& model,
                                  const ConvexityCertificate& cert,
                                  long long n_pairs, std::uint64_t seed,
                                  const std::optional<Vec>& center) {
  validate_certificate(cert);
  if (!(cert.m > 0.0)) {
    throw domain_error("certificate_probe: requires m > 0 to size the probe box");
  }
  if (n_pairs < 1) throw domain_error("certificate_probe: n_pairs must be >= 1");
  const int p = model.dim();
  Vec c = center ? *center : Vec::Zero(p);
  if (c.size() != p) throw domain_error("certificate_probe: center has wrong dimension");

  const double half_width = 3.0 / std::sqrt(cert.m);
  const double slack = 1e-9;
  const bool check_hessian =
      cert.L_f && (model.has_hessian() || model.has_structured_hessian());

  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-half_width, half_width);

  ViolationReport report;
  report.n_pairs = n_pairs;
  Vec x(p), y(p), gx(p), gy(p);
  for (long long k = 0; k < n_pairs; ++k) {
    for (int j = 0; j < p; ++j) x[j] = c[j] + unif(rng);
    for (int j = 0; j < p; ++j) y[j] = c[j] + unif(rng);
    const Vec d = x - y;
    const double dist = d.norm();
    const double fx = model.potential(x);
    const double fy = model.potential(y);
    model.gradient(x, gx);
    model.gradient(y, gy);

    const double lower_margin =
        fx - fy - gy.dot(d) - 0.5 * cert.m * d.squaredNorm();
    if (lower_margin < -slack) ++report.lower_violations;
    report.worst_lower_margin = std::min(report.worst_lower_margin, lower_margin);

    const double lips_margin = cert.M * dist - (gx - gy).norm();
    if (lips_margin < -slack) ++report.lipschitz_violations;
    report.worst_lipschitz_margin =
        std::min(report.worst_lipschitz_margin, lips_margin);

    if (check_hessian) {
      const Mat hx = dense_hessian(model, x);
      const Mat hy = dense_hessian(model, y);
      Eigen::SelfAdjointEigenSolver<Mat> es(hx - hy, Eigen::EigenvaluesOnly);
      const double opnorm = es.eigenvalues().cwiseAbs().maxCoeff();
      const double hess_margin = *cert.L_f * dist - opnorm;
      if (hess_margin < -slack) ++report.hessian_violations;
      report.worst_hessian_margin =
          std::min(report.worst_hessian_margin, hess_margin);
    }
  }
  return report;
}

StationaryPoint minimize_gd(const TargetModel& model,
                            const ConvexityCertificate& cert, const Vec& x0,
                            double tol) {
  validate_certificate(cert);
  if (!(cert.m > 0.0)) throw domain_error("minimize_gd: requires m > 0");
  if (!(tol > 0.0)) throw domain_error("minimize_gd: tol must be > 0");
  if (x0.size() != model.dim()) throw domain_error("minimize_gd: x0 has wrong dimension");

  const double m = cert.m;
  const double M = cert.M;
  const double step = 1.0 / (2.0 * M);
  // Stop once the gradient certifies f - f* <= tol and is itself below tol.
  const double grad_stop = std::min(tol, std::sqrt(2.0 * m * tol));

  Vec x = x0;
  Vec g(model.dim());
  model.gradient(x, g);
  double gnorm = g.norm();

  // Iterations until the distance guarantee (contraction 1 - m/(2M) per step
  // on the initial gap surrogate) pushes the gradient below grad_stop.
  long long cap = 64;
  if (gnorm > grad_stop) {
    const double gap0 = 0.5 * M * gnorm * gnorm / (m * m);
    const double target_dist = grad_stop / M;
    const double rate = std::log(2.0 * M / (2.0 * M - m));
    const double k = (std::log(std::max(2.0 * gap0 / m, 1e-300)) +
                      2.0 * std::log(1.0 / target_dist)) /
                     rate;
    cap = static_cast<long long>(std::ceil(std::max(k, 1.0))) + 64;
  }

  long long iters = 0;
  while (gnorm > grad_stop) {
    if (iters >= cap) {
      throw convergence_error(
          "minimize_gd: iteration cap " + std::to_string(cap) +
              " exceeded (|grad| = " + std::to_string(gnorm) +
              "); certificate may overstate curvature bounds",
          x);
    }
    x -= step * g;
    model.gradient(x, g);
    gnorm = g.norm();
    ++iters;
    if (!std::isfinite(gnorm)) {
      throw convergence_error("minimize_gd: gradient became non-finite at iteration " +
                                  std::to_string(iters),
                              x);
    }
  }

  StationaryPoint sp;
  sp.theta_star = std::move(x);
  sp.f_star = model.potential(sp.theta_star);
  sp.grad_norm = gnorm;
  sp.iterations = iters;
  return sp;
}

}  // namespace lcsamp
