#include "lcsamp/transforms.hpp"

#include <cmath>
#include <fstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "csv_util.hpp"

namespace lcsamp {

namespace {

void check_symmetric(const Mat& A, const char* who) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw domain_error(std::string(who) + ": matrix must be square and non-empty");
  }
  if (!A.allFinite()) {
    throw domain_error(std::string(who) + ": matrix has non-finite entries");
  }
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  const double skew = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-12 * scale) {
    throw domain_error(std::string(who) +
                       ": matrix is not symmetric (relative tolerance 1e-12)");
  }
}

/// Base target plus the quadratic tail penalty outside the ball.
class ConvexifiedTarget final : public TargetModel {
 public:
  ConvexifiedTarget(std::shared_ptr<const TargetModel> base, Vec x0, double R,
                    double gamma)
      : base_(std::move(base)), x0_(std::move(x0)), R_(R), gamma_(gamma) {}

  int dim() const override { return base_->dim(); }
  std::string tag() const override { return base_->tag() + "+convexified"; }

  double potential(const Vec& x) const override {
    const double r = (x - x0_).norm();
    const double f = base_->potential(x);
    if (r <= R_) return f;
    const double excess = r - R_;
    return f + 0.5 * gamma_ * excess * excess;
  }

  void gradient(const Vec& x, Vec& out) const override {
    base_->gradient(x, out);
    const Vec d = x - x0_;
    const double r = d.norm();
    if (r > R_) out += (gamma_ * (r - R_) / r) * d;
  }

  bool has_hessian() const override {
    return base_->has_hessian() || base_->has_structured_hessian();
  }

  void hessian(const Vec& x, Mat& out) const override {
    out = dense_hessian(*base_, x);
    const Vec d = x - x0_;
    const double r = d.norm();
    if (r > R_) {
      const Vec u = d / r;
      out += gamma_ * ((1.0 - R_ / r) * Mat::Identity(dim(), dim()) +
                       (R_ / r) * u * u.transpose());
    }
  }

  /// The penalty Hessian jumps across the sphere, so the exponential
  /// integrator has no validity guarantee here.
  bool supports_lmco() const override { return false; }

 private:
  std::shared_ptr<const TargetModel> base_;
  Vec x0_;
  double R_;
  double gamma_;
};

/// g(eta) = f(A eta) for symmetric positive definite A.
class PreconditionedTarget final : public TargetModel {
 public:
  PreconditionedTarget(std::shared_ptr<const TargetModel> base, Mat A)
      : base_(std::move(base)), A_(std::move(A)) {}

  int dim() const override { return base_->dim(); }
  std::string tag() const override { return base_->tag() + "+preconditioned"; }

  double potential(const Vec& y) const override {
    return base_->potential(A_ * y);
  }

  void gradient(const Vec& y, Vec& out) const override {
    const Vec x = A_ * y;
    Vec g(base_->dim());
    base_->gradient(x, g);
    out.noalias() = A_ * g;
  }

  bool has_hessian() const override {
    return base_->has_hessian() || base_->has_structured_hessian();
  }

  void hessian(const Vec& y, Mat& out) const override {
    const Mat hf = dense_hessian(*base_, A_ * y);
    out.noalias() = A_ * hf * A_;
  }

  void hessian_vec(const Vec& y, const Vec& v, Vec& out) const override {
    const Vec x = A_ * y;
    const Vec av = A_ * v;
    Vec hv(base_->dim());
    base_->hessian_vec(x, av, hv);
    out.noalias() = A_ * hv;
  }

  bool supports_lmco() const override {
    return has_hessian() && base_->supports_lmco();
  }

 private:
  std::shared_ptr<const TargetModel> base_;
  Mat A_;
};

}  // namespace

Preconditioner make_preconditioner(Mat A) {
  check_symmetric(A, "make_preconditioner");
  Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) {
    throw domain_error("make_preconditioner: matrix is not positive definite");
  }
  return Preconditioner{std::move(A)};
}

Preconditioner inverse_sqrt_preconditioner(const Mat& S) {
  check_symmetric(S, "inverse_sqrt_preconditioner");
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  if (es.info() != Eigen::Success) {
    throw domain_error("inverse_sqrt_preconditioner: eigendecomposition failed");
  }
  const Vec& ev = es.eigenvalues();
  const double vmax = ev.maxCoeff();
  if (!(vmax > 0.0) || ev.minCoeff() < 1e-10 * vmax) {
    throw domain_error(
        "inverse_sqrt_preconditioner: matrix is numerically singular "
        "(eigenvalue below 1e-10 of the largest)");
  }
  Mat A = es.eigenvectors() *
          ev.cwiseInverse().cwiseSqrt().asDiagonal() *
          es.eigenvectors().transpose();
  A = 0.5 * (A + A.transpose());  // remove rounding skew
  return Preconditioner{std::move(A)};
}

TransformedModel convexify(std::shared_ptr<const TargetModel> base,
                           const ConvexityCertificate& cert,
                           const ConvexifySpec& spec) {
  if (!base) throw domain_error("convexify: null base model");
  validate_certificate(cert);
  if (spec.x0.size() != base->dim()) {
    throw domain_error("convexify: x0 has wrong dimension");
  }
  if (!(spec.R > 0.0) || !std::isfinite(spec.R)) {
    throw domain_error("convexify: requires R > 0");
  }
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) {
    throw domain_error("convexify: requires gamma > 0");
  }
  if (!(spec.m_inf >= 0.0)) throw domain_error("convexify: requires m_inf >= 0");
  if (!spec.m_profile) {
    throw domain_error("convexify: requires a curvature profile m_profile");
  }
  const double m_2R = spec.m_profile(2.0 * spec.R);
  if (!std::isfinite(m_2R) || m_2R < 0.0) {
    throw domain_error("convexify: m_profile(2R) must be finite and >= 0");
  }
  const double barm = std::min(m_2R, spec.m_inf + 0.5 * spec.gamma);
  if (!(barm > 0.0)) {
    throw domain_error("convexify: resulting certificate has barm <= 0");
  }

  TransformedModel out;
  out.model = std::make_shared<ConvexifiedTarget>(std::move(base), spec.x0,
                                                  spec.R, spec.gamma);
  out.cert = ConvexityCertificate{barm, cert.M + spec.gamma, std::nullopt};
  return out;
}

double convexified_tv_budget(double gamma, int p, double mu_R) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw domain_error("convexified_tv_budget: requires gamma >= 0");
  }
  if (p < 1) throw domain_error("convexified_tv_budget: requires p >= 1");
  if (!(mu_R >= 0.0)) throw domain_error("convexified_tv_budget: requires mu_R >= 0");
  return 0.25 * gamma * p * mu_R;
}

TransformedModel precondition(std::shared_ptr<const TargetModel> base,
                              const ConvexityCertificate& cert_for_g,
                              const Preconditioner& A) {
  if (!base) throw domain_error("precondition: null base model");
  validate_certificate(cert_for_g);
  if (A.A.rows() != base->dim()) {
    throw domain_error("precondition: matrix dimension does not match the model");
  }
  TransformedModel out;
  out.model = std::make_shared<PreconditionedTarget>(std::move(base), A.A);
  out.cert = cert_for_g;
  return out;
}

SampleSet map_back(const SampleSet& set, const Preconditioner& A) {
  if (set.data.cols() != A.A.rows()) {
    throw domain_error("map_back: matrix dimension does not match the samples");
  }
  SampleSet out;
  out.data = set.data * A.A;  // row eta -> (A eta)^T, A symmetric
  out.meta = set.meta;
  out.meta["transform"] = "mapped back through theta = A eta";
  return out;
}

Mat read_matrix_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("read_matrix_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  long long lineno = 0;
  std::vector<double> row;
  while (std::getline(f, line)) {
    ++lineno;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    if (!detail::parse_row(line, row)) {
      if (first && !detail::any_numeric_field(line)) {
        first = false;  // header line
        continue;
      }
      throw io_error("read_matrix_csv: malformed row at line " +
                     std::to_string(lineno) + " of " + path);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw io_error("read_matrix_csv: ragged row at line " +
                     std::to_string(lineno) + " of " + path);
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw io_error("read_matrix_csv: no data rows in " + path);
  Mat m(static_cast<long long>(rows.size()),
        static_cast<long long>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<long long>(i), static_cast<long long>(j)) = rows[i][j];
    }
  }
  if (!m.allFinite()) throw io_error("read_matrix_csv: non-finite entry in " + path);
  return m;
}

void write_matrix_csv(const Mat& m, const std::string& path) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 20 + 16);
  for (long long i = 0; i < m.rows(); ++i) {
    for (long long j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      detail::append_double(out, m(i, j));
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("write_matrix_csv: cannot open " + path);
  f << out;
  if (!f) throw io_error("write_matrix_csv: write failed for " + path);
}

}  // namespace lcsamp
