#include "finsler/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace finsler::linalg {

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

double operator_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  return singular_values(x)(0);
}

double normalized_trace(const Matrix& x) {
  return x.trace().real() / static_cast<double>(x.rows());
}

double p_norm(const Matrix& x, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::domain, "p_norm requires p >= 1");
  const RealVector s = singular_values(x);
  const double smax = s.size() > 0 ? s(0) : 0.0;
  if (smax == 0.0) return 0.0;
  // Factor out sigma_max so large p does not overflow.
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / smax, p);
  return smax * std::pow(acc / static_cast<double>(x.rows()), 1.0 / p);
}

double trace_inner(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "trace_inner: dimension mismatch");
  }
  // Re tr(y* x) = Re sum conj(y_ij) x_ij
  return (y.conjugate().cwiseProduct(x)).sum().real() / static_cast<double>(x.rows());
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

SingularSystem singular_system(const Matrix& x, double rank_tol) {
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SingularSystem out{svd.matrixU(), svd.singularValues(), svd.matrixV(), 0};
  const double smax = out.sigma.size() > 0 ? out.sigma(0) : 0.0;
  if (smax > 0.0) {
    const double cut = rank_tol * smax;
    while (out.rank < out.sigma.size() && out.sigma(out.rank) > cut) ++out.rank;
  }
  return out;
}

RealVector singular_values(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues();
}

bool is_invertible(const Matrix& g, double tol) {
  if (g.rows() != g.cols() || g.size() == 0) return false;
  if (!g.allFinite()) return false;
  const RealVector s = singular_values(g);
  return s(0) > 0.0 && s(s.size() - 1) > tol * s(0);
}

PositiveMatrix::PositiveMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "PositiveMatrix: matrix is not square");
  }
  const double scale = a.size() > 0 ? a.cwiseAbs().maxCoeff() : 0.0;
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermTol * (1.0 + scale)) {
    std::ostringstream os;
    os << "PositiveMatrix: input is not self-adjoint (asymmetry " << asym << ")";
    throw Error(ErrorKind::not_positive, os.str());
  }
  a_ = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(a_);
  const Eigen::Index n = a_.rows();
  eigenvalues_.resize(n);
  eigenvectors_.resize(n, n);
  // Eigen returns increasing order.
  for (Eigen::Index i = 0; i < n; ++i) {
    eigenvalues_(i) = es.eigenvalues()(n - 1 - i);
    eigenvectors_.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  const double top = n > 0 ? std::max(std::abs(eigenvalues_(0)),
                                      std::abs(eigenvalues_(n - 1)))
                           : 0.0;
  const double floor = kPsdTol * top;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eigenvalues_(i) < -floor) {
      std::ostringstream os;
      os << "PositiveMatrix: negative eigenvalue " << eigenvalues_(i);
      throw Error(ErrorKind::not_positive, os.str());
    }
    if (eigenvalues_(i) <= floor) eigenvalues_(i) = 0.0;
  }
}

PositiveMatrix PositiveMatrix::gram(const Matrix& x) { return PositiveMatrix(x.adjoint() * x); }

namespace {

Matrix from_eigensystem(const Matrix& vecs, const RealVector& vals) {
  return vecs * vals.cast<Complex>().asDiagonal() * vecs.adjoint();
}

}  // namespace

PolarFactors polar_decompose(const Matrix& x) {
  const Eigen::Index n = x.cols();
  const SingularSystem s = singular_system(x);
  const Eigen::Index r = s.rank;
  Matrix omega = Matrix::Zero(x.rows(), n);
  Matrix modulus = Matrix::Zero(n, n);
  if (r > 0) {
    const Matrix ur = s.u.leftCols(r);
    const Matrix vr = s.v.leftCols(r);
    omega = ur * vr.adjoint();
    modulus = vr * s.sigma.head(r).cast<Complex>().asDiagonal() * vr.adjoint();
  }
  return PolarFactors{std::move(omega), PositiveMatrix(modulus)};
}

PositiveMatrix positive_power(const PositiveMatrix& a, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::domain, "positive_power requires r > 0");
  RealVector vals = a.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    vals(i) = vals(i) > 0.0 ? std::pow(vals(i), r) : 0.0;
  }
  return PositiveMatrix(from_eigensystem(a.eigenvectors(), vals));
}

Matrix expm(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n == 0) return x;
  const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Matrix a = x / std::ldexp(1.0, squarings);

  Matrix result = identity(n);
  Matrix term = identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * a) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Matrix logm_principal(const Matrix& g) {
  if (g.rows() != g.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "logm_principal: matrix is not square");
  }
  Eigen::ComplexEigenSolver<Matrix> es(g, false);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const Complex z = ev(i);
    if (std::abs(z) <= kRankTol * scale ||
        (z.real() <= 0.0 && std::abs(z.imag()) <= kRankTol * scale)) {
      std::ostringstream os;
      os << "logm_principal: eigenvalue " << z.real() << (z.imag() < 0 ? "" : "+")
         << z.imag() << "i lies on the branch cut (-inf, 0]";
      throw Error(ErrorKind::branch_cut, os.str());
    }
  }
  return g.log();
}

std::vector<int> Spectrum::multiplicities() const {
  std::vector<int> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(c.multiplicity);
  return out;
}

std::vector<std::vector<Eigen::Index>> cluster_indices(const RealVector& decreasing,
                                                       double cluster_tol) {
  std::vector<std::vector<Eigen::Index>> groups;
  double head = 0.0;
  for (Eigen::Index i = 0; i < decreasing.size(); ++i) {
    const double lam = decreasing(i);
    if (!groups.empty() && head - lam <= cluster_tol * std::abs(head)) {
      groups.back().push_back(i);
    } else {
      groups.push_back({i});
      head = lam;
    }
  }
  return groups;
}

Spectrum spectrum_of(const PositiveMatrix& a, double cluster_tol) {
  Spectrum out;
  const RealVector& vals = a.eigenvalues();
  for (const auto& group : cluster_indices(vals, cluster_tol)) {
    double sum = 0.0;
    for (Eigen::Index i : group) sum += vals(i);
    out.clusters.push_back(
        {sum / static_cast<double>(group.size()), static_cast<int>(group.size())});
  }
  return out;
}

}  // namespace finsler::linalg
