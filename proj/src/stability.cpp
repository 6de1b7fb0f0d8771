#include "seqnet/stability.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace seqnet {

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::CertifiedStable: return "certified-stable";
    case StabilityVerdict::EigenStable: return "eigen-stable";
    case StabilityVerdict::Unstable: return "unstable";
    case StabilityVerdict::Degenerate: return "degenerate";
  }
  return "?";
}

std::vector<GershgorinDisc> gershgorin_discs(const Mat<double>& A, DiscMode mode) {
  if (A.rows() != A.cols()) throw std::invalid_argument("gershgorin_discs: square matrix required");
  std::vector<GershgorinDisc> discs;
  for (int i = 0; i < A.rows(); ++i) {
    double radius = 0;
    for (int j = 0; j < A.cols(); ++j) {
      if (j == i) continue;
      radius += std::abs(mode == DiscMode::Row ? A(i, j) : A(j, i));
    }
    discs.push_back({A(i, i), radius, mode, i + 1});
  }
  return discs;
}

double disc_union_distance(const std::vector<GershgorinDisc>& discs, std::complex<double> z) {
  double best = std::numeric_limits<double>::infinity();
  for (const GershgorinDisc& d : discs)
    best = std::min(best, std::abs(z - std::complex<double>(d.center, 0.0)) - d.radius);
  return best;
}

DominanceVerdict dominance_verdict(const Mat<double>& A) {
  for (int i = 0; i < A.rows(); ++i)
    if (!(A(i, i) < 0)) return DominanceVerdict::Inconclusive;
  if (diagonal_dominance(A, DiscMode::Row).dominant ||
      diagonal_dominance(A, DiscMode::Column).dominant)
    return DominanceVerdict::NegativeRealParts;
  return DominanceVerdict::Inconclusive;
}

namespace {

double inf_norm(const Mat<double>& a) {
  double best = 0;
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0;
    for (int j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

Mat<double> to_double_mat(const Mat<Rational>& a) {
  Mat<double> m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = to_double(a(i, j));
  return m;
}

double det_double(const Mat<double>& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m.partialPivLu().determinant();
}

void fill_discs(StabilityReport& report, const Mat<double>& J) {
  report.discs = gershgorin_discs(J, DiscMode::Row);
  auto cols = gershgorin_discs(J, DiscMode::Column);
  report.discs.insert(report.discs.end(), cols.begin(), cols.end());
}

// Eigenvalue classification with the scale-aware band around zero.
void eigen_classify(StabilityReport& report, const Mat<double>& J) {
  report.eigenvalues = eigenvalues(J);
  const double tol = 1e-9 * inf_norm(J);
  double max_re = -std::numeric_limits<double>::infinity();
  for (const auto& ev : report.eigenvalues) max_re = std::max(max_re, ev.real());
  if (max_re < -tol)
    report.verdict = StabilityVerdict::EigenStable;
  else if (max_re > tol)
    report.verdict = StabilityVerdict::Unstable;
  else
    report.verdict = StabilityVerdict::Degenerate;
}

}  // namespace

StabilityReport classify(const Mat<double>& J) {
  if (J.rows() != J.cols()) throw std::invalid_argument("classify: square matrix required");
  StabilityReport report;
  fill_discs(report, J);
  report.dominant_margin = diagonal_dominance(J, DiscMode::Column).margin;
  eigen_classify(report, J);

  bool neg_diag = true;
  for (int i = 0; i < J.rows(); ++i) neg_diag = neg_diag && J(i, i) < 0;
  const bool nondeg = std::abs(det_double(J)) > degeneracy_threshold(J);
  if (neg_diag && nondeg) {
    auto col = diagonal_dominance(J, DiscMode::Column);
    auto row = diagonal_dominance(J, DiscMode::Row);
    if (col.dominant || row.dominant) {
      report.verdict = StabilityVerdict::CertifiedStable;
      report.scaling = std::vector<double>(J.rows(), 1.0);
      report.dominant_margin = col.dominant ? col.margin : row.margin;
    }
  }
  return report;
}

StabilityReport classify_exact(const ModelParams& p, std::span<const Rational> rates3n,
                               std::span<const Rational> x) {
  p.require_family();
  const Mat<Rational> J = family_jacobian<Rational>(p, rates3n, x);
  const Mat<double> Jd = to_double_mat(J);

  StabilityReport report;
  fill_discs(report, Jd);
  report.dominant_margin = diagonal_dominance(Jd, DiscMode::Column).margin;
  eigen_classify(report, Jd);

  bool neg_diag = true;
  for (int i = 0; i < p.n; ++i) neg_diag = neg_diag && J(i, i) < 0;
  const bool nondeg = std::abs(det_double(Jd)) > degeneracy_threshold(Jd);
  if (!neg_diag || !nondeg) return report;

  // Certificate candidates, cheapest first: the matrix itself, the ones
  // scaling, the boundary scaling. Dominance is decided exactly.
  std::vector<std::vector<Rational>> candidates;
  candidates.emplace_back(p.n, Rational(1));
  candidates.push_back(ones_scaling<Rational>(p, rates3n, x));
  candidates.push_back(boundary_scaling<Rational>(p, rates3n, x));
  for (const auto& d : candidates) {
    const Mat<Rational> scaled = diagonal_similarity(J, d);
    for (DiscMode mode : {DiscMode::Column, DiscMode::Row}) {
      auto check = diagonal_dominance(scaled, mode);
      if (!check.dominant) continue;
      report.verdict = StabilityVerdict::CertifiedStable;
      report.scaling = to_doubles(d);
      report.dominant_margin = to_double(check.margin);
      report.exact_certificate = true;
      return report;
    }
  }
  return report;
}

StabilityReport classify(const ModelParams& p, const RateVector& rates,
                         std::span<const double> x) {
  std::vector<Rational> xq;
  xq.reserve(x.size());
  for (double v : x) xq.push_back(rational_of(v));
  return classify_exact(p, rates.values(), xq);
}

}  // namespace seqnet
