#include "qlinz/kalman.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "qlinz/errors.hpp"

namespace qlinz {
namespace {

constexpr double kAmbiguityDecades = 100.0;

struct RankTracker {
  double gap = std::numeric_limits<double>::infinity();

  // Number of singular values above `threshold`; refuses when one sits within
  // two decades of it.
  Eigen::Index decide(const Eigen::VectorXd& sv, double threshold, const char* what) {
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      const double s = sv(i);
      if (s > threshold) ++rank;
      if (s >= threshold / kAmbiguityDecades && s <= threshold * kAmbiguityDecades) {
        throw NumericalError(std::string("kalman decomposition: ") + what +
                             " rank is ambiguous: singular value " + std::to_string(s) +
                             " is within two decades of the threshold " +
                             std::to_string(threshold) + "; adjust --tol");
      }
      if (threshold > 0.0) {
        const double ratio = s > threshold ? s / threshold : threshold / std::max(s, 1e-300);
        gap = std::min(gap, ratio);
      }
    }
    return rank;
  }
};

CMatrix range_of(const CMatrix& m, double threshold, RankTracker& tracker, const char* what) {
  if (m.cols() == 0 || m.rows() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const Eigen::Index rank = tracker.decide(svd.singularValues(), threshold, what);
  return svd.matrixU().leftCols(rank);
}

// Orthonormal basis of the smallest A-invariant subspace containing range(B).
CMatrix reachable_subspace(const CMatrix& a, const CMatrix& b, double threshold,
                           RankTracker& tracker, const char* what) {
  const Eigen::Index n = a.rows();
  CMatrix q = range_of(b, threshold, tracker, what);
  CMatrix last = q;
  while (q.cols() < n && last.cols() > 0) {
    CMatrix r = a * last;
    for (int pass = 0; pass < 2; ++pass) r -= q * (q.adjoint() * r);
    last = range_of(r, threshold, tracker, what);
    if (last.cols() == 0) break;
    CMatrix grown(n, q.cols() + last.cols());
    grown << q, last;
    q = std::move(grown);
  }
  return q;
}

// Leading `count` left singular vectors.
CMatrix leading_directions(const CMatrix& m, Eigen::Index count) {
  if (count == 0 || m.cols() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(count);
}

CMatrix hcat(std::initializer_list<const CMatrix*> parts, Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto* p : parts) cols += p->cols();
  CMatrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto* p : parts) {
    out.middleCols(at, p->cols()) = *p;
    at += p->cols();
  }
  return out;
}

Spectrum block_spectrum(const CMatrix& m, Eigen::Index start, Eigen::Index size, double tol) {
  return Spectrum(eigenvalue_list(m.block(start, start, size, size)), tol, SpectrumMethod::eigen);
}

Spectrum join(const Spectrum& a, const Spectrum& b, double tol) {
  std::vector<Complex> all = a.expanded();
  for (Complex z : b.expanded()) all.push_back(z);
  return Spectrum(std::move(all), tol, SpectrumMethod::eigen);
}

}  // namespace

KalmanReport kalman_decompose(const StateSpace& ss, double tol) {
  if (!(tol > 0.0)) throw ParameterError("kalman decomposition: tolerance must be positive");
  const Eigen::Index n = ss.states();
  const CMatrix& a = ss.a();
  const double scale = std::max({1.0, a.norm(), ss.b().norm(), ss.c().norm()});
  const double threshold = tol * scale;
  RankTracker tracker;

  const CMatrix qc = reachable_subspace(a, ss.b(), threshold, tracker, "controllable subspace");
  const CMatrix qo = reachable_subspace(a.adjoint(), ss.c().adjoint(), threshold, tracker,
                                        "observable subspace");
  const CMatrix qn = orthogonal_complement(qo, n);

  // Directions of the controllable subspace with no observable component.
  CMatrix t1(n, 0), t2(n, 0);
  if (qc.cols() > 0) {
    if (qo.cols() == 0) {
      t1 = qc;
    } else {
      Eigen::JacobiSVD<CMatrix> svd(qo.adjoint() * qc, Eigen::ComputeFullV);
      Eigen::VectorXd sv = Eigen::VectorXd::Zero(qc.cols());
      sv.head(svd.singularValues().size()) = svd.singularValues();
      const Eigen::Index observable_part = tracker.decide(sv, tol, "controllable/unobservable intersection");
      t2 = qc * svd.matrixV().leftCols(observable_part);
      t1 = qc * svd.matrixV().rightCols(qc.cols() - observable_part);
    }
  }
  const Eigen::Index dim_t3 = qn.cols() - t1.cols();
  CMatrix t3 = leading_directions(qn - t1 * (t1.adjoint() * qn), dim_t3);
  const CMatrix sum_basis = leading_directions(hcat({&qc, &qn}, n), qc.cols() + dim_t3);
  CMatrix t4 = orthogonal_complement(sum_basis, n);

  KalmanReport r;
  r.tol = tol;
  r.dim_c_obar = static_cast<int>(t1.cols());
  r.dim_co = static_cast<int>(t2.cols());
  r.dim_cbar_obar = static_cast<int>(t3.cols());
  r.dim_cbar_o = static_cast<int>(t4.cols());
  r.transformation = hcat({&t1, &t2, &t3, &t4}, n);
  if (r.transformation.cols() != n) {
    throw NumericalError("kalman decomposition: subspace dimensions do not add up; adjust --tol");
  }
  Eigen::PartialPivLU<CMatrix> lu(r.transformation);
  const CMatrix at = n > 0 ? CMatrix(lu.solve(a * r.transformation)) : CMatrix(0, 0);
  const CMatrix bt = n > 0 ? CMatrix(lu.solve(ss.b())) : CMatrix(0, ss.inputs());
  const CMatrix ct = ss.c() * r.transformation;

  Eigen::Index at_block = 0;
  r.c_obar = block_spectrum(at, at_block, t1.cols(), tol);
  at_block += t1.cols();
  r.co = block_spectrum(at, at_block, t2.cols(), tol);
  const Eigen::Index co_start = at_block;
  at_block += t2.cols();
  r.cbar_obar = block_spectrum(at, at_block, t3.cols(), tol);
  at_block += t3.cols();
  r.cbar_o = block_spectrum(at, at_block, t4.cols(), tol);
  r.observable = join(r.co, r.cbar_o, tol);
  r.unobservable = join(r.c_obar, r.cbar_obar, tol);
  r.rank_gap = tracker.gap;
  r.minimal = StateSpace(at.block(co_start, co_start, t2.cols(), t2.cols()),
                         bt.middleRows(co_start, t2.cols()), ct.middleCols(co_start, t2.cols()),
                         ss.d(), ss.representation());
  return r;
}

HiddenModeReport check_hidden_mode_condition(const KalmanReport& k, double real_part_tol) {
  HiddenModeReport h;
  h.real_part_tol = real_part_tol;
  for (const Spectrum* s : {&k.c_obar, &k.cbar_o, &k.cbar_obar}) {
    for (Complex z : s->expanded()) {
      if (std::abs(z.real()) > real_part_tol) h.offending_eigenvalues.push_back(z);
    }
  }
  h.holds = h.offending_eigenvalues.empty();
  return h;
}

HiddenModeReport check_hidden_mode_condition(const StateSpace& ss, double tol, double real_part_tol) {
  return check_hidden_mode_condition(kalman_decompose(ss, tol), real_part_tol);
}

std::string hidden_mode_refusal(const HiddenModeReport& h, const std::string& what) {
  std::string list;
  for (Complex z : h.offending_eigenvalues) {
    if (!list.empty()) list += ", ";
    list += format_complex(z, 10);
  }
  char bound[32];
  std::snprintf(bound, sizeof bound, "%.3g", h.real_part_tol);
  return what + " refused: the hidden-mode condition fails (controllable-unobservable, "
                "uncontrollable-observable and uncontrollable-unobservable eigenvalues must be "
                "purely imaginary to |Re| <= " +
         bound + "; offending: " + list +
         "). Without it the observable-eigenvalue criterion is invalid, as the two-mode system "
         "A = diag(-1, 1), B = C = [[0,1],[0,0]] shows";
}

Spectrum invariant_zeros_via_theorem(const StateSpace& ss, double tol, double real_part_tol) {
  const KalmanReport k = kalman_decompose(ss, tol);
  const HiddenModeReport h = check_hidden_mode_condition(k, real_part_tol);
  if (!h.holds) throw RefusalError(hidden_mode_refusal(h, "observable-eigenvalue zero formula"));
  std::vector<Complex> zeros = negated_conjugates(k.observable.expanded());
  for (Complex z : k.unobservable.expanded()) zeros.push_back(z);
  return Spectrum(std::move(zeros), tol, SpectrumMethod::kalman_theorem);
}

StateSpace minimal_realization(const StateSpace& ss, double tol) {
  return kalman_decompose(ss, tol).minimal;
}

}  // namespace qlinz
