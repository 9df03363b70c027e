#pragma once

// Polynomial and rational matrices, Smith and Smith–McMillan forms.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlinz/poly.hpp"
#include "qlinz/spectrum.hpp"
#include "qlinz/system.hpp"

namespace qlinz {

class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static PolyMatrix identity(std::size_t n);
  /// A - sI style pencils: constant + s * linear.
  static PolyMatrix pencil(const GMatrix& constant, const GMatrix& linear);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Poly& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Poly& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  int max_degree() const;
  GMatrix eval(const GR& s) const;
  /// Exact determinant by evaluation at integer nodes and interpolation.
  Poly determinant() const;

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Poly> data_;
};

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit RationalMatrix(const PolyMatrix& p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  RationalFn& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const RationalFn& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Throws PoleEvaluationError at a pole of any entry.
  CMatrix eval(Complex s) const;
  /// Monic lcm of all entry denominators.
  Poly common_denominator() const;
  /// Exact determinant (square matrices).
  RationalFn determinant() const;
  bool is_diagonal() const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RationalFn> data_;
};

/// G(s) = D + C (sI - A)⁻¹ B for an exact realization, via the
/// Faddeev–LeVerrier resolvent expansion. Throws ExactnessError when `ss`
/// carries no exact copy.
RationalMatrix transfer_matrix_exact(const StateSpace& ss);

/// U N V = diag(factors, 0...), U and V unimodular.
struct SmithForm {
  std::vector<Poly> factors;
  PolyMatrix left;
  PolyMatrix right;
};

/// Smith form of a polynomial matrix. Pivot: lowest-degree nonzero entry of
/// the trailing block, ties broken by smallest (row, col).
SmithForm smith_form(const PolyMatrix& n);

struct SmithMcMillanForm {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  /// Numerators α_i and denominators β_i, all monic.
  std::vector<Poly> alphas;
  std::vector<Poly> betas;
  Poly common_denominator;
  /// Unimodular factors with left * G * right = diagonal().
  PolyMatrix left;
  PolyMatrix right;

  RationalMatrix diagonal() const;
};

SmithMcMillanForm smith_mcmillan(const RationalMatrix& g);

/// Exact check of left * G * right == diag(α_i / β_i).
bool verify_reconstruction(const RationalMatrix& g, const SmithMcMillanForm& smf);

/// Constant c with det G = c * prod(α_i) / prod(β_i), or nullopt when the
/// ratio is not a nonzero constant (or G is not square of full rank).
std::optional<GR> determinant_unit(const RationalMatrix& g, const SmithMcMillanForm& smf);

/// Roots with multiplicity. Linear factors with Gaussian-rational roots are
/// divided out exactly; the remaining factor is solved numerically and the
/// spectrum is flagged "numeric".
Spectrum polynomial_spectrum(const std::vector<Poly>& factors, double tol,
                             SpectrumMethod method);

struct SmfSpectra {
  Spectrum zeros;
  Spectrum poles;
};

SmfSpectra zeros_poles_from_smf(const SmithMcMillanForm& smf, double tol = kDefaultTol);

}  // namespace qlinz
