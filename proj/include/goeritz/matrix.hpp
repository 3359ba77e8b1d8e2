#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "goeritz/gaussian_int.hpp"

namespace goeritz {

/// Symmetric matrix whose rows/columns are indexed by string labels
/// (canonical region labels, padding labels, ...).  Labels are kept sorted;
/// all rendering and reduction order is the sorted label order.  Entries are
/// Gaussian integers; plain integer matrices simply have zero imaginary
/// parts everywhere (see is_real()).
class LabeledSymMatrix {
 public:
  LabeledSymMatrix() = default;

  /// Zero matrix on the given labels.  Throws on duplicate labels.
  explicit LabeledSymMatrix(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_label(const std::string& l) const;
  std::size_t index_of(const std::string& l) const;  // throws if absent

  GaussianInt at(std::size_t i, std::size_t j) const;
  GaussianInt at(const std::string& a, const std::string& b) const;
  void set(std::size_t i, std::size_t j, GaussianInt v);  // keeps symmetry
  void set(const std::string& a, const std::string& b, GaussianInt v);
  void add(const std::string& a, const std::string& b, GaussianInt v);

  /// True when every entry has zero imaginary part.
  bool is_real() const;

  /// Recomputes each diagonal entry so that every row sums to zero.
  void enforce_zero_row_sums();

  /// Copy without the given label's row and column.  Throws if absent.
  LabeledSymMatrix reduce(const std::string& label) const;

  /// Copy without the first label (sorted order).  Throws if empty.
  LabeledSymMatrix reduce_first() const;

  /// Adjusted matrix: block-diagonal sum with a (beta-1) x (beta-1) zero
  /// block on fresh padding labels "_z1", "_z2", ...  Throws if beta <= 0.
  LabeledSymMatrix adjust(int beta) const;

  bool operator==(const LabeledSymMatrix& o) const = default;

  /// Canonical invariant: the lexicographically least row-major encoding
  /// over all label orderings.  Two matrices are equal up to relabeling iff
  /// their canonical keys agree.
  std::vector<std::int64_t> canonical_key() const;

  /// Label order realizing canonical_key().
  std::vector<std::string> canonical_order() const;

  /// Plain-text rendering (aligned columns, sorted label order).
  std::string to_text() const;

  /// JSON: {"labels": [...], "entries": [["0","1+i",...], ...]}.
  std::string to_json() const;
  static LabeledSymMatrix from_json(const std::string& text);

 private:
  std::vector<std::string> labels_;           // sorted, unique
  std::vector<GaussianInt> data_;             // dense n*n, symmetric
  std::vector<int> canonical_search() const;  // permutation (positions -> index)
};

/// Witness for equality-up-to-relabeling: maps labels of `a` to labels of
/// `b`.  Empty optional when the matrices are not bijection-equal.
std::optional<std::map<std::string, std::string>> bijection_equal(
    const LabeledSymMatrix& a, const LabeledSymMatrix& b);

/// Dense integer (not necessarily symmetric) matrix used for congruence
/// witnesses.
using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Exact check that U * a * U^T == b and det(U) == +-1.  The rows/columns of
/// U refer to the sorted label orders of `a` (columns) and `b` (rows).
/// Throws std::invalid_argument on dimension mismatch or non-real a/b.
bool congruence_verify(const IntMatrix& U, const LabeledSymMatrix& a,
                       const LabeledSymMatrix& b);

/// Determinant of an integer matrix (Bareiss, exact).  Throws on overflow
/// beyond 128-bit intermediates or non-square input.
std::int64_t int_determinant(const IntMatrix& m);

/// Nullity of m over GF(2).  Throws std::invalid_argument when any entry has
/// a nonzero imaginary part.
int gf2_nullity(const LabeledSymMatrix& m);

/// Determinant of the matrix after deleting the first row/column (sorted
/// label order).  The empty reduced matrix has determinant 1.  Throws
/// std::invalid_argument when m itself is empty.
GaussianInt reduced_determinant(const LabeledSymMatrix& m);

/// Determinant of the full matrix (exact fraction-free elimination).
GaussianInt determinant(const LabeledSymMatrix& m);

/// Parses "U" style JSON: {"rows": [[1,2],[0,1]]}.
IntMatrix int_matrix_from_json(const std::string& text);

}  // namespace goeritz
