#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "shagraph/errors.hpp"

namespace shagraph::abelian {

using Int = mpz_class;

/// Dense matrix over arbitrary-precision integers.  Entries are exact;
/// fixed-width overflow cannot occur anywhere in the library.
class IntMat {
public:
    IntMat() = default;
    IntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static IntMat identity(std::size_t n);
    static IntMat from_rows(const std::vector<std::vector<Int>>& rows);
    static IntMat from_rows(std::initializer_list<std::initializer_list<long>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const IntMat& o) const = default;

    IntMat operator*(const IntMat& o) const;
    IntMat operator+(const IntMat& o) const;
    IntMat operator-(const IntMat& o) const;
    IntMat operator-() const;
    IntMat operator*(const Int& s) const;

    IntMat transposed() const;
    bool is_zero() const;
    bool is_identity() const;

    IntMat column(std::size_t j) const;

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    void negate_row(std::size_t i);
    void negate_col(std::size_t j);
    /// row i += q * row t
    void add_row_multiple(std::size_t i, std::size_t t, const Int& q);
    /// col j += q * col t
    void add_col_multiple(std::size_t j, std::size_t t, const Int& q);

    /// Copies `m` into this matrix with upper-left corner at (i, j).
    void paste(std::size_t i, std::size_t j, const IntMat& m);
    /// Adds `m` entrywise into this matrix at (i, j).
    void accumulate(std::size_t i, std::size_t j, const IntMat& m);
    IntMat slice(std::size_t i, std::size_t j, std::size_t rows, std::size_t cols) const;

    std::string str() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> a_;
};

IntMat hstack(const IntMat& a, const IntMat& b);
IntMat vstack(const IntMat& a, const IntMat& b);

/// Smith normal form d = u * m * v with u, v unimodular and the diagonal of d
/// nonnegative with d1 | d2 | ... .  u_inv and v_inv are the exact inverses.
/// Pivot choice is the smallest nonzero absolute value, ties broken by lowest
/// row then column index, so the output is deterministic.
struct SmithForm {
    IntMat u, d, v;
    IntMat u_inv, v_inv;
    std::size_t rank = 0; // number of nonzero diagonal entries
};

SmithForm smith_normal_form(const IntMat& m);

/// Smith diagonal and rank only; the transform slots stay empty.  Much
/// cheaper on tall matrices, where u alone would be rows x rows.
SmithForm diagonal_only_smith(const IntMat& m);

/// Determinant by fraction-free (Bareiss) elimination.  Square input only.
Int determinant(const IntMat& m);

/// Columns form a basis of { x : m x = 0 }.  The basis is saturated
/// (it is a block of columns of a unimodular matrix).
IntMat kernel_basis(const IntMat& m);

/// Solves a x = b over the integers, column by column; nullopt if any column
/// has no integral solution.  The returned solution is the deterministic one
/// with zero coefficients on the free part.
std::optional<IntMat> solve(const IntMat& a, const IntMat& b);

/// Row Hermite normal form with zero rows dropped: canonical basis (as rows)
/// of the row span of m.  Pivots positive, entries above a pivot reduced into
/// [0, pivot).
IntMat row_hnf(const IntMat& m);

/// Canonical basis (as columns) of the column span of m.
IntMat column_lattice_basis(const IntMat& m);

/// Every column of vecs lies in the column span of gens.
bool lattice_contains(const IntMat& gens, const IntMat& vecs);

bool same_column_lattice(const IntMat& a, const IntMat& b);

} // namespace shagraph::abelian
