#include "shagraph/intmat.hpp"

#include <sstream>
#include <utility>

namespace shagraph::abelian {

IntMat IntMat::identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMat IntMat::from_rows(const std::vector<std::vector<Int>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    IntMat m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw schema_error("ragged matrix rows");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMat IntMat::from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<Int>> v;
    v.reserve(rows.size());
    for (const auto& row : rows) v.emplace_back(row.begin(), row.end());
    return from_rows(v);
}

IntMat IntMat::operator*(const IntMat& o) const {
    if (cols_ != o.rows_) throw mismatch_error("matrix product: shape mismatch");
    IntMat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& x = (*this)(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
        }
    return r;
}

IntMat IntMat::operator+(const IntMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw mismatch_error("matrix sum: shape mismatch");
    IntMat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

IntMat IntMat::operator-(const IntMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw mismatch_error("matrix difference: shape mismatch");
    IntMat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

IntMat IntMat::operator-() const {
    IntMat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
    return r;
}

IntMat IntMat::operator*(const Int& s) const {
    IntMat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

IntMat IntMat::transposed() const {
    IntMat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

bool IntMat::is_zero() const {
    for (const Int& x : a_)
        if (x != 0) return false;
    return true;
}

bool IntMat::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

IntMat IntMat::column(std::size_t j) const {
    IntMat r(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) r(i, 0) = (*this)(i, j);
    return r;
}

void IntMat::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void IntMat::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

void IntMat::negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = -(*this)(i, k);
}

void IntMat::negate_col(std::size_t j) {
    for (std::size_t k = 0; k < rows_; ++k) (*this)(k, j) = -(*this)(k, j);
}

void IntMat::add_row_multiple(std::size_t i, std::size_t t, const Int& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) += q * (*this)(t, k);
}

void IntMat::add_col_multiple(std::size_t j, std::size_t t, const Int& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < rows_; ++k) (*this)(k, j) += q * (*this)(k, t);
}

void IntMat::paste(std::size_t i, std::size_t j, const IntMat& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) (*this)(i + r, j + c) = m(r, c);
}

void IntMat::accumulate(std::size_t i, std::size_t j, const IntMat& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) (*this)(i + r, j + c) += m(r, c);
}

IntMat IntMat::slice(std::size_t i, std::size_t j, std::size_t rows, std::size_t cols) const {
    IntMat r(rows, cols);
    for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < cols; ++b) r(a, b) = (*this)(i + a, j + b);
    return r;
}

std::string IntMat::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
    }
    os << "]";
    return os.str();
}

IntMat hstack(const IntMat& a, const IntMat& b) {
    if (a.rows() != b.rows()) throw mismatch_error("hstack: row count mismatch");
    IntMat r(a.rows(), a.cols() + b.cols());
    r.paste(0, 0, a);
    r.paste(0, a.cols(), b);
    return r;
}

IntMat vstack(const IntMat& a, const IntMat& b) {
    if (a.cols() != b.cols()) throw mismatch_error("vstack: column count mismatch");
    IntMat r(a.rows() + b.rows(), a.cols());
    r.paste(0, 0, a);
    r.paste(a.rows(), 0, b);
    return r;
}

namespace {

// Elementary operations on d with the requested transforms kept in sync.
// Large inputs (bar-complex differentials) make the row transform rows x rows,
// so callers that only need part of the data must not pay for the rest.
struct SnfWork {
    IntMat d, u, v, u_inv, v_inv;
    bool track_u, track_v, track_inv;

    void row_swap(std::size_t i, std::size_t j) {
        d.swap_rows(i, j);
        if (track_u) {
            u.swap_rows(i, j);
            if (track_inv) u_inv.swap_cols(i, j);
        }
    }
    void col_swap(std::size_t i, std::size_t j) {
        d.swap_cols(i, j);
        if (track_v) {
            v.swap_cols(i, j);
            if (track_inv) v_inv.swap_rows(i, j);
        }
    }
    void row_negate(std::size_t i) {
        d.negate_row(i);
        if (track_u) {
            u.negate_row(i);
            if (track_inv) u_inv.negate_col(i);
        }
    }
    void row_add(std::size_t i, std::size_t t, const Int& q) { // row i += q row t
        d.add_row_multiple(i, t, q);
        if (track_u) {
            u.add_row_multiple(i, t, q);
            if (track_inv) u_inv.add_col_multiple(t, i, -q);
        }
    }
    void col_add(std::size_t j, std::size_t t, const Int& q) { // col j += q col t
        d.add_col_multiple(j, t, q);
        if (track_v) {
            v.add_col_multiple(j, t, q);
            if (track_inv) v_inv.add_row_multiple(t, j, -q);
        }
    }
};

Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

SmithForm smith_normal_form_impl(const IntMat& m, bool track_u, bool track_v, bool track_inv) {
    const std::size_t r = m.rows(), c = m.cols();
    SnfWork w{m,
              track_u ? IntMat::identity(r) : IntMat(),
              track_v ? IntMat::identity(c) : IntMat(),
              track_u && track_inv ? IntMat::identity(r) : IntMat(),
              track_v && track_inv ? IntMat::identity(c) : IntMat(),
              track_u,
              track_v,
              track_inv};

    const std::size_t steps = std::min(r, c);
    std::size_t t = 0;
    for (; t < steps; ++t) {
        bool have_pivot = false;
        for (;;) {
            // Deterministic pivot: least |entry|, then lowest row, then column.
            std::size_t pi = 0, pj = 0;
            Int best;
            bool found = false;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j) {
                    const Int& x = w.d(i, j);
                    if (x == 0) continue;
                    Int ax = abs(x);
                    if (!found || ax < best) {
                        found = true;
                        best = std::move(ax);
                        pi = i;
                        pj = j;
                    }
                }
            if (!found) break;
            have_pivot = true;
            w.row_swap(t, pi);
            w.col_swap(t, pj);
            if (w.d(t, t) < 0) w.row_negate(t);

            bool dirty = false;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (w.d(i, t) == 0) continue;
                w.row_add(i, t, -floor_div(w.d(i, t), w.d(t, t)));
                if (w.d(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (w.d(t, j) == 0) continue;
                w.col_add(j, t, -floor_div(w.d(t, j), w.d(t, t)));
                if (w.d(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // Divisibility sweep: pivot must divide the remaining submatrix.
            bool fixed = false;
            for (std::size_t i = t + 1; i < r && !fixed; ++i)
                for (std::size_t j = t + 1; j < c && !fixed; ++j)
                    if (w.d(i, j) % w.d(t, t) != 0) {
                        w.row_add(t, i, 1);
                        fixed = true;
                    }
            if (!fixed) break;
        }
        if (!have_pivot) break;
    }

    SmithForm out{std::move(w.u), std::move(w.d), std::move(w.v), std::move(w.u_inv),
                  std::move(w.v_inv), 0};
    // u and v were accumulated as ops applied to d = u m v; rank from diagonal.
    for (std::size_t i = 0; i < steps; ++i)
        if (out.d(i, i) != 0) ++out.rank;
    return out;
}

} // namespace

SmithForm smith_normal_form(const IntMat& m) { return smith_normal_form_impl(m, true, true, true); }

SmithForm diagonal_only_smith(const IntMat& m) {
    return smith_normal_form_impl(m, false, false, false);
}

Int determinant(const IntMat& m) {
    if (m.rows() != m.cols()) throw mismatch_error("determinant: square matrix required");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMat a = m;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t i = k + 1;
            while (i < n && a(i, k) == 0) ++i;
            if (i == n) return 0;
            a.swap_rows(k, i);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a(k, k);
    }
    return sign > 0 ? a(n - 1, n - 1) : -a(n - 1, n - 1);
}

IntMat kernel_basis(const IntMat& m) {
    SmithForm s = smith_normal_form_impl(m, false, true, false);
    const std::size_t n = m.cols();
    IntMat basis(n, n - s.rank);
    for (std::size_t j = s.rank; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) basis(i, j - s.rank) = s.v(i, j);
    return basis;
}

std::optional<IntMat> solve(const IntMat& a, const IntMat& b) {
    if (a.rows() != b.rows()) throw mismatch_error("solve: row count mismatch");
    SmithForm s = smith_normal_form_impl(a, true, true, false);
    IntMat bp = s.u * b;
    const std::size_t n = a.cols(), k = b.cols();
    IntMat y(n, k);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const Int* d = (i < std::min(a.rows(), n)) ? &s.d(i, i) : nullptr;
        for (std::size_t j = 0; j < k; ++j) {
            if (d != nullptr && *d != 0) {
                Int q, rem;
                mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), bp(i, j).get_mpz_t(),
                            d->get_mpz_t());
                if (rem != 0) return std::nullopt;
                y(i, j) = std::move(q);
            } else if (bp(i, j) != 0) {
                return std::nullopt;
            }
        }
    }
    return s.v * y;
}

IntMat row_hnf(const IntMat& m) {
    IntMat h = m;
    const std::size_t r = h.rows(), c = h.cols();
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < c && pivot_row < r; ++col) {
        for (;;) {
            std::size_t best_i = 0;
            Int best;
            bool found = false;
            for (std::size_t i = pivot_row; i < r; ++i) {
                if (h(i, col) == 0) continue;
                Int ax = abs(h(i, col));
                if (!found || ax < best) {
                    found = true;
                    best = std::move(ax);
                    best_i = i;
                }
            }
            if (!found) break;
            h.swap_rows(pivot_row, best_i);
            if (h(pivot_row, col) < 0) h.negate_row(pivot_row);
            bool cleared = true;
            for (std::size_t i = pivot_row + 1; i < r; ++i) {
                if (h(i, col) == 0) continue;
                h.add_row_multiple(i, pivot_row, -floor_div(h(i, col), h(pivot_row, col)));
                if (h(i, col) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (h(pivot_row, col) != 0) {
            for (std::size_t i = 0; i < pivot_row; ++i)
                h.add_row_multiple(i, pivot_row, -floor_div(h(i, col), h(pivot_row, col)));
            ++pivot_row;
        }
    }
    return h.slice(0, 0, pivot_row, c);
}

IntMat column_lattice_basis(const IntMat& m) {
    return row_hnf(m.transposed()).transposed();
}

bool lattice_contains(const IntMat& gens, const IntMat& vecs) {
    if (vecs.cols() == 0) return true;
    return solve(gens, vecs).has_value();
}

bool same_column_lattice(const IntMat& a, const IntMat& b) {
    if (a.rows() != b.rows()) return false;
    return column_lattice_basis(a) == column_lattice_basis(b);
}

} // namespace shagraph::abelian
