#ifndef ICOH_LINALG_HPP
#define ICOH_LINALG_HPP

#include "scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace icoh {

using Vec = std::vector<GaussScalar>;

inline Vec zero_vec(std::size_t n) { return Vec(n); }

inline Vec unit_vec(std::size_t n, std::size_t k) {
    Vec v(n);
    v[k] = GaussScalar(1);
    return v;
}

inline bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const GaussScalar& z) { return z.is_zero(); });
}

class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = GaussScalar(1);
        return m;
    }

    static ExactMatrix from_rows(std::size_t cols, const std::vector<Vec>& rows) {
        ExactMatrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw std::invalid_argument("row length mismatch");
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    static ExactMatrix from_columns(std::size_t rows, const std::vector<Vec>& cols) {
        ExactMatrix m(rows, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (cols[c].size() != rows) throw std::invalid_argument("column length mismatch");
            for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<GaussScalar>& entries() const { return data_; }

    GaussScalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const GaussScalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vec row(std::size_t r) const { return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }
    Vec column(std::size_t c) const {
        Vec v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }

    bool is_zero() const { return icoh::is_zero(data_); }

    ExactMatrix conj() const {
        ExactMatrix m(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k].conj();
        return m;
    }

    ExactMatrix transpose() const {
        ExactMatrix m(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
        return m;
    }

    Vec apply(const Vec& v) const {
        if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
        Vec out(rows_);
        for (std::size_t c = 0; c < cols_; ++c) {
            if (v[c].is_zero()) continue;
            for (std::size_t r = 0; r < rows_; ++r) {
                const GaussScalar& a = (*this)(r, c);
                if (!a.is_zero()) out[r] += a * v[c];
            }
        }
        return out;
    }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
        ExactMatrix m(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const GaussScalar& x = a(r, k);
                if (x.is_zero()) continue;
                for (std::size_t c = 0; c < b.cols_; ++c) {
                    const GaussScalar& y = b(k, c);
                    if (!y.is_zero()) m(r, c) += x * y;
                }
            }
        return m;
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<GaussScalar> data_;
};

// Blocks must agree on the shared dimension; empty blocks are allowed.
inline ExactMatrix vstack(const std::vector<ExactMatrix>& blocks, std::size_t cols) {
    std::size_t rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols) throw std::invalid_argument("vstack column mismatch");
        rows += b.rows();
    }
    ExactMatrix m(rows, cols);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < cols; ++c) m(off + r, c) = b(r, c);
        off += b.rows();
    }
    return m;
}

inline ExactMatrix hstack(const std::vector<ExactMatrix>& blocks, std::size_t rows) {
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        if (b.rows() != rows) throw std::invalid_argument("hstack row mismatch");
        cols += b.cols();
    }
    ExactMatrix m(rows, cols);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) m(r, off + c) = b(r, c);
        off += b.cols();
    }
    return m;
}

struct Echelon {
    ExactMatrix form;
    std::vector<std::size_t> pivots;
    std::size_t rank() const { return pivots.size(); }
};

// Reduced row echelon form. Pivot = leftmost column with a nonzero entry at or
// below the current row; the first such row (in the original order) is swapped
// up and normalized to leading 1.
inline Echelon rref(ExactMatrix m) {
    Echelon out;
    const std::size_t R = m.rows(), C = m.cols();
    std::size_t row = 0;
    for (std::size_t col = 0; col < C && row < R; ++col) {
        std::size_t piv = R;
        for (std::size_t r = row; r < R; ++r)
            if (!m(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv == R) continue;
        if (piv != row)
            for (std::size_t c = 0; c < C; ++c) std::swap(m(row, c), m(piv, c));
        GaussScalar inv = m(row, col).inverse();
        for (std::size_t c = col; c < C; ++c)
            if (!m(row, c).is_zero()) m(row, c) *= inv;
        std::vector<std::size_t> nz;
        for (std::size_t c = col; c < C; ++c)
            if (!m(row, c).is_zero()) nz.push_back(c);
        for (std::size_t r = 0; r < R; ++r) {
            if (r == row || m(r, col).is_zero()) continue;
            GaussScalar f = m(r, col);
            for (std::size_t c : nz) m(r, c) -= f * m(row, c);
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.form = std::move(m);
    return out;
}

inline std::size_t rank(const ExactMatrix& m) { return rref(m).rank(); }

// Subspace of GaussScalar^ambient stored as the nonzero rows of an RREF.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

    static Subspace span(std::size_t ambient, const std::vector<Vec>& vectors) {
        Subspace s(ambient);
        if (vectors.empty()) return s;
        Echelon e = rref(ExactMatrix::from_rows(ambient, vectors));
        for (std::size_t r = 0; r < e.rank(); ++r) s.basis_.push_back(e.form.row(r));
        s.pivots_ = e.pivots;
        return s;
    }

    static Subspace full(std::size_t ambient) {
        std::vector<Vec> vs;
        for (std::size_t k = 0; k < ambient; ++k) vs.push_back(unit_vec(ambient, k));
        return span(ambient, vs);
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Vec>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    // v minus its echelon reduction against the basis; zero iff v is a member.
    Vec reduce(Vec v) const {
        check(v.size());
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            GaussScalar f = v[pivots_[k]];
            if (f.is_zero()) continue;
            for (std::size_t c = pivots_[k]; c < ambient_; ++c)
                if (!basis_[k][c].is_zero()) v[c] -= f * basis_[k][c];
        }
        return v;
    }

    bool contains(const Vec& v) const { return icoh::is_zero(reduce(v)); }

    bool contains(const Subspace& w) const {
        if (w.ambient_ != ambient_) throw std::invalid_argument("subspace ambient mismatch");
        return std::all_of(w.basis_.begin(), w.basis_.end(), [&](const Vec& v) { return contains(v); });
    }

    // Coefficients of a member in the echelon basis.
    std::optional<Vec> coordinates(const Vec& v) const {
        if (!contains(v)) return std::nullopt;
        Vec c(basis_.size());
        for (std::size_t k = 0; k < basis_.size(); ++k) c[k] = v[pivots_[k]];
        return c;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    void check(std::size_t n) const {
        if (n != ambient_) throw std::invalid_argument("vector/subspace dimension mismatch");
    }

    std::size_t ambient_ = 0;
    std::vector<Vec> basis_;
    std::vector<std::size_t> pivots_;
};

inline Subspace kernel_basis(const ExactMatrix& m) {
    Echelon e = rref(m);
    const std::size_t C = m.cols();
    std::vector<bool> is_piv(C, false);
    for (std::size_t p : e.pivots) is_piv[p] = true;
    std::vector<Vec> vs;
    for (std::size_t f = 0; f < C; ++f) {
        if (is_piv[f]) continue;
        Vec v(C);
        v[f] = GaussScalar(1);
        for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = -e.form(k, f);
        vs.push_back(std::move(v));
    }
    return Subspace::span(C, vs);
}

inline Subspace column_space(const ExactMatrix& m) {
    std::vector<Vec> cols;
    for (std::size_t c = 0; c < m.cols(); ++c) cols.push_back(m.column(c));
    return Subspace::span(m.rows(), cols);
}

// Image of a subspace under a linear map.
inline Subspace image(const ExactMatrix& m, const Subspace& s) {
    std::vector<Vec> vs;
    for (const auto& b : s.basis()) vs.push_back(m.apply(b));
    return Subspace::span(m.rows(), vs);
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("subspace ambient mismatch");
    std::vector<Vec> vs = a.basis();
    vs.insert(vs.end(), b.basis().begin(), b.basis().end());
    return Subspace::span(a.ambient_dim(), vs);
}

inline Subspace intersection(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("subspace ambient mismatch");
    const std::size_t n = a.ambient_dim();
    if (a.dim() == 0 || b.dim() == 0) return Subspace(n);
    // x = sum s_i a_i = sum t_j b_j  <=>  [A^T | -B^T] (s,t) = 0
    std::vector<Vec> cols = a.basis();
    for (const auto& v : b.basis()) {
        Vec w = v;
        for (auto& z : w) z = -z;
        cols.push_back(std::move(w));
    }
    Subspace k = kernel_basis(ExactMatrix::from_columns(n, cols));
    std::vector<Vec> vs;
    for (const auto& sol : k.basis()) {
        Vec x(n);
        for (std::size_t i = 0; i < a.dim(); ++i) {
            if (sol[i].is_zero()) continue;
            for (std::size_t c = 0; c < n; ++c)
                if (!a.basis()[i][c].is_zero()) x[c] += sol[i] * a.basis()[i][c];
        }
        vs.push_back(std::move(x));
    }
    return Subspace::span(n, vs);
}

// dim V/W; W must be contained in V.
inline std::size_t quotient_dim(const Subspace& v, const Subspace& w) {
    if (v.ambient_dim() != w.ambient_dim()) throw std::invalid_argument("subspace ambient mismatch");
    if (!v.contains(w)) throw std::invalid_argument("quotient requires W contained in V");
    return v.dim() - w.dim();
}

// Vectors of `v` (in echelon order) completing a basis of `w` inside `v`.
inline std::vector<Vec> complement_basis(const Subspace& v, const Subspace& w) {
    std::vector<Vec> picked;
    Subspace acc = w;
    for (const auto& b : v.basis()) {
        if (acc.contains(b)) continue;
        picked.push_back(b);
        acc = sum(acc, Subspace::span(v.ambient_dim(), {b}));
    }
    return picked;
}

struct AffineSet {
    std::optional<Vec> particular;  // nullopt marks EMPTY
    Subspace direction;

    bool empty() const { return !particular.has_value(); }
    bool contains(const Vec& x) const {
        if (empty()) return false;
        Vec d = x;
        for (std::size_t k = 0; k < d.size(); ++k) d[k] -= (*particular)[k];
        return direction.contains(d);
    }
};

inline AffineSet solve(const ExactMatrix& m, const Vec& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("right-hand side dimension mismatch");
    const std::size_t C = m.cols();
    ExactMatrix aug = hstack({m, ExactMatrix::from_columns(m.rows(), {b})}, m.rows());
    Echelon e = rref(aug);
    AffineSet out;
    out.direction = kernel_basis(m);
    if (!e.pivots.empty() && e.pivots.back() == C) return out;
    Vec x(C);
    for (std::size_t k = 0; k < e.pivots.size(); ++k) x[e.pivots[k]] = e.form(k, C);
    out.particular = std::move(x);
    return out;
}

}  // namespace icoh

#endif
