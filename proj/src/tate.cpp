#include "tausolve/tate.hpp"

#include <sstream>

namespace tausolve {

namespace {

void check_shape(int ar, int ac, int br, int bc, const char* what) {
    if (ar != br || ac != bc) fail(Err::DimensionMismatch, what);
}

} // namespace

// ---- Mat --------------------------------------------------------------------

Mat operator+(const Mat& a, const Mat& b) {
    check_shape(a.rows_, a.cols_, b.rows_, b.cols_, "matrix addition shape");
    Mat r = a;
    for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = r.e_[i] + b.e_[i];
    return r;
}

Mat operator-(const Mat& a, const Mat& b) {
    check_shape(a.rows_, a.cols_, b.rows_, b.cols_, "matrix subtraction shape");
    Mat r = a;
    for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = r.e_[i] - b.e_[i];
    return r;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) fail(Err::DimensionMismatch, "matrix product shape");
    const Field& f = a.e_.at(0).field();
    Mat r(f, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) {
            ValSeries s = ValSeries::zero(f);
            for (int k = 0; k < a.cols_; ++k) s = s + a.at(i, k) * b.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

Mat Mat::operator-() const {
    Mat r = *this;
    for (auto& x : r.e_) x = -x;
    return r;
}

Mat Mat::scaled(const ValSeries& c) const {
    Mat r = *this;
    for (auto& x : r.e_) x = x * c;
    return r;
}

Mat Mat::frobenius() const {
    Mat r = *this;
    for (auto& x : r.e_) x = x.frobenius();
    return r;
}

Mat Mat::coeff_frobenius(std::int64_t j) const {
    Mat r = *this;
    for (auto& x : r.e_) x = x.coeff_frobenius(j);
    return r;
}

Mat Mat::transpose() const {
    Mat r = *this;
    r.rows_ = cols_;
    r.cols_ = rows_;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.e_[j * rows_ + i] = e_[i * cols_ + j];
    return r;
}

Val Mat::min_val() const {
    Val v = Val::infinity();
    for (auto& x : e_) v = min(v, x.val_lb());
    return v;
}

bool Mat::is_zero_to_prec() const {
    for (auto& x : e_)
        if (!x.is_zero_to_prec()) return false;
    return true;
}

namespace {

// Gauss-Jordan over the field; returns rank, transforms [work | aug] in place.
int gauss_jordan(Mat& work, Mat* aug) {
    int n = work.rows(), m = work.cols();
    int row = 0;
    for (int col = 0; col < m && row < n; ++col) {
        int piv = -1;
        Val best = Val::infinity();
        for (int i = row; i < n; ++i) {
            const ValSeries& x = work.at(i, col);
            if (x.is_zero_to_prec()) continue;
            if (piv < 0 || x.val_lb() < best) { piv = i; best = x.val_lb(); }
        }
        if (piv < 0) continue;
        for (int j = 0; j < m; ++j) std::swap(work.at(piv, j), work.at(row, j));
        if (aug)
            for (int j = 0; j < aug->cols(); ++j) std::swap(aug->at(piv, j), aug->at(row, j));
        ValSeries inv = work.at(row, col).invert();
        for (int j = 0; j < m; ++j) work.at(row, j) = work.at(row, j) * inv;
        if (aug)
            for (int j = 0; j < aug->cols(); ++j) aug->at(row, j) = aug->at(row, j) * inv;
        for (int i = 0; i < n; ++i) {
            if (i == row) continue;
            ValSeries c = work.at(i, col);
            if (c.is_zero_to_prec()) continue;
            for (int j = 0; j < m; ++j) work.at(i, j) = work.at(i, j) - c * work.at(row, j);
            if (aug)
                for (int j = 0; j < aug->cols(); ++j)
                    aug->at(i, j) = aug->at(i, j) - c * aug->at(row, j);
        }
        ++row;
    }
    return row;
}

} // namespace

Mat Mat::inverse() const {
    if (rows_ != cols_) fail(Err::DimensionMismatch, "inverse of non-square matrix");
    const Field& f = e_.at(0).field();
    Mat work = *this;
    Mat aug = Mat::identity(f, rows_);
    int rank = gauss_jordan(work, &aug);
    if (rank < rows_) fail(Err::SingularMatrix, "matrix not invertible to precision");
    return aug;
}

int Mat::rank() const {
    Mat work = *this;
    return gauss_jordan(work, nullptr);
}

ValSeries Mat::det() const {
    if (rows_ != cols_) fail(Err::DimensionMismatch, "determinant of non-square matrix");
    const Field& f = e_.at(0).field();
    if (rows_ == 1) return at(0, 0);
    // cofactor expansion along the first row; fine at desk-scale ranks
    ValSeries acc = ValSeries::zero(f);
    for (int j = 0; j < cols_; ++j) {
        Mat minor(f, rows_ - 1, cols_ - 1);
        for (int i = 1; i < rows_; ++i) {
            int jj = 0;
            for (int k = 0; k < cols_; ++k) {
                if (k == j) continue;
                minor.at(i - 1, jj++) = at(i, k);
            }
        }
        ValSeries term = at(0, j) * minor.det();
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

bool Mat::is_upper_triangular() const {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < i && j < cols_; ++j)
            if (!at(i, j).is_zero_to_prec()) return false;
    return true;
}

bool Mat::is_scalar() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            if (i == j) continue;
            if (!at(i, j).is_zero_to_prec()) return false;
        }
    for (int i = 1; i < rows_; ++i)
        if (!(at(i, i) == at(0, 0))) return false;
    return true;
}

bool Mat::is_identity_to_prec() const {
    if (rows_ != cols_) return false;
    const Field& f = e_.at(0).field();
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            ValSeries want = i == j ? ValSeries::one(f) : ValSeries::zero(f);
            if (!(at(i, j) - want).is_zero_to_prec()) return false;
        }
    return true;
}

Mat Mat::truncate(const Rat& prec) const {
    Mat r = *this;
    for (auto& x : r.e_) x = x.truncate(prec);
    return r;
}

Mat Mat::block(int i0, int j0, int rows, int cols) const {
    const Field& f = e_.at(0).field();
    Mat r(f, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.at(i, j) = at(i0 + i, j0 + j);
    return r;
}

// ---- TateElem -----------------------------------------------------------------

TateElem operator+(const TateElem& a, const TateElem& b) {
    if (a.tprec() != b.tprec()) fail(Err::DimensionMismatch, "t-precision mismatch");
    TateElem r = a;
    for (std::size_t n = 0; n < r.a_.size(); ++n) r.a_[n] = r.a_[n] + b.a_[n];
    return r;
}

TateElem operator-(const TateElem& a, const TateElem& b) {
    if (a.tprec() != b.tprec()) fail(Err::DimensionMismatch, "t-precision mismatch");
    TateElem r = a;
    for (std::size_t n = 0; n < r.a_.size(); ++n) r.a_[n] = r.a_[n] - b.a_[n];
    return r;
}

TateElem operator*(const TateElem& a, const TateElem& b) {
    if (a.tprec() != b.tprec()) fail(Err::DimensionMismatch, "t-precision mismatch");
    const Field& f = a.a_.at(0).field();
    TateElem r(f, a.tprec());
    for (int n = 0; n <= a.tprec(); ++n) {
        ValSeries s = ValSeries::zero(f);
        for (int k = 0; k <= n; ++k) s = s + a.a_[k] * b.a_[n - k];
        r.a_[n] = s;
    }
    return r;
}

TateElem TateElem::operator-() const {
    TateElem r = *this;
    for (auto& x : r.a_) x = -x;
    return r;
}

TateElem TateElem::sigma() const {
    TateElem r = *this;
    for (auto& x : r.a_) x = x.frobenius();
    return r;
}

TateElem TateElem::coeff_frobenius(std::int64_t j) const {
    TateElem r = *this;
    for (auto& x : r.a_) x = x.coeff_frobenius(j);
    return r;
}

TateElem TateElem::shift_t(int k) const {
    const Field& f = a_.at(0).field();
    TateElem r(f, tprec());
    for (int n = tprec(); n >= k; --n) r.a_[n] = a_[n - k];
    return r;
}

TateElem TateElem::truncate_t(int tprec) const {
    const Field& f = a_.at(0).field();
    TateElem r(f, tprec);
    for (int n = 0; n <= tprec && n <= this->tprec(); ++n) r.a_[n] = a_[n];
    return r;
}

Val TateElem::gauss_val() const {
    Val v = Val::infinity();
    for (auto& x : a_) v = min(v, x.val_lb());
    return v;
}

int TateElem::gauss_attained_index() const {
    Val v = gauss_val();
    for (std::size_t n = 0; n < a_.size(); ++n)
        if (a_[n].val_lb() == v) return (int)n;
    return 0;
}

bool TateElem::is_zero_to_prec() const {
    for (auto& x : a_)
        if (!x.is_zero_to_prec()) return false;
    return true;
}

bool TateElem::tate_tail_ok() const {
    int start = gauss_attained_index();
    for (int n = start; n < tprec(); ++n)
        if (a_[n + 1].val_lb() < a_[n].val_lb()) return false;
    return true;
}

std::string TateElem::str() const {
    std::ostringstream os;
    for (int n = 0; n <= tprec(); ++n) {
        if (a_[n].is_exact_zero()) continue;
        os << "t^" << n << "*(" << a_[n].str() << ") ";
    }
    if (os.str().empty()) os << "0";
    return os.str();
}

// ---- TateMatrix ----------------------------------------------------------------

TateElem TateMatrix::entry(int i, int j) const {
    const Field& f = c_.at(0).at(0, 0).field();
    TateElem x(f, tprec());
    for (int n = 0; n <= tprec(); ++n) x.coeff(n) = c_[n].at(i, j);
    return x;
}

void TateMatrix::set_entry(int i, int j, const TateElem& x) {
    if (x.tprec() != tprec()) fail(Err::DimensionMismatch, "t-precision mismatch");
    for (int n = 0; n <= tprec(); ++n) c_[n].at(i, j) = x.coeff(n);
}

TateMatrix operator+(const TateMatrix& a, const TateMatrix& b) {
    if (a.tprec() != b.tprec()) fail(Err::DimensionMismatch, "t-precision mismatch");
    TateMatrix r = a;
    for (int n = 0; n <= r.tprec(); ++n) r.c_[n] = r.c_[n] + b.c_[n];
    return r;
}

TateMatrix operator-(const TateMatrix& a, const TateMatrix& b) {
    if (a.tprec() != b.tprec()) fail(Err::DimensionMismatch, "t-precision mismatch");
    TateMatrix r = a;
    for (int n = 0; n <= r.tprec(); ++n) r.c_[n] = r.c_[n] - b.c_[n];
    return r;
}

TateMatrix operator*(const TateMatrix& a, const TateMatrix& b) {
    if (a.tprec() != b.tprec()) fail(Err::DimensionMismatch, "t-precision mismatch");
    const Field& f = a.c_.at(0).at(0, 0).field();
    TateMatrix r(f, a.rows(), b.cols(), a.tprec());
    for (int n = 0; n <= a.tprec(); ++n) {
        Mat s(f, a.rows(), b.cols());
        for (int k = 0; k <= n; ++k) s = s + a.c_[k] * b.c_[n - k];
        r.c_[n] = s;
    }
    return r;
}

TateMatrix TateMatrix::sigma() const {
    TateMatrix r = *this;
    for (auto& m : r.c_) m = m.frobenius();
    return r;
}

TateMatrix TateMatrix::coeff_frobenius(std::int64_t j) const {
    TateMatrix r = *this;
    for (auto& m : r.c_) m = m.coeff_frobenius(j);
    return r;
}

TateMatrix TateMatrix::truncate_t(int tprec) const {
    const Field& f = c_.at(0).at(0, 0).field();
    TateMatrix r(f, rows(), cols(), tprec);
    for (int n = 0; n <= tprec && n <= this->tprec(); ++n) r.c_[n] = c_[n];
    return r;
}

TateMatrix TateMatrix::scaled(const ValSeries& c) const {
    TateMatrix r = *this;
    for (auto& m : r.c_) m = m.scaled(c);
    return r;
}

Val TateMatrix::gauss_val() const {
    Val v = Val::infinity();
    for (auto& m : c_) v = min(v, m.min_val());
    return v;
}

bool TateMatrix::is_zero_to_prec() const {
    for (auto& m : c_)
        if (!m.is_zero_to_prec()) return false;
    return true;
}

TateMatrix TateMatrix::inverse() const {
    const Field& f = c_.at(0).at(0, 0).field();
    Mat m0inv = c_.at(0).inverse();
    TateMatrix m0i(f, rows(), cols(), tprec());
    m0i.c_[0] = m0inv;
    TateMatrix x = TateMatrix::identity(f, rows(), tprec()) - (m0i * *this);
    // x has positive t-valuation, so the series ends at the truncation order
    TateMatrix acc = TateMatrix::identity(f, rows(), tprec());
    TateMatrix pw = x;
    for (int k = 1; k <= tprec(); ++k) {
        acc = acc + pw;
        pw = pw * x;
    }
    return acc * m0i;
}

TateElem TateMatrix::det() const {
    if (rows() != cols()) fail(Err::DimensionMismatch, "determinant of non-square matrix");
    const Field& f = c_.at(0).at(0, 0).field();
    if (rows() == 1) return entry(0, 0);
    TateElem acc(f, tprec());
    for (int j = 0; j < cols(); ++j) {
        TateMatrix minor(f, rows() - 1, cols() - 1, tprec());
        for (int i = 1; i < rows(); ++i) {
            int jj = 0;
            for (int k = 0; k < cols(); ++k) {
                if (k == j) continue;
                minor.set_entry(i - 1, jj++, entry(i, k));
            }
        }
        TateElem term = entry(0, j) * minor.det();
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

TateMatrix TateMatrix::block(int i0, int j0, int rows, int cols) const {
    TateMatrix r;
    r.c_.reserve(c_.size());
    for (auto& m : c_) r.c_.push_back(m.block(i0, j0, rows, cols));
    return r;
}

int TateMatrix::t_degree() const {
    for (int n = tprec(); n >= 0; --n)
        if (!c_[n].is_zero_to_prec()) return n;
    return 0;
}

// ---- growth check ----------------------------------------------------------------

GrowthReport entire_growth_check(const TateElem& x, const Rat& rho_val) {
    if (x.tprec() < 4)
        fail(Err::DegenerateInput, "growth check needs t-precision at least 4");
    GrowthReport rep;
    rep.rho_val = rho_val;
    for (int n = 0; n <= x.tprec(); ++n)
        rep.scores.push_back(x.coeff(n).val_lb() + Val(rho_val * Rat(n)));
    int tail = 0;
    for (int n = 0; n + 1 <= x.tprec(); ++n)
        if (rep.scores[n + 1] < rep.scores[n]) tail = n + 1;
    rep.tail_start = tail;
    rep.eventually_nonincreasing = tail < x.tprec();
    return rep;
}

} // namespace tausolve

