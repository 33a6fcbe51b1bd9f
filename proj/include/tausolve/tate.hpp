#pragma once

#include <vector>

#include "tausolve/valseries.hpp"

namespace tausolve {

/// Matrix over the valued field (constant in t).
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(const Field& f, int rows, int cols)
        : rows_(rows), cols_(cols), e_(rows * cols, ValSeries::zero(f)) {}
    static Mat identity(const Field& f, int n) {
        Mat m(f, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = ValSeries::one(f);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    ValSeries& at(int i, int j) { return e_[i * cols_ + j]; }
    const ValSeries& at(int i, int j) const { return e_[i * cols_ + j]; }

    friend Mat operator+(const Mat& a, const Mat& b);
    friend Mat operator-(const Mat& a, const Mat& b);
    friend Mat operator*(const Mat& a, const Mat& b);
    Mat operator-() const;
    Mat scaled(const ValSeries& c) const;

    /// Entry-wise x -> x^q (the sigma action on constant coefficient blocks).
    Mat frobenius() const;
    Mat coeff_frobenius(std::int64_t j) const;
    Mat transpose() const;

    /// Minimum valuation lower bound over the entries (max norm).
    Val min_val() const;
    bool is_zero_to_prec() const;

    /// Inverse over the field; SingularMatrix when no usable pivot exists.
    Mat inverse() const;
    ValSeries det() const;
    /// Rank as far as precision can tell (pivots that are nonzero to precision).
    int rank() const;

    bool is_upper_triangular() const;
    bool is_scalar() const; // lambda * Id with equal diagonal entries
    bool is_identity_to_prec() const;

    Mat truncate(const Rat& prec) const;
    Mat block(int i0, int j0, int rows, int cols) const;

private:
    int rows_, cols_;
    std::vector<ValSeries> e_;
};

/// Truncated element of K<t>: coefficients a_0..a_N, everything mod t^{N+1}.
class TateElem {
public:
    TateElem() {}
    TateElem(const Field& f, int tprec) : a_(tprec + 1, ValSeries::zero(f)) {}
    static TateElem constant(const Field& f, int tprec, const ValSeries& c) {
        TateElem x(f, tprec);
        x.a_[0] = c;
        return x;
    }

    int tprec() const { return (int)a_.size() - 1; }
    const ValSeries& coeff(int n) const { return a_[n]; }
    ValSeries& coeff(int n) { return a_[n]; }

    friend TateElem operator+(const TateElem& a, const TateElem& b);
    friend TateElem operator-(const TateElem& a, const TateElem& b);
    friend TateElem operator*(const TateElem& a, const TateElem& b);
    TateElem operator-() const;

    /// sigma: q-Frobenius on the coefficients, t untouched.
    TateElem sigma() const;
    TateElem coeff_frobenius(std::int64_t j) const;
    TateElem shift_t(int k) const; // multiply by t^k, truncating
    TateElem truncate_t(int tprec) const;

    /// Gauss norm as a valuation: min over coefficient valuations.
    Val gauss_val() const;
    int gauss_attained_index() const;
    bool is_zero_to_prec() const;

    /// Monotone-tail decay proxy for the |a_n| -> 0 contract: valuations are
    /// non-decreasing from the index attaining the Gauss norm onward.
    bool tate_tail_ok() const;

    std::string str() const;

private:
    std::vector<ValSeries> a_;
};

/// Matrix over K<t>/t^{N+1}, stored by t-degree.
class TateMatrix {
public:
    TateMatrix() {}
    TateMatrix(const Field& f, int rows, int cols, int tprec)
        : c_(tprec + 1, Mat(f, rows, cols)) {}
    static TateMatrix identity(const Field& f, int n, int tprec) {
        TateMatrix m(f, n, n, tprec);
        m.c_[0] = Mat::identity(f, n);
        return m;
    }
    static TateMatrix from_coeffs(std::vector<Mat> coeffs) {
        TateMatrix m;
        m.c_ = std::move(coeffs);
        return m;
    }

    int rows() const { return c_.at(0).rows(); }
    int cols() const { return c_.at(0).cols(); }
    int tprec() const { return (int)c_.size() - 1; }
    const Mat& coef(int n) const { return c_[n]; }
    Mat& coef(int n) { return c_[n]; }
    const std::vector<Mat>& coeffs() const { return c_; }

    TateElem entry(int i, int j) const;
    void set_entry(int i, int j, const TateElem& x);

    friend TateMatrix operator+(const TateMatrix& a, const TateMatrix& b);
    friend TateMatrix operator-(const TateMatrix& a, const TateMatrix& b);
    friend TateMatrix operator*(const TateMatrix& a, const TateMatrix& b);

    TateMatrix sigma() const;
    TateMatrix coeff_frobenius(std::int64_t j) const;
    TateMatrix truncate_t(int tprec) const;
    TateMatrix scaled(const ValSeries& c) const;

    Val gauss_val() const;
    bool is_zero_to_prec() const;

    /// Inverse mod t^{N+1}: field inverse of the constant term, then the
    /// geometric series in the t-positive part.
    TateMatrix inverse() const;
    TateElem det() const;

    TateMatrix block(int i0, int j0, int rows, int cols) const;
    /// Largest n with a t^n coefficient that is not zero to precision.
    int t_degree() const;

private:
    std::vector<Mat> c_;
};

struct GrowthReport {
    Rat rho_val;              // rho = |u|^{rho_val}
    std::vector<Val> scores;  // val(a_n) + n * rho_val
    int tail_start;           // earliest index from which scores never drop
    bool eventually_nonincreasing; // norm sequence |a_n| rho^n, over stored range
};

/// Finite-range check that |a_n| rho^n is eventually non-increasing.
GrowthReport entire_growth_check(const TateElem& x, const Rat& rho_val);

} // namespace tausolve
