#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tausolve/gf.hpp"
#include "tausolve/rational.hpp"

namespace tausolve {

/// Session-wide parameters for the ambient valued field.
struct SessionConfig {
    int p = 2;             // characteristic
    int e = 1;             // q = p^e
    int m = 1;             // coefficients of inputs live in F_{q^m}
    std::int64_t denomCap = 16;  // exponent denominators divide this
    Rat defaultPrec = Rat(16);   // absolute precision for truncated expansions
    int towerCap = 0;            // max degree over F_p (0 = p^deg <= 2^16)
};

/// The ambient complete field between F_q((u)) and C_infty realized by this
/// session: finite residue tower, exponent denominators dividing denomCap.
class Field {
public:
    explicit Field(const SessionConfig& cfg) : cfg_(cfg), gf_(cfg.p, cfg.towerCap) {
        if (cfg.e < 1 || cfg.m < 1 || cfg.denomCap < 1)
            fail(Err::DegenerateInput, "invalid session configuration");
        std::int64_t qq = 1;
        for (int i = 0; i < cfg.e; ++i) qq *= cfg.p;
        q_ = qq;
    }

    const SessionConfig& cfg() const { return cfg_; }
    const GFTower& gf() const { return gf_; }
    std::int64_t q() const { return q_; }

    /// The q-Frobenius on residue coefficients.
    GFElem frob_q(GFElem c, std::int64_t k = 1) const { return gf_.frob_p(c, k * cfg_.e); }
    bool in_fq(GFElem c) const { return gf_.in_subfield(c, cfg_.e); }
    /// All elements of F_q in canonical order.
    std::vector<GFElem> fq_elements() const { return gf_.enumerate(cfg_.e); }

    void check_exp(const Rat& e) const {
        if (cfg_.denomCap % e.den() != 0)
            fail(Err::DenominatorCapExceeded,
                 "exponent " + e.str() + " has denominator outside cap " +
                     std::to_string(cfg_.denomCap));
    }

private:
    SessionConfig cfg_;
    GFTower gf_;
    std::int64_t q_;
};

/// Truncated generalized Laurent series: strictly increasing rational
/// exponents with denominator dividing the session cap, nonzero residue-tower
/// coefficients, and an absolute precision cutoff (nullopt = exact).
/// `dominant_only` marks leading-term-semantics values coming from wild
/// Artin-Schreier roots.
class ValSeries {
public:
    struct Term {
        Rat exp;
        GFElem c;
    };

    ValSeries() : fld_(nullptr) {}

    static ValSeries zero(const Field& f) { return ValSeries(&f, {}, std::nullopt, false); }
    static ValSeries zero_to_prec(const Field& f, const Rat& prec) {
        return ValSeries(&f, {}, prec, false);
    }
    static ValSeries one(const Field& f) { return from_gf(f, f.gf().one()); }
    static ValSeries from_gf(const Field& f, GFElem c) {
        if (c.is_zero()) return zero(f);
        return ValSeries(&f, {Term{Rat(0), c}}, std::nullopt, false);
    }
    static ValSeries monomial(const Field& f, const Rat& exp, GFElem c) {
        if (c.is_zero()) return zero(f);
        f.check_exp(exp);
        return ValSeries(&f, {Term{exp, c}}, std::nullopt, false);
    }
    static ValSeries u_pow(const Field& f, const Rat& exp) {
        return monomial(f, exp, f.gf().one());
    }
    static ValSeries make(const Field& f, std::vector<Term> terms, std::optional<Rat> prec,
                          bool dom = false);

    const Field& field() const {
        if (!fld_) fail(Err::Internal, "uninitialized series");
        return *fld_;
    }
    const std::vector<Term>& terms() const { return terms_; }
    const std::optional<Rat>& prec() const { return prec_; }
    bool dominant_only() const { return dom_; }

    bool is_exact() const { return !prec_.has_value(); }
    bool is_zero_to_prec() const { return terms_.empty(); }
    bool is_exact_zero() const { return terms_.empty() && is_exact(); }

    /// Known-or-lower-bound valuation: first exponent, precision bound for a
    /// zero-to-precision value, infinity for the exact zero.
    Val val_lb() const {
        if (!terms_.empty()) return Val(terms_.front().exp);
        if (prec_) return Val(*prec_);
        return Val::infinity();
    }
    bool val_known() const { return !terms_.empty() || is_exact_zero(); }
    /// Valuation, requiring it to be determined.
    Val val_checked() const {
        if (!val_known())
            fail(Err::DegenerateInput, "valuation of a zero-to-precision value is indeterminate");
        return val_lb();
    }
    GFElem leading_coeff() const {
        if (terms_.empty()) fail(Err::DegenerateInput, "no leading term");
        return terms_.front().c;
    }

    ValSeries operator-() const;
    friend ValSeries operator+(const ValSeries& a, const ValSeries& b);
    friend ValSeries operator-(const ValSeries& a, const ValSeries& b) { return a + (-b); }
    friend ValSeries operator*(const ValSeries& a, const ValSeries& b);
    friend ValSeries operator/(const ValSeries& a, const ValSeries& b) { return a * b.invert(); }

    /// Multiplicative inverse; truncates at the propagated relative precision
    /// (session default for exact non-monomial inputs).
    ValSeries invert() const;

    /// x -> x^q: coefficients to the q-th power, exponents times q.
    ValSeries frobenius() const;
    /// Unique q-th root; exponent denominators must stay within the cap.
    ValSeries inv_frobenius() const;
    /// Galois twist: coefficients to the q^j-th power, exponents untouched.
    ValSeries coeff_frobenius(std::int64_t j) const;

    ValSeries pow_int(std::int64_t n) const;
    ValSeries truncate(const Rat& prec) const;
    ValSeries with_dominant_only() const {
        ValSeries r = *this;
        r.dom_ = true;
        return r;
    }

    /// Exact structural equality (same truncation, same precision).
    friend bool operator==(const ValSeries& a, const ValSeries& b) {
        return a.canon_key() == b.canon_key();
    }

    enum class Cmp { True, False, Indeterminate };
    /// Equality of the underlying field elements, as far as the stored
    /// precision can tell.
    static Cmp eq_to_prec(const ValSeries& a, const ValSeries& b);
    static bool definitely_zero(const ValSeries& a) { return a.is_exact_zero(); }

    /// Deterministic total order for root sets and tie-breaks.
    std::string canon_key() const;

    std::string str() const;

private:
    ValSeries(const Field* f, std::vector<Term> t, std::optional<Rat> p, bool d)
        : fld_(f), terms_(std::move(t)), prec_(std::move(p)), dom_(d) {}

    const Field* fld_;
    std::vector<Term> terms_;
    std::optional<Rat> prec_;
    bool dom_;

    friend class TateElem;
};

// ---- root solving ----------------------------------------------------------

struct RootSet {
    std::vector<ValSeries> roots; // canonical order
};

/// All solutions of x - x^q = alpha (sign convention of the level recursion).
/// depth controls the fixed-point refinement of wild roots (val(alpha) < 0).
RootSet artin_schreier(const ValSeries& alpha, int depth = 3);

/// All solutions of x^n = a for n coprime to p.
RootSet kummer_root(const ValSeries& a, std::int64_t n);

/// Root policy for the level solver when no decaying root exists.
enum class RootPolicy { MinimalNorm, Strict };

struct TwistedSolve {
    ValSeries chosen;
    std::vector<ValSeries> all;     // particular + kernel shifts, canonical order
    bool every_root_nonpositive;   // certified: all roots have valuation <= 0
    Val kernel_val;                // valuation of nonzero kernel elements
};

/// Solves x - gamma * x^q = psi over the session field, returning all roots
/// and the policy-chosen one. gamma may be zero (then x = psi).
TwistedSolve solve_twisted(const ValSeries& gamma, const ValSeries& psi,
                           RootPolicy policy = RootPolicy::MinimalNorm, int depth = 3);

} // namespace tausolve
