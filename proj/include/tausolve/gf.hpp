#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "tausolve/errors.hpp"

namespace tausolve {

/// Element of a finite-field tower over F_p. `deg` is the degree of the
/// smallest tower field containing the element; `rep` packs the coefficient
/// vector with respect to that field's polynomial basis, base-p little endian.
struct GFElem {
    std::int32_t deg = 1;
    std::uint32_t rep = 0;

    bool is_zero() const { return rep == 0; }
    friend bool operator==(const GFElem& a, const GFElem& b) {
        return a.deg == b.deg && a.rep == b.rep;
    }
    friend auto operator<=>(const GFElem& a, const GFElem& b) = default;
};

/// Arithmetic in the tower of fields F_{p^n}, n <= capDeg, with p^n <= 2^16.
///
/// Each degree uses the first primitive polynomial (in packed order) that is
/// norm-compatible with the polynomials already chosen for the proper
/// divisors of n. Compatibility makes every subfield embedding a plain index
/// multiplication on discrete logs, so elements of different degrees mix
/// freely. Tables are built lazily per degree.
class GFTower {
public:
    GFTower(int p, int capDeg);

    int p() const { return p_; }
    int cap_deg() const { return capDeg_; }

    GFElem zero() const { return {1, 0}; }
    GFElem one() const { return {1, 1}; }
    /// Element of F_p from an integer residue.
    GFElem from_int(std::int64_t v) const;
    /// Element of F_{p^deg} from a packed coefficient vector (canonicalized).
    GFElem make(int deg, std::uint32_t rep) const;

    GFElem add(GFElem a, GFElem b) const;
    GFElem neg(GFElem a) const;
    GFElem sub(GFElem a, GFElem b) const { return add(a, neg(b)); }
    GFElem mul(GFElem a, GFElem b) const;
    GFElem inv(GFElem a) const;
    /// a^k for any integer k (a != 0 when k < 0).
    GFElem pow(GFElem a, std::int64_t k) const;
    /// Frobenius x -> x^(p^k); bijective, k may be negative (inverse).
    GFElem frob_p(GFElem a, std::int64_t k) const;

    /// All solutions of x^n = a for n >= 1 coprime to p, growing the tower as
    /// needed. Sorted canonically. Empty only if a == 0 (then root is 0).
    std::vector<GFElem> nth_roots(GFElem a, std::int64_t n) const;

    /// One solution of x - x^q = a with q = p^e, growing the tower until the
    /// equation becomes solvable. Deterministic choice.
    GFElem solve_artin_schreier(GFElem a, int e) const;

    /// One solution of x - g * x^q = a (g != 0), growing the tower as needed.
    GFElem solve_twisted_residue(GFElem g, GFElem a, int e) const;

    /// Whether a lies in F_{p^e}.
    bool in_subfield(GFElem a, int e) const;

    /// All p^deg elements of F_{p^deg}, canonicalized, in packed order.
    std::vector<GFElem> enumerate(int deg) const;

    /// Packed tower polynomial for a degree (for reporting/tests).
    std::uint64_t poly(int deg) const;

    /// Packed coefficient vector of `a` viewed inside F_{p^deg}; deg must be a
    /// multiple of a.deg.
    std::uint32_t lift_rep(GFElem a, int deg) const { return lift(a, deg).rep; }

    /// Smallest tower degree that is a multiple of both arguments.
    int join_deg(int a, int b) const;

private:
    struct Table {
        int deg = 0;
        std::uint32_t order = 0;             // p^deg - 1
        std::uint64_t poly = 0;              // packed monic polynomial, degree deg
        std::vector<std::uint32_t> exps;     // k -> packed(g^k)
        std::vector<std::int32_t> logs;      // packed -> k, -1 for 0
    };

    const Table& table(int deg) const;
    void build(int deg) const;
    GFElem canon(int deg, std::uint32_t rep) const;
    GFElem lift(GFElem a, int deg) const;    // embed into larger tower field

    std::uint32_t pack_add(std::uint32_t a, std::uint32_t b, int deg) const;
    std::uint32_t pack_neg(std::uint32_t a, int deg) const;

    int p_;
    int capDeg_;
    mutable std::map<int, std::unique_ptr<Table>> tables_;
};

} // namespace tausolve
