#pragma once

#include <optional>
#include <string>

#include "tausolve/tate.hpp"

namespace tausolve {

/// A tau-module at a point: rank r and the matrix of tau = Delta * sigma in a
/// fixed basis, truncated mod t^{N+1}.
struct TauSpec {
    int r = 1;
    TateMatrix delta;
    ValSeries normScale;        // accumulated basis rescale alpha
    bool delta0Reduced = false; // constant term arranged to be Id
    bool polynomial = true;     // t-coefficients beyond the stored range are zero
};

TauSpec make_tau_spec(const Field& f, TateMatrix delta, bool polynomial = true);

/// Rescales the basis so that sup_n |Delta_n| = 1; records the scale alpha
/// with val(alpha) = min-val / (q-1).
TauSpec normalize_basis(const TauSpec& spec);

struct ReduceResult {
    TauSpec spec; // conjugated spec with Delta_0 = Id
    Mat d;        // base change with d = Delta_0 * sigma(d)
};

/// Conjugates away a unit-norm invertible constant term: residue Lang solve by
/// F_p-linear algebra over the tower, then the convergent unit product.
ReduceResult reduce_delta0(const TauSpec& spec);

enum class Verdict { TrivialCertified, DivergenceCertified, Undetermined };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::TrivialCertified: return "TrivialCertified";
        case Verdict::DivergenceCertified: return "DivergenceCertified";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "?";
}

/// Key-Lemma decay certificate in valuation units: Theta = |u|^theta,
/// eps = |u|^epsVal with theta > 0 and epsVal >= theta. Once the prefix
/// conditions hold, every later level satisfies |Phi_n| <= Theta and
/// |Phi_n| -> 0.
struct ContractionCert {
    int l = 0;
    Rat theta;  // min valuation of |Phi_n| over l < n <= 2l
    Rat epsVal; // valuation bound for |Delta_n|, n > l
};

struct InvariantReport {
    TateMatrix phi;             // solved columns, in solver coordinates
    std::vector<Val> levelNorms; // per-level valuation of |Phi_n|
    Verdict verdict = Verdict::Undetermined;
    std::optional<ContractionCert> cert;
    std::string witness;        // divergence witness or undetermined note
    int horizon = 0;
    int rank = 0;               // independent invariant columns found (mod t)
    std::optional<Mat> conjugator; // reduce_delta0 base change, if applied
    ValSeries normScale;
};

/// Level-by-level solve of Phi = Delta * sigma(Phi) + (inhomogeneous part)
/// starting from a seed satisfying the level-0 equation.
InvariantReport solve_invariants(const TauSpec& spec, const Mat& seed,
                                 RootPolicy policy = RootPolicy::MinimalNorm, int depth = 3);

/// Columns f with f - Delta sigma(f) = Omega mod (t^{N+1}, precision).
/// Without a seed the level-0 equation is solved as well.
InvariantReport solve_inhomogeneous(const TauSpec& spec, const TateMatrix& omega,
                                    const std::optional<Mat>& seed = std::nullopt,
                                    RootPolicy policy = RootPolicy::MinimalNorm, int depth = 3);

/// Attempts an r-column invariant basis and classifies the spec.
InvariantReport triviality_verdict(const TauSpec& spec, int horizon,
                                   RootPolicy policy = RootPolicy::MinimalNorm, int depth = 3);

/// Whether Delta sigma(Delta) ... sigma^{k-1}(Delta) vanishes mod
/// (t^{N+1}, precision) for some k <= bound.
bool nilpotency_test(const TauSpec& spec, int bound);

/// For Delta = [[Delta_F, B], [0, Delta_G]] with nilpotent F-part of size rF,
/// returns the equivariant section s (lower block Id) with
/// Delta * sigma(s) = s * Delta_G.
TateMatrix split_nilpotent_extension(const TauSpec& spec, int order, int rF);

/// Rank of the stabilized twisted product Delta_0 sigma(Delta_0)...; bounds
/// the mod-t invariant space. Exact when the entries are exact.
int stable_rank_mod_t(const TauSpec& spec, bool* exact = nullptr);

/// Basis of the level-0 solution space Phi_0 = Delta_0 sigma(Phi_0) for
/// upper-triangular Delta_0 with nonzero diagonal.
Mat level0_basis(const TauSpec& spec);

} // namespace tausolve
