#include "tausolve/tau_solver.hpp"

#include <algorithm>

namespace tausolve {

namespace {

const Field& fld(const TauSpec& s) { return s.delta.coef(0).at(0, 0).field(); }

GFElem const_coeff(const ValSeries& x) {
    for (auto& t : x.terms())
        if (t.exp == Rat(0)) return t.c;
    return GFElem{1, 0};
}

// thrown when the Eq.(3.2)-series path meets a forcing term of norm >= 1 and
// the caller has to conjugate the constant term away first
struct NeedsReduction {};

} // namespace

TauSpec make_tau_spec(const Field& f, TateMatrix delta, bool polynomial) {
    if (delta.rows() != delta.cols()) fail(Err::DimensionMismatch, "tau matrix must be square");
    TauSpec s;
    s.r = delta.rows();
    s.delta = std::move(delta);
    s.normScale = ValSeries::one(f);
    s.delta0Reduced = s.delta.coef(0).is_identity_to_prec();
    s.polynomial = polynomial;
    return s;
}

TauSpec normalize_basis(const TauSpec& spec) {
    const Field& f = fld(spec);
    Val v = spec.delta.gauss_val();
    if (v.is_inf()) fail(Err::DegenerateInput, "tau matrix vanishes to precision");
    if (v.rat() == Rat(0)) return spec;
    Rat aval = v.rat() / Rat(f.q() - 1);
    f.check_exp(aval);
    f.check_exp(-v.rat());
    TauSpec out = spec;
    out.delta = spec.delta.scaled(ValSeries::u_pow(f, -v.rat()));
    out.normScale = spec.normScale * ValSeries::u_pow(f, aval);
    out.delta0Reduced = out.delta.coef(0).is_identity_to_prec();
    return out;
}

// ---- Lang reduction ---------------------------------------------------------

namespace {

// Solves dbar = C sigma(dbar) over the residue tower for a constant matrix C
// that is invertible over the tower; returns an invertible matrix of constants.
Mat lang_residue_solve(const Field& f, const std::vector<std::vector<GFElem>>& C, int r) {
    const GFTower& gf = f.gf();
    int p = f.cfg().p;
    int e = f.cfg().e;
    int base = e;
    for (auto& row : C)
        for (auto& c : row)
            if (!c.is_zero()) base = (int)std::lcm(base, c.deg);

    for (int k = 1; base * k <= gf.cap_deg(); ++k) {
        int deg = base * k;
        int nvar = r * deg; // F_p-coordinates of a vector in F_{p^deg}^r
        // linear map v -> v - C sigma(v)
        std::vector<std::vector<int>> M(nvar, std::vector<int>(nvar, 0));
        // digit helpers via small powers of p
        std::vector<std::uint64_t> ppow(deg + 1, 1);
        for (int i = 1; i <= deg; ++i) ppow[i] = ppow[i - 1] * (std::uint64_t)p;
        auto digit = [&](std::uint32_t v, int i) { return (int)((v / ppow[i]) % (std::uint64_t)p); };
        for (int j = 0; j < r; ++j) {
            for (int d = 0; d < deg; ++d) {
                GFElem b = gf.make(deg, (std::uint32_t)ppow[d]);
                GFElem fb = f.frob_q(b);
                for (int i = 0; i < r; ++i) {
                    GFElem im = gf.sub(i == j ? b : gf.zero(), gf.mul(C[i][j], fb));
                    std::uint32_t rep = im.is_zero() ? 0 : gf.lift_rep(im, deg);
                    for (int dd = 0; dd < deg; ++dd)
                        M[i * deg + dd][j * deg + d] = digit(rep, dd);
                }
            }
        }
        // kernel of M over F_p
        std::vector<std::vector<int>> A = M;
        std::vector<int> pivot_col(nvar, -1);
        int row = 0;
        for (int col = 0; col < nvar && row < nvar; ++col) {
            int piv = -1;
            for (int i = row; i < nvar; ++i)
                if (A[i][col]) { piv = i; break; }
            if (piv < 0) continue;
            std::swap(A[piv], A[row]);
            // normalize
            int inv = 1;
            for (int c = 1; c < p; ++c)
                if ((c * A[row][col]) % p == 1) inv = c;
            for (int c2 = 0; c2 < nvar; ++c2) A[row][c2] = (A[row][c2] * inv) % p;
            for (int i = 0; i < nvar; ++i) {
                if (i == row || !A[i][col]) continue;
                int c = A[i][col];
                for (int c2 = 0; c2 < nvar; ++c2)
                    A[i][c2] = ((A[i][c2] - c * A[row][c2]) % p + p) % p;
            }
            pivot_col[col] = row;
            ++row;
        }
        int kernel_dim = nvar - row;
        if (kernel_dim < r * e) continue; // solution space not full yet
        // kernel basis vectors
        std::vector<std::vector<int>> basis;
        for (int freec = 0; freec < nvar; ++freec) {
            if (pivot_col[freec] >= 0) continue;
            std::vector<int> v(nvar, 0);
            v[freec] = 1;
            for (int col = 0; col < nvar; ++col)
                if (pivot_col[col] >= 0)
                    v[col] = ((-A[pivot_col[col]][freec]) % p + p) % p;
            basis.push_back(std::move(v));
        }
        // convert to GF vectors
        auto to_vec = [&](const std::vector<int>& v) {
            std::vector<GFElem> w(r);
            for (int i = 0; i < r; ++i) {
                std::uint32_t rep = 0;
                for (int d = 0; d < deg; ++d) rep += (std::uint32_t)(v[i * deg + d] * ppow[d]);
                w[i] = rep == 0 ? gf.zero() : gf.make(deg, rep);
            }
            return w;
        };
        // pick r columns that stay F_q-independent, greedily in basis order
        std::vector<std::vector<int>> chosen_fp; // F_p span of chosen * F_q
        std::vector<std::vector<GFElem>> cols;
        auto fq_span_rank = [&](std::vector<std::vector<int>> vv) {
            int rr = 0;
            int cols_n = nvar;
            for (int col = 0; col < cols_n && rr < (int)vv.size(); ++col) {
                int piv = -1;
                for (int i = rr; i < (int)vv.size(); ++i)
                    if (vv[i][col]) { piv = i; break; }
                if (piv < 0) continue;
                std::swap(vv[piv], vv[rr]);
                int inv = 1;
                for (int c = 1; c < p; ++c)
                    if ((c * vv[rr][col]) % p == 1) inv = c;
                for (int c2 = 0; c2 < cols_n; ++c2) vv[rr][c2] = (vv[rr][c2] * inv) % p;
                for (int i = 0; i < (int)vv.size(); ++i) {
                    if (i == rr || !vv[i][col]) continue;
                    int c = vv[i][col];
                    for (int c2 = 0; c2 < cols_n; ++c2)
                        vv[i][c2] = ((vv[i][c2] - c * vv[rr][c2]) % p + p) % p;
                }
                ++rr;
            }
            return rr;
        };
        auto fq_multiples_fp = [&](const std::vector<GFElem>& w) {
            // F_p-vectors of beta * w for beta running over an F_p-basis of F_q
            std::vector<std::vector<int>> out;
            for (int d = 0; d < e; ++d) {
                GFElem beta = e == 1 ? gf.one() : gf.make(e, (std::uint32_t)ppow[d]);
                std::vector<int> v(nvar, 0);
                for (int i = 0; i < r; ++i) {
                    GFElem x = gf.mul(beta, w[i]);
                    std::uint32_t rep = x.is_zero() ? 0 : gf.lift_rep(x, deg);
                    for (int dd = 0; dd < deg; ++dd) v[i * deg + dd] = digit(rep, dd);
                }
                out.push_back(std::move(v));
            }
            return out;
        };
        for (auto& bvec : basis) {
            if ((int)cols.size() == r) break;
            std::vector<GFElem> w = to_vec(bvec);
            auto cand = chosen_fp;
            for (auto& m : fq_multiples_fp(w)) cand.push_back(m);
            if (fq_span_rank(cand) > fq_span_rank(chosen_fp)) {
                cols.push_back(w);
                chosen_fp = cand;
            }
        }
        if ((int)cols.size() < r) continue;
        Mat dbar(f, r, r);
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < r; ++i) dbar.at(i, j) = ValSeries::from_gf(f, cols[j][i]);
        if (dbar.rank() == r) return dbar;
    }
    fail(Err::LangSearchExhausted, "no residue Lang solution within the tower cap");
}

// D with D = m sigma(D) for a unit-norm, unit-determinant constant-in-t m.
Mat lang_unit_reduce(const Field& f, const Mat& m) {
    int r = m.rows();
    std::vector<std::vector<GFElem>> C(r, std::vector<GFElem>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) C[i][j] = const_coeff(m.at(i, j));
    Mat dbar = lang_residue_solve(f, C, r);
    Mat a = dbar.inverse() * m * dbar.frobenius();
    Rat target = f.cfg().defaultPrec;
    Mat acc = Mat::identity(f, r);
    Mat cur = a;
    int guard = 0;
    while ((cur - Mat::identity(f, r)).min_val() < Val(target)) {
        acc = (acc * cur).truncate(target);
        cur = cur.frobenius();
        if (++guard > 4096) fail(Err::Internal, "unit-part product failed to converge");
    }
    Mat d = (dbar * acc).truncate(target);
    Mat resid = d - m * d.frobenius();
    if (!resid.is_zero_to_prec()) fail(Err::Internal, "Lang solution residual is nonzero");
    return d;
}

TauSpec conjugate(const TauSpec& spec, const Mat& d) {
    const Field& f = fld(spec);
    Mat dinv = d.inverse();
    Mat dfrob = d.frobenius();
    TauSpec out = spec;
    for (int n = 0; n <= spec.delta.tprec(); ++n)
        out.delta.coef(n) = dinv * spec.delta.coef(n) * dfrob;
    out.delta0Reduced = out.delta.coef(0).is_identity_to_prec();
    return out;
}

} // namespace

ReduceResult reduce_delta0(const TauSpec& spec) {
    const Field& f = fld(spec);
    Mat d0 = spec.delta.coef(0);
    if (!(d0.min_val() == Val(Rat(0))))
        fail(Err::NotInvertible, "constant term must have unit norm");
    ValSeries det0 = d0.det();
    if (det0.is_zero_to_prec() || !(det0.val_lb() == Val(Rat(0))))
        fail(Err::NotInvertible, "constant term must have unit determinant");
    Mat d = lang_unit_reduce(f, d0);
    TauSpec out = conjugate(spec, d);
    if (!out.delta.coef(0).is_identity_to_prec())
        fail(Err::Internal, "reduction did not produce the identity");
    out.delta0Reduced = true;
    return {out, d};
}

// ---- level solver ------------------------------------------------------------

namespace {

struct LevelSolver {
    const Field& f;
    const TauSpec& spec;
    RootPolicy policy;
    int depth;

    // solve x - Delta_0 sigma(x) = psi; when nonpos is non-null and r == 1,
    // reports the choice-free "every root has valuation <= 0" certificate
    Mat solve(const Mat& psi, bool* nonpos) const {
        Mat d0 = spec.delta.coef(0);
        int r = d0.rows();
        int m = psi.cols();
        Mat x(f, r, m);
        if (d0.is_upper_triangular()) {
            for (int j = 0; j < m; ++j) {
                for (int i = r - 1; i >= 0; --i) {
                    ValSeries rhs = psi.at(i, j);
                    for (int k = i + 1; k < r; ++k)
                        rhs = rhs + d0.at(i, k) * x.at(k, j).frobenius();
                    TwistedSolve ts = solve_twisted(d0.at(i, i), rhs, policy, depth);
                    x.at(i, j) = ts.chosen;
                    if (nonpos && r == 1 && m == 1) *nonpos = ts.every_root_nonpositive;
                }
            }
            return x;
        }
        if ((d0 - Mat::identity(f, r)).min_val() > Val(Rat(0))) {
            // explicit series solution, valid while |psi| < 1
            if (!(psi.min_val() > Val(Rat(0)))) throw NeedsReduction{};
            Rat target = f.cfg().defaultPrec;
            Mat acc(f, r, m);
            Mat term = psi;
            int guard = 0;
            while (term.min_val() < Val(target)) {
                acc = acc + term;
                term = (d0 * term.frobenius()).truncate(target);
                if (++guard > 4096) fail(Err::Internal, "series solution failed to converge");
            }
            if (nonpos) *nonpos = false;
            return acc.truncate(target);
        }
        fail(Err::UnsupportedShape,
             "constant term is neither upper-triangular nor a unit-distance from Id");
    }
};

struct LevelRun {
    std::vector<Mat> phi;
    std::vector<Val> norms;
    int first_nonpos_level = -1;
};

LevelRun run_levels(const TauSpec& spec, const TateMatrix* omega, const std::optional<Mat>& seed,
                    RootPolicy policy, int depth, int cols) {
    const Field& f = fld(spec);
    int N = spec.delta.tprec();
    LevelSolver solver{f, spec, policy, depth};
    LevelRun run;
    run.phi.reserve(N + 1);

    auto omega_coef = [&](int n) {
        if (omega) return omega->coef(n);
        return Mat(f, spec.r, cols);
    };

    for (int n = 0; n <= N; ++n) {
        Mat psi = omega_coef(n);
        for (int nu = 1; nu <= n; ++nu)
            psi = psi + spec.delta.coef(nu) * run.phi[n - nu].frobenius();
        Mat x(f, spec.r, cols);
        bool nonpos = false;
        if (n == 0 && seed) {
            x = *seed;
            Mat resid = x - spec.delta.coef(0) * x.frobenius() - psi;
            if (!resid.is_zero_to_prec())
                fail(Err::DegenerateInput, "seed does not satisfy the level-0 equation");
        } else {
            x = solver.solve(psi, &nonpos);
        }
        // residual check on every level
        Mat resid = x - spec.delta.coef(0) * x.frobenius() - psi;
        if (!resid.is_zero_to_prec()) fail(Err::Internal, "level residual is nonzero");
        if (nonpos && run.first_nonpos_level < 0) run.first_nonpos_level = n;
        run.norms.push_back(x.min_val());
        run.phi.push_back(std::move(x));
    }
    return run;
}

TateMatrix phi_matrix(const Field& f, const LevelRun& run) {
    return TateMatrix::from_coeffs(run.phi);
}

// contraction-certificate search over the computed prefix
std::optional<ContractionCert> find_cert(const TauSpec& spec, const std::vector<Val>& norms,
                                         const TateMatrix* omega) {
    const Field& f = fld(spec);
    int N = spec.delta.tprec();
    for (int l = 1; 2 * l <= N; ++l) {
        Val theta_v = Val::infinity();
        for (int n = l + 1; n <= 2 * l; ++n) theta_v = min(theta_v, norms[n]);
        Rat theta = theta_v.is_inf() ? Rat(1) : theta_v.rat();
        if (!(theta > Rat(0))) continue;
        Val m0 = Val(Rat(0));
        for (int n = 0; n <= l; ++n) m0 = min(m0, norms[n]);
        Rat eps = theta - m0.rat() * Rat(f.q());
        if (eps < theta) eps = theta;
        bool ok = true;
        for (int nu = l + 1; nu <= N && ok; ++nu)
            if (spec.delta.coef(nu).min_val() < Val(eps)) ok = false;
        if (omega)
            for (int n = l + 1; n <= N && ok; ++n)
                if (omega->coef(n).min_val() < Val(theta)) ok = false;
        // decay beyond the window: the certified levels themselves
        for (int n = 2 * l + 1; n <= N && ok; ++n)
            if (norms[n] < Val(theta)) ok = false;
        if (ok) return ContractionCert{l, theta, eps};
    }
    return std::nullopt;
}

} // namespace

int stable_rank_mod_t(const TauSpec& spec, bool* exact) {
    Mat p = spec.delta.coef(0);
    Mat s = p;
    for (int k = 2; k <= spec.r; ++k) {
        s = s.frobenius();
        p = p * s;
    }
    if (exact) {
        *exact = true;
        for (int i = 0; i < p.rows(); ++i)
            for (int j = 0; j < p.cols(); ++j)
                if (!p.at(i, j).is_exact() && !p.at(i, j).is_exact_zero()) *exact = false;
    }
    return p.rank();
}

Mat level0_basis(const TauSpec& spec) {
    const Field& f = fld(spec);
    Mat d0 = spec.delta.coef(0);
    int r = spec.r;
    if (!d0.is_upper_triangular())
        fail(Err::UnsupportedShape, "level-0 basis needs an upper-triangular constant term");
    Mat basis(f, r, r);
    for (int j = r - 1; j >= 0; --j) {
        if (d0.at(j, j).is_zero_to_prec())
            fail(Err::NotInvertible, "degenerate diagonal in the constant term");
        RootSet mu = kummer_root(d0.at(j, j).invert(), f.q() - 1);
        basis.at(j, j) = mu.roots.front();
        for (int i = j - 1; i >= 0; --i) {
            ValSeries rhs = ValSeries::zero(f);
            for (int k = i + 1; k <= j; ++k)
                rhs = rhs + d0.at(i, k) * basis.at(k, j).frobenius();
            basis.at(i, j) = solve_twisted(d0.at(i, i), rhs).chosen;
        }
    }
    Mat resid = basis - d0 * basis.frobenius();
    if (!resid.is_zero_to_prec()) fail(Err::Internal, "level-0 basis residual is nonzero");
    return basis;
}

InvariantReport solve_invariants(const TauSpec& spec, const Mat& seed, RootPolicy policy,
                                 int depth) {
    const Field& f = fld(spec);
    if (spec.delta.gauss_val() < Val(Rat(0)))
        fail(Err::DegenerateInput, "spec is not normalized (entries of norm > 1)");
    LevelRun run;
    std::optional<Mat> conj;
    TauSpec work = spec;
    try {
        run = run_levels(work, nullptr, seed, policy, depth, seed.cols());
    } catch (const NeedsReduction&) {
        ReduceResult rr = reduce_delta0(spec);
        work = rr.spec;
        conj = rr.d;
        Mat mapped_seed = rr.d.inverse() * seed;
        run = run_levels(work, nullptr, mapped_seed, policy, depth, seed.cols());
    }
    InvariantReport rep;
    rep.phi = phi_matrix(f, run);
    rep.levelNorms = run.norms;
    rep.horizon = work.delta.tprec();
    rep.rank = run.phi[0].rank();
    rep.conjugator = conj;
    rep.normScale = spec.normScale;
    if (auto cert = find_cert(work, run.norms, nullptr)) {
        rep.verdict = Verdict::TrivialCertified;
        rep.cert = cert;
    } else {
        rep.verdict = Verdict::Undetermined;
        rep.witness = "no contraction certificate within the stored range";
    }
    return rep;
}

InvariantReport solve_inhomogeneous(const TauSpec& spec, const TateMatrix& omega,
                                    const std::optional<Mat>& seed, RootPolicy policy,
                                    int depth) {
    const Field& f = fld(spec);
    if (omega.tprec() != spec.delta.tprec())
        fail(Err::DimensionMismatch, "omega t-precision mismatch");
    if (omega.rows() != spec.r) fail(Err::DimensionMismatch, "omega row count mismatch");
    LevelRun run;
    std::optional<Mat> conjm;
    TauSpec work = spec;
    TateMatrix om = omega;
    try {
        run = run_levels(work, &om, seed, policy, depth, omega.cols());
    } catch (const NeedsReduction&) {
        ReduceResult rr = reduce_delta0(spec);
        work = rr.spec;
        conjm = rr.d;
        Mat dinv = rr.d.inverse();
        for (int n = 0; n <= om.tprec(); ++n) om.coef(n) = dinv * om.coef(n);
        std::optional<Mat> mapped_seed;
        if (seed) mapped_seed = dinv * *seed;
        run = run_levels(work, &om, mapped_seed, policy, depth, omega.cols());
    }
    // full residual: phi - delta sigma(phi) = omega mod (t^{N+1}, precision)
    TateMatrix phi = phi_matrix(f, run);
    TateMatrix resid = phi - work.delta * phi.sigma() - om;
    if (!resid.is_zero_to_prec()) fail(Err::Internal, "solution residual is nonzero");

    InvariantReport rep;
    rep.phi = phi;
    rep.levelNorms = run.norms;
    rep.horizon = work.delta.tprec();
    rep.rank = run.phi[0].rank();
    rep.conjugator = conjm;
    rep.normScale = spec.normScale;
    if (auto cert = find_cert(work, run.norms, &om)) {
        rep.verdict = Verdict::TrivialCertified;
        rep.cert = cert;
    } else {
        rep.verdict = Verdict::Undetermined;
        rep.witness = "no contraction certificate within the stored range";
    }
    return rep;
}

InvariantReport triviality_verdict(const TauSpec& spec0, int horizon, RootPolicy policy,
                                   int depth) {
    const Field& f = fld(spec0);
    TauSpec spec = spec0;
    if (horizon >= 1) {
        if (horizon > spec.delta.tprec() && spec.polynomial)
            spec.delta = spec.delta.truncate_t(horizon); // zero-extends a polynomial
        else if (horizon < spec.delta.tprec())
            spec.delta = spec.delta.truncate_t(horizon);
    }
    spec = normalize_basis(spec);
    int N = spec.delta.tprec();
    int r = spec.r;

    InvariantReport rep;
    rep.normScale = spec.normScale;
    rep.horizon = N;
    rep.phi = TateMatrix(f, r, r, N);

    bool rank_exact = false;
    int rho = stable_rank_mod_t(spec, &rank_exact);
    if (rho < r && rank_exact) {
        rep.verdict = Verdict::DivergenceCertified;
        rep.witness = "mod-t invariant rank " + std::to_string(rho) + " < " + std::to_string(r) +
                      " (stabilized twisted product drops rank)";
        rep.rank = rho;
        return rep;
    }

    // arrange a solvable constant term
    TauSpec work = spec;
    std::optional<Mat> conj;
    Mat d0 = spec.delta.coef(0);
    if (!d0.is_upper_triangular()) {
        Val v0 = d0.min_val();
        Mat d0u = d0.scaled(ValSeries::u_pow(f, -v0.rat()));
        ValSeries det0 = d0u.det();
        if (!det0.is_zero_to_prec() && det0.val_lb() == Val(Rat(0))) {
            Mat d = lang_unit_reduce(f, d0u);
            work = conjugate(spec, d);
            conj = d;
        } else {
            rep.verdict = Verdict::Undetermined;
            rep.witness = "unsupported valuation structure of the constant term";
            return rep;
        }
    }

    Mat seed = level0_basis(work);
    LevelRun run = run_levels(work, nullptr, seed, policy, depth, r);
    rep.phi = phi_matrix(f, run);
    rep.levelNorms = run.norms;
    rep.rank = run.phi[0].rank();
    rep.conjugator = conj;

    // choice-independent divergence rule: rank one, t-degree one, unit t-part
    int tdeg = work.delta.t_degree();
    if (r == 1 && tdeg == 1) {
        const ValSeries& d1 = work.delta.coef(1).at(0, 0);
        if (!d1.terms().empty() && d1.val_lb() == Val(Rat(0))) {
            rep.verdict = Verdict::DivergenceCertified;
            rep.witness =
                "every level forcing term keeps valuation <= 0 (val Delta_1 = 0, "
                "val Phi_0 <= 0), so no solution chain can decay";
            return rep;
        }
    }

    if (auto cert = find_cert(work, run.norms, nullptr)) {
        rep.verdict = Verdict::TrivialCertified;
        rep.cert = cert;
        return rep;
    }
    rep.verdict = Verdict::Undetermined;
    rep.witness = "no certificate within horizon " + std::to_string(N);
    return rep;
}

bool nilpotency_test(const TauSpec& spec, int bound) {
    TateMatrix p = spec.delta;
    TateMatrix s = spec.delta;
    for (int k = 1; k <= bound; ++k) {
        if (p.is_zero_to_prec()) return true;
        s = s.sigma();
        p = p * s;
    }
    return false;
}

TateMatrix split_nilpotent_extension(const TauSpec& spec, int order, int rF) {
    const Field& f = fld(spec);
    int r = spec.r;
    int rG = r - rF;
    if (rF < 1 || rG < 1) fail(Err::DimensionMismatch, "block sizes must be positive");
    for (int n = 0; n <= spec.delta.tprec(); ++n)
        for (int i = rF; i < r; ++i)
            for (int j = 0; j < rF; ++j)
                if (!spec.delta.coef(n).at(i, j).is_zero_to_prec())
                    fail(Err::NotBlockTriangular, "lower-left block is nonzero");

    TateMatrix dF = spec.delta.block(0, 0, rF, rF);
    TateMatrix dG = spec.delta.block(rF, rF, rG, rG);
    TateMatrix b = spec.delta.block(0, rF, rF, rG);

    TauSpec fspec = make_tau_spec(f, dF, spec.polynomial);
    if (!nilpotency_test(fspec, order))
        fail(Err::NilpotencyBoundExceeded, "F-part is not nilpotent within the stated order");
    TateMatrix dGinv = dG.inverse(); // NotInvertible surfaces as SingularMatrix upstream

    int N = spec.delta.tprec();
    TateMatrix s(f, rF, rG, N);
    int guard = 2 * (order + N) + 4;
    for (int k = 0; k < guard; ++k) {
        TateMatrix sn = (b + dF * s.sigma()) * dGinv;
        if ((sn - s).is_zero_to_prec()) { s = sn; break; }
        s = sn;
        if (k == guard - 1) fail(Err::Internal, "nilpotent iteration failed to stabilize");
    }

    TateMatrix section(f, r, rG, N);
    for (int n = 0; n <= N; ++n) {
        for (int i = 0; i < rF; ++i)
            for (int j = 0; j < rG; ++j) section.coef(n).at(i, j) = s.coef(n).at(i, j);
        if (n == 0)
            for (int j = 0; j < rG; ++j) section.coef(0).at(rF + j, j) = ValSeries::one(f);
    }
    TateMatrix resid = spec.delta * section.sigma() - section * dG;
    if (!resid.is_zero_to_prec()) fail(Err::Internal, "section residual is nonzero");
    return section;
}

} // namespace tausolve
