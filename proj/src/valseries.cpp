#include "tausolve/valseries.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace tausolve {

namespace {

const Field& common_field(const ValSeries& a, const ValSeries& b) {
    if (&a.field() != &b.field()) fail(Err::Internal, "mixing series from different sessions");
    return a.field();
}

} // namespace

ValSeries ValSeries::make(const Field& f, std::vector<Term> terms, std::optional<Rat> prec,
                          bool dom) {
    std::map<Rat, GFElem> acc;
    for (auto& t : terms) {
        if (t.c.is_zero()) continue;
        f.check_exp(t.exp);
        auto it = acc.find(t.exp);
        if (it == acc.end())
            acc.emplace(t.exp, t.c);
        else
            it->second = f.gf().add(it->second, t.c);
    }
    std::vector<Term> out;
    for (auto& [e, c] : acc) {
        if (c.is_zero()) continue;
        if (prec && e >= *prec) continue;
        out.push_back(Term{e, c});
    }
    return ValSeries(&f, std::move(out), std::move(prec), dom);
}

ValSeries ValSeries::operator-() const {
    ValSeries r = *this;
    for (auto& t : r.terms_) t.c = field().gf().neg(t.c);
    return r;
}

ValSeries operator+(const ValSeries& a, const ValSeries& b) {
    const Field& f = common_field(a, b);
    std::optional<Rat> prec;
    if (a.prec() && b.prec())
        prec = std::min(*a.prec(), *b.prec());
    else if (a.prec())
        prec = a.prec();
    else if (b.prec())
        prec = b.prec();
    std::vector<ValSeries::Term> terms = a.terms();
    terms.insert(terms.end(), b.terms().begin(), b.terms().end());
    return ValSeries::make(f, std::move(terms), prec, a.dominant_only() || b.dominant_only());
}

ValSeries operator*(const ValSeries& a, const ValSeries& b) {
    const Field& f = common_field(a, b);
    if (a.is_exact_zero() || b.is_exact_zero()) return ValSeries::zero(f);
    Val pv = Val::infinity();
    if (a.prec()) pv = min(pv, Val(*a.prec()) + b.val_lb());
    if (b.prec()) pv = min(pv, Val(*b.prec()) + a.val_lb());
    std::optional<Rat> prec;
    if (!pv.is_inf()) prec = pv.rat();
    std::vector<ValSeries::Term> terms;
    terms.reserve(a.terms().size() * b.terms().size());
    for (auto& ta : a.terms())
        for (auto& tb : b.terms()) {
            Rat e = ta.exp + tb.exp;
            if (prec && e >= *prec) continue;
            terms.push_back({e, f.gf().mul(ta.c, tb.c)});
        }
    return ValSeries::make(f, std::move(terms), prec, a.dominant_only() || b.dominant_only());
}

ValSeries ValSeries::invert() const {
    const Field& f = field();
    if (is_zero_to_prec())
        fail(Err::DegenerateInput, "inversion of a value that is zero to precision");
    Rat v = terms_.front().exp;
    GFElem c = terms_.front().c;
    f.check_exp(-v);
    ValSeries lead_inv = monomial(f, -v, f.gf().inv(c));
    if (terms_.size() == 1) {
        // monomial: exact inverse, relative precision preserved
        if (!prec_) return lead_inv;
        return lead_inv.truncate(*prec_ - v - v);
    }
    Rat rel = prec_ ? (*prec_ - v) : f.cfg().defaultPrec;
    ValSeries w = (*this * lead_inv) - one(f); // val(w) > 0
    ValSeries sum = one(f);
    ValSeries pw = one(f);
    ValSeries mw = -w;
    while (true) {
        pw = (pw * mw).truncate(rel);
        if (pw.val_lb() >= Val(rel)) break;
        sum = sum + pw;
    }
    ValSeries r = (sum.truncate(rel) * lead_inv);
    if (dom_) r = r.with_dominant_only();
    return r;
}

ValSeries ValSeries::frobenius() const {
    const Field& f = field();
    std::int64_t q = f.q();
    std::vector<Term> terms;
    terms.reserve(terms_.size());
    for (auto& t : terms_) terms.push_back({t.exp * Rat(q), f.frob_q(t.c)});
    std::optional<Rat> prec;
    if (prec_) prec = *prec_ * Rat(q);
    return ValSeries(&f, std::move(terms), prec, dom_);
}

ValSeries ValSeries::inv_frobenius() const {
    const Field& f = field();
    std::int64_t q = f.q();
    std::vector<Term> terms;
    terms.reserve(terms_.size());
    for (auto& t : terms_) {
        Rat e = t.exp / Rat(q);
        f.check_exp(e);
        terms.push_back({e, f.frob_q(t.c, -1)});
    }
    std::optional<Rat> prec;
    if (prec_) prec = *prec_ / Rat(q);
    return ValSeries(&f, std::move(terms), prec, dom_);
}

ValSeries ValSeries::coeff_frobenius(std::int64_t j) const {
    const Field& f = field();
    ValSeries r = *this;
    for (auto& t : r.terms_) t.c = f.frob_q(t.c, j);
    return r;
}

ValSeries ValSeries::pow_int(std::int64_t n) const {
    const Field& f = field();
    if (n < 0) return invert().pow_int(-n);
    ValSeries r = one(f);
    ValSeries b = *this;
    while (n) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

ValSeries ValSeries::truncate(const Rat& prec) const {
    Rat np = prec_ ? std::min(*prec_, prec) : prec;
    std::vector<Term> terms;
    for (auto& t : terms_)
        if (t.exp < np) terms.push_back(t);
    return ValSeries(fld_, std::move(terms), np, dom_);
}

ValSeries::Cmp ValSeries::eq_to_prec(const ValSeries& a, const ValSeries& b) {
    ValSeries d = a - b;
    if (!d.terms().empty()) return Cmp::False;
    if (d.is_exact_zero()) return Cmp::True;
    return Cmp::Indeterminate;
}

std::string ValSeries::canon_key() const {
    std::ostringstream os;
    for (auto& t : terms_) os << t.exp.str() << ":" << t.c.deg << ":" << t.c.rep << ",";
    os << "|";
    if (prec_) os << prec_->str();
    os << "|" << (dom_ ? 1 : 0);
    return os.str();
}

std::string ValSeries::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << t.c.rep;
        if (t.c.deg > 1) os << "#" << t.c.deg;
        if (!(t.exp == Rat(0))) os << "*u^(" << t.exp.str() << ")";
    }
    if (terms_.empty()) os << "0";
    if (prec_) os << " + O(u^(" << prec_->str() << "))";
    if (dom_) os << " [dom]";
    return os.str();
}

// ---- root solving ----------------------------------------------------------

namespace {

/// Principal solution of x - gamma x^q = psi by the etale iteration
/// x <- psi + gamma x^q, valid when val(psi)(q-1) + val(gamma) > 0.
ValSeries principal_twisted(const ValSeries& gamma, const ValSeries& psi, const Rat& target) {
    ValSeries x = psi.truncate(target);
    for (int guard = 0;; ++guard) {
        ValSeries xn = (psi + gamma * x.frobenius()).truncate(target);
        Val step = (xn - x).val_lb();
        x = xn;
        if (step >= Val(target)) break;
        if (guard > 4096) fail(Err::Internal, "principal iteration failed to converge");
    }
    return x;
}

} // namespace

TwistedSolve solve_twisted(const ValSeries& gamma, const ValSeries& psi, RootPolicy policy,
                           int depth) {
    const Field& f = common_field(gamma, psi);
    std::int64_t q = f.q();
    TwistedSolve out;
    out.kernel_val = Val::infinity();

    if (gamma.is_zero_to_prec()) {
        if (!gamma.is_exact_zero())
            fail(Err::DegenerateInput, "twist coefficient with indeterminate valuation");
        out.chosen = psi;
        out.all = {psi};
        out.every_root_nonpositive = psi.val_known() && !(psi.val_lb() > Val(Rat(0)));
        return out;
    }

    Rat vg = gamma.val_checked().rat();
    // kernel of x - gamma x^q: 0 and the (q-1)-st roots of gamma^{-1}
    std::vector<ValSeries> kernel{ValSeries::zero(f)};
    {
        RootSet ks = kummer_root(gamma.invert(), q - 1);
        for (auto& k : ks.roots) kernel.push_back(k);
        out.kernel_val = Val(-vg / Rat(q - 1));
    }

    ValSeries particular;
    bool psi_val_known = psi.val_known();
    if (psi.is_zero_to_prec()) {
        particular = psi; // zero to its precision
    } else {
        Rat vp = psi.val_lb().rat();
        // absolute precision target: propagate the inputs' precision; fall
        // back to the session default only for fully exact data
        Val tv = Val::infinity();
        if (psi.prec()) tv = min(tv, Val(*psi.prec()));
        if (gamma.prec()) tv = min(tv, Val(*gamma.prec() - vg + vp));
        Rat target = tv.is_inf() ? f.cfg().defaultPrec : tv.rat();
        Rat margin = vp * Rat(q - 1) + vg;
        if (margin > Rat(0)) {
            particular = principal_twisted(gamma, psi, target);
        } else if (margin == Rat(0)) {
            // balanced case: residue solve over the tower, then etale refinement
            ValSeries gshift = gamma * ValSeries::u_pow(f, vp * Rat(q - 1));
            ValSeries pshift = psi * ValSeries::u_pow(f, -vp);
            GFElem g0 = gshift.leading_coeff();
            GFElem p0 = pshift.leading_coeff();
            GFElem y0 = f.gf().solve_twisted_residue(g0, p0, f.cfg().e);
            ValSeries x0 = ValSeries::monomial(f, vp, y0);
            ValSeries beta = psi - (x0 - gamma * x0.frobenius());
            if (beta.is_zero_to_prec() || beta.val_lb().rat() * Rat(q - 1) + vg > Rat(0)) {
                ValSeries h = beta.is_zero_to_prec() ? beta : principal_twisted(gamma, beta, target);
                particular = (x0 + h).truncate(target);
            } else {
                fail(Err::Internal, "balanced refinement left the etale basin");
            }
        } else {
            // wild: leading-term semantics only
            ValSeries x = ValSeries::zero(f);
            ValSeries ginv = gamma.invert();
            for (int i = 0; i < depth; ++i) x = ((x - psi) * ginv).inv_frobenius();
            Rat d = (vp - vg) / Rat(q);
            for (int i = 0; i < depth; ++i) d = (d - vg) / Rat(q);
            particular = x.truncate(d).with_dominant_only();
        }
    }

    for (auto& k : kernel) out.all.push_back(particular + k);
    std::sort(out.all.begin(), out.all.end(),
              [](const ValSeries& a, const ValSeries& b) { return a.canon_key() < b.canon_key(); });
    out.all.erase(std::unique(out.all.begin(), out.all.end()), out.all.end());

    out.every_root_nonpositive =
        psi_val_known && !psi.is_zero_to_prec() && !(psi.val_lb() > Val(Rat(0))) && vg >= Rat(0);

    // minimal-norm choice: maximal valuation lower bound, canonical tie-break
    const ValSeries* best = nullptr;
    int ties = 0;
    for (auto& r : out.all) {
        if (!best || best->val_lb() < r.val_lb()) {
            best = &r;
            ties = 1;
        } else if (best->val_lb() == r.val_lb()) {
            ++ties;
            if (r.canon_key() < best->canon_key()) best = &r;
        }
    }
    if (policy == RootPolicy::Strict && ties > 1)
        fail(Err::RootChoiceAmbiguous, "several roots share the minimal norm");
    out.chosen = *best;
    return out;
}

RootSet artin_schreier(const ValSeries& alpha, int depth) {
    const Field& f = alpha.field();
    if (alpha.is_zero_to_prec() && !alpha.is_exact_zero())
        fail(Err::DegenerateInput, "artin_schreier needs a known valuation");
    TwistedSolve s = solve_twisted(ValSeries::one(f), alpha, RootPolicy::MinimalNorm, depth);
    return RootSet{s.all};
}

RootSet kummer_root(const ValSeries& a, std::int64_t n) {
    const Field& f = a.field();
    if (n < 1) fail(Err::DegenerateInput, "root order must be positive");
    if (n % f.cfg().p == 0) fail(Err::DegenerateInput, "root order must be coprime to p");
    if (a.is_zero_to_prec()) fail(Err::DegenerateInput, "kummer root of zero to precision");
    if (n == 1) return RootSet{{a}};

    Rat v = a.val_lb().rat();
    Rat vroot = v / Rat(n);
    f.check_exp(vroot);
    GFElem c = a.leading_coeff();
    std::vector<GFElem> croots = f.gf().nth_roots(c, n);

    ValSeries unit = ValSeries::one(f);
    if (a.terms().size() > 1 || a.prec()) {
        ValSeries rel = a * ValSeries::monomial(f, -v, f.gf().inv(c)); // 1 + w
        Rat target = a.prec() ? (*a.prec() - v) : f.cfg().defaultPrec;
        if (rel.terms().size() > 1) {
            // Hensel/Newton for x^n = rel starting at 1 (n is a unit)
            ValSeries x = ValSeries::one(f);
            ValSeries ninv = ValSeries::from_gf(f, f.gf().inv(f.gf().from_int(n)));
            for (int guard = 0;; ++guard) {
                ValSeries fx = x.pow_int(n) - rel;
                if (fx.val_lb() >= Val(target)) break;
                x = (x - fx * ninv * x.pow_int(n - 1).invert()).truncate(target);
                if (guard > 200) fail(Err::Internal, "kummer refinement failed to converge");
            }
            unit = x.truncate(target);
        } else {
            unit = unit.truncate(target);
        }
    }

    RootSet out;
    for (auto& cr : croots)
        out.roots.push_back(ValSeries::monomial(f, vroot, cr) * unit);
    std::sort(out.roots.begin(), out.roots.end(),
              [](const ValSeries& x, const ValSeries& y) { return x.canon_key() < y.canon_key(); });
    return out;
}

} // namespace tausolve
