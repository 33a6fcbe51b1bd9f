#include "doctest.h"
#include "tausolve/valseries.hpp"

#include <random>

using namespace tausolve;

namespace {

Field& f2() {
    static Field f(SessionConfig{2, 1, 1, 16, Rat(16), 0});
    return f;
}
Field& f3() {
    static Field f(SessionConfig{3, 1, 1, 16, Rat(16), 0});
    return f;
}

ValSeries u(const Field& f, std::int64_t n = 1, std::int64_t d = 1) {
    return ValSeries::u_pow(f, Rat(n, d));
}

} // namespace

TEST_CASE("char-p cancellation in addition") {
    Field& f = f2();
    ValSeries a = (u(f) + u(f, 3)).truncate(Rat(3)); // u + O(u^3)
    ValSeries b = u(f);
    ValSeries s = a + b;
    CHECK(s.is_zero_to_prec());
    CHECK(*s.prec() == Rat(3));

    Field& g = f3();
    ValSeries t = u(g) + u(g);
    REQUIRE(t.terms().size() == 1);
    CHECK(t.terms()[0].c == g.gf().from_int(2));
}

TEST_CASE("monomial inverse is exact") {
    Field& f = f2();
    ValSeries x = u(f, -1);
    ValSeries p = x * u(f);
    CHECK(p == ValSeries::one(f));
    CHECK(p.is_exact());
}

TEST_CASE("invert multiplies back to one") {
    Field& f = f2();
    ValSeries x = ValSeries::one(f) + u(f);
    ValSeries y = x.invert();
    // 1/(1+u) = 1 + u + u^2 + ... in char 2
    REQUIRE(y.terms().size() >= 3);
    CHECK(y.terms()[0].exp == Rat(0));
    CHECK(y.terms()[1].exp == Rat(1));
    CHECK(y.terms()[2].exp == Rat(2));
    CHECK(*y.prec() == f.cfg().defaultPrec);
    ValSeries back = x * y - ValSeries::one(f);
    CHECK(back.is_zero_to_prec());
    CHECK(Val(*back.prec()) >= Val(f.cfg().defaultPrec));
    CHECK_THROWS_AS(ValSeries::zero_to_prec(f, Rat(4)).invert(), TsError);
}

TEST_CASE("frobenius rules and inverse") {
    Field& f = f2();
    ValSeries x = u(f) + u(f, 2);
    ValSeries y = x.frobenius();
    CHECK(y == u(f, 2) + u(f, 4));
    CHECK(y.inv_frobenius() == x);
    CHECK(u(f, 2).inv_frobenius() == u(f));

    // c in F_4: frobenius of c * u^{1/2} has coefficient c^2
    GFElem w = f.gf().make(2, 2);
    ValSeries z = ValSeries::monomial(f, Rat(1, 2), w);
    ValSeries fz = z.frobenius();
    CHECK(fz.terms()[0].exp == Rat(1));
    CHECK(fz.terms()[0].c == f.gf().mul(w, w));
    CHECK(fz.inv_frobenius() == z);
}

TEST_CASE("frobenius is a ring homomorphism on random values") {
    Field& f = f3();
    std::mt19937 rng(42);
    auto rnd = [&]() {
        std::vector<ValSeries::Term> ts;
        int n = 1 + (int)(rng() % 4);
        for (int i = 0; i < n; ++i) {
            Rat e((std::int64_t)(rng() % 13) - 4, 1 + (std::int64_t)(rng() % 2));
            GFElem c = f.gf().from_int(1 + (std::int64_t)(rng() % 2));
            if (f.cfg().denomCap % e.den() == 0) ts.push_back({e, c});
        }
        return ValSeries::make(f, ts, std::nullopt);
    };
    for (int it = 0; it < 50; ++it) {
        ValSeries a = rnd(), b = rnd();
        CHECK((a + b).frobenius() == a.frobenius() + b.frobenius());
        CHECK((a * b).frobenius() == a.frobenius() * b.frobenius());
        CHECK(a.frobenius().inv_frobenius() == a);
    }
}

TEST_CASE("ultrametric inequality with equality on distinct valuations") {
    Field& f = f2();
    std::mt19937 rng(7);
    for (int it = 0; it < 100; ++it) {
        ValSeries a = u(f, (std::int64_t)(rng() % 9) - 4);
        ValSeries b = u(f, (std::int64_t)(rng() % 9) - 4) + u(f, 6);
        ValSeries s = a + b;
        CHECK(s.val_lb() >= min(a.val_lb(), b.val_lb()));
        if (!(a.val_lb() == b.val_lb())) CHECK(s.val_lb() == min(a.val_lb(), b.val_lb()));
    }
}

TEST_CASE("artin-schreier principal root, q=2, alpha=u, P=5") {
    SessionConfig cfg{2, 1, 1, 16, Rat(5), 0};
    Field f(cfg);
    ValSeries alpha = ValSeries::u_pow(f, Rat(1));
    RootSet rs = artin_schreier(alpha);
    REQUIRE(rs.roots.size() == 2);
    // principal root: valuation = val(alpha)
    const ValSeries* prin = nullptr;
    for (auto& r : rs.roots)
        if (r.val_lb() == Val(Rat(1))) prin = &r;
    REQUIRE(prin != nullptr);
    // u + u^2 + u^4 + O(u^5)
    CHECK(prin->terms().size() == 3);
    CHECK(prin->terms()[0].exp == Rat(1));
    CHECK(prin->terms()[1].exp == Rat(2));
    CHECK(prin->terms()[2].exp == Rat(4));
    // substitute back within precision
    for (auto& r : rs.roots) {
        ValSeries res = r - r.frobenius() - alpha;
        CHECK(res.is_zero_to_prec());
        CHECK(Val(*res.prec()) >= Val(Rat(5)));
    }
}

TEST_CASE("artin-schreier kernel: alpha = 0 gives F_q") {
    Field& f = f3();
    RootSet rs = artin_schreier(ValSeries::zero(f));
    CHECK(rs.roots.size() == 3);
    for (auto& r : rs.roots) {
        CHECK((r.is_exact_zero() || r.val_lb() == Val(Rat(0))));
        ValSeries res = r - r.frobenius();
        CHECK(res.is_exact_zero());
    }
}

TEST_CASE("artin-schreier residue case: q=2, alpha=1 needs F_4") {
    Field& f = f2();
    RootSet rs = artin_schreier(ValSeries::one(f));
    REQUIRE(rs.roots.size() == 2);
    // roots are the primitive cube roots of unity: omega^2 + omega + 1 = 0
    for (auto& r : rs.roots) {
        REQUIRE(r.terms().size() == 1);
        GFElem w = r.terms()[0].c;
        CHECK(w.deg == 2);
        GFElem chk = f.gf().add(f.gf().add(f.gf().mul(w, w), w), f.gf().one());
        CHECK(chk.is_zero());
    }
    // brute force over F_4 agrees
    int count = 0;
    for (auto& x : f.gf().enumerate(2)) {
        GFElem lhs = f.gf().sub(x, f.gf().frob_p(x, 1));
        if (lhs == f.gf().one()) ++count;
    }
    CHECK(count == 2);
}

TEST_CASE("artin-schreier wild root: q=2, alpha=u^-1, depth=2") {
    Field& f = f2();
    ValSeries alpha = u(f, -1);
    RootSet rs = artin_schreier(alpha, 2);
    REQUIRE(rs.roots.size() == 1); // F_q-shifts collapse at this precision
    const ValSeries& r = rs.roots[0];
    CHECK(r.dominant_only());
    REQUIRE(r.terms().size() == 2);
    CHECK(r.terms()[0].exp == Rat(-1, 2));
    CHECK(r.terms()[1].exp == Rat(-1, 4));
    // residual valuation >= val(alpha)/q^2
    ValSeries res = r - r.frobenius() - alpha;
    CHECK(res.val_lb() >= Val(Rat(-1, 4)));
}

TEST_CASE("wild root beyond the denominator cap fails loudly") {
    SessionConfig cfg{2, 1, 1, 2, Rat(8), 0};
    Field f(cfg);
    CHECK_THROWS_AS(artin_schreier(ValSeries::u_pow(f, Rat(-1)), 3), TsError);
}

TEST_CASE("kummer roots") {
    Field& g = f3();
    // q=3: sqrt(u^2) = {u, 2u}
    RootSet rs = kummer_root(ValSeries::u_pow(g, Rat(2)), 2);
    REQUIRE(rs.roots.size() == 2);
    for (auto& r : rs.roots) {
        CHECK(r.pow_int(2) == ValSeries::u_pow(g, Rat(2)));
        CHECK(r.terms()[0].exp == Rat(1));
    }
    // a = 1, n = q-1: all of F_q^x
    RootSet units = kummer_root(ValSeries::one(g), 2);
    CHECK(units.roots.size() == 2);
    // identity case n = 1
    Field& f = f2();
    ValSeries a = u(f, -1);
    RootSet id = kummer_root(a, 1);
    REQUIRE(id.roots.size() == 1);
    CHECK(id.roots[0] == a);
    // non-monomial: Hensel refinement, power back within precision
    ValSeries b = (ValSeries::one(g) + u(g)) * ValSeries::u_pow(g, Rat(2));
    RootSet hs = kummer_root(b, 2);
    REQUIRE(hs.roots.size() == 2);
    for (auto& r : hs.roots) {
        ValSeries back = r.pow_int(2) - b;
        CHECK(back.is_zero_to_prec());
    }
}

TEST_CASE("comparing zero-to-precision values is indeterminate") {
    Field& f = f2();
    ValSeries z4 = ValSeries::zero_to_prec(f, Rat(4));
    CHECK(ValSeries::eq_to_prec(z4, ValSeries::zero(f)) == ValSeries::Cmp::Indeterminate);
    CHECK(ValSeries::eq_to_prec(u(f), u(f)) == ValSeries::Cmp::True);
    CHECK(ValSeries::eq_to_prec(u(f), u(f, 2)) == ValSeries::Cmp::False);
}

TEST_CASE("solve_twisted: divergent-side root structure") {
    Field& f = f2();
    // x - u x^2 = 1: gamma non-unit, val psi = 0 <= 0 -> all roots nonpositive
    TwistedSolve s = solve_twisted(u(f), ValSeries::one(f));
    CHECK(s.every_root_nonpositive);
    bool saw_unit_root = false, saw_large_root = false;
    for (auto& r : s.all) {
        if (r.val_lb() == Val(Rat(0))) saw_unit_root = true;
        if (r.val_lb() == Val(Rat(-1))) saw_large_root = true; // kernel val -1/(q-1)
        ValSeries res = r - u(f) * r.frobenius() - ValSeries::one(f);
        CHECK(res.is_zero_to_prec());
    }
    CHECK(saw_unit_root);
    CHECK(saw_large_root);
    // minimal-norm choice is the valuation-0 root
    CHECK(s.chosen.val_lb() == Val(Rat(0)));
}
