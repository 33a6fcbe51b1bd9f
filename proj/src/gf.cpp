#include "tausolve/gf.hpp"

#include <algorithm>
#include <numeric>

namespace tausolve {

namespace {

std::uint64_t upow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
    std::vector<std::uint32_t> fs;
    for (std::uint32_t d = 2; (std::uint64_t)d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

std::vector<int> divisors(int n) {
    std::vector<int> ds;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) ds.push_back(d);
    return ds;
}

std::uint64_t umod_inv(std::uint64_t a, std::uint64_t m) {
    // extended euclid; gcd(a, m) must be 1
    std::int64_t t = 0, nt = 1;
    std::int64_t r = (std::int64_t)m, nr = (std::int64_t)(a % m);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (t < 0) t += (std::int64_t)m;
    return (std::uint64_t)t;
}

} // namespace

// ---- packed F_p[x] helpers -------------------------------------------------

namespace {

struct PolyOps {
    int p;
    std::uint64_t ppow[24];
    PolyOps(int p_) : p(p_) {
        ppow[0] = 1;
        for (int i = 1; i < 24; ++i) ppow[i] = ppow[i - 1] * (std::uint64_t)p;
    }
    int digit(std::uint64_t v, int i) const { return (int)((v / ppow[i]) % (std::uint64_t)p); }
    std::uint64_t add(std::uint64_t a, std::uint64_t b, int nd) const {
        if (p == 2) return a ^ b;
        std::uint64_t r = 0;
        for (int i = 0; i < nd; ++i)
            r += ppow[i] * (std::uint64_t)((digit(a, i) + digit(b, i)) % p);
        return r;
    }
    std::uint64_t add_scaled(std::uint64_t a, std::uint64_t b, int c, int nd) const {
        if (c == 0) return a;
        std::uint64_t r = 0;
        for (int i = 0; i < nd; ++i)
            r += ppow[i] * (std::uint64_t)((digit(a, i) + c * digit(b, i)) % p);
        return r;
    }
    std::uint64_t neg(std::uint64_t a, int nd) const {
        if (p == 2) return a;
        std::uint64_t r = 0;
        for (int i = 0; i < nd; ++i) {
            int d = digit(a, i);
            r += ppow[i] * (std::uint64_t)(d ? p - d : 0);
        }
        return r;
    }
    // multiply by x modulo monic f of degree deg (v has degree < deg)
    std::uint64_t mulx(std::uint64_t v, std::uint64_t fneg, int deg) const {
        std::uint64_t w = v * ppow[1];
        int top = digit(w, deg);
        if (top) w = add_scaled(w - ppow[deg] * (std::uint64_t)top, fneg, top, deg);
        return w;
    }
    std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t fneg, int deg) const {
        std::uint64_t r = 0;
        for (int i = deg - 1; i >= 0; --i) {
            r = mulx(r, fneg, deg);
            r = add_scaled(r, b, digit(a, i), deg);
        }
        return r;
    }
    std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t fneg, int deg) const {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = mulmod(r, a, fneg, deg);
            a = mulmod(a, a, fneg, deg);
            e >>= 1;
        }
        return r;
    }
    // evaluate g (coefficients = digits, degree degg, monic leading included in
    // the packed value) at y in F_p[x]/f
    std::uint64_t eval(std::uint64_t g, int degg, std::uint64_t y, std::uint64_t fneg,
                       int deg) const {
        std::uint64_t r = 0;
        for (int i = degg; i >= 0; --i) {
            r = mulmod(r, y, fneg, deg);
            r = add_scaled(r, 1, digit(g, i), deg);
        }
        return r;
    }
};

} // namespace

// ---- GFTower ----------------------------------------------------------------

GFTower::GFTower(int p, int capDeg) : p_(p), capDeg_(capDeg) {
    if (p < 2) fail(Err::DegenerateInput, "characteristic must be >= 2");
    int maxd = 0;
    std::uint64_t v = 1;
    while (v * (std::uint64_t)p <= 65536) { v *= (std::uint64_t)p; ++maxd; }
    if (capDeg_ <= 0 || capDeg_ > maxd) capDeg_ = maxd;
}

const GFTower::Table& GFTower::table(int deg) const {
    auto it = tables_.find(deg);
    if (it == tables_.end()) {
        if (deg > capDeg_)
            fail(Err::ExtensionCapExceeded,
                 "field degree " + std::to_string(deg) + " exceeds tower cap " +
                     std::to_string(capDeg_));
        build(deg);
        it = tables_.find(deg);
    }
    return *it->second;
}

void GFTower::build(int deg) const {
    for (int d : divisors(deg))
        if (d < deg && !tables_.count(d)) build(d);

    PolyOps ops(p_);
    std::uint64_t size = upow((std::uint64_t)p_, deg);
    std::uint32_t order = (std::uint32_t)(size - 1);
    auto factors = prime_factors(order);

    std::vector<int> maxdivs;
    for (auto f : prime_factors((std::uint32_t)deg)) maxdivs.push_back(deg / (int)f);

    std::uint64_t chosen = 0;
    for (std::uint64_t lower = 1; lower < size && !chosen; ++lower) {
        if (lower % (std::uint64_t)p_ == 0) continue; // constant term must be nonzero
        std::uint64_t f = lower + size;               // monic
        std::uint64_t fneg = ops.neg(lower, deg);
        std::uint64_t x = deg == 1 ? fneg : ops.ppow[1]; // class of x mod f
        // primitivity of x mod f (implies irreducibility)
        if (ops.powmod(x, order, fneg, deg) != 1) continue;
        bool prim = true;
        for (auto l : factors)
            if (ops.powmod(x, order / l, fneg, deg) == 1) { prim = false; break; }
        if (!prim) continue;
        // norm compatibility with the tower polynomials below
        bool compat = true;
        for (int d : maxdivs) {
            std::uint64_t sub = order / (std::uint32_t)(upow((std::uint64_t)p_, d) - 1);
            std::uint64_t y = ops.powmod(x, sub, fneg, deg);
            if (ops.eval(tables_.at(d)->poly, d, y, fneg, deg) != 0) { compat = false; break; }
        }
        if (!compat) continue;
        chosen = f;
    }
    if (!chosen) fail(Err::Internal, "no compatible primitive polynomial found");

    auto t = std::make_unique<Table>();
    t->deg = deg;
    t->order = order;
    t->poly = chosen;
    t->exps.resize(order);
    t->logs.assign(size, -1);
    std::uint64_t fneg = ops.neg(chosen - size, deg);
    std::uint64_t v = 1;
    for (std::uint32_t k = 0; k < order; ++k) {
        t->exps[k] = (std::uint32_t)v;
        t->logs[v] = (std::int32_t)k;
        v = ops.mulx(v, fneg, deg);
    }
    if (v != 1) fail(Err::Internal, "generator order mismatch");
    tables_[deg] = std::move(t);
}

std::uint64_t GFTower::poly(int deg) const { return table(deg).poly; }

int GFTower::join_deg(int a, int b) const {
    int l = (int)std::lcm(a, b);
    if (l > capDeg_)
        fail(Err::ExtensionCapExceeded,
             "joining degrees " + std::to_string(a) + "," + std::to_string(b) +
                 " exceeds tower cap " + std::to_string(capDeg_));
    return l;
}

GFElem GFTower::canon(int deg, std::uint32_t rep) const {
    if (rep == 0) return {1, 0};
    const Table& t = table(deg);
    std::int32_t k = t.logs[rep];
    if (k < 0) fail(Err::Internal, "invalid packed representation");
    for (int d : divisors(deg)) {
        if (d == deg) break;
        std::uint32_t sub_ord = (std::uint32_t)(upow((std::uint64_t)p_, d) - 1);
        std::uint64_t s = t.order / sub_ord;
        if ((std::uint64_t)k % s == 0) {
            std::uint32_t k2 = (std::uint32_t)((std::uint64_t)k / s);
            return {d, table(d).exps[k2]};
        }
    }
    return {deg, rep};
}

GFElem GFTower::lift(GFElem a, int deg) const {
    if (a.rep == 0) return {deg, 0};
    if (a.deg == deg) return a;
    const Table& small = table(a.deg);
    const Table& big = table(deg);
    std::uint64_t s = big.order / small.order;
    std::uint64_t k = (std::uint64_t)small.logs[a.rep] * s;
    return {deg, big.exps[k]};
}

GFElem GFTower::from_int(std::int64_t v) const {
    std::int64_t r = v % p_;
    if (r < 0) r += p_;
    return {1, (std::uint32_t)r};
}

GFElem GFTower::make(int deg, std::uint32_t rep) const {
    if (rep >= upow((std::uint64_t)p_, deg))
        fail(Err::ParseError, "packed coefficient out of range for degree " + std::to_string(deg));
    if (rep == 0) return {1, 0};
    return canon(deg, rep);
}

GFElem GFTower::add(GFElem a, GFElem b) const {
    if (a.rep == 0) return b;
    if (b.rep == 0) return a;
    int d = join_deg(a.deg, b.deg);
    PolyOps ops(p_);
    std::uint32_t r = (std::uint32_t)ops.add(lift(a, d).rep, lift(b, d).rep, d);
    if (r == 0) return {1, 0};
    return canon(d, r);
}

GFElem GFTower::neg(GFElem a) const {
    if (p_ == 2 || a.rep == 0) return a;
    PolyOps ops(p_);
    return {a.deg, (std::uint32_t)ops.neg(a.rep, a.deg)};
}

GFElem GFTower::mul(GFElem a, GFElem b) const {
    if (a.rep == 0 || b.rep == 0) return {1, 0};
    int d = join_deg(a.deg, b.deg);
    const Table& t = table(d);
    std::uint64_t k = (std::uint64_t)t.logs[lift(a, d).rep] + (std::uint64_t)t.logs[lift(b, d).rep];
    return canon(d, t.exps[k % t.order]);
}

GFElem GFTower::inv(GFElem a) const {
    if (a.rep == 0) fail(Err::DegenerateInput, "inverse of zero field element");
    const Table& t = table(a.deg);
    std::uint32_t k = (std::uint32_t)t.logs[a.rep];
    return {a.deg, t.exps[(t.order - k) % t.order]};
}

GFElem GFTower::pow(GFElem a, std::int64_t k) const {
    if (a.rep == 0) {
        if (k < 0) fail(Err::DegenerateInput, "negative power of zero");
        return k == 0 ? one() : a;
    }
    const Table& t = table(a.deg);
    std::int64_t kk = ((std::int64_t)t.logs[a.rep] * (k % (std::int64_t)t.order)) % (std::int64_t)t.order;
    if (kk < 0) kk += t.order;
    return canon(a.deg, t.exps[kk]);
}

GFElem GFTower::frob_p(GFElem a, std::int64_t k) const {
    if (a.rep == 0) return a;
    const Table& t = table(a.deg);
    std::int64_t kk = k % a.deg;
    if (kk < 0) kk += a.deg;
    std::uint64_t mult = 1;
    for (int i = 0; i < kk; ++i) mult = (mult * (std::uint64_t)p_) % t.order;
    std::uint64_t idx = ((std::uint64_t)t.logs[a.rep] * mult) % t.order;
    return {a.deg, t.exps[idx]};
}

bool GFTower::in_subfield(GFElem a, int e) const {
    if (a.rep == 0) return true;
    return e % a.deg == 0;
}

std::vector<GFElem> GFTower::enumerate(int deg) const {
    std::uint64_t size = upow((std::uint64_t)p_, deg);
    table(deg);
    std::vector<GFElem> out;
    out.reserve(size);
    for (std::uint64_t v = 0; v < size; ++v) out.push_back(v == 0 ? zero() : canon(deg, (std::uint32_t)v));
    return out;
}

std::vector<GFElem> GFTower::nth_roots(GFElem a, std::int64_t n) const {
    if (n < 1) fail(Err::DegenerateInput, "root order must be positive");
    if (n % p_ == 0) fail(Err::DegenerateInput, "root order must be coprime to p");
    if (a.rep == 0) return {zero()};
    if (n == 1) return {a};
    for (int deg = a.deg; deg <= capDeg_; deg += a.deg) {
        const Table& t = table(deg);
        if (t.order % (std::uint32_t)n != 0) continue;
        std::uint64_t K = (std::uint64_t)table(a.deg).logs[a.rep] * (t.order / table(a.deg).order);
        if (K % (std::uint64_t)n != 0) continue;
        std::uint64_t k0 = K / (std::uint64_t)n;
        std::uint64_t step = t.order / (std::uint64_t)n;
        std::vector<GFElem> roots;
        for (std::int64_t i = 0; i < n; ++i)
            roots.push_back(canon(deg, t.exps[(k0 + (std::uint64_t)i * step) % t.order]));
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    fail(Err::ExtensionCapExceeded, "n-th root requires extension beyond the tower cap");
}

GFElem GFTower::solve_artin_schreier(GFElem a, int e) const {
    return solve_twisted_residue(one(), a, e);
}

GFElem GFTower::solve_twisted_residue(GFElem g, GFElem a, int e) const {
    if (g.rep == 0) fail(Err::DegenerateInput, "twist coefficient must be nonzero");
    if (a.rep == 0) return zero();
    int base = join_deg(join_deg(a.deg, g.deg), e);
    for (int k = 1; base * k <= capDeg_; ++k) {
        int deg = base * k;
        table(deg);
        // x - g * x^(p^e) = a as an F_p-linear system in packed coordinates
        PolyOps ops(p_);
        int n = deg;
        std::vector<std::vector<int>> M(n, std::vector<int>(n + 1, 0));
        for (int j = 0; j < n; ++j) {
            std::uint32_t rep = (std::uint32_t)ops.ppow[j];
            GFElem im = mul(g, frob_p(canon(deg, rep), e));
            std::uint32_t imrep = lift(im, deg).rep;
            std::uint32_t col = (std::uint32_t)ops.add(rep, ops.neg(imrep, deg), deg);
            for (int i = 0; i < n; ++i) M[i][j] = ops.digit(col, i);
        }
        std::uint32_t arep = lift(a, deg).rep;
        for (int i = 0; i < n; ++i) M[i][n] = ops.digit(arep, i);

        // gaussian elimination mod p
        std::vector<int> where(n, -1);
        int row = 0;
        for (int col = 0; col < n && row < n; ++col) {
            int piv = -1;
            for (int i = row; i < n; ++i)
                if (M[i][col]) { piv = i; break; }
            if (piv < 0) continue;
            std::swap(M[piv], M[row]);
            std::uint64_t inv = umod_inv((std::uint64_t)M[row][col], (std::uint64_t)p_);
            for (int kk = col; kk <= n; ++kk)
                M[row][kk] = (int)(((std::uint64_t)M[row][kk] * inv) % (std::uint64_t)p_);
            for (int i = 0; i < n; ++i) {
                if (i != row && M[i][col]) {
                    int c = M[i][col];
                    for (int kk = col; kk <= n; ++kk)
                        M[i][kk] = ((M[i][kk] - c * M[row][kk]) % p_ + p_) % p_;
                }
            }
            where[col] = row;
            ++row;
        }
        bool consistent = true;
        for (int i = row; i < n; ++i)
            if (M[i][n]) { consistent = false; break; }
        if (!consistent) continue;
        std::uint32_t x = 0;
        for (int col = 0; col < n; ++col)
            if (where[col] >= 0 && M[where[col]][n])
                x = (std::uint32_t)ops.add_scaled(x, (std::uint32_t)ops.ppow[col], M[where[col]][n],
                                                  deg);
        return canon(deg, x);
    }
    fail(Err::ExtensionCapExceeded, "residue equation needs extension beyond the tower cap");
}

} // namespace tausolve
