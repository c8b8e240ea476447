#include <corrsamp/agreement.hpp>

#include <corrsamp/random.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <utility>

namespace corrsamp {

namespace {

// C(n, k) with early exit: returns cap + 1 as soon as the running value
// exceeds cap. The iterates C(n-k+i, i) are nondecreasing in i.
long long binom_capped(int n, int k, long long cap) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return cap + 1;
    }
    return static_cast<long long>(r);
}

BigInt bigint_binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// k-subsets of a sorted base, lexicographic order.
void for_each_combination(const std::vector<int>& base, int k,
                          const std::function<void(const std::vector<int>&)>& fn) {
    const int m = static_cast<int>(base.size());
    if (k < 0 || k > m) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> out(k);
    while (true) {
        for (int i = 0; i < k; ++i) out[i] = base[idx[i]];
        fn(out);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - (k - i)) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<int> iota_vector(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 1);
    return v;
}

// All subsets of [n] indexed by bitmask (element e <-> bit e-1).
std::vector<Subset> subsets_by_mask(int n) {
    std::vector<Subset> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<int> v;
        for (int e = 1; e <= n; ++e)
            if (mask >> (e - 1) & 1) v.push_back(e);
        out.emplace_back(Universe(n), std::move(v));
    }
    return out;
}

}  // namespace

PairDistribution PairDistribution::product(int n, const Rational& p) {
    Universe u(n);
    if (p < 0 || p > 1) throw InvalidInputError("membership rate must lie in [0, 1]");
    PairDistribution d;
    d.family_ = Family::Product;
    d.n_ = n;
    d.p_ = p;
    return d;
}

PairDistribution PairDistribution::positively_correlated(int n, const Rational& p,
                                                         const Rational& delta) {
    Universe u(n);
    if (delta < 0 || delta >= 1) throw InvalidInputError("correlation delta must lie in [0, 1)");
    if (p < 0 || p > 1 - delta)
        throw InvalidInputError("membership rate must lie in [0, 1 - delta]");
    PairDistribution d;
    d.family_ = Family::PositivelyCorrelated;
    d.n_ = n;
    d.p_ = p;
    d.delta_ = delta;
    return d;
}

PairDistribution PairDistribution::match_family(int n) {
    Universe u(n);
    if (n < 2) throw InvalidInputError("match family needs n >= 2");
    PairDistribution d;
    d.family_ = Family::Match;
    d.n_ = n;
    return d;
}

PairDistribution PairDistribution::intersection_family(int n, int a, int b, int l) {
    Universe u(n);
    if (a < 1 || a > n || b < 1 || b > n)
        throw InvalidInputError("side sizes must lie in [1, n]");
    if (l < 0 || l > std::min(a, b)) throw InvalidInputError("overlap must lie in [0, min(a, b)]");
    if (a + b - l > n) throw InvalidInputError("union size a + b - l must not exceed n");
    PairDistribution d;
    d.family_ = Family::Intersection;
    d.n_ = n;
    d.a_ = a;
    d.b_ = b;
    d.l_ = l;
    return d;
}

PairDistribution PairDistribution::explicit_family(
    int n, std::vector<std::pair<SubsetPair, Rational>> support) {
    Universe u(n);
    Rational sum = 0;
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (const auto& [pair, w] : support) {
        if (pair.a.universe() != n)
            throw InvalidInputError("support pair universe differs from n");
        if (w <= 0) throw InvalidInputError("support probabilities must be positive");
        if (!seen.insert({pair.a.elements(), pair.b.elements()}).second)
            throw InvalidInputError("duplicate pair in explicit support");
        sum += w;
    }
    if (sum != 1) throw InvalidInputError("explicit support must sum to exactly 1");
    PairDistribution d;
    d.family_ = Family::Explicit;
    d.n_ = n;
    d.support_ = std::move(support);
    return d;
}

void PairDistribution::for_each_pair(
    const std::function<void(const Subset&, const Subset&, const Rational&)>& fn) const {
    switch (family_) {
        case Family::Product: {
            if (n_ > kProductEnumMaxN)
                throw ResourceLimitError("product enumeration is capped at n = " +
                                         std::to_string(kProductEnumMaxN));
            const std::vector<Subset> subs = subsets_by_mask(n_);
            std::vector<Rational> wprob(n_ + 1);
            for (int w = 0; w <= n_; ++w)
                wprob[w] = rational_pow(p_, w) * rational_pow(1 - p_, n_ - w);
            std::vector<Rational> tab((n_ + 1) * (n_ + 1));
            for (int wa = 0; wa <= n_; ++wa)
                for (int wb = 0; wb <= n_; ++wb)
                    tab[wa * (n_ + 1) + wb] = wprob[wa] * wprob[wb];
            for (std::uint64_t am = 0; am < subs.size(); ++am) {
                const int wa = std::popcount(am);
                if (wprob[wa] == 0) continue;
                for (std::uint64_t bm = 0; bm < subs.size(); ++bm) {
                    const Rational& w = tab[wa * (n_ + 1) + std::popcount(bm)];
                    if (w == 0) continue;
                    fn(subs[am], subs[bm], w);
                }
            }
            return;
        }
        case Family::PositivelyCorrelated: {
            if (n_ > kProductEnumMaxN)
                throw ResourceLimitError("correlated enumeration is capped at n = " +
                                         std::to_string(kProductEnumMaxN));
            // Per-element case probabilities; s is the pre-thinning rate.
            const Rational omd = 1 - delta_;
            const Rational s = p_ / omd;
            const Rational qboth = s * omd * omd;
            const Rational qone = s * omd * delta_;
            const Rational qnone = 1 - s + s * delta_ * delta_;
            const int m = n_ + 1;
            std::vector<Rational> pb(m), pa(m), pz(m);
            for (int i = 0; i <= n_; ++i) {
                pb[i] = rational_pow(qboth, i);
                pa[i] = rational_pow(qone, i);
                pz[i] = rational_pow(qnone, i);
            }
            std::vector<Rational> tab(m * m * m);
            for (int i = 0; i <= n_; ++i)
                for (int x = 0; i + x <= n_; ++x)
                    for (int y = 0; i + x + y <= n_; ++y)
                        tab[(i * m + x) * m + y] = pb[i] * pa[x] * pa[y] * pz[n_ - i - x - y];
            const std::vector<Subset> subs = subsets_by_mask(n_);
            const std::uint64_t full = (std::uint64_t{1} << n_) - 1;
            for (std::uint64_t am = 0; am < subs.size(); ++am) {
                for (std::uint64_t bm = 0; bm < subs.size(); ++bm) {
                    const int i = std::popcount(am & bm);
                    const int x = std::popcount(am & ~bm & full);
                    const int y = std::popcount(bm & ~am & full);
                    const Rational& w = tab[(i * m + x) * m + y];
                    if (w == 0) continue;
                    fn(subs[am], subs[bm], w);
                }
            }
            return;
        }
        case Family::Match: {
            if (n_ > kMatchFamilyMaxN)
                throw ResourceLimitError("match enumeration is capped at n = " +
                                         std::to_string(kMatchFamilyMaxN));
            std::vector<Subset> co;  // co[i-1] = [n] \ {i}
            for (int i = 1; i <= n_; ++i) {
                std::vector<int> v;
                for (int e = 1; e <= n_; ++e)
                    if (e != i) v.push_back(e);
                co.emplace_back(Universe(n_), std::move(v));
            }
            const Rational w(1, BigInt(n_) * (n_ - 1));
            for (int i = 1; i <= n_; ++i)
                for (int j = 1; j <= n_; ++j)
                    if (j != i) fn(co[i - 1], co[j - 1], w);
            return;
        }
        case Family::Intersection: {
            const long long ca = binom_capped(n_, a_, kIntersectionPairCap);
            const long long cb = binom_capped(n_, b_, kIntersectionPairCap);
            if (ca * cb > kIntersectionPairCap)
                throw ResourceLimitError("intersection enumeration is capped at C(n,a)C(n,b) = " +
                                         std::to_string(kIntersectionPairCap));
            const BigInt count =
                bigint_binom(n_, a_) * bigint_binom(a_, l_) * bigint_binom(n_ - a_, b_ - l_);
            const Rational w(1, count);
            const std::vector<int> ground = iota_vector(n_);
            for_each_combination(ground, a_, [&](const std::vector<int>& av) {
                const Subset a(Universe(n_), av);
                std::vector<int> comp;
                std::set_difference(ground.begin(), ground.end(), av.begin(), av.end(),
                                    std::back_inserter(comp));
                for_each_combination(av, l_, [&](const std::vector<int>& iv) {
                    for_each_combination(comp, b_ - l_, [&](const std::vector<int>& rv) {
                        std::vector<int> bv;
                        std::merge(iv.begin(), iv.end(), rv.begin(), rv.end(),
                                   std::back_inserter(bv));
                        const Subset b(Universe(n_), std::move(bv));
                        fn(a, b, w);
                    });
                });
            });
            return;
        }
        case Family::Explicit: {
            for (const auto& [pair, w] : support_) fn(pair.a, pair.b, w);
            return;
        }
    }
    throw InvariantViolationError("unknown family");
}

std::vector<std::pair<SubsetPair, Rational>> PairDistribution::enumerate_support() const {
    std::vector<std::pair<SubsetPair, Rational>> out;
    for_each_pair([&](const Subset& a, const Subset& b, const Rational& w) {
        out.emplace_back(SubsetPair(a, b), w);
    });
    return out;
}

std::vector<Subset> PairDistribution::side_support(Side side) const {
    std::set<std::vector<int>> keys;
    for_each_pair([&](const Subset& a, const Subset& b, const Rational&) {
        const Subset& own = (side == Side::Left) ? a : b;
        if (!own.empty()) keys.insert(own.elements());
    });
    std::vector<Subset> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.emplace_back(Universe(n_), k);
    return out;
}

DetStrategy DetStrategy::from_table(int n, std::map<std::vector<int>, int> table) {
    Universe u(n);
    for (const auto& [key, value] : table) {
        const Subset s(u, key);  // validates the key
        if (s.empty()) throw InvalidInputError("strategies are defined on nonempty sets only");
        if (!s.contains(value))
            throw InvalidInputError("strategy value " + std::to_string(value) +
                                    " is not a member of its set");
    }
    DetStrategy f;
    f.n_ = n;
    f.table_ = std::move(table);
    return f;
}

DetStrategy DetStrategy::from_order(int n, std::vector<int> sigma) {
    Universe u(n);
    if (static_cast<int>(sigma.size()) != n)
        throw InvalidInputError("rank order must list all of [n]");
    std::vector<char> seen(n + 1, 0);
    for (int e : sigma) {
        if (e < 1 || e > n || seen[e]) throw InvalidInputError("rank order must be a permutation");
        seen[e] = 1;
    }
    DetStrategy f;
    f.n_ = n;
    f.sigma_ = std::move(sigma);
    return f;
}

bool DetStrategy::defined_on(const Subset& s) const {
    if (s.universe() != n_ || s.empty()) return false;
    if (order_backed()) return true;
    return table_.count(s.elements()) > 0;
}

int DetStrategy::choose(const Subset& s) const {
    if (s.universe() != n_) throw InvalidInputError("strategy universe mismatch");
    if (s.empty()) throw InvalidInputError("strategies are defined on nonempty sets only");
    if (order_backed()) {
        for (int e : sigma_)
            if (s.contains(e)) return e;
        throw InvariantViolationError("rank order missed a nonempty set");
    }
    const auto it = table_.find(s.elements());
    if (it == table_.end()) throw InvalidInputError("strategy is undefined on a support set");
    return it->second;
}

DetStrategy order_strategy(int n, const std::vector<int>& sigma) {
    return DetStrategy::from_order(n, sigma);
}

Rational exact_error(const DetStrategy& f, const DetStrategy& g, const PairDistribution& d) {
    if (f.n() != d.n() || g.n() != d.n()) throw InvalidInputError("strategy universe mismatch");
    Rational disagree = 0;
    d.for_each_pair([&](const Subset& a, const Subset& b, const Rational& w) {
        if (a.empty() || b.empty() || f.choose(a) != g.choose(b)) disagree += w;
    });
    return disagree;
}

std::vector<Rational> beta_marginals(const DetStrategy& g, const PairDistribution& d) {
    if (g.n() != d.n()) throw InvalidInputError("strategy universe mismatch");
    std::vector<Rational> beta(d.n() + 1, Rational(0));
    d.for_each_pair([&](const Subset&, const Subset& b, const Rational& w) {
        if (!b.empty()) beta[g.choose(b)] += w;
    });
    return beta;
}

DetStrategy best_response(const DetStrategy& opponent, const PairDistribution& d, Side side) {
    if (opponent.n() != d.n()) throw InvalidInputError("strategy universe mismatch");
    // Agreeing mass per own set and candidate output. Choices decouple across
    // sets, so per-set argmax is globally optimal for this side.
    std::map<std::vector<int>, std::map<int, Rational>> weight;
    d.for_each_pair([&](const Subset& a, const Subset& b, const Rational& w) {
        const Subset& own = (side == Side::Left) ? a : b;
        const Subset& other = (side == Side::Left) ? b : a;
        if (own.empty()) return;
        auto& wmap = weight[own.elements()];  // registers sets with no agreeing mass too
        if (other.empty()) return;
        const int j = opponent.choose(other);
        if (own.contains(j)) wmap[j] += w;
    });
    std::map<std::vector<int>, int> table;
    for (const auto& [elems, wmap] : weight) {
        int pick = elems.front();
        Rational best = 0;
        for (int e : elems) {  // ascending, ties keep the smallest element
            const auto it = wmap.find(e);
            if (it != wmap.end() && it->second > best) {
                best = it->second;
                pick = e;
            }
        }
        table[elems] = pick;
    }
    return DetStrategy::from_table(d.n(), std::move(table));
}

BruteForceResult brute_force_optimum(const PairDistribution& d) {
    const std::vector<Subset> lefts = d.side_support(Side::Left);
    const std::vector<Subset> rights = d.side_support(Side::Right);
    const int nl = static_cast<int>(lefts.size());
    const int nr = static_cast<int>(rights.size());

    BigInt space = 1;
    for (const Subset& s : lefts) {
        space *= s.size();
        if (space > kBruteForceSpaceCap)
            throw ResourceLimitError("left strategy space exceeds " +
                                     std::to_string(kBruteForceSpaceCap));
    }

    std::map<std::vector<int>, int> lidx, ridx;
    for (int i = 0; i < nl; ++i) lidx[lefts[i].elements()] = i;
    for (int i = 0; i < nr; ++i) ridx[rights[i].elements()] = i;

    std::vector<std::vector<std::pair<int, Rational>>> contrib(nl);
    d.for_each_pair([&](const Subset& a, const Subset& b, const Rational& w) {
        if (a.empty() || b.empty()) return;
        contrib[lidx.at(a.elements())].emplace_back(ridx.at(b.elements()), w);
    });

    // W[rb][j]: mass of pairs (A, B_rb) whose current f(A) = j, kept only for
    // j in B_rb since the right side can never agree elsewhere.
    std::vector<std::map<int, Rational>> W(nr);
    std::vector<Rational> best(nr, Rational(0));
    Rational total = 0;

    const auto recompute = [&](int rb) {
        Rational m = 0;
        for (const auto& [e, w] : W[rb])
            if (w > m) m = w;
        total += m - best[rb];
        best[rb] = m;
    };
    const auto change = [&](int la, int from, int to) {
        for (const auto& [rb, w] : contrib[la]) {
            if (rights[rb].contains(from)) W[rb][from] -= w;
            if (rights[rb].contains(to)) W[rb][to] += w;
            recompute(rb);
        }
    };

    std::vector<int> pos(nl, 0);
    for (int la = 0; la < nl; ++la) {
        const int e0 = lefts[la].elements().front();
        for (const auto& [rb, w] : contrib[la])
            if (rights[rb].contains(e0)) W[rb][e0] += w;
    }
    for (int rb = 0; rb < nr; ++rb) recompute(rb);

    // Odometer over per-set choices, last set fastest: lexicographic scan.
    // Strict improvement keeps the lexicographically smallest optimum.
    Rational best_total = total;
    std::vector<int> best_pos = pos;
    std::uint64_t scanned = 1;
    while (true) {
        int i = nl - 1;
        while (i >= 0 && pos[i] + 1 == lefts[i].size()) --i;
        if (i < 0) break;
        const auto& ei = lefts[i].elements();
        change(i, ei[pos[i]], ei[pos[i] + 1]);
        ++pos[i];
        for (int j = i + 1; j < nl; ++j) {
            if (pos[j] != 0) {
                change(j, lefts[j].elements()[pos[j]], lefts[j].elements().front());
                pos[j] = 0;
            }
        }
        ++scanned;
        if (total > best_total) {
            best_total = total;
            best_pos = pos;
        }
    }

    std::map<std::vector<int>, int> ftab;
    for (int la = 0; la < nl; ++la)
        ftab[lefts[la].elements()] = lefts[la].elements()[best_pos[la]];

    BruteForceResult r;
    r.optimum = 1 - best_total;
    r.f = DetStrategy::from_table(d.n(), std::move(ftab));
    r.g = best_response(r.f, d, Side::Right);
    r.strategies_scanned = scanned;
    return r;
}

std::string to_string(ProbeVerdict v) {
    switch (v) {
        case ProbeVerdict::Match: return "MATCH";
        case ProbeVerdict::Below: return "BELOW";
        case ProbeVerdict::ResourceLimited: return "RESOURCE_LIMITED";
    }
    throw InvariantViolationError("unknown verdict");
}

ProbeReport conjecture_probe(int n, int a, int b, int l) {
    const PairDistribution d = PairDistribution::intersection_family(n, a, b, l);
    ProbeReport rep;
    rep.n = n;
    rep.a = a;
    rep.b = b;
    rep.l = l;
    rep.minhash_value = 1 - Rational(l, a + b - l);
    try {
        // Left strategy space is a ^ C(n, a).
        bool fits = true;
        if (a > 1) {
            const long long sets = binom_capped(n, a, 63);
            if (sets > 63) {
                fits = false;
            } else {
                BigInt space = 1;
                for (long long i = 0; i < sets && fits; ++i) {
                    space *= a;
                    if (space > kBruteForceSpaceCap) fits = false;
                }
            }
        }
        if (fits) {
            BruteForceResult bf = brute_force_optimum(d);
            rep.optimum = bf.optimum;
            rep.exact = true;
            rep.f = std::move(bf.f);
            rep.g = std::move(bf.g);
        } else {
            // Capped best-response descent from the identity rank order. On
            // this family every rank-order pair already attains the shared
            // random order value, so the descent starts at minhash_value.
            DetStrategy f = order_strategy(n, iota_vector(n));
            DetStrategy g = best_response(f, d, Side::Right);
            Rational err = exact_error(f, g, d);
            int rounds = 0;
            while (rounds < kBestResponseMaxRounds) {
                DetStrategy f2 = best_response(g, d, Side::Left);
                DetStrategy g2 = best_response(f2, d, Side::Right);
                const Rational e2 = exact_error(f2, g2, d);
                if (!(e2 < err)) break;
                f = std::move(f2);
                g = std::move(g2);
                err = e2;
                ++rounds;
            }
            rep.optimum = err;
            rep.exact = false;
            rep.rounds = rounds;
            rep.f = std::move(f);
            rep.g = std::move(g);
        }
        if (rep.optimum > rep.minhash_value)
            throw InvariantViolationError(
                "deterministic optimum exceeds the shared-order value");
        if (rep.optimum < rep.minhash_value)
            rep.verdict = ProbeVerdict::Below;
        else
            rep.verdict = rep.exact ? ProbeVerdict::Match : ProbeVerdict::ResourceLimited;
    } catch (const ResourceLimitError&) {
        // Too large even to evaluate one strategy pair; report the achievable
        // shared-order value.
        rep.optimum = rep.minhash_value;
        rep.exact = false;
        rep.rounds = 0;
        rep.verdict = ProbeVerdict::ResourceLimited;
        rep.f = order_strategy(n, iota_vector(n));
        rep.g = order_strategy(n, iota_vector(n));
    }
    return rep;
}

SubsetPair sample_pair(const PairDistribution& d, std::uint64_t seed) {
    SplitMix rng(seed);
    const int n = d.n();
    const Universe u(n);
    switch (d.family()) {
        case PairDistribution::Family::Product: {
            const double p = rational_to_double(d.p_);
            std::vector<int> av, bv;
            for (int e = 1; e <= n; ++e) {
                if (rng.next_unit() < p) av.push_back(e);
                if (rng.next_unit() < p) bv.push_back(e);
            }
            return SubsetPair(Subset(u, std::move(av)), Subset(u, std::move(bv)));
        }
        case PairDistribution::Family::PositivelyCorrelated: {
            const double delta = rational_to_double(d.delta_);
            const double s = rational_to_double(d.p_ / (1 - d.delta_));
            const double keep = 1 - delta;
            std::vector<int> av, bv;
            for (int e = 1; e <= n; ++e) {
                if (rng.next_unit() >= s) continue;
                if (rng.next_unit() < keep) av.push_back(e);
                if (rng.next_unit() < keep) bv.push_back(e);
            }
            return SubsetPair(Subset(u, std::move(av)), Subset(u, std::move(bv)));
        }
        case PairDistribution::Family::Match: {
            const int i = static_cast<int>(rng.next_below(n)) + 1;
            int j = static_cast<int>(rng.next_below(n - 1)) + 1;
            if (j >= i) ++j;
            std::vector<int> av, bv;
            for (int e = 1; e <= n; ++e) {
                if (e != i) av.push_back(e);
                if (e != j) bv.push_back(e);
            }
            return SubsetPair(Subset(u, std::move(av)), Subset(u, std::move(bv)));
        }
        case PairDistribution::Family::Intersection: {
            const auto pick = [&rng](std::vector<int> pool, int k) {
                for (int i = 0; i < k; ++i) {
                    const auto j = i + rng.next_below(pool.size() - i);
                    std::swap(pool[i], pool[j]);
                }
                pool.resize(k);
                std::sort(pool.begin(), pool.end());
                return pool;
            };
            const std::vector<int> av = pick(iota_vector(n), d.a_);
            const std::vector<int> iv = pick(av, d.l_);
            std::vector<int> comp;
            const std::vector<int> ground = iota_vector(n);
            std::set_difference(ground.begin(), ground.end(), av.begin(), av.end(),
                                std::back_inserter(comp));
            const std::vector<int> rest = pick(std::move(comp), d.b_ - d.l_);
            std::vector<int> bv;
            std::merge(iv.begin(), iv.end(), rest.begin(), rest.end(), std::back_inserter(bv));
            return SubsetPair(Subset(u, av), Subset(u, std::move(bv)));
        }
        case PairDistribution::Family::Explicit: {
            const Rational t(BigInt(rng.next() >> 11), BigInt(1) << 53);
            Rational cum = 0;
            for (const auto& [pair, w] : d.support_) {
                cum += w;
                if (t < cum) return pair;
            }
            throw InvariantViolationError("explicit support did not cover the unit draw");
        }
    }
    throw InvariantViolationError("unknown family");
}

}  // namespace corrsamp
