#include <corrsamp/core.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace corrsamp {

// ---------------------------------------------------------------- rationals

Rational rational_from_double(double x) {
    // cpp_rational converts binary floating point exactly.
    return Rational(x);
}

Rational parse_rational(const std::string& text) {
    const auto bad = [&] {
        throw InvalidInputError("cannot parse rational from '" + text + "'");
    };
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) bad();

    const auto digits_only = [](const std::string& t) {
        return !t.empty() && std::all_of(t.begin(), t.end(),
                                         [](unsigned char c) { return std::isdigit(c); });
    };

    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = (s[0] == '-');
        s.erase(s.begin());
    }

    Rational value;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        const std::string num = s.substr(0, slash);
        const std::string den = s.substr(slash + 1);
        if (!digits_only(num) || !digits_only(den)) bad();
        BigInt d(den);
        if (d == 0) throw InvalidInputError("zero denominator in '" + text + "'");
        value = Rational(BigInt(num), d);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        const std::string whole = s.substr(0, dot);
        const std::string frac = s.substr(dot + 1);
        if (!digits_only(whole) && !whole.empty()) bad();
        if (!digits_only(frac)) bad();
        BigInt scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        value = Rational(BigInt(whole.empty() ? "0" : whole) * scale + BigInt(frac), scale);
    } else {
        if (!digits_only(s)) bad();
        value = Rational(BigInt(s));
    }
    return negative ? -value : value;
}

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r) << '/' << denominator(r);
    return os.str();
}

double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rational_pow(const Rational& r, unsigned e) {
    Rational acc = 1, base = r;
    while (e) {
        if (e & 1u) acc *= base;
        base *= base;
        e >>= 1u;
    }
    return acc;
}

// ------------------------------------------------------------------ subsets

Subset::Subset(Universe u, std::vector<int> elements) : n_(u.n), elems_(std::move(elements)) {
    for (size_t i = 0; i < elems_.size(); ++i) {
        if (elems_[i] < 1 || elems_[i] > n_)
            throw InvalidInputError("subset element " + std::to_string(elems_[i]) +
                                    " outside universe [1," + std::to_string(n_) + "]");
        if (i > 0 && elems_[i] <= elems_[i - 1])
            throw InvalidInputError("subset elements must be strictly increasing");
    }
}

Subset Subset::full(Universe u) {
    std::vector<int> all(u.n);
    for (int i = 0; i < u.n; ++i) all[i] = i + 1;
    return Subset(u, std::move(all));
}

bool Subset::contains(int e) const {
    return std::binary_search(elems_.begin(), elems_.end(), e);
}

std::uint64_t Subset::mask() const {
    if (n_ > 63) throw ResourceLimitError("bitmask view needs universe <= 63");
    std::uint64_t m = 0;
    for (int e : elems_) m |= 1ull << (e - 1);
    return m;
}

int intersection_size(const Subset& a, const Subset& b) {
    const auto& x = a.elements();
    const auto& y = b.elements();
    size_t i = 0, j = 0;
    int k = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] == y[j]) ++k, ++i, ++j;
        else if (x[i] < y[j]) ++i;
        else ++j;
    }
    return k;
}

int union_size(const Subset& a, const Subset& b) {
    return a.size() + b.size() - intersection_size(a, b);
}

SubsetPair::SubsetPair(Subset a_, Subset b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.universe() != b.universe())
        throw InvalidInputError("subset pair must share one universe");
}

// -------------------------------------------------------------- distribution

namespace {

// Double-path normalization tolerance.
const Rational kDoubleSumTolerance = Rational(1, BigInt("1000000000000"));

void validate_probs(int n, const std::vector<Rational>& probs, bool exact) {
    if (n < 1 || n > kMaxUniverse)
        throw InvalidInputError("distribution universe must be in [1, 1e6]");
    if (static_cast<int>(probs.size()) != n)
        throw InvalidInputError("distribution needs exactly n probabilities");
    Rational sum = 0;
    for (const Rational& p : probs) {
        if (p < 0) throw InvalidInputError("negative probability");
        sum += p;
    }
    if (exact) {
        if (sum != 1) throw InvalidInputError("probabilities must sum to 1, got " +
                                              rational_to_string(sum));
    } else {
        if (abs(sum - 1) > kDoubleSumTolerance)
            throw InvalidInputError("probabilities must sum to 1 within 1e-12");
    }
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(int n, std::vector<Rational> probs, bool exact)
    : n_(n), probs_(std::move(probs)), exact_(exact) {}

DiscreteDistribution DiscreteDistribution::from_rationals(int n, std::vector<Rational> probs) {
    validate_probs(n, probs, /*exact=*/true);
    return DiscreteDistribution(n, std::move(probs), true);
}

DiscreteDistribution DiscreteDistribution::from_doubles(int n, const std::vector<double>& probs) {
    std::vector<Rational> exact;
    exact.reserve(probs.size());
    for (double p : probs) exact.push_back(rational_from_double(p));
    validate_probs(n, exact, /*exact=*/false);
    return DiscreteDistribution(n, std::move(exact), false);
}

DiscreteDistribution DiscreteDistribution::uniform(const Subset& support) {
    if (support.empty()) throw InvalidInputError("uniform distribution needs a nonempty set");
    std::vector<Rational> probs(support.universe(), Rational(0));
    for (int e : support.elements()) probs[e - 1] = Rational(1, support.size());
    return DiscreteDistribution(support.universe(), std::move(probs), true);
}

const Rational& DiscreteDistribution::prob(int element) const {
    if (element < 1 || element > n_)
        throw InvalidInputError("element " + std::to_string(element) + " outside universe");
    return probs_[element - 1];
}

Subset DiscreteDistribution::support() const {
    std::vector<int> elems;
    for (int e = 1; e <= n_; ++e)
        if (probs_[e - 1] > 0) elems.push_back(e);
    return Subset(Universe(n_), std::move(elems));
}

bool DiscreteDistribution::is_flat() const {
    const Rational* first = nullptr;
    for (const Rational& p : probs_) {
        if (p == 0) continue;
        if (!first) first = &p;
        else if (p != *first) return false;
    }
    return first != nullptr;
}

// ------------------------------------------------------------ distances, curves

Rational tv_distance(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    if (p.n() != q.n()) throw InvalidInputError("tv_distance needs one shared universe");
    Rational sum = 0;
    for (int e = 1; e <= p.n(); ++e) sum += abs(p.prob(e) - q.prob(e));
    return sum / 2;
}

Rational flat_tv_distance(const Subset& a, const Subset& b) {
    if (a.universe() != b.universe())
        throw InvalidInputError("flat_tv_distance needs one shared universe");
    if (a.empty() || b.empty()) throw InvalidInputError("flat_tv_distance needs nonempty sets");
    const int m = std::max(a.size(), b.size());
    return 1 - Rational(intersection_size(a, b), m);
}

Rational holenstein_bound(const Rational& delta) {
    if (delta < 0 || delta > 1) throw InvalidInputError("delta must lie in [0, 1]");
    return 2 * delta / (1 + delta);
}

Rational dp_lower_bound(const Rational& p) {
    if (p < 0 || p > 1) throw InvalidInputError("p must lie in [0, 1]");
    return 2 * (1 - p) / (2 - p);
}

Rational finite_dp_optimum(int n, const Rational& p) {
    if (n < 1) throw InvalidInputError("finite_dp_optimum needs n >= 1");
    if (p < 0 || p > 1) throw InvalidInputError("p must lie in [0, 1]");
    return (2 * (1 - p) + p * rational_pow(1 - p, 2 * static_cast<unsigned>(n))) / (2 - p);
}

}  // namespace corrsamp
