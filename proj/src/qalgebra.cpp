#include "qteich/qalgebra.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qteich/errors.hpp"

namespace qteich {

SkewAlgebra::SkewAlgebra(std::vector<std::vector<int>> sigma, QParams q)
    : sigma_(std::move(sigma)), q_(q) {
    const auto n = sigma_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (sigma_[i].size() != n) throw InputError("sigma matrix is not square");
        for (std::size_t j = 0; j < n; ++j)
            if (sigma_[i][j] != -sigma_[j][i]) throw InputError("sigma matrix is not antisymmetric");
    }
}

SkewAlgebra SkewAlgebra::of(const Triangulation& t, QParams q) { return SkewAlgebra(sigma_matrix(t), q); }

SkewAlgebra SkewAlgebra::triangle_product(int m, QParams q) {
    std::vector<std::vector<int>> sigma(3 * m, std::vector<int>(3 * m, 0));
    for (int j = 0; j < m; ++j)
        for (int s = 0; s < 3; ++s) {
            const int a = 3 * j + s, b = 3 * j + (s + 1) % 3;
            sigma[a][b] = 1;
            sigma[b][a] = -1;
        }
    return SkewAlgebra(std::move(sigma), q);
}

long long SkewAlgebra::reorder_exponent(const std::vector<int>& a, const std::vector<int>& b) const {
    // Moving X_j^{b_j} to the left past X_i^{a_i} for every i > j.
    long long e = 0;
    const int n = size();
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < i; ++j)
            if (b[j] != 0) e += 2LL * a[i] * b[j] * sigma_[i][j];
    }
    return e;
}

// ---------------------------------------------------------------- QCoeff

QCoeff QCoeff::monomial(cplx c, long long qexp, const QParams& q) {
    QCoeff out;
    out.put(q.reduce(qexp), c, q);
    return out;
}

void QCoeff::put(int k, cplx c, const QParams& q) {
    const int N = q.N();
    k = q.reduce(k);
    if (k >= N) {
        k -= N;
        if (N % 2 == 0) c = -c;
    }
    auto& slot = terms_[k];
    slot += c;
    if (slot == cplx(0.0, 0.0)) terms_.erase(k);
}

QCoeff& QCoeff::add(const QCoeff& o) {
    for (const auto& [k, c] : o.terms_) {
        auto& slot = terms_[k];
        slot += c;
        if (slot == cplx(0.0, 0.0)) terms_.erase(k);
    }
    return *this;
}

QCoeff QCoeff::times(const QCoeff& o, const QParams& q) const {
    QCoeff out;
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : o.terms_) out.put(k1 + k2, c1 * c2, q);
    return out;
}

QCoeff QCoeff::shifted(long long qexp, const QParams& q) const {
    QCoeff out;
    for (const auto& [k, c] : terms_) out.put(static_cast<int>(q.reduce(k + qexp)), c, q);
    return out;
}

QCoeff QCoeff::scaled(cplx c) const {
    QCoeff out = *this;
    for (auto& [k, v] : out.terms_) v *= c;
    return out;
}

cplx QCoeff::value(const QParams& q) const {
    cplx v = 0.0;
    for (const auto& [k, c] : terms_) v += c * q.pow(k);
    return v;
}

bool QCoeff::negligible(const QParams& q) const {
    double mass = 0.0;
    for (const auto& [k, c] : terms_) mass += std::abs(c);
    return terms_.empty() || std::abs(value(q)) <= 1e-14 * mass;
}

// ---------------------------------------------------------------- SkewPolynomial

SkewPolynomial SkewPolynomial::from_monomial(const SkewMonomial& m, const QParams& q) {
    SkewPolynomial p(static_cast<int>(m.exps.size()));
    p.add_term(m.exps, QCoeff::monomial(m.coeff, m.qexp, q), q);
    return p;
}

SkewPolynomial SkewPolynomial::constant(int nvars, cplx c, const QParams& q) {
    SkewMonomial m;
    m.coeff = c;
    m.exps.assign(nvars, 0);
    return from_monomial(m, q);
}

SkewPolynomial SkewPolynomial::generator(int nvars, int i, const QParams& q, int power) {
    SkewMonomial m;
    m.exps.assign(nvars, 0);
    m.exps.at(i) = power;
    return from_monomial(m, q);
}

void SkewPolynomial::add_term(const std::vector<int>& exps, const QCoeff& c, const QParams& q) {
    if (static_cast<int>(exps.size()) != nvars_) throw InputError("monomial has wrong variable count");
    auto& slot = terms_[exps];
    slot.add(c);
    if (slot.negligible(q)) terms_.erase(exps);
}

SkewPolynomial SkewPolynomial::plus(const SkewPolynomial& o, const QParams& q) const {
    SkewPolynomial out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c, q);
    return out;
}

SkewPolynomial SkewPolynomial::scaled(cplx c) const {
    SkewPolynomial out(nvars_);
    for (const auto& [e, v] : terms_) out.terms_[e] = v.scaled(c);
    return out;
}

void SkewPolynomial::canonicalize(const QParams& q) {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second.negligible(q) ? terms_.erase(it) : std::next(it);
}

cplx SkewPolynomial::coefficient(const std::vector<int>& exps, const QParams& q) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? cplx(0.0) : it->second.value(q);
}

// ---------------------------------------------------------------- products

SkewMonomial monomial_product(const SkewMonomial& a, const SkewMonomial& b, const SkewAlgebra& alg) {
    SkewMonomial out;
    out.coeff = a.coeff * b.coeff;
    out.qexp = alg.q().reduce(static_cast<long long>(a.qexp) + b.qexp + alg.reorder_exponent(a.exps, b.exps));
    out.exps.resize(a.exps.size());
    for (std::size_t i = 0; i < a.exps.size(); ++i) out.exps[i] = a.exps[i] + b.exps[i];
    return out;
}

SkewMonomial monomial_inverse(const SkewMonomial& a, const SkewAlgebra& alg) {
    SkewMonomial inv;
    inv.exps.resize(a.exps.size());
    for (std::size_t i = 0; i < a.exps.size(); ++i) inv.exps[i] = -a.exps[i];
    // X^a X^{-a} = q^e, so (X^a)^{-1} = q^{-e} X^{-a}.
    const long long e = alg.reorder_exponent(a.exps, inv.exps);
    inv.coeff = 1.0 / a.coeff;
    inv.qexp = alg.q().reduce(-static_cast<long long>(a.qexp) - e);
    return inv;
}

SkewPolynomial multiply(const SkewPolynomial& p, const SkewPolynomial& r, const SkewAlgebra& alg) {
    if (p.nvars() != alg.size() || r.nvars() != alg.size())
        throw InputError("polynomial variable count does not match the algebra");
    const QParams& q = alg.q();
    SkewPolynomial out(alg.size());
    for (const auto& [ea, ca] : p.terms())
        for (const auto& [eb, cb] : r.terms()) {
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca.times(cb, q).shifted(alg.reorder_exponent(ea, eb), q), q);
        }
    out.canonicalize(q);
    return out;
}

SkewMonomial weyl_ordered(const std::vector<int>& indices, const SkewAlgebra& alg) {
    SkewMonomial acc;
    acc.exps.assign(alg.size(), 0);
    long long shift = 0;
    for (std::size_t a = 0; a < indices.size(); ++a) {
        if (indices[a] < 0 || indices[a] >= alg.size()) throw InputError("generator index out of range");
        for (std::size_t b = a + 1; b < indices.size(); ++b) shift -= alg.sigma(indices[a], indices[b]);
        SkewMonomial g;
        g.exps.assign(alg.size(), 0);
        g.exps[indices[a]] = 1;
        acc = monomial_product(acc, g, alg);
    }
    acc.qexp = alg.q().reduce(acc.qexp + shift);
    return acc;
}

SkewMonomial principal_central(const SkewAlgebra& alg) {
    std::vector<int> all(alg.size());
    for (int i = 0; i < alg.size(); ++i) all[i] = i;
    return weyl_ordered(all, alg);
}

SkewMonomial embed_generator(const Triangulation& t, int edge, const SkewAlgebra& faces) {
    std::vector<int> gens;
    for (const Side& s : t.sides_of_edge(edge)) gens.push_back(3 * s.face + s.slot);
    return weyl_ordered(gens, faces);
}

SkewPolynomial embed(const Triangulation& t, const SkewPolynomial& p, const QParams& q) {
    const SkewAlgebra faces = SkewAlgebra::triangle_product(t.face_count(), q);
    const SkewAlgebra source = SkewAlgebra::of(t, q);
    if (p.nvars() != source.size()) throw InputError("polynomial variable count does not match the triangulation");
    std::vector<SkewMonomial> images, inverses;
    for (int i = 0; i < t.edge_count(); ++i) {
        images.push_back(embed_generator(t, i, faces));
        inverses.push_back(monomial_inverse(images.back(), faces));
    }
    SkewPolynomial out(faces.size());
    for (const auto& [exps, coeff] : p.terms()) {
        SkewMonomial acc;
        acc.exps.assign(faces.size(), 0);
        for (int i = 0; i < t.edge_count(); ++i) {
            const SkewMonomial& g = exps[i] > 0 ? images[i] : inverses[i];
            for (int k = 0; k < std::abs(exps[i]); ++k) acc = monomial_product(acc, g, faces);
        }
        const QCoeff c = coeff.times(QCoeff::monomial(acc.coeff, acc.qexp, q), q);
        out.add_term(acc.exps, c, q);
    }
    out.canonicalize(q);
    return out;
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
    Parser(const std::string& text, const SkewAlgebra& alg) : s_(text), alg_(alg) {}

    SkewPolynomial parse() {
        SkewPolynomial p = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw InputError("polynomial parse error at position " + std::to_string(pos_) + ": " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    int integer() {
        skip();
        int sign = 1;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) sign = (s_[pos_++] == '-') ? -1 : 1;
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected integer");
        int v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = 10 * v + (s_[pos_++] - '0');
        return sign * v;
    }
    int exponent() {
        if (!peek('^')) return 1;
        ++pos_;
        if (peek('(')) {
            ++pos_;
            const int v = integer();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return v;
        }
        return integer();
    }

    SkewPolynomial sum() {
        const QParams& q = alg_.q();
        SkewPolynomial acc(alg_.size());
        bool first = true;
        while (true) {
            double sign = 1.0;
            if (peek('+') || peek('-')) {
                sign = (s_[pos_] == '-') ? -1.0 : 1.0;
                ++pos_;
            } else if (!first) {
                break;
            }
            acc = acc.plus(product().scaled(sign), q);
            first = false;
            if (!peek('+') && !peek('-')) break;
        }
        return acc;
    }

    bool factor_start() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return c == '(' || c == 'q' || c == 'X' || c == 'x' || c == 'i' || c == '.' ||
               std::isdigit(static_cast<unsigned char>(c));
    }

    SkewPolynomial product() {
        const QParams& q = alg_.q();
        SkewPolynomial acc = SkewPolynomial::constant(alg_.size(), 1.0, q);
        if (!factor_start()) fail("expected a factor");
        while (true) {
            acc = multiply(acc, factor(), alg_);
            if (peek('*')) {
                ++pos_;
                if (!factor_start()) fail("expected a factor after '*'");
                continue;
            }
            if (!factor_start()) break;
        }
        return acc;
    }

    SkewPolynomial factor() {
        const QParams& q = alg_.q();
        skip();
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            SkewPolynomial inner = sum();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            const int e = exponent();
            if (e < 0) fail("negative powers of sums are not supported");
            SkewPolynomial out = SkewPolynomial::constant(alg_.size(), 1.0, q);
            for (int k = 0; k < e; ++k) out = multiply(out, inner, alg_);
            return out;
        }
        if (c == 'q') {
            ++pos_;
            SkewMonomial m;
            m.exps.assign(alg_.size(), 0);
            m.qexp = q.reduce(exponent());
            return SkewPolynomial::from_monomial(m, q);
        }
        if (c == 'i') {
            ++pos_;
            return SkewPolynomial::constant(alg_.size(), cplx(0.0, 1.0), q);
        }
        if (c == 'X' || c == 'x') {
            ++pos_;
            const int idx = integer();
            if (idx < 1 || idx > alg_.size()) fail("generator index out of range");
            return SkewPolynomial::generator(alg_.size(), idx - 1, q, exponent());
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s_.substr(pos_), &used);
        } catch (const std::exception&) {
            fail("expected a number");
        }
        pos_ += used;
        return SkewPolynomial::constant(alg_.size(), v, q);
    }

    std::string s_;
    std::size_t pos_ = 0;
    const SkewAlgebra& alg_;
};

}  // namespace

SkewPolynomial parse_polynomial(const std::string& text, const SkewAlgebra& alg) {
    return Parser(text, alg).parse();
}

std::string to_string(const SkewPolynomial& p, const QParams& q) {
    if (p.terms().empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [exps, coeff] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(";
        bool first_c = true;
        for (const auto& [k, c] : coeff.terms()) {
            if (!first_c) os << " + ";
            first_c = false;
            char buf[96];
            std::snprintf(buf, sizeof buf, "(%.12g%+.12gi)", c.real(), c.imag());
            os << buf;
            if (k != 0) os << "*q^" << k;
        }
        os << ")";
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] != 0) {
                os << " X" << (i + 1);
                if (exps[i] != 1) os << "^" << exps[i];
            }
    }
    (void)q;
    return os.str();
}

}  // namespace qteich
