#pragma once

#include <map>
#include <string>
#include <vector>

#include "qteich/qparams.hpp"
#include "qteich/surface.hpp"

namespace qteich {

// Skew-Laurent algebra on generators X_0..X_{n-1} with X_i X_j = q^{2 sigma_ij} X_j X_i.
class SkewAlgebra {
public:
    SkewAlgebra(std::vector<std::vector<int>> sigma, QParams q);

    // Chekhov-Fock algebra of a triangulation.
    static SkewAlgebra of(const Triangulation& t, QParams q);
    // Tensor product of m triangle algebras; generator 3j+s is slot s of face j.
    static SkewAlgebra triangle_product(int m, QParams q);

    int size() const { return static_cast<int>(sigma_.size()); }
    int sigma(int i, int j) const { return sigma_[i][j]; }
    const std::vector<std::vector<int>>& sigma() const { return sigma_; }
    const QParams& q() const { return q_; }

    // Exponent e with X^a X^b = q^e X^{a+b}, both in normal order.
    long long reorder_exponent(const std::vector<int>& a, const std::vector<int>& b) const;

private:
    std::vector<std::vector<int>> sigma_;
    QParams q_;
};

// Element of C[q]: finite sum of complex multiples of powers of q, kept with
// exponents in [0, N) using q^N = (-1)^(N+1).
class QCoeff {
public:
    QCoeff() = default;
    static QCoeff monomial(cplx c, long long qexp, const QParams& q);

    QCoeff& add(const QCoeff& o);
    QCoeff times(const QCoeff& o, const QParams& q) const;
    QCoeff shifted(long long qexp, const QParams& q) const;
    QCoeff scaled(cplx c) const;
    cplx value(const QParams& q) const;
    bool negligible(const QParams& q) const;
    const std::map<int, cplx>& terms() const { return terms_; }

private:
    void put(int k, cplx c, const QParams& q);
    std::map<int, cplx> terms_;
};

struct SkewMonomial {
    cplx coeff{1.0, 0.0};
    int qexp = 0;            // total coefficient is coeff * q^qexp
    std::vector<int> exps;   // normal order: increasing generator index
};

class SkewPolynomial {
public:
    explicit SkewPolynomial(int nvars = 0) : nvars_(nvars) {}
    static SkewPolynomial from_monomial(const SkewMonomial& m, const QParams& q);
    static SkewPolynomial constant(int nvars, cplx c, const QParams& q);
    static SkewPolynomial generator(int nvars, int i, const QParams& q, int power = 1);

    int nvars() const { return nvars_; }
    const std::map<std::vector<int>, QCoeff>& terms() const { return terms_; }

    void add_term(const std::vector<int>& exps, const QCoeff& c, const QParams& q);
    SkewPolynomial plus(const SkewPolynomial& o, const QParams& q) const;
    SkewPolynomial scaled(cplx c) const;
    // Drop terms whose coefficient evaluates to zero.
    void canonicalize(const QParams& q);

    // Numeric coefficient of a normal-ordered monomial (0 if absent).
    cplx coefficient(const std::vector<int>& exps, const QParams& q) const;

private:
    int nvars_;
    std::map<std::vector<int>, QCoeff> terms_;
};

SkewMonomial monomial_product(const SkewMonomial& a, const SkewMonomial& b, const SkewAlgebra& alg);
SkewMonomial monomial_inverse(const SkewMonomial& a, const SkewAlgebra& alg);
SkewPolynomial multiply(const SkewPolynomial& p, const SkewPolynomial& r, const SkewAlgebra& alg);

// Weyl-ordered product q^{-sum_{a<b} sigma(i_a, i_b)} X_{i_1} ... X_{i_k}; the
// result does not depend on the order of `indices`.
SkewMonomial weyl_ordered(const std::vector<int>& indices, const SkewAlgebra& alg);

// H = q^{-sum_{i<j} sigma_ij} X_1 ... X_n.
SkewMonomial principal_central(const SkewAlgebra& alg);

// Image of the edge generator X_i in the tensor product of the face algebras:
// the Weyl-ordered product of the side generators carrying edge i.
SkewMonomial embed_generator(const Triangulation& t, int edge, const SkewAlgebra& faces);

// Algebra homomorphism from the Chekhov-Fock algebra of t into the tensor
// product of triangle algebras.
SkewPolynomial embed(const Triangulation& t, const SkewPolynomial& p, const QParams& q);

// Parse "q^-1 * X1 X2 X3", "(X1 + X2)*(X1 - X2)", "2 X1^-2 + 0.5". Generators
// are 1-based; juxtaposition and '*' both multiply left to right.
SkewPolynomial parse_polynomial(const std::string& text, const SkewAlgebra& alg);

std::string to_string(const SkewPolynomial& p, const QParams& q);

}  // namespace qteich
