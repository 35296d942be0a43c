#pragma once

#include <complex>

namespace qteich {

using cplx = std::complex<double>;

// Root of unity q = -exp(i*pi*c/N). Powers of q are tracked as integers mod 2N
// and converted to complex only through pow().
class QParams {
public:
    explicit QParams(int N, int c = 1);

    int N() const { return N_; }
    int c() const { return c_; }
    cplx q() const { return q_; }

    // q^k for any integer k, from a table indexed by k mod 2N.
    cplx pow(long long k) const;
    // Reduce an exponent into [0, 2N).
    int reduce(long long k) const;

    bool operator==(const QParams& o) const { return N_ == o.N_ && c_ == o.c_; }

private:
    int N_;
    int c_;
    cplx q_;
    cplx table_[64];
};

}  // namespace qteich
