#include "qteich/qparams.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qteich/errors.hpp"

namespace qteich {

QParams::QParams(int N, int c) : N_(N), c_(c) {
    if (N < 2 || N > 32)
        throw InputError("N must lie in [2, 32], got " + std::to_string(N));
    if (c % 2 == 0 || std::gcd(c, N) != 1)
        throw InputError("c must be odd and coprime to N, got c=" + std::to_string(c));
    // q^k = exp(i*pi*k*(N + c)/N); the angle is reduced exactly before evaluation.
    const long long step = (static_cast<long long>(N) + (c % (2 * N) + 2 * N)) % (2 * N);
    for (int k = 0; k < 2 * N; ++k) {
        const long long num = (step * k) % (2 * N);
        table_[k] = std::polar(1.0, std::numbers::pi * static_cast<double>(num) / N);
    }
    q_ = table_[1];

    const cplx qN = table_[N % (2 * N)];
    const double sign = (N % 2 == 1) ? 1.0 : -1.0;
    if (std::abs(qN - sign) > 1e-12)
        throw DomainError("bad_root", "q^N != (-1)^(N+1)");
    const cplx q2 = table_[2];
    for (int k = 1; k < N; ++k)
        if (std::abs(std::pow(q2, k) - 1.0) < 1e-12)
            throw DomainError("bad_root", "q^2 is not a primitive N-th root of unity");
    if (std::abs(std::pow(q2, N) - 1.0) > 1e-12)
        throw DomainError("bad_root", "q^2 is not an N-th root of unity");
}

int QParams::reduce(long long k) const {
    const long long m = 2LL * N_;
    return static_cast<int>(((k % m) + m) % m);
}

cplx QParams::pow(long long k) const { return table_[reduce(k)]; }

}  // namespace qteich
