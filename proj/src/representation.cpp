#include "qteich/representation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qteich/errors.hpp"

namespace qteich {

// ---------------------------------------------------------------- GenMatrix

GenMatrix GenMatrix::identity(std::size_t dim) {
    GenMatrix g;
    g.target_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) g.target_[i] = static_cast<std::uint32_t>(i);
    g.value_.assign(dim, 1.0);
    return g;
}

GenMatrix GenMatrix::diagonal(std::vector<cplx> d) {
    GenMatrix g = identity(d.size());
    g.value_ = std::move(d);
    return g;
}

GenMatrix GenMatrix::monomial(std::vector<std::uint32_t> target, std::vector<cplx> value) {
    if (target.size() != value.size()) throw InputError("GenMatrix target/value size mismatch");
    GenMatrix g;
    g.target_ = std::move(target);
    g.value_ = std::move(value);
    return g;
}

GenMatrix GenMatrix::operator*(const GenMatrix& o) const {
    if (dim() != o.dim()) throw InputError("GenMatrix dimension mismatch");
    GenMatrix out;
    out.target_.resize(dim());
    out.value_.resize(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        const auto mid = o.target_[j];
        out.target_[j] = target_[mid];
        out.value_[j] = o.value_[j] * value_[mid];
    }
    return out;
}

GenMatrix GenMatrix::scaled(cplx c) const {
    GenMatrix out = *this;
    for (auto& v : out.value_) v *= c;
    return out;
}

GenMatrix GenMatrix::inverse() const {
    GenMatrix out;
    out.target_.resize(dim());
    out.value_.resize(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        out.target_[target_[j]] = static_cast<std::uint32_t>(j);
        out.value_[target_[j]] = 1.0 / value_[j];
    }
    return out;
}

GenMatrix GenMatrix::power(long long k) const {
    GenMatrix base = k < 0 ? inverse() : *this;
    GenMatrix acc = identity(dim());
    for (long long e = std::llabs(k); e > 0; e >>= 1) {
        if (e & 1) acc = acc * base;
        base = base * base;
    }
    return acc;
}

Mat GenMatrix::dense() const {
    Mat m = Mat::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    for (std::size_t j = 0; j < dim(); ++j) m(target_[j], static_cast<Eigen::Index>(j)) = value_[j];
    return m;
}

bool GenMatrix::scalar(cplx& c, double rel_tol) const {
    if (dim() == 0) return false;
    double scale = 0.0;
    for (const auto& v : value_) scale = std::max(scale, std::abs(v));
    c = value_[0];
    for (std::size_t j = 0; j < dim(); ++j) {
        if (target_[j] != j) return false;
        if (std::abs(value_[j] - c) > rel_tol * scale) return false;
    }
    return true;
}

double GenMatrix::rel_diff(const GenMatrix& a, const GenMatrix& b) {
    double scale = 0.0, worst = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        scale = std::max({scale, std::abs(a.value_[j]), std::abs(b.value_[j])});
        if (a.target_[j] == b.target_[j])
            worst = std::max(worst, std::abs(a.value_[j] - b.value_[j]));
        else
            worst = std::max({worst, std::abs(a.value_[j]), std::abs(b.value_[j])});
    }
    return scale == 0.0 ? 0.0 : worst / scale;
}

GenMatrix GenMatrix::kron(const GenMatrix& a, const GenMatrix& b) {
    GenMatrix out;
    const std::size_t db = b.dim();
    out.target_.resize(a.dim() * db);
    out.value_.resize(a.dim() * db);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < db; ++k) {
            out.target_[i * db + k] = static_cast<std::uint32_t>(a.target_[i] * db + b.target_[k]);
            out.value_[i * db + k] = a.value_[i] * b.value_[k];
        }
    return out;
}

GenMatrix GenMatrix::on_factor(const GenMatrix& a, int factor, int m) {
    const std::size_t N = a.dim();
    std::size_t stride = 1;
    for (int j = factor + 1; j < m; ++j) stride *= N;
    std::size_t total = stride;
    for (int j = 0; j <= factor; ++j) total *= N;
    GenMatrix out;
    out.target_.resize(total);
    out.value_.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        const std::size_t digit = (idx / stride) % N;
        out.target_[idx] = static_cast<std::uint32_t>(idx + (a.target_[digit] - digit) * stride);
        out.value_[idx] = a.value_[digit];
    }
    return out;
}

// ---------------------------------------------------------------- triangle reps

TriangleRep triangle_rep(const QParams& q, const std::array<cplx, 3>& y) {
    for (const auto& v : y)
        if (v == cplx(0.0)) throw DomainError("zero_parameter", "triangle parameter is zero");
    const int N = q.N();
    std::vector<cplx> diag(N), up_v(N, y[1]), down_v(N);
    std::vector<std::uint32_t> up_t(N), down_t(N);
    for (int i = 0; i < N; ++i) {
        diag[i] = y[0] * q.pow(2LL * i);
        up_t[i] = static_cast<std::uint32_t>((i + 1) % N);
        down_t[i] = static_cast<std::uint32_t>((i + N - 1) % N);
        down_v[i] = y[2] * q.pow(1LL - 2LL * i);
    }
    return TriangleRep{q, y,
                       {GenMatrix::diagonal(std::move(diag)), GenMatrix::monomial(std::move(up_t), std::move(up_v)),
                        GenMatrix::monomial(std::move(down_t), std::move(down_v))}};
}

// ---------------------------------------------------------------- LocalRep

cplx principal_root(cplx z, int N) {
    if (z == cplx(0.0)) return 0.0;
    return std::polar(std::pow(std::abs(z), 1.0 / N), std::arg(z) / N);
}

LocalRep::LocalRep(Triangulation t, QParams q, std::vector<std::array<cplx, 3>> face_y, std::size_t max_dim)
    : t_(std::move(t)), q_(q), y_(std::move(face_y)) {
    if (static_cast<int>(y_.size()) != t_.face_count()) throw InputError("face parameter count does not match faces");
    for (const auto& f : y_)
        for (const auto& v : f)
            if (v == cplx(0.0) || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw DomainError("zero_parameter", "face parameter is zero or not finite");
    double d = 1.0;
    for (int j = 0; j < t_.face_count(); ++j) d *= q_.N();
    if (d > static_cast<double>(max_dim))
        throw DomainError("dimension_cap", "representation dimension " + std::to_string(static_cast<long long>(d)) +
                                               " exceeds cap " + std::to_string(max_dim));
    dim_ = static_cast<std::size_t>(d);
}

LocalRep LocalRep::from_face_data(const Triangulation& t, const QParams& q, const std::vector<FaceData>& data,
                                  std::size_t max_dim) {
    if (static_cast<int>(data.size()) != t.face_count()) throw InputError("face data count does not match faces");
    const int N = q.N();
    std::vector<std::array<cplx, 3>> ys;
    for (std::size_t j = 0; j < data.size(); ++j) {
        const auto& d = data[j];
        const cplx prod = d.w[0] * d.w[1] * d.w[2];
        if (prod == cplx(0.0)) throw DomainError("zero_parameter", "face side weight is zero");
        if (std::abs(std::pow(d.h, N) - prod) > 1e-9 * std::abs(prod))
            throw DomainError("load_mismatch", "face " + std::to_string(j + 1) + ": h^N != w1 w2 w3");
        const cplx y1 = principal_root(d.w[0], N), y2 = principal_root(d.w[1], N);
        ys.push_back({y1, y2, d.h / (y1 * y2)});
    }
    return LocalRep(t, q, std::move(ys), max_dim);
}

FaceData LocalRep::face_data(int face) const {
    const auto& y = y_[face];
    const int N = q_.N();
    return FaceData{{std::pow(y[0], N), std::pow(y[1], N), std::pow(y[2], N)}, y[0] * y[1] * y[2]};
}

std::vector<FaceData> LocalRep::face_data() const {
    std::vector<FaceData> out;
    for (int j = 0; j < t_.face_count(); ++j) out.push_back(face_data(j));
    return out;
}

GenMatrix LocalRep::side_local(int face, int slot) const { return triangle_rep(q_, y_[face]).M[slot]; }

GenMatrix LocalRep::side(int face, int slot) const {
    return GenMatrix::on_factor(side_local(face, slot), face, t_.face_count());
}

GenMatrix LocalRep::generator(int edge) const {
    const auto& sides = t_.sides_of_edge(edge);
    GenMatrix g = side(sides[0].face, sides[0].slot);
    if (sides.size() == 2) {
        g = g * side(sides[1].face, sides[1].slot);
        if (sides[0].face == sides[1].face) {
            // Weyl order inside one triangle algebra: q^{-sigma} A B.
            const int sig = (sides[1].slot == (sides[0].slot + 1) % 3) ? 1 : -1;
            g = g.scaled(q_.pow(-sig));
        }
    }
    return g;
}

std::vector<GenMatrix> LocalRep::generators() const {
    std::vector<GenMatrix> out;
    for (int i = 0; i < t_.edge_count(); ++i) out.push_back(generator(i));
    return out;
}

GenMatrix LocalRep::central() const {
    const auto sigma = sigma_matrix(t_);
    long long e = 0;
    GenMatrix acc = GenMatrix::identity(dim_);
    for (int i = 0; i < t_.edge_count(); ++i) {
        for (int j = i + 1; j < t_.edge_count(); ++j) e -= sigma[i][j];
        acc = acc * generator(i);
    }
    return acc.scaled(q_.pow(e));
}

Mat LocalRep::evaluate(const SkewPolynomial& p) const {
    if (p.nvars() != t_.edge_count()) throw InputError("polynomial variable count does not match the triangulation");
    const auto gens = generators();
    Mat out = Mat::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (const auto& [exps, coeff] : p.terms()) {
        GenMatrix m = GenMatrix::identity(dim_);
        for (int i = 0; i < t_.edge_count(); ++i)
            if (exps[i] != 0) m = m * gens[i].power(exps[i]);
        out += coeff.value(q_) * m.dense();
    }
    return out;
}

// ---------------------------------------------------------------- classification

namespace {

double scalar_spread(const GenMatrix& g, cplx& c) {
    double scale = 0.0, spread = 0.0;
    for (const auto& v : g.value()) scale = std::max(scale, std::abs(v));
    c = g.value()[0];
    for (std::size_t j = 0; j < g.dim(); ++j) {
        if (g.target()[j] != j) return std::numeric_limits<double>::infinity();
        spread = std::max(spread, std::abs(g.value()[j] - c));
    }
    return scale == 0.0 ? 0.0 : spread / scale;
}

}  // namespace

Classification classify(const LocalRep& r, double rel_tol) {
    Classification out;
    const int N = r.N();
    cplx prod = 1.0;
    for (int i = 0; i < r.triangulation().edge_count(); ++i) {
        cplx c;
        const double spread = scalar_spread(r.generator(i).power(N), c);
        out.scalar_residual = std::max(out.scalar_residual, spread);
        if (!(spread <= rel_tol))
            throw DomainError("not_scalar", "rho(X_" + std::to_string(i + 1) + ")^N is not scalar");
        out.x.push_back(c);
        prod *= c;
    }
    const double spread = scalar_spread(r.central(), out.h);
    out.scalar_residual = std::max(out.scalar_residual, spread);
    if (!(spread <= rel_tol)) throw DomainError("not_scalar", "rho(H) is not scalar");
    out.load_residual = std::abs(std::pow(out.h, N) - prod) / std::abs(prod);
    if (!(out.load_residual <= rel_tol)) throw DomainError("load_mismatch", "h^N != product of edge weights");
    return out;
}

LocalRep rep_from_weights(const Triangulation& t, const QParams& q, const std::vector<cplx>& x, cplx h,
                          std::size_t max_dim) {
    const int N = q.N();
    if (static_cast<int>(x.size()) != t.edge_count()) throw InputError("weight count does not match edges");
    cplx prod = 1.0;
    for (const auto& v : x) {
        if (v == cplx(0.0)) throw DomainError("zero_weight", "edge weight is zero");
        prod *= v;
    }
    if (std::abs(std::pow(h, N) - prod) > 1e-9 * std::abs(prod))
        throw DomainError("load_mismatch", "h^N != product of edge weights");
    std::vector<FaceData> data(t.face_count(), FaceData{{1.0, 1.0, 1.0}, 1.0});
    for (int i = 0; i < t.edge_count(); ++i) {
        const Side s = t.sides_of_edge(i)[0];
        data[s.face].w[s.slot] = x[i];
    }
    cplx roots = 1.0;
    for (auto& d : data) {
        d.h = principal_root(d.w[0] * d.w[1] * d.w[2], N);
        roots *= d.h;
    }
    data[0].h *= h / roots;
    return LocalRep::from_face_data(t, q, data, max_dim);
}

LocalRep standard_rep(const Triangulation& t, const QParams& q, int k, std::size_t max_dim) {
    std::vector<FaceData> data(t.face_count(), FaceData{{1.0, 1.0, 1.0}, 1.0});
    data[0].h = q.pow(2LL * k);
    return LocalRep::from_face_data(t, q, data, max_dim);
}

LocalRep scale_by_roots(const LocalRep& r, const std::vector<cplx>& roots) {
    const auto& t = r.triangulation();
    if (static_cast<int>(roots.size()) != t.edge_count()) throw InputError("root count does not match edges");
    auto ys = r.face_params();
    for (int i = 0; i < t.edge_count(); ++i) {
        if (roots[i] == cplx(0.0)) throw DomainError("zero_root", "scaling root is zero");
        const Side s = t.sides_of_edge(i)[0];
        ys[s.face][s.slot] *= roots[i];
    }
    return LocalRep(t, r.q(), std::move(ys), r.dim());
}

cplx random_weight(std::mt19937_64& rng, double lo, double hi) {
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double mod = std::exp(std::log(lo) + unit() * (std::log(hi) - std::log(lo)));
    return std::polar(mod, 2.0 * std::numbers::pi * unit());
}

LocalRep random_rep(const Triangulation& t, const QParams& q, std::mt19937_64& rng, std::size_t max_dim) {
    std::vector<FaceData> data;
    for (int j = 0; j < t.face_count(); ++j) {
        FaceData d;
        for (auto& w : d.w) w = random_weight(rng);
        const auto k = static_cast<long long>(rng() % static_cast<std::uint64_t>(q.N()));
        d.h = principal_root(d.w[0] * d.w[1] * d.w[2], q.N()) * q.pow(2 * k);
        data.push_back(d);
    }
    return LocalRep::from_face_data(t, q, data, max_dim);
}

double relation_residual(const LocalRep& r) {
    const auto& t = r.triangulation();
    const auto sigma = sigma_matrix(t);
    const auto gens = r.generators();
    double worst = 0.0;
    for (int i = 0; i < t.edge_count(); ++i)
        for (int j = i + 1; j < t.edge_count(); ++j) {
            const GenMatrix lhs = gens[i] * gens[j];
            const GenMatrix rhs = (gens[j] * gens[i]).scaled(r.q().pow(2LL * sigma[i][j]));
            worst = std::max(worst, GenMatrix::rel_diff(lhs, rhs));
        }
    return worst;
}

}  // namespace qteich
