#include "cfal/svp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfal/error.hpp"

namespace cfal {

namespace {

constexpr double kTieTolerance = 1e-10;

Eigen::MatrixXd upper_cholesky(const Eigen::MatrixXd& m)
{
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        const auto n = m.rows();
        llt.compute(m + 1e-12 * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() != Eigen::Success)
            fail(ErrorKind::CholeskyFailure, "Gram matrix is not numerically positive definite");
    }
    return llt.matrixU();
}

bool lex_less(const IntVector& a, const IntVector& b)
{
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

struct Candidate {
    IntVector coords;
    double norm_sq;
};

/* Minimum norm, ties broken lexicographically after sign normalization. */
SVPResult pick(const SearchBasis& basis, const std::vector<Candidate>& candidates, std::uint64_t nodes)
{
    if (candidates.empty())
        fail(ErrorKind::RankDeficient, "no nonzero lattice vector found");
    std::vector<Candidate> exact;
    exact.reserve(candidates.size());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        const double norm = (basis.basis * c.coords.cast<double>()).squaredNorm();
        exact.push_back({normalize_sign(c.coords), norm});
        best = std::min(best, norm);
    }
    const Candidate* chosen = nullptr;
    for (const auto& c : exact) {
        if (c.norm_sq > best * (1.0 + kTieTolerance))
            continue;
        if (chosen == nullptr || lex_less(c.coords, chosen->coords))
            chosen = &c;
    }
    return {chosen->coords, chosen->norm_sq, nodes};
}

}  // namespace

SearchBasis build_search_basis(const NumberField& field, const BlockFadingChannel& channel)
{
    SearchBasis sb;
    const int n = channel.blocks();
    const int L = channel.users();
    const int deg = field.degree();
    sb.blocks = n;
    sb.users = L;
    sb.field_degree = deg;

    const Eigen::MatrixXd phi = field.block_embedding(n);
    // I_L (x) Phi: row l*n + j, column l*deg + i
    Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(L * n, L * deg);
    for (int l = 0; l < L; ++l)
        kron.block(l * n, l * deg, n, deg) = phi;

    sb.row_shuffle.resize(static_cast<std::size_t>(n * L));
    sb.phi_mix.resize(n * L, L * deg);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < L; ++l) {
            const int row = j * L + l;
            sb.row_shuffle[static_cast<std::size_t>(row)] = l * n + j;
            sb.phi_mix.row(row) = kron.row(l * n + j);
        }
    }

    sb.m_mix = Eigen::MatrixXd::Zero(n * L, n * L);
    for (int j = 0; j < n; ++j) {
        sb.cholesky.push_back(upper_cholesky(gram_matrix(channel.block(j), channel.snr())));
        sb.m_mix.block(j * L, j * L, L, L) = sb.cholesky.back();
    }
    sb.basis = sb.m_mix * sb.phi_mix;
    return sb;
}

SearchBasis search_basis_from_matrix(const Eigen::MatrixXd& basis)
{
    SearchBasis sb;
    sb.basis = basis;
    sb.phi_mix = basis;
    sb.m_mix = Eigen::MatrixXd::Identity(basis.rows(), basis.rows());
    sb.blocks = 1;
    sb.users = static_cast<int>(basis.cols());
    sb.field_degree = 1;
    sb.row_shuffle.resize(static_cast<std::size_t>(basis.rows()));
    for (int r = 0; r < basis.rows(); ++r)
        sb.row_shuffle[static_cast<std::size_t>(r)] = r;
    return sb;
}

IntVector normalize_sign(const IntVector& coords)
{
    for (Eigen::Index i = 0; i < coords.size(); ++i) {
        if (coords(i) != 0)
            return coords(i) < 0 ? IntVector(-coords) : coords;
    }
    return coords;
}

SVPResult shortest_vector(const SearchBasis& basis)
{
    const LatticeEnumerator enumerator(basis.basis);
    const Eigen::MatrixXd& reduced = enumerator.reduced().basis;
    double best = reduced.colwise().squaredNorm().minCoeff();
    const double slack = 1.0 + 1e-9;

    std::vector<Candidate> candidates;
    const auto nodes = enumerator.enumerate_ball(best * slack, [&](const IntVector& coords, double dist) {
        if (dist < best) {
            best = dist;
            std::erase_if(candidates, [&](const Candidate& c) { return c.norm_sq > best * slack; });
        }
        if (dist <= best * slack)
            candidates.push_back({coords, dist});
        return best * slack;
    });
    return pick(basis, candidates, nodes);
}

SVPResult brute_force_shortest(const SearchBasis& basis, int bound)
{
    const int dim = basis.dimension();
    if (bound < 1)
        fail(ErrorKind::TooLarge, "box bound must be at least 1");
    const double points = std::pow(2.0 * bound + 1.0, dim);
    if (points > 1e8)
        fail(ErrorKind::TooLarge, "box has more than 1e8 points");

    std::vector<Candidate> candidates;
    double best = std::numeric_limits<double>::infinity();
    IntVector x = IntVector::Constant(dim, -bound);
    std::uint64_t visited = 0;
    while (true) {
        ++visited;
        if (!x.isZero()) {
            const double norm = (basis.basis * x.cast<double>()).squaredNorm();
            if (norm <= best * (1.0 + 1e-9)) {
                if (norm < best) {
                    best = norm;
                    std::erase_if(candidates,
                                  [&](const Candidate& c) { return c.norm_sq > best * (1.0 + 1e-9); });
                }
                candidates.push_back({x, norm});
            }
        }
        int i = 0;
        while (i < dim && x(i) == bound) {
            x(i) = -bound;
            ++i;
        }
        if (i == dim)
            break;
        ++x(i);
    }
    return pick(basis, candidates, visited);
}

double minkowski_bound(const SearchBasis& basis)
{
    const int k = basis.dimension();
    return std::sqrt(static_cast<double>(k)) * std::pow(lattice_volume(basis.basis), 1.0 / k);
}

std::vector<RingElement> coords_to_coefficients(const IntVector& coords, int field_degree)
{
    const auto L = coords.size() / field_degree;
    std::vector<RingElement> a(static_cast<std::size_t>(L));
    for (Eigen::Index l = 0; l < L; ++l) {
        auto& e = a[static_cast<std::size_t>(l)];
        e.u = coords(l * field_degree);
        e.v = field_degree == 2 ? coords(l * field_degree + 1) : 0;
    }
    return a;
}

IntVector coefficients_to_coords(const std::vector<RingElement>& a, int field_degree)
{
    IntVector coords(static_cast<Eigen::Index>(a.size()) * field_degree);
    for (std::size_t l = 0; l < a.size(); ++l) {
        const auto base = static_cast<Eigen::Index>(l) * field_degree;
        coords(base) = a[l].u;
        if (field_degree == 2)
            coords(base + 1) = a[l].v;
    }
    return coords;
}

EquationCandidate best_equation(const NumberField& field, const BlockFadingChannel& channel)
{
    const auto sb = build_search_basis(field, channel);
    const auto svp = shortest_vector(sb);
    return am_rate(channel, coords_to_coefficients(svp.coords, field.degree()), field);
}

std::vector<EquationCandidate> best_equations(const NumberField& field, const BlockFadingChannel& channel,
                                              int count, double ratio)
{
    const auto sb = build_search_basis(field, channel);
    const auto first = shortest_vector(sb);
    const LatticeEnumerator enumerator(sb.basis);

    std::vector<Candidate> pool;
    enumerator.enumerate_ball(first.norm_sq * ratio * ratio * (1.0 + 1e-9),
                              [&](const IntVector& coords, double dist) {
                                  const IntVector c = normalize_sign(coords);
                                  if (c == coords)
                                      pool.push_back({c, dist});
                                  return first.norm_sq * ratio * ratio * (1.0 + 1e-9);
                              });
    std::sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
        if (a.norm_sq != b.norm_sq)
            return a.norm_sq < b.norm_sq;
        return lex_less(a.coords, b.coords);
    });

    std::vector<EquationCandidate> out;
    Eigen::MatrixXd chosen(sb.dimension(), 0);
    for (const auto& c : pool) {
        if (static_cast<int>(out.size()) >= count)
            break;
        Eigen::MatrixXd trial(sb.dimension(), chosen.cols() + 1);
        trial << chosen, c.coords.cast<double>();
        if (Eigen::FullPivLU<Eigen::MatrixXd>(trial).rank() == trial.cols()) {
            chosen = trial;
            out.push_back(am_rate(channel, coords_to_coefficients(c.coords, field.degree()), field));
        }
    }
    return out;
}

}  // namespace cfal
