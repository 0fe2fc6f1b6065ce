#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgraph/numerics.hpp"

namespace qgraph {

/// Matching conditions at a vertex of degree N, A = U - I, B = i(U + I).
struct VertexCoupling {
    int degree = 0;
    ComplexMatrix u;
};

/// The (A|B) form of the matching conditions A Psi(0+) + B Psi'(0+) = 0.
struct BoundaryPair {
    ComplexMatrix a;
    ComplexMatrix b;
};

/// On-shell scattering matrix at momentum k.
struct ScatteringMatrix {
    double k = 0.0;
    ComplexMatrix s;
};

enum class EnergyEnd { low, high };

/// Coupling whose unitary is the cyclic shift: row j has its single 1 in
/// column j+1 (mod N). It rotates incoming waves maximally at k = 1.
inline VertexCoupling cyclic_coupling(int n)
{
    if (n < 3)
        throw std::invalid_argument("cyclic coupling is non-trivial only for degree >= 3");
    VertexCoupling c{n, ComplexMatrix::Zero(n, n)};
    for (int j = 0; j < n; ++j)
        c.u(j, (j + 1) % n) = 1.0;
    return c;
}

inline BoundaryPair boundary_pair(const VertexCoupling& c)
{
    const auto id = ComplexMatrix::Identity(c.degree, c.degree);
    return {c.u - id, Complex{0.0, 1.0} * (c.u + id)};
}

/// ||M* M - I||_max
inline double unitarity_residual(const ComplexMatrix& m)
{
    return max_abs(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols()));
}

/// Rank of the N x 2N block (A|B), by full-pivot LU.
inline Eigen::Index boundary_rank(const BoundaryPair& p)
{
    ComplexMatrix block(p.a.rows(), p.a.cols() + p.b.cols());
    block << p.a, p.b;
    Eigen::FullPivLU<ComplexMatrix> lu(block);
    lu.setThreshold(1e-12);
    return lu.rank();
}

/// Index reversal R psi_j = psi_{N+1-j}.
inline ComplexMatrix reversion(int n)
{
    ComplexMatrix r = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        r(j, n - 1 - j) = 1.0;
    return r;
}

/// S(k) = (k+1 + (k-1)U)^{-1} (k-1 + (k+1)U), solved as a linear system.
/// At k = 1 it returns U itself.
inline ScatteringMatrix s_matrix(const VertexCoupling& c, double k)
{
    if (!(k > 0.0))
        throw std::invalid_argument("s_matrix: momentum must be positive");
    if (k == 1.0)
        return {k, c.u};
    const auto id = ComplexMatrix::Identity(c.degree, c.degree);
    const ComplexMatrix lhs = (k + 1.0) * id + (k - 1.0) * c.u;
    const ComplexMatrix rhs = (k - 1.0) * id + (k + 1.0) * c.u;
    return {k, lhs.partialPivLu().solve(rhs)};
}

/// Entrywise closed form of S(k) for the cyclic coupling, with
/// eta = (1-k)/(1+k). Regular at k = 1 (eta = 0, 0^0 = 1).
inline ScatteringMatrix s_matrix_closed_form(int n, double k)
{
    if (n < 3)
        throw std::invalid_argument("s_matrix_closed_form: degree must be >= 3");
    if (!(k > 0.0))
        throw std::invalid_argument("s_matrix_closed_form: momentum must be positive");
    const double eta = (1.0 - k) / (1.0 + k);
    const double denom = 1.0 - std::pow(eta, n);
    const double diagonal = -eta * (1.0 - std::pow(eta, n - 2)) / denom;
    const double prefactor = (1.0 - eta * eta) / denom;

    ScatteringMatrix out{k, ComplexMatrix::Zero(n, n)};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                out.s(i, j) = diagonal;
            } else {
                const int power = ((j - i - 1) % n + n) % n;
                out.s(i, j) = prefactor * std::pow(eta, power);
            }
        }
    }
    return out;
}

/// Spectral projection of the cyclic shift onto its eigenvalue e^{2 pi i m / N}.
inline ComplexMatrix cyclic_projection(int n, int m)
{
    ComplexMatrix p(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            p(i, j) = std::polar(1.0 / n, 2.0 * std::numbers::pi * m * (i - j) / n);
    return p;
}

/// Limit of S(k) as k -> 0 (low) or k -> infinity (high).
///
/// Substituting eta = +-1 into the entrywise form is 0/0 whenever eta^N = 1,
/// so the limits come from the spectrum of U instead:
/// low  = -I + 2 P(+1), high = I - 2 P(-1), where P(-1) = 0 for odd N.
inline ComplexMatrix energy_limit(int n, EnergyEnd end)
{
    if (n < 3)
        throw std::invalid_argument("energy_limit: degree must be >= 3");
    const auto id = ComplexMatrix::Identity(n, n);
    if (end == EnergyEnd::low)
        return -id + 2.0 * cyclic_projection(n, 0);
    if (n % 2 != 0)
        return id;
    return id - 2.0 * cyclic_projection(n, n / 2);
}

} // namespace qgraph
