#ifndef IPM_ORACLE_HPP
#define IPM_ORACLE_HPP

#include <algorithm>
#include <bit>
#include <optional>
#include <string>

#include "ipm/model.hpp"

namespace ipm {

/// Basic feasible solution found by exhaustive enumeration.
struct Vertex {
    DenseVector<Rational> x;
    std::vector<std::size_t> basis;
    Rational objective;
};

struct VertexSet {
    std::vector<Vertex> vertices;
    std::optional<Rational> optimum;
    std::vector<std::size_t> optimal_indices;  // into vertices

    bool feasible() const { return !vertices.empty(); }
};

inline constexpr std::size_t kOracleDefaultCap = 10;

/// Tries every column subset of size at most m. A subset whose columns admit
/// a unique nonnegative solution of A_S x_S = b contributes a vertex. The
/// feasible region of a standard-form problem is pointed, so it is nonempty
/// exactly when a vertex exists; no rank assumption on A is needed.
inline VertexSet enumerate_vertices(const StandardLP<Rational>& p,
                                    std::size_t cap = kOracleDefaultCap) {
    const std::size_t m = p.num_rows(), n = p.num_vars();
    if (n > cap)
        throw OracleTooLarge("enumerate_vertices: " + std::to_string(n) +
                             " variables exceeds cap " + std::to_string(cap));

    VertexSet vs;
    std::vector<DenseVector<Rational>> seen;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        std::size_t k = static_cast<std::size_t>(std::popcount(mask));
        if (k > m) continue;
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (1ul << j)) cols.push_back(j);

        DenseVector<Rational> xs;
        try {
            xs = solve_unique(p.A.select_cols(cols), p.b);
        } catch (const SingularSystem&) {
            continue;
        }
        if (!xs.all_nonnegative()) continue;

        DenseVector<Rational> x(n);
        for (std::size_t t = 0; t < cols.size(); ++t) x[cols[t]] = xs[t];
        if (std::find(seen.begin(), seen.end(), x) != seen.end()) continue;
        seen.push_back(x);
        Rational obj = dot(p.c, x);
        vs.vertices.push_back({std::move(x), std::move(cols), std::move(obj)});
    }

    std::sort(vs.vertices.begin(), vs.vertices.end(),
              [](const Vertex& a, const Vertex& b) { return a.basis < b.basis; });
    for (std::size_t i = 0; i < vs.vertices.size(); ++i) {
        const Rational& obj = vs.vertices[i].objective;
        if (!vs.optimum || obj < *vs.optimum) {
            vs.optimum = obj;
            vs.optimal_indices.clear();
        }
        if (obj == *vs.optimum) vs.optimal_indices.push_back(i);
    }
    return vs;
}

/// Extreme rays scaled to c^T r = -1; nonempty exactly when a feasible
/// problem is unbounded below.
inline VertexSet enumerate_scaled_rays(const StandardLP<Rational>& p,
                                       std::size_t cap = kOracleDefaultCap) {
    const std::size_t m = p.num_rows(), n = p.num_vars();
    StandardLP<Rational> ray;
    ray.A = DenseMatrix<Rational>(m + 1, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) ray.A(i, j) = p.A(i, j);
    for (std::size_t j = 0; j < n; ++j) ray.A(m, j) = p.c[j];
    ray.b = DenseVector<Rational>(m + 1);
    ray.b[m] = Rational(-1);
    ray.c = DenseVector<Rational>(n);
    ray.columns = p.columns;
    return enumerate_vertices(ray, cap);
}

enum class OracleStatus { infeasible, unbounded, optimal };

struct OracleVerdict {
    OracleStatus status;
    std::optional<Rational> objective;
    VertexSet vertices;
    std::optional<DenseVector<Rational>> ray;  // A r = 0, r >= 0, c^T r = -1
};

inline OracleVerdict oracle_solve(const StandardLP<Rational>& p,
                                  std::size_t cap = kOracleDefaultCap) {
    OracleVerdict v;
    v.vertices = enumerate_vertices(p, cap);
    if (!v.vertices.feasible()) {
        v.status = OracleStatus::infeasible;
        return v;
    }
    VertexSet rays = enumerate_scaled_rays(p, cap);
    if (rays.feasible()) {
        v.status = OracleStatus::unbounded;
        v.ray = rays.vertices.front().x;
        return v;
    }
    v.status = OracleStatus::optimal;
    v.objective = v.vertices.optimum;
    return v;
}

/// Dual basic feasible solutions: for each invertible m-column basis,
/// y solves A_S^T y = c_S; kept when c - A^T y >= 0.
struct DualVertex {
    DenseVector<Rational> y;
    DenseVector<Rational> s;
    std::vector<std::size_t> basis;
    Rational objective;  // b^T y
};

inline std::vector<DualVertex> enumerate_dual_vertices(const StandardLP<Rational>& p,
                                                       std::size_t cap = kOracleDefaultCap) {
    const std::size_t m = p.num_rows(), n = p.num_vars();
    if (n > cap)
        throw OracleTooLarge("enumerate_dual_vertices: " + std::to_string(n) +
                             " variables exceeds cap " + std::to_string(cap));
    std::vector<DualVertex> out;
    std::vector<DenseVector<Rational>> seen;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != m) continue;
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (1ul << j)) cols.push_back(j);
        DenseVector<Rational> y;
        try {
            y = solve_unique(p.A.select_cols(cols).transposed(), select(p.c, cols));
        } catch (const SingularSystem&) {
            continue;
        }
        DenseVector<Rational> s = p.c - p.A.apply_transpose(y);
        if (!s.all_nonnegative()) continue;
        if (std::find(seen.begin(), seen.end(), y) != seen.end()) continue;
        seen.push_back(y);
        Rational obj = dot(p.b, y);
        out.push_back({std::move(y), std::move(s), std::move(cols), std::move(obj)});
    }
    std::sort(out.begin(), out.end(),
              [](const DualVertex& a, const DualVertex& b) { return a.basis < b.basis; });
    return out;
}

/// Report of the Cramer-style magnitude bounds on the solution of a square
/// integer system G z = g with entries bounded by U:
///   |z_i| <= (k U)^k, and z_i != 0 implies |z_i| >= 1/(k U)^k;
/// with a separate right-hand-side bound U', the upper bound tightens to
/// k^k U^(k-1) U'.
struct BoundReport {
    DenseVector<Rational> z;
    Rational upper_bound;
    Rational lower_bound;
    Rational rhs_upper_bound;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

inline BoundReport check_solution_bounds(const DenseMatrix<Rational>& G,
                                         const DenseVector<Rational>& g,
                                         const Rational& U, const Rational& U_rhs) {
    if (G.rows() != G.cols()) throw std::invalid_argument("check_solution_bounds: G not square");
    const std::size_t k = G.rows();
    BoundReport rep;
    rep.z = solve_unique(G, g);

    Rational kU = Rational(static_cast<long>(k)) * U;
    rep.upper_bound = Rational::pow(kU, k);
    rep.lower_bound = Rational(1) / rep.upper_bound;
    rep.rhs_upper_bound =
        Rational::pow(Rational(static_cast<long>(k)), k) * Rational::pow(U, k - 1) * U_rhs;

    for (std::size_t i = 0; i < k; ++i) {
        Rational a = abs(rep.z[i]);
        if (a > rep.upper_bound)
            rep.violations.push_back("z_" + std::to_string(i) + " above (kU)^k");
        if (!a.is_zero() && a < rep.lower_bound)
            rep.violations.push_back("z_" + std::to_string(i) + " nonzero but below 1/(kU)^k");
        if (a > rep.rhs_upper_bound)
            rep.violations.push_back("z_" + std::to_string(i) + " above k^k U^(k-1) U'");
    }
    return rep;
}

/// Primal-dual pair with the center-of-gravity property: wherever some
/// optimal vertex has x_i > 0, the witness keeps x_i positive (and likewise
/// for the dual slack).
struct ComplementarityWitness {
    DenseVector<Rational> x;
    DenseVector<Rational> y;
    DenseVector<Rational> s;
};

namespace detail {

/// Greedy cover: pick solutions until every index that is positive in some
/// candidate is positive in a chosen one, then average the chosen set. The
/// chosen set has at most one member per covered index.
template <class GetVec>
DenseVector<Rational> average_cover(std::size_t dim, std::size_t count, GetVec get) {
    std::vector<bool> covered(dim, false);
    std::vector<std::size_t> chosen;
    for (std::size_t v = 0; v < count; ++v) {
        bool adds = false;
        const DenseVector<Rational>& x = get(v);
        for (std::size_t i = 0; i < dim; ++i)
            if (!covered[i] && x[i].is_positive()) adds = true;
        if (!adds) continue;
        chosen.push_back(v);
        for (std::size_t i = 0; i < dim; ++i)
            if (x[i].is_positive()) covered[i] = true;
    }
    if (chosen.empty() && count > 0) chosen.push_back(0);
    DenseVector<Rational> avg(dim);
    for (std::size_t v : chosen) avg = avg + get(v);
    Rational inv = Rational(1) / Rational(static_cast<long>(chosen.size()));
    return inv * avg;
}

} // namespace detail

inline ComplementarityWitness strict_complementarity_witness(
    const StandardLP<Rational>& p, const VertexSet& vs,
    std::size_t cap = kOracleDefaultCap) {
    if (!vs.optimum)
        throw std::invalid_argument("strict_complementarity_witness: no optimal vertices");
    const std::size_t n = p.num_vars();

    ComplementarityWitness w;
    w.x = detail::average_cover(n, vs.optimal_indices.size(), [&](std::size_t t) -> const DenseVector<Rational>& {
        return vs.vertices[vs.optimal_indices[t]].x;
    });

    std::vector<DualVertex> duals = enumerate_dual_vertices(p, cap);
    std::vector<std::size_t> opt_duals;
    for (std::size_t t = 0; t < duals.size(); ++t)
        if (duals[t].objective == *vs.optimum) opt_duals.push_back(t);
    if (opt_duals.empty())
        throw RoundingFailed("strict_complementarity_witness: no optimal dual vertex");
    w.s = detail::average_cover(n, opt_duals.size(), [&](std::size_t t) -> const DenseVector<Rational>& {
        return duals[opt_duals[t]].s;
    });
    DenseVector<Rational> y_sum(p.num_rows());
    // Recover y consistently with the averaged s: average the same chosen
    // duals. average_cover's choice is deterministic, so replay it on s.
    {
        std::vector<bool> covered(n, false);
        std::vector<std::size_t> chosen;
        for (std::size_t t : opt_duals) {
            bool adds = false;
            for (std::size_t i = 0; i < n; ++i)
                if (!covered[i] && duals[t].s[i].is_positive()) adds = true;
            if (!adds) continue;
            chosen.push_back(t);
            for (std::size_t i = 0; i < n; ++i)
                if (duals[t].s[i].is_positive()) covered[i] = true;
        }
        if (chosen.empty()) chosen.push_back(opt_duals.front());
        for (std::size_t t : chosen) y_sum = y_sum + duals[t].y;
        w.y = (Rational(1) / Rational(static_cast<long>(chosen.size()))) * y_sum;
    }
    return w;
}

} // namespace ipm

#endif
