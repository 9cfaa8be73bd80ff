#pragma once

#include <optional>

#include "sumidx/spaces.hpp"

namespace sumidx {

/// Upper bound for the multilinear index from a coincidence situation (t,s).
/// Four branches keyed by (p <= t vs t <= p) x (s <= q vs q <= s); ties pick
/// the smaller bound (all branch formulas agree at equality).
BoundResult mult_upper_from_coincidence(int m, double p, double q, const CoincidencePair& pair);

/// Polynomial analogue; branch (a) is 1/p - 1/t + m/s - m/q.
BoundResult pol_upper_from_coincidence(int m, double p, double q, const CoincidencePair& pair);

/// Optimal t for the cotype-driven coincidence with codomain cotype r and
/// weak exponent s in [1,2): t = s r / (s - m s r + m r). Requires
/// m < s/(r(s-1)), read as no constraint when s = 1.
double cotype_coincidence_t(int m, double r, double s);

/// Largest admissible s for the scalar-codomain coincidence at exponent t:
/// 2mt/(mt+2m-t) on t in [2m/(m+1), 2], mt/(mt+1-t) for t > 2.
double scalar_coincidence_s(int m, double t);

/// Upper bound for codomain of finite cotype r, composing the cotype
/// coincidence with the branch formulas. `s` defaults to 1 (most permissive
/// hypothesis; gives t = r). Branch threshold on q is mrt/(r-t+mrt).
BoundResult mult_upper_from_cotype(int m, double r, double p, double q,
                                   std::optional<double> s = std::nullopt);

/// Exact multilinear index for domains l_{q*} and scalar codomain.
/// Region (a): m/p + m/2 - 1/2 - m/q; region (b): m - 1 + 1/p - m/q.
BoundResult exact_index_scalar(int m, double p, double q);

/// Exact multilinear index for domains l_{q*} and codomain c0: m/p for
/// q in [1,2].
BoundResult exact_index_c0(int m, double p, double q);

/// Polynomial lower bound with codomain of finite cotype r; four regions in
/// (p,q). The strip 1 <= q <= 2, 2r/(mr+2) < p < r routes to
/// pol_cotype_lower. p >= r has no known lower bound.
BoundResult pol_lower_regions(int m, double p, double q, double r);

/// Polynomial lower bound (r-p)/(pr) valid for all q in [1,inf) on
/// 2r/(mr+2) < p < r, r finite.
BoundResult pol_cotype_lower(int m, double p, double q, double r);

/// Polynomial lower bound (1-p)/p for even degree, real scalar codomain,
/// q in [1,inf), 2/(m+2) < p < 1.
BoundResult even_real_lower(int m, double p, double q, Field field = Field::real);

/// Exact polynomial index at q = 1. With scalar_real_even the codomain is the
/// real scalars, m must be even and the value is 1/p - 1 on 2/(m+2) < p < 1;
/// otherwise the codomain has finite cotype r and the value is 1/p - 1/r on
/// 2r/(mr+2) < p < r.
BoundResult pol_exact_q1(int m, double p, double r, bool scalar_real_even);

struct AggregateBounds {
    std::optional<BoundResult> lower;
    std::optional<BoundResult> upper;
    std::optional<BoundResult> exact;
};

/// Runs every formula applicable to the query and keeps the greatest lower
/// bound, least upper bound and the exact value when a region matches.
/// Throws internal_error if the collected bounds are inconsistent
/// (lower > exact or exact > upper beyond fp tolerance).
AggregateBounds aggregate_bounds(const IndexQuery& query);

} // namespace sumidx
