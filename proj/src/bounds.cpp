#include "sumidx/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sumidx {

double conjugate_exponent(double p) {
    if (std::isinf(p))
        return 1.0;
    if (!(p >= 1.0))
        throw parameter_error("conjugate exponent requires p >= 1");
    if (p == 1.0)
        return kInfinity;
    return p / (p - 1.0);
}

SpaceDescriptor SpaceDescriptor::sequence(double s, double cotype_value) {
    SpaceDescriptor d{SpaceKind::sequence_space, s, cotype_value};
    d.validate();
    return d;
}

SpaceDescriptor SpaceDescriptor::scalar() {
    return SpaceDescriptor{SpaceKind::scalar_field, kInfinity, 2.0};
}

SpaceDescriptor SpaceDescriptor::c0_space() {
    return SpaceDescriptor{SpaceKind::c0, kInfinity, kInfinity};
}

SpaceDescriptor SpaceDescriptor::abstract_space(double cotype_value) {
    SpaceDescriptor d{SpaceKind::abstract, kInfinity, cotype_value};
    d.validate();
    return d;
}

void SpaceDescriptor::validate() const {
    if (!(cotype >= 2.0))
        throw parameter_error("cotype must be >= 2 (or infinity)");
    if (kind == SpaceKind::c0 && cotype < kInfinity)
        throw parameter_error("c0 has no finite cotype");
    if (kind == SpaceKind::scalar_field && cotype != 2.0)
        throw parameter_error("the scalar field has cotype 2");
    if (kind == SpaceKind::sequence_space && !(exponent >= 1.0))
        throw parameter_error("sequence-space exponent must lie in [1, inf]");
}

void IndexQuery::validate() const {
    if (m < 1)
        throw parameter_error("degree m must be >= 1");
    if (!(p > 0.0) || std::isinf(p))
        throw parameter_error("summing exponent p must be positive and finite");
    if (!(q >= 1.0))
        throw parameter_error("weak exponent q must be >= 1");
    if (std::isinf(q))
        throw region_error("q = infinity is not admitted; only q < infinity is covered");
    const std::size_t expected = variant == Variant::polynomial ? 1 : static_cast<std::size_t>(m);
    if (domains.size() != expected)
        throw parameter_error("query needs one domain descriptor per slot (one total for "
                              "polynomials)");
    for (const auto& d : domains)
        d.validate();
    codomain.validate();
}

namespace {

void require_degree(int m) {
    if (m < 1)
        throw parameter_error("degree m must be >= 1");
}

void require_positive(double value, const char* name) {
    if (!(value > 0.0))
        throw parameter_error(std::string(name) + " must be positive");
}

struct BranchValue {
    double value;
    const char* region;
};

BoundResult pick_upper(const std::vector<BranchValue>& candidates, const char* citation) {
    const auto best = std::min_element(candidates.begin(), candidates.end(),
                                       [](const BranchValue& a, const BranchValue& b) {
                                           return a.value < b.value;
                                       });
    return BoundResult{best->value, BoundDirection::upper, best->region, citation};
}

} // namespace

BoundResult mult_upper_from_coincidence(int m, double p, double q, const CoincidencePair& pair) {
    require_degree(m);
    require_positive(p, "p");
    require_positive(q, "q");
    const double t = pair.t;
    const double s = pair.s;
    const double md = static_cast<double>(m);
    // Simpler branches first: ties at region boundaries are value-neutral and
    // should report the less composite formula.
    std::vector<BranchValue> candidates;
    if (t <= p && q <= s)
        candidates.push_back({0.0, "(d) t<=p, q<=s"});
    if (p <= t && q <= s)
        candidates.push_back({md / p - md / t, "(b) p<=t, q<=s"});
    if (t <= p && s <= q)
        candidates.push_back({md / s - md / q, "(c) t<=p, s<=q"});
    if (p <= t && s <= q)
        candidates.push_back({md / p - md / t + md / s - md / q, "(a) p<=t, s<=q"});
    if (candidates.empty())
        throw internal_error("coincidence branch selection found no branch");
    return pick_upper(candidates, "multilinear-coincidence-upper");
}

BoundResult pol_upper_from_coincidence(int m, double p, double q, const CoincidencePair& pair) {
    require_degree(m);
    require_positive(p, "p");
    require_positive(q, "q");
    const double t = pair.t;
    const double s = pair.s;
    const double md = static_cast<double>(m);
    std::vector<BranchValue> candidates;
    if (t <= p && q <= s)
        candidates.push_back({0.0, "(d) t<=p, q<=s"});
    if (p <= t && q <= s)
        candidates.push_back({1.0 / p - 1.0 / t, "(b) p<=t, q<=s"});
    if (t <= p && s <= q)
        candidates.push_back({md / s - md / q, "(c) t<=p, s<=q"});
    if (p <= t && s <= q)
        candidates.push_back({1.0 / p - 1.0 / t + md / s - md / q, "(a) p<=t, s<=q"});
    if (candidates.empty())
        throw internal_error("coincidence branch selection found no branch");
    return pick_upper(candidates, "polynomial-coincidence-upper");
}

double cotype_coincidence_t(int m, double r, double s) {
    require_degree(m);
    if (std::isinf(r))
        throw region_error("codomain has no finite cotype");
    if (!(r >= 2.0))
        throw parameter_error("cotype r must be >= 2");
    if (!(s >= 1.0 && s < 2.0))
        throw region_error("s not in [1,2)");
    // At s = 1 the constraint m < s/(r(s-1)) reads m < infinity.
    if (s > 1.0 && !(static_cast<double>(m) < s / (r * (s - 1.0))))
        throw region_error("m >= s/(r(s-1))");
    const double md = static_cast<double>(m);
    const double denom = s - md * s * r + md * r;
    return s * r / denom;
}

double scalar_coincidence_s(int m, double t) {
    require_degree(m);
    require_positive(t, "t");
    const double md = static_cast<double>(m);
    const double t_min = 2.0 * md / (md + 1.0);
    if (!(t >= t_min))
        throw region_error("t below 2m/(m+1)");
    if (t <= 2.0)
        return 2.0 * md * t / (md * t + 2.0 * md - t);
    if (std::isinf(t))
        throw parameter_error("t must be finite");
    return md * t / (md * t + 1.0 - t);
}

BoundResult mult_upper_from_cotype(int m, double r, double p, double q, std::optional<double> s) {
    require_degree(m);
    require_positive(p, "p");
    require_positive(q, "q");
    const double s_value = s.value_or(1.0);
    const double t = cotype_coincidence_t(m, r, s_value);
    const double md = static_cast<double>(m);
    const double q_split = md * r * t / (r - t + md * r * t);
    std::vector<BranchValue> candidates;
    if (t <= p && q <= q_split)
        candidates.push_back({0.0, "(d) t<=p, q<=mrt/(r-t+mrt)"});
    if (p <= t && q <= q_split)
        candidates.push_back({md / p - md / t, "(b) p<=t, q<=mrt/(r-t+mrt)"});
    if (t <= p && q_split <= q)
        candidates.push_back({md - 1.0 / r + 1.0 / t - md / q, "(c) t<=p, q>=mrt/(r-t+mrt)"});
    if (p <= t && q_split <= q)
        candidates.push_back(
            {md / p + md - 1.0 / r - md / q - (md - 1.0) / t, "(a) p<=t, q>=mrt/(r-t+mrt)"});
    if (candidates.empty())
        throw internal_error("cotype corollary branch selection found no branch");
    return pick_upper(candidates, "cotype-coincidence-upper");
}

BoundResult exact_index_scalar(int m, double p, double q) {
    require_degree(m);
    require_positive(p, "p");
    require_positive(q, "q");
    const double md = static_cast<double>(m);
    const double p_low = 2.0 * md / (md + 1.0);
    if (p_low <= p && p <= 2.0) {
        const double q_low = 2.0 * md * p / (md * p + 2.0 * md - p);
        if (q_low <= q && q <= 2.0)
            return BoundResult{md / p + md / 2.0 - 0.5 - md / q, BoundDirection::exact,
                               "(a) 2m/(m+1)<=p<=2, 2mp/(mp+2m-p)<=q<=2",
                               "scalar-codomain-exact"};
    }
    if (p > 2.0 && std::isfinite(p)) {
        const double q_low = md * p / (md * p + 1.0 - p);
        if (q >= q_low)
            return BoundResult{md - 1.0 + 1.0 / p - md / q, BoundDirection::exact,
                               "(b) p>2, q>=mp/(mp+1-p)", "scalar-codomain-exact"};
    }
    throw no_exact_result_error("parameters outside both exactness regions for scalar codomain");
}

BoundResult exact_index_c0(int m, double p, double q) {
    require_degree(m);
    require_positive(p, "p");
    if (std::isinf(p))
        throw parameter_error("p must be finite");
    if (!(q >= 1.0 && q <= 2.0))
        throw region_error("q outside [1,2]");
    return BoundResult{static_cast<double>(m) / p, BoundDirection::exact, "0<p<inf, 1<=q<=2",
                       "c0-codomain-exact"};
}

BoundResult pol_lower_regions(int m, double p, double q, double r) {
    require_degree(m);
    require_positive(p, "p");
    if (!(q >= 1.0))
        throw parameter_error("q must be >= 1");
    if (std::isinf(r))
        throw region_error("codomain has no finite cotype");
    if (!(r >= 2.0))
        throw parameter_error("cotype r must be >= 2");
    if (p >= r)
        throw no_known_lower_error("no known lower bound for p >= r");
    const double md = static_cast<double>(m);
    const double p_mid = 2.0 * r / (md * r + 2.0);
    if (q <= 2.0) {
        const double p_first = r * q / (md * r + q);
        if (p <= p_first)
            return BoundResult{md / 2.0, BoundDirection::lower, "(a) 1<=q<=2, p<=rq/(mr+q)",
                               "polynomial-cotype-lower"};
        if (p <= p_mid)
            return BoundResult{(md * p + 2.0) / (2.0 * p) - (md * r + q) / (r * q),
                               BoundDirection::lower, "(b) 1<=q<=2, rq/(mr+q)<=p<=2r/(mr+2)",
                               "polynomial-cotype-lower"};
        // Strip not covered by the four regions; the extended bound applies.
        return pol_cotype_lower(m, p, q, r);
    }
    if (std::isinf(q))
        throw region_error("q = infinity is not admitted");
    if (p <= p_mid)
        return BoundResult{md / 2.0, BoundDirection::lower, "(c) 2<=q<inf, p<=2r/(mr+2)",
                           "polynomial-cotype-lower"};
    return BoundResult{(r - p) / (p * r), BoundDirection::lower, "(d) 2<=q<inf, 2r/(mr+2)<p<r",
                       "polynomial-cotype-lower"};
}

BoundResult pol_cotype_lower(int m, double p, double q, double r) {
    require_degree(m);
    require_positive(p, "p");
    if (std::isinf(r))
        throw region_error("codomain has no finite cotype");
    if (!(r >= 2.0))
        throw parameter_error("cotype r must be >= 2");
    if (!(q >= 1.0) || std::isinf(q))
        throw region_error("q not in [1,inf)");
    const double p_low = 2.0 * r / (static_cast<double>(m) * r + 2.0);
    if (!(p > p_low && p < r)) {
        std::ostringstream msg;
        msg << "p not in (2r/(mr+2), r) = (" << p_low << ", " << r << ")";
        throw region_error(msg.str());
    }
    return BoundResult{(r - p) / (p * r), BoundDirection::lower, "1<=q<inf, 2r/(mr+2)<p<r",
                       "polynomial-cotype-lower-extended"};
}

BoundResult even_real_lower(int m, double p, double q, Field field) {
    require_degree(m);
    require_positive(p, "p");
    if (m % 2 != 0)
        throw inapplicable_error("degree must be even");
    if (field != Field::real)
        throw inapplicable_error("real scalar field required");
    if (!(q >= 1.0) || std::isinf(q))
        throw region_error("q not in [1,inf)");
    const double p_low = 2.0 / (static_cast<double>(m) + 2.0);
    if (!(p > p_low && p < 1.0)) {
        std::ostringstream msg;
        msg << "p not in (2/(m+2), 1) = (" << p_low << ", 1)";
        throw region_error(msg.str());
    }
    return BoundResult{(1.0 - p) / p, BoundDirection::lower, "m even, 2/(m+2)<p<1",
                       "even-degree-real-lower"};
}

BoundResult pol_exact_q1(int m, double p, double r, bool scalar_real_even) {
    require_degree(m);
    require_positive(p, "p");
    if (scalar_real_even) {
        if (m % 2 != 0)
            throw inapplicable_error("degree must be even for the real scalar exactness");
        const double p_low = 2.0 / (static_cast<double>(m) + 2.0);
        if (!(p > p_low && p < 1.0))
            throw no_exact_result_error("p outside (2/(m+2), 1)");
        return BoundResult{1.0 / p - 1.0, BoundDirection::exact, "q=1, m even, 2/(m+2)<p<1",
                           "q1-polynomial-exact-real-scalar"};
    }
    if (std::isinf(r))
        throw region_error("codomain has no finite cotype");
    if (!(r >= 2.0))
        throw parameter_error("cotype r must be >= 2");
    const double p_low = 2.0 * r / (static_cast<double>(m) * r + 2.0);
    if (!(p > p_low && p < r))
        throw no_exact_result_error("p outside (2r/(mr+2), r)");
    return BoundResult{1.0 / p - 1.0 / r, BoundDirection::exact, "q=1, 2r/(mr+2)<p<r",
                       "q1-polynomial-exact"};
}

namespace {

bool domains_are_dual_sequence(const IndexQuery& query) {
    const double q_star = conjugate_exponent(query.q);
    for (const auto& d : query.domains) {
        if (d.kind != SpaceKind::sequence_space)
            return false;
        const double diff = std::abs(d.exponent - q_star);
        const double scale = std::max(1.0, std::min(std::abs(d.exponent), std::abs(q_star)));
        if (std::isinf(d.exponent) != std::isinf(q_star))
            return false;
        if (!std::isinf(q_star) && diff > 1e-9 * scale)
            return false;
    }
    return true;
}

bool domains_may_be_infinite_dimensional(const IndexQuery& query) {
    for (const auto& d : query.domains)
        if (d.kind == SpaceKind::scalar_field)
            return false;
    return true;
}

void consider(std::optional<BoundResult>& best, const BoundResult& candidate, bool want_larger) {
    if (!best || (want_larger ? candidate.value > best->value : candidate.value < best->value))
        best = candidate;
}

/// Candidate t exponents for the scalar-codomain coincidence route: the
/// paper-optimal t = max(p, 2m/(m+1)), the branch boundary t = 2, and the t
/// whose admissible s matches q exactly (removes the s penalty entirely).
std::vector<double> scalar_candidate_ts(int m, double p, double q) {
    const double md = static_cast<double>(m);
    const double t_min = 2.0 * md / (md + 1.0);
    std::vector<double> ts;
    ts.push_back(std::max(p, t_min));
    ts.push_back(2.0);
    const double s_sup = m == 1 ? kInfinity : md / (md - 1.0);
    if (q < s_sup) {
        const double s_at_2 = 2.0 * md / (2.0 * md - 1.0);
        double tq;
        if (q <= s_at_2)
            tq = 2.0 * md * q / (2.0 * md + q - md * q);
        else
            tq = q / (md - q * (md - 1.0));
        if (tq >= t_min && std::isfinite(tq))
            ts.push_back(tq);
    }
    return ts;
}

} // namespace

AggregateBounds aggregate_bounds(const IndexQuery& query) {
    query.validate();
    AggregateBounds out;
    std::optional<BoundResult> best_lower;
    std::optional<BoundResult> best_upper;

    const int m = query.m;
    const double p = query.p;
    const double q = query.q;
    const bool domains_infinite = domains_may_be_infinite_dimensional(query);

    if (query.variant == Variant::multilinear) {
        const bool dual_domains = domains_are_dual_sequence(query);
        if (query.codomain.kind == SpaceKind::scalar_field) {
            if (dual_domains) {
                try {
                    out.exact = exact_index_scalar(m, p, q);
                } catch (const no_exact_result_error&) {
                }
            }
            if (domains_infinite) {
                for (double t : scalar_candidate_ts(m, p, q)) {
                    try {
                        const CoincidencePair pair{t, scalar_coincidence_s(m, t)};
                        consider(best_upper, mult_upper_from_coincidence(m, p, q, pair), false);
                    } catch (const region_error&) {
                    }
                }
            }
        } else if (query.codomain.kind == SpaceKind::c0) {
            if (dual_domains && q >= 1.0 && q <= 2.0)
                out.exact = exact_index_c0(m, p, q);
        } else if (query.codomain.has_finite_cotype() && domains_infinite) {
            const double r = query.codomain.cotype;
            try {
                consider(best_upper, mult_upper_from_cotype(m, r, p, q), false);
            } catch (const region_error&) {
            }
            if (q < 2.0) {
                try {
                    consider(best_upper, mult_upper_from_cotype(m, r, p, q, q), false);
                } catch (const region_error&) {
                }
            }
        }
    } else {
        const bool q_is_one = std::abs(q - 1.0) <= 1e-12;
        if (query.codomain.kind == SpaceKind::scalar_field) {
            // Every scalar polynomial is absolutely (1,1)-summing, and the
            // scalar field has cotype 2, giving the (2,1) coincidence.
            consider(best_upper, pol_upper_from_coincidence(m, p, q, CoincidencePair{1.0, 1.0}),
                     false);
            consider(best_upper, pol_upper_from_coincidence(m, p, q, CoincidencePair{2.0, 1.0}),
                     false);
            if (query.field == Field::real && m % 2 == 0) {
                try {
                    consider(best_lower, even_real_lower(m, p, q, query.field), true);
                } catch (const region_error&) {
                }
                if (q_is_one) {
                    try {
                        out.exact = pol_exact_q1(m, p, 2.0, true);
                    } catch (const region_error&) {
                    }
                }
            }
        } else if (query.codomain.has_finite_cotype()) {
            const double r = query.codomain.cotype;
            consider(best_upper, pol_upper_from_coincidence(m, p, q, CoincidencePair{r, 1.0}),
                     false);
            if (domains_infinite) {
                try {
                    consider(best_lower, pol_lower_regions(m, p, q, r), true);
                } catch (const region_error&) {
                }
                if (q_is_one) {
                    try {
                        out.exact = pol_exact_q1(m, p, r, false);
                    } catch (const region_error&) {
                    }
                }
            }
        }
        // Domain cotype also yields a coincidence: cot(E) = m*t gives (t,1).
        const SpaceDescriptor& domain = query.domains.front();
        if (domain.has_finite_cotype()) {
            const double t = domain.cotype / static_cast<double>(m);
            if (t > 0.0)
                consider(best_upper, pol_upper_from_coincidence(m, p, q, CoincidencePair{t, 1.0}),
                         false);
        }
    }

    if (out.exact) {
        BoundResult as_lower = *out.exact;
        as_lower.direction = BoundDirection::lower;
        consider(best_lower, as_lower, true);
        BoundResult as_upper = *out.exact;
        as_upper.direction = BoundDirection::upper;
        consider(best_upper, as_upper, false);
    }
    out.lower = best_lower;
    out.upper = best_upper;

    constexpr double kSlack = 1e-9;
    if (out.lower && out.upper && out.lower->value > out.upper->value + kSlack)
        throw internal_error("aggregate bounds are inconsistent: lower > upper");
    if (out.exact) {
        if (out.lower && out.lower->value > out.exact->value + kSlack)
            throw internal_error("aggregate bounds are inconsistent: lower > exact");
        if (out.upper && out.upper->value < out.exact->value - kSlack)
            throw internal_error("aggregate bounds are inconsistent: upper < exact");
    }
    return out;
}

} // namespace sumidx
