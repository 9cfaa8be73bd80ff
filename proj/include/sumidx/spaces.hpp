#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sumidx/errors.hpp"

namespace sumidx {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Conjugate exponent: 1/p + 1/p* = 1, with 1* = inf and inf* = 1.
double conjugate_exponent(double p);

enum class Variant { multilinear, polynomial };
enum class Field { real, complex };
enum class SpaceKind { sequence_space, scalar_field, c0, abstract };

/// A Banach space as the calculator sees it: its kind, the sequence-space
/// exponent when applicable, and its cotype. Cotype is always supplied by the
/// caller (or a config table); it is never inferred here.
struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::abstract;
    double exponent = kInfinity; // sequence_space only, s in [1, inf]
    double cotype = kInfinity;   // in [2, inf]; inf means no finite cotype

    static SpaceDescriptor sequence(double s, double cotype_value);
    static SpaceDescriptor scalar(); // cotype 2
    static SpaceDescriptor c0_space(); // cotype inf
    static SpaceDescriptor abstract_space(double cotype_value);

    void validate() const;
    bool has_finite_cotype() const { return cotype < kInfinity; }
};

/// The tuple identifying one index-of-summability question.
struct IndexQuery {
    Variant variant = Variant::multilinear;
    Field field = Field::real;
    int m = 1;
    double p = 1.0;
    double q = 1.0;
    std::vector<SpaceDescriptor> domains; // size m (multilinear) or 1 (polynomial)
    SpaceDescriptor codomain;

    void validate() const;
};

enum class BoundDirection { lower, upper, exact };

inline const char* to_string(BoundDirection d) {
    switch (d) {
    case BoundDirection::lower: return "lower";
    case BoundDirection::upper: return "upper";
    default: return "exact";
    }
}

/// A numeric bound together with the hypothesis branch that produced it and a
/// tag naming the originating result.
struct BoundResult {
    double value = 0.0;
    BoundDirection direction = BoundDirection::upper;
    std::string region;
    std::string citation;
};

/// A coincidence situation: every continuous operator is multiple
/// (t,s)-summing.
struct CoincidencePair {
    double t;
    double s;

    CoincidencePair(double t_value, double s_value) : t(t_value), s(s_value) {
        if (!(t > 0.0))
            throw parameter_error("coincidence pair requires t > 0");
        if (!(s >= 1.0))
            throw parameter_error("coincidence pair requires s >= 1");
    }
};

} // namespace sumidx
