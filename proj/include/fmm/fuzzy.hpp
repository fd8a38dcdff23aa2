#pragma once

// Fuzzy destination inference: Gaussian memberships for time-of-day and
// place, singleton fuzzifier, product inference and center-average
// defuzzifier, plus the closed-form composition of the three stages.

#include <span>
#include <vector>

#include "fmm/geometry.hpp"

namespace fmm::fuzzy {

/// Width coefficient of the time-of-day Gaussian, per squared hour.
inline constexpr double kTimeWidth = 0.2;
/// Width coefficient of the place Gaussian, per squared meter.
inline constexpr double kPlaceWidth = 1e-4;

/// exp(-0.2 (t - a)^2). Throws DomainError on non-finite input.
double time_membership(double hours, double center);

/// exp(-1e-4 |p - center|^2). Throws DomainError on non-finite input.
double place_membership(Point p, Point center);

/// Fuzzy singleton at a crisp input: membership 1 at the point, 0 elsewhere.
template <typename T>
struct Singleton {
    T point;

    double membership(const T& x) const { return x == point ? 1.0 : 0.0; }
};

Singleton<double> singleton_fuzzify(double x);
Singleton<Point> singleton_fuzzify(Point p);

/// One If-Then rule: IF time is `time_label` AND place is `place_site`
/// THEN destination is `consequent`.
struct FuzzyRule {
    int time_label = 0;
    int place_site = 0;
    Point consequent;
};

struct RuleActivation {
    const FuzzyRule* rule = nullptr;
    double weight = 0.0;
};

struct ScalarActivation {
    double center = 0.0;
    double weight = 0.0;
};

/// Σ center·w / Σ w. Throws NoActivationError when every weight is zero and
/// DomainError on negative or non-finite weights.
double center_average_defuzzify(std::span<const ScalarActivation> activations);

/// Coordinate-wise center-average over the rule consequents.
Point center_average_defuzzify(std::span<const RuleActivation> activations);

/// Product inference under singleton inputs. The sup over the input universe
/// collapses onto the singleton support, so each weight is the product of the
/// antecedent memberships evaluated at the crisp inputs.
std::vector<RuleActivation> infer(const Singleton<double>& time, const Singleton<Point>& place,
                                  std::span<const FuzzyRule> rules,
                                  std::span<const double> time_centers,
                                  std::span<const Point> site_centers);

/// Closed form of fuzzify -> product inference -> center-average, evaluated
/// per output coordinate. Throws ConfigError on an empty rule set or a rule
/// whose label/site does not resolve, NoActivationError if every weight
/// underflows to zero.
Point fuzzy_system_eval(double hours, Point p, std::span<const FuzzyRule> rules,
                        std::span<const double> time_centers, std::span<const Point> site_centers);

/// The same system evaluated stage by stage through singleton_fuzzify, infer
/// and center_average_defuzzify.
Point fuzzy_pipeline_eval(double hours, Point p, std::span<const FuzzyRule> rules,
                          std::span<const double> time_centers, std::span<const Point> site_centers);

}  // namespace fmm::fuzzy
