#include "fmm/fuzzy.hpp"

#include <cmath>
#include <string>

#include "fmm/error.hpp"

namespace fmm::fuzzy {

namespace {

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v))
        throw DomainError(std::string(what) + " must be finite");
}

void validate_rules(std::span<const FuzzyRule> rules, std::span<const double> time_centers,
                    std::span<const Point> site_centers)
{
    if (rules.empty())
        throw ConfigError("rules", "fuzzy system needs at least one rule");
    for (const auto& r : rules) {
        if (r.time_label < 0 || static_cast<std::size_t>(r.time_label) >= time_centers.size())
            throw ConfigError("rules", "time label " + std::to_string(r.time_label) + " does not resolve");
        if (r.place_site < 0 || static_cast<std::size_t>(r.place_site) >= site_centers.size())
            throw ConfigError("rules", "site " + std::to_string(r.place_site) + " does not resolve");
    }
}

}  // namespace

double time_membership(double hours, double center)
{
    require_finite(hours, "time");
    require_finite(center, "time center");
    const double d = hours - center;
    return std::exp(-kTimeWidth * d * d);
}

double place_membership(Point p, Point center)
{
    if (!is_finite(p) || !is_finite(center))
        throw DomainError("place coordinates must be finite");
    return std::exp(-kPlaceWidth * squared_distance(p, center));
}

Singleton<double> singleton_fuzzify(double x)
{
    require_finite(x, "singleton input");
    return {x};
}

Singleton<Point> singleton_fuzzify(Point p)
{
    if (!is_finite(p))
        throw DomainError("singleton input must be finite");
    return {p};
}

double center_average_defuzzify(std::span<const ScalarActivation> activations)
{
    double num = 0.0;
    double den = 0.0;
    for (const auto& a : activations) {
        if (!std::isfinite(a.weight) || a.weight < 0.0)
            throw DomainError("activation weights must be finite and non-negative");
        require_finite(a.center, "consequent center");
        num += a.center * a.weight;
        den += a.weight;
    }
    if (!(den > 0.0))
        throw NoActivationError("no rule is activated");
    return num / den;
}

Point center_average_defuzzify(std::span<const RuleActivation> activations)
{
    std::vector<ScalarActivation> xs;
    std::vector<ScalarActivation> ys;
    xs.reserve(activations.size());
    ys.reserve(activations.size());
    for (const auto& a : activations) {
        xs.push_back({a.rule->consequent.x, a.weight});
        ys.push_back({a.rule->consequent.y, a.weight});
    }
    return {center_average_defuzzify(xs), center_average_defuzzify(ys)};
}

std::vector<RuleActivation> infer(const Singleton<double>& time, const Singleton<Point>& place,
                                  std::span<const FuzzyRule> rules,
                                  std::span<const double> time_centers,
                                  std::span<const Point> site_centers)
{
    validate_rules(rules, time_centers, site_centers);
    std::vector<RuleActivation> out;
    out.reserve(rules.size());
    for (const auto& r : rules) {
        // sup over x of singleton(x) * mu(x): only x = support contributes.
        const double w_time = time.membership(time.point) *
                              time_membership(time.point, time_centers[r.time_label]);
        const double w_place = place.membership(place.point) *
                               place_membership(place.point, site_centers[r.place_site]);
        out.push_back({&r, w_time * w_place});
    }
    return out;
}

Point fuzzy_system_eval(double hours, Point p, std::span<const FuzzyRule> rules,
                        std::span<const double> time_centers, std::span<const Point> site_centers)
{
    validate_rules(rules, time_centers, site_centers);
    double sx = 0.0;
    double sy = 0.0;
    double sw = 0.0;
    for (const auto& r : rules) {
        const double w = time_membership(hours, time_centers[r.time_label]) *
                         place_membership(p, site_centers[r.place_site]);
        sx += r.consequent.x * w;
        sy += r.consequent.y * w;
        sw += w;
    }
    if (!(sw > 0.0))
        throw NoActivationError("every rule weight underflowed to zero");
    return {sx / sw, sy / sw};
}

Point fuzzy_pipeline_eval(double hours, Point p, std::span<const FuzzyRule> rules,
                          std::span<const double> time_centers, std::span<const Point> site_centers)
{
    const auto time = singleton_fuzzify(hours);
    const auto place = singleton_fuzzify(p);
    const auto activations = infer(time, place, rules, time_centers, site_centers);
    return center_average_defuzzify(std::span<const RuleActivation>(activations));
}

}  // namespace fmm::fuzzy
