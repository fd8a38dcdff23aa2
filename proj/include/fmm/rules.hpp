#pragma once

// Node classes, destination priorities, the distance/priority destination
// score and the per-class rule tables derived from it.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fmm/environment.hpp"

namespace fmm {

struct TimeLabel {
    std::string name;
    double center = 0.0;  // hours of day
};

/// morning 8h, noon 12h, evening 17h.
std::vector<TimeLabel> default_time_labels();

struct SpeedRange {
    double min = 0.0;  // m/s
    double max = 10.0;
};

struct NodeClass {
    int id = 0;
    std::string name;
    double share = 0.0;  // fraction of the node population
    SpeedRange speed;
};

/// personal, public, ambulance; equal shares, 0-10 m/s.
std::vector<NodeClass> default_node_classes();

/// Destination priority A(label, site) in [0,1] for one node class.
class PriorityTable {
public:
    PriorityTable(std::size_t labels, std::size_t sites);

    double at(int label, int site) const;
    void set(int label, int site, double a);
    std::size_t labels() const noexcept { return labels_; }
    std::size_t sites() const noexcept { return sites_; }

private:
    std::size_t labels_;
    std::size_t sites_;
    std::vector<double> a_;
};

/// Rows are `class,time_label,site,A`, one per (class, label, site).
/// Names are matched case-insensitively. Rejects A outside [0,1], unknown
/// names, duplicate keys and incomplete tables with distinct ConfigErrors.
std::vector<PriorityTable> load_priorities(std::istream& in, std::span<const NodeClass> classes,
                                           std::span<const Site> sites, std::span<const TimeLabel> labels,
                                           const std::string& source = "<priorities>");

struct ScoringParams {
    double p1 = 0.6;  // weight of the priority term
    double p2 = 0.4;  // weight of the distance term
    double max_dis = 0.0;
};

void validate(const ScoringParams& params);

/// k = p1 (1 - A) + p2 d / max_dis; lower is better. Throws DomainError for
/// A outside [0,1] or d outside [0, max_dis].
double score_destination(double priority, double distance, const ScoringParams& params);

/// Destination site per (class, current site, time label).
class RuleTable {
public:
    RuleTable(std::size_t classes, std::size_t sites, std::size_t labels);

    /// Throws ConfigError for a missing entry.
    int destination(int cls, int site, int label) const;
    void set(int cls, int site, int label, int destination);
    bool has(int cls, int site, int label) const;

    std::size_t classes() const noexcept { return classes_; }
    std::size_t sites() const noexcept { return sites_; }
    std::size_t labels() const noexcept { return labels_; }

    friend bool operator==(const RuleTable&, const RuleTable&) = default;

private:
    std::size_t index(int cls, int site, int label) const;

    std::size_t classes_;
    std::size_t sites_;
    std::size_t labels_;
    std::vector<int> dest_;
};

/// Rows are `class,current_site,time_label,destination_site`. The table must
/// be total.
RuleTable load_rule_table(std::istream& in, std::span<const NodeClass> classes, std::span<const Site> sites,
                          std::span<const TimeLabel> labels, const std::string& source = "<rules>");

/// The rule tables shipped with the library (personal, public, ambulance
/// over the paper_city sites).
RuleTable bundled_rule_table(std::span<const NodeClass> classes, std::span<const Site> sites,
                             std::span<const TimeLabel> labels);

/// Priorities shipped with the library.
std::vector<PriorityTable> bundled_priorities(std::span<const NodeClass> classes, std::span<const Site> sites,
                                              std::span<const TimeLabel> labels);

void write_rule_table(std::ostream& out, const RuleTable& table, std::span<const NodeClass> classes,
                      std::span<const Site> sites, std::span<const TimeLabel> labels);

/// For every (class, site, label): argmin over candidate sites of
/// score_destination(A(label, candidate), d(site, candidate)); ties go to
/// the smaller site id.
RuleTable derive_rule_table(std::span<const PriorityTable> priorities, std::span<const Site> sites,
                            const DistanceMatrix& distances, const ScoringParams& params);

int lookup_destination(const RuleTable& rules, int cls, int current_site, int label);

/// Case-insensitive name lookups; -1 when absent.
int find_class(std::span<const NodeClass> classes, std::string_view name);
int find_label(std::span<const TimeLabel> labels, std::string_view name);
int find_site(std::span<const Site> sites, std::string_view name);

}  // namespace fmm
