#include "fmm/rules.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "fmm/bundled.hpp"
#include "fmm/error.hpp"
#include "text.hpp"

namespace fmm {

namespace {

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

template <typename Range, typename Name>
int find_by_name(const Range& items, std::string_view name, Name name_of)
{
    int i = 0;
    for (const auto& item : items) {
        if (iequals(name_of(item), name))
            return i;
        ++i;
    }
    return -1;
}

struct RowReader {
    std::istream& in;
    std::string source;
    std::string line;
    int lineno = 0;

    // Next non-comment row split on commas; false at end of input.
    bool next(std::vector<std::string_view>& fields)
    {
        while (std::getline(in, line)) {
            ++lineno;
            const auto body = text::trim(line);
            if (body.empty() || body.front() == '#')
                continue;
            fields = text::split(body, ',');
            return true;
        }
        return false;
    }

    std::string where() const { return source + ":" + std::to_string(lineno); }
};

}  // namespace

std::vector<TimeLabel> default_time_labels() { return {{"morning", 8.0}, {"noon", 12.0}, {"evening", 17.0}}; }

std::vector<NodeClass> default_node_classes()
{
    const double third = 1.0 / 3.0;
    return {{0, "personal", third, {0.0, 10.0}}, {1, "public", third, {0.0, 10.0}}, {2, "ambulance", third, {0.0, 10.0}}};
}

int find_class(std::span<const NodeClass> classes, std::string_view name)
{
    return find_by_name(classes, name, [](const NodeClass& c) -> std::string_view { return c.name; });
}

int find_label(std::span<const TimeLabel> labels, std::string_view name)
{
    return find_by_name(labels, name, [](const TimeLabel& l) -> std::string_view { return l.name; });
}

int find_site(std::span<const Site> sites, std::string_view name)
{
    return find_by_name(sites, name, [](const Site& s) -> std::string_view { return s.name; });
}

PriorityTable::PriorityTable(std::size_t labels, std::size_t sites)
    : labels_(labels), sites_(sites), a_(labels * sites, -1.0)
{
}

double PriorityTable::at(int label, int site) const
{
    return a_.at(static_cast<std::size_t>(label) * sites_ + static_cast<std::size_t>(site));
}

void PriorityTable::set(int label, int site, double a)
{
    a_.at(static_cast<std::size_t>(label) * sites_ + static_cast<std::size_t>(site)) = a;
}

std::vector<PriorityTable> load_priorities(std::istream& in, std::span<const NodeClass> classes,
                                           std::span<const Site> sites, std::span<const TimeLabel> labels,
                                           const std::string& source)
{
    std::vector<PriorityTable> tables(classes.size(), PriorityTable(labels.size(), sites.size()));
    RowReader rows{in, source, {}, 0};
    std::vector<std::string_view> f;
    while (rows.next(f)) {
        if (f.size() != 4)
            throw ConfigError(rows.where(), "priority rows are class,time_label,site,A");
        const int c = find_class(classes, f[0]);
        const int l = find_label(labels, f[1]);
        const int s = find_site(sites, f[2]);
        if (c < 0)
            throw ConfigError(rows.where(), "unknown class '" + std::string(f[0]) + "'");
        if (l < 0)
            throw ConfigError(rows.where(), "unknown time label '" + std::string(f[1]) + "'");
        if (s < 0)
            throw ConfigError(rows.where(), "unknown site '" + std::string(f[2]) + "'");
        double a = 0.0;
        try {
            a = text::to_double(f[3]);
        } catch (const text::ParseError& e) {
            throw ConfigError(rows.where(), e.what());
        }
        if (!(a >= 0.0 && a <= 1.0))
            throw ConfigError(rows.where(), "priority " + std::string(f[3]) + " outside [0,1]");
        auto& table = tables[static_cast<std::size_t>(c)];
        if (table.at(l, s) >= 0.0)
            throw ConfigError(rows.where(), "duplicate priority for (" + std::string(f[0]) + ", " +
                                                std::string(f[1]) + ", " + std::string(f[2]) + ")");
        table.set(l, s, a);
    }
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (std::size_t l = 0; l < labels.size(); ++l)
            for (std::size_t s = 0; s < sites.size(); ++s)
                if (tables[c].at(static_cast<int>(l), static_cast<int>(s)) < 0.0)
                    throw ConfigError(source, "incomplete priorities: missing (" + classes[c].name + ", " +
                                                  labels[l].name + ", " + sites[s].name + ")");
    return tables;
}

void validate(const ScoringParams& params)
{
    // [0,1] is enforced on configured values; scaled weights are accepted here.
    if (!(params.p1 >= 0.0) || !std::isfinite(params.p1))
        throw ConfigError("p1", "must be finite and non-negative");
    if (!(params.p2 >= 0.0) || !std::isfinite(params.p2))
        throw ConfigError("p2", "must be finite and non-negative");
    if (!(params.max_dis > 0.0) || !std::isfinite(params.max_dis))
        throw ConfigError("max_dis", "must be positive");
}

double score_destination(double priority, double distance, const ScoringParams& params)
{
    if (!(priority >= 0.0 && priority <= 1.0))
        throw DomainError("priority must lie in [0,1]");
    if (!(distance >= 0.0) || distance > params.max_dis * (1.0 + 1e-12))
        throw DomainError("distance must lie in [0, max_dis]");
    return params.p1 * (1.0 - priority) + params.p2 * (distance / params.max_dis);
}

RuleTable::RuleTable(std::size_t classes, std::size_t sites, std::size_t labels)
    : classes_(classes), sites_(sites), labels_(labels), dest_(classes * sites * labels, -1)
{
}

std::size_t RuleTable::index(int cls, int site, int label) const
{
    if (cls < 0 || site < 0 || label < 0 || static_cast<std::size_t>(cls) >= classes_ ||
        static_cast<std::size_t>(site) >= sites_ || static_cast<std::size_t>(label) >= labels_)
        throw ConfigError("rules", "no rule-table entry for (class " + std::to_string(cls) + ", site " +
                                       std::to_string(site) + ", label " + std::to_string(label) + ")");
    return (static_cast<std::size_t>(cls) * sites_ + static_cast<std::size_t>(site)) * labels_ +
           static_cast<std::size_t>(label);
}

int RuleTable::destination(int cls, int site, int label) const
{
    const int d = dest_[index(cls, site, label)];
    if (d < 0)
        throw ConfigError("rules", "missing rule-table entry for (class " + std::to_string(cls) + ", site " +
                                       std::to_string(site) + ", label " + std::to_string(label) + ")");
    return d;
}

void RuleTable::set(int cls, int site, int label, int destination) { dest_[index(cls, site, label)] = destination; }

bool RuleTable::has(int cls, int site, int label) const { return dest_[index(cls, site, label)] >= 0; }

RuleTable load_rule_table(std::istream& in, std::span<const NodeClass> classes, std::span<const Site> sites,
                          std::span<const TimeLabel> labels, const std::string& source)
{
    RuleTable table(classes.size(), sites.size(), labels.size());
    RowReader rows{in, source, {}, 0};
    std::vector<std::string_view> f;
    while (rows.next(f)) {
        if (f.size() != 4)
            throw ConfigError(rows.where(), "rule rows are class,current_site,time_label,destination_site");
        const int c = find_class(classes, f[0]);
        const int s = find_site(sites, f[1]);
        const int l = find_label(labels, f[2]);
        const int d = find_site(sites, f[3]);
        if (c < 0)
            throw ConfigError(rows.where(), "unknown class '" + std::string(f[0]) + "'");
        if (s < 0)
            throw ConfigError(rows.where(), "unknown site '" + std::string(f[1]) + "'");
        if (l < 0)
            throw ConfigError(rows.where(), "unknown time label '" + std::string(f[2]) + "'");
        if (d < 0)
            throw ConfigError(rows.where(), "unknown destination site '" + std::string(f[3]) + "'");
        if (table.has(c, s, l))
            throw ConfigError(rows.where(), "duplicate rule for (" + std::string(f[0]) + ", " + std::string(f[1]) +
                                                ", " + std::string(f[2]) + ")");
        table.set(c, s, l, d);
    }
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (std::size_t s = 0; s < sites.size(); ++s)
            for (std::size_t l = 0; l < labels.size(); ++l)
                if (!table.has(static_cast<int>(c), static_cast<int>(s), static_cast<int>(l)))
                    throw ConfigError(source, "incomplete rule table: missing (" + classes[c].name + ", " +
                                                  sites[s].name + ", " + labels[l].name + ")");
    return table;
}

RuleTable bundled_rule_table(std::span<const NodeClass> classes, std::span<const Site> sites,
                             std::span<const TimeLabel> labels)
{
    std::istringstream in{std::string(bundled::rule_tables)};
    return load_rule_table(in, classes, sites, labels, "bundled rules");
}

std::vector<PriorityTable> bundled_priorities(std::span<const NodeClass> classes, std::span<const Site> sites,
                                              std::span<const TimeLabel> labels)
{
    std::istringstream in{std::string(bundled::priorities)};
    return load_priorities(in, classes, sites, labels, "bundled priorities");
}

void write_rule_table(std::ostream& out, const RuleTable& table, std::span<const NodeClass> classes,
                      std::span<const Site> sites, std::span<const TimeLabel> labels)
{
    out << "# class,current_site,time_label,destination_site\n";
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (std::size_t s = 0; s < sites.size(); ++s)
            for (std::size_t l = 0; l < labels.size(); ++l) {
                const int d = table.destination(static_cast<int>(c), static_cast<int>(s), static_cast<int>(l));
                out << classes[c].name << ',' << sites[s].name << ',' << labels[l].name << ','
                    << sites[static_cast<std::size_t>(d)].name << '\n';
            }
}

RuleTable derive_rule_table(std::span<const PriorityTable> priorities, std::span<const Site> sites,
                            const DistanceMatrix& distances, const ScoringParams& params)
{
    validate(params);
    if (priorities.empty())
        throw ConfigError("priorities", "no priority tables");
    const std::size_t labels = priorities.front().labels();
    RuleTable table(priorities.size(), sites.size(), labels);
    for (std::size_t c = 0; c < priorities.size(); ++c) {
        const auto& pt = priorities[c];
        if (pt.sites() != sites.size() || pt.labels() != labels)
            throw ConfigError("priorities", "table shape does not match the site/label sets");
        for (std::size_t s = 0; s < sites.size(); ++s)
            for (std::size_t l = 0; l < labels; ++l) {
                int best = -1;
                double best_k = 0.0;
                for (std::size_t cand = 0; cand < sites.size(); ++cand) {
                    const double k = score_destination(pt.at(static_cast<int>(l), static_cast<int>(cand)),
                                                       distances.at(static_cast<int>(s), static_cast<int>(cand)),
                                                       params);
                    if (best < 0 || k < best_k) {
                        best = static_cast<int>(cand);
                        best_k = k;
                    }
                }
                table.set(static_cast<int>(c), static_cast<int>(s), static_cast<int>(l), best);
            }
    }
    return table;
}

int lookup_destination(const RuleTable& rules, int cls, int current_site, int label)
{
    return rules.destination(cls, current_site, label);
}

}  // namespace fmm
