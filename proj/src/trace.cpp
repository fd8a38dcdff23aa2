#include "fmm/trace.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fmm/error.hpp"
#include "text.hpp"

namespace fmm {

void write_trace(std::ostream& out, std::span<const Point> initial, std::span<const TraceEvent> events)
{
    for (std::size_t i = 0; i < initial.size(); ++i) {
        fmt::print(out, "$node_({}) set X_ {:.6f}\n", i, initial[i].x);
        fmt::print(out, "$node_({}) set Y_ {:.6f}\n", i, initial[i].y);
    }
    for (const auto& e : events)
        fmt::print(out, "$ns_ at {:.6f} \"$node_({}) setdest {:.6f} {:.6f} {:.6f}\"\n", e.time, e.node,
                   e.destination.x, e.destination.y, e.speed);
}

void write_trace(const std::string& path, std::span<const Point> initial, std::span<const TraceEvent> events)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write trace file " + path);
    write_trace(out, initial, events);
    out.flush();
    if (!out)
        throw IoError("error while writing trace file " + path);
}

ParsedTrace read_trace(std::istream& in)
{
    static const std::regex set_re(R"(\$node_\((\d+)\)\s+set\s+([XYZ])_\s+(\S+))");
    static const std::regex at_re(
        R"re(\$ns_\s+at\s+(\S+)\s+"\$node_\((\d+)\)\s+setdest\s+(\S+)\s+(\S+)\s+(\S+)\s*")re");

    ParsedTrace trace;
    std::vector<bool> have_x, have_y;
    auto grow = [&](std::size_t id) {
        if (trace.initial.size() <= id) {
            trace.initial.resize(id + 1);
            have_x.resize(id + 1);
            have_y.resize(id + 1);
        }
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = text::trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        const std::string s(body);
        std::smatch m;
        try {
            if (std::regex_match(s, m, set_re)) {
                const auto id = static_cast<std::size_t>(text::to_int(m.str(1)));
                const double v = text::to_double(m.str(3));
                if (m.str(2) == "Z")
                    continue;
                grow(id);
                if (m.str(2) == "X") {
                    trace.initial[id].x = v;
                    have_x[id] = true;
                } else {
                    trace.initial[id].y = v;
                    have_y[id] = true;
                }
                continue;
            }
            if (std::regex_match(s, m, at_re)) {
                TraceEvent e;
                e.time = text::to_double(m.str(1));
                e.node = text::to_int(m.str(2));
                e.destination = {text::to_double(m.str(3)), text::to_double(m.str(4))};
                e.speed = text::to_double(m.str(5));
                if (!(e.speed >= 0.0) || !(e.time >= 0.0)) {
                    trace.warnings.push_back(fmt::format("line {}: negative time or speed", lineno));
                    continue;
                }
                grow(static_cast<std::size_t>(e.node));
                trace.events.push_back(e);
                continue;
            }
        } catch (const text::ParseError& err) {
            trace.warnings.push_back(fmt::format("line {}: {}", lineno, err.what()));
            continue;
        }
        trace.warnings.push_back(fmt::format("line {}: unrecognised command", lineno));
    }
    for (std::size_t i = 0; i < trace.initial.size(); ++i)
        if (!have_x[i] || !have_y[i])
            trace.warnings.push_back(fmt::format("node {}: no initial position", i));
    return trace;
}

ParsedTrace read_trace_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read trace file " + path);
    return read_trace(in);
}

namespace {

Point advance(Point from, Point to, double speed, double elapsed)
{
    const double d = euclidean_distance(from, to);
    const double travelled = speed * elapsed;
    if (travelled >= d || d == 0.0)
        return to;
    return lerp(from, to, travelled / d);
}

}  // namespace

TraceReplay::TraceReplay(const ParsedTrace& trace) : initial_(trace.initial), legs_(trace.initial.size())
{
    std::vector<TraceEvent> events = trace.events;
    std::stable_sort(events.begin(), events.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });
    for (const auto& e : events) {
        auto& legs = legs_[static_cast<std::size_t>(e.node)];
        Point from = initial_[static_cast<std::size_t>(e.node)];
        if (!legs.empty()) {
            const auto& prev = legs.back();
            from = advance(prev.from, prev.to, prev.speed, e.time - prev.time);
        }
        legs.push_back({e.time, from, e.destination, e.speed});
    }
}

Point TraceReplay::position(int node, double t) const
{
    const auto& legs = legs_.at(static_cast<std::size_t>(node));
    const auto it =
        std::upper_bound(legs.begin(), legs.end(), t, [](double time, const Leg& l) { return time < l.time; });
    if (it == legs.begin())
        return initial_[static_cast<std::size_t>(node)];
    const Leg& l = *std::prev(it);
    return advance(l.from, l.to, l.speed, t - l.time);
}

}  // namespace fmm
