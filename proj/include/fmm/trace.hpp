#pragma once

// ns-2 setdest movement traces: writer, tolerant reader and a replayer that
// reconstructs positions from the parsed commands.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fmm/geometry.hpp"
#include "fmm/mobility.hpp"

namespace fmm {

/// Writes `$node_(i) set X_/Y_` lines for every initial position, then one
/// `$ns_ at t "$node_(i) setdest x y v"` line per event. Numbers use six
/// decimals.
void write_trace(std::ostream& out, std::span<const Point> initial, std::span<const TraceEvent> events);

/// Throws IoError when the file cannot be written.
void write_trace(const std::string& path, std::span<const Point> initial, std::span<const TraceEvent> events);

struct ParsedTrace {
    std::vector<Point> initial;      // indexed by node id
    std::vector<TraceEvent> events;  // file order
    std::vector<std::string> warnings;
};

/// Lines that do not parse, Z_ lines aside, are skipped with a warning.
ParsedTrace read_trace(std::istream& in);
ParsedTrace read_trace_file(const std::string& path);

/// Positions implied by a parsed trace. A setdest starts a straight move from
/// wherever the node is at that moment; the node stops on arrival.
class TraceReplay {
public:
    explicit TraceReplay(const ParsedTrace& trace);

    std::size_t node_count() const noexcept { return legs_.size(); }
    Point position(int node, double t) const;

private:
    struct Leg {
        double time;
        Point from;
        Point to;
        double speed;
    };
    std::vector<Point> initial_;
    std::vector<std::vector<Leg>> legs_;
};

}  // namespace fmm
