#ifndef UBTCP_MOBILITY_H_
#define UBTCP_MOBILITY_H_

#include <cstdint>
#include <vector>

#include "ubtcp/rng.h"
#include "ubtcp/units.h"

namespace ubtcp {

struct Point {
  double x_m = 0.0;
  double y_m = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

Meters Distance(Point a, Point b);

// Binary disk: true iff distance(a, b) <= range.
bool LinkUp(Point a, Point b, Meters range);

struct FieldParams {
  Meters width{1000.0};
  Meters height{1000.0};
  Meters range{250.0};
  MetersPerSecond v_min{0.0};
  MetersPerSecond v_max{35.0};
  // Lower bound applied to drawn speeds; a zero-speed leg never ends.
  MetersPerSecond v_floor{0.1};
  Seconds pause{5.0};
  // Draw each pause uniformly from [0, pause] instead of using it verbatim.
  bool random_pause = false;

  // v_max == 0 means nodes never move.
  bool is_static() const { return v_max.value() <= 0.0; }
  bool Contains(Point p) const;
  void Validate() const;
};

// One straight-line movement followed by a pause at the destination.
struct Leg {
  Point from;
  Point to;
  MetersPerSecond speed{0.0};
  SimTime depart;
  SimTime arrive;
  SimTime pause_until;
};

// Draws the next waypoint leg for a node standing at `from` at time `now`.
// Static fields yield a leg that never ends.
Leg NextLeg(const FieldParams& field, Point from, SimTime now, Rng& rng);

// Linear interpolation along the leg, then held at the destination.
// Throws std::invalid_argument for t < leg.depart.
Point PositionAt(const Leg& leg, SimTime t);

struct Interval {
  SimTime start;
  SimTime end;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Random Waypoint motion for a set of nodes. Legs are generated lazily and
// kept, so any time can be queried in any order.
class MobilityModel {
 public:
  // Initial positions uniform over the field; one Rng stream per node.
  MobilityModel(const FieldParams& field, int node_count, std::uint64_t seed);

  // Scripted trajectories: node i follows legs[i] in order and then stays at
  // the last destination. Legs must be contiguous in time.
  static MobilityModel FromScript(const FieldParams& field,
                                  std::vector<std::vector<Leg>> legs);

  Point PositionOf(int node, SimTime t);
  // Legs covering [0, t] for `node`.
  const std::vector<Leg>& LegsUntil(int node, SimTime t);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const FieldParams& field() const { return field_; }

 private:
  struct NodeTrack {
    Rng rng;
    std::vector<Leg> legs;
    bool scripted = false;
  };

  MobilityModel(const FieldParams& field) : field_(field) {}
  void ExtendTo(NodeTrack& node, SimTime t);

  FieldParams field_;
  std::vector<NodeTrack> nodes_;
};

// Samples every hop of `path` each `dt` over [0, horizon]. The path is down
// at a sample when any consecutive pair is out of range; consecutive down
// samples merge into one interval [first down sample, first up sample).
// An outage still open at the horizon ends at the horizon.
std::vector<Interval> OutageSchedule(MobilityModel& model,
                                     const std::vector<int>& path,
                                     SimTime horizon, Seconds dt);

}  // namespace ubtcp

#endif  // UBTCP_MOBILITY_H_
