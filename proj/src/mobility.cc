#include "ubtcp/mobility.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ubtcp {

namespace {
constexpr std::uint64_t kMobilityStreamBase = 0x1000;
}  // namespace

Meters Distance(Point a, Point b) {
  return Meters(std::hypot(a.x_m - b.x_m, a.y_m - b.y_m));
}

bool LinkUp(Point a, Point b, Meters range) {
  return Distance(a, b) <= range;
}

bool FieldParams::Contains(Point p) const {
  return p.x_m >= 0.0 && p.x_m <= width.value() && p.y_m >= 0.0 &&
         p.y_m <= height.value();
}

void FieldParams::Validate() const {
  if (!(width.value() > 0.0)) throw std::invalid_argument("field.width must be > 0");
  if (!(height.value() > 0.0)) throw std::invalid_argument("field.height must be > 0");
  if (!(range.value() > 0.0)) throw std::invalid_argument("field.range must be > 0");
  if (!(v_min.value() >= 0.0)) throw std::invalid_argument("field.v_min must be >= 0");
  if (!(v_max >= v_min)) throw std::invalid_argument("field.v_max must be >= field.v_min");
  if (!(v_floor.value() > 0.0)) throw std::invalid_argument("field.v_floor must be > 0");
  if (!(pause.value() >= 0.0)) throw std::invalid_argument("field.pause_s must be >= 0");
}

Leg NextLeg(const FieldParams& field, Point from, SimTime now, Rng& rng) {
  if (field.is_static()) {
    return Leg{from, from, MetersPerSecond(0.0), now, SimTime::Max(),
               SimTime::Max()};
  }
  const Point to{rng.Uniform(0.0, field.width.value()),
                 rng.Uniform(0.0, field.height.value())};
  // A v_max below the floor pins the speed at v_max.
  const double hi = field.v_max.value();
  const double lo = std::min(std::max(field.v_min.value(), field.v_floor.value()), hi);
  const MetersPerSecond speed(lo == hi ? lo : rng.Uniform(lo, hi));
  const Seconds travel = TravelTime(Distance(from, to), speed);
  const SimTime arrive = now + ToMicros(travel);
  const Seconds pause =
      field.random_pause ? Seconds(rng.Uniform(0.0, field.pause.value()))
                         : field.pause;
  return Leg{from, to, speed, now, arrive, arrive + ToMicros(pause)};
}

Point PositionAt(const Leg& leg, SimTime t) {
  if (t < leg.depart) {
    throw std::invalid_argument("PositionAt: time precedes leg departure");
  }
  if (t >= leg.arrive) return leg.to;
  const double span = static_cast<double>((leg.arrive - leg.depart).value());
  const double f = static_cast<double>((t - leg.depart).value()) / span;
  return Point{leg.from.x_m + f * (leg.to.x_m - leg.from.x_m),
               leg.from.y_m + f * (leg.to.y_m - leg.from.y_m)};
}

MobilityModel::MobilityModel(const FieldParams& field, int node_count,
                             std::uint64_t seed)
    : field_(field) {
  field_.Validate();
  if (node_count < 0) throw std::invalid_argument("node_count must be >= 0");
  nodes_.reserve(static_cast<std::size_t>(node_count));
  for (int i = 0; i < node_count; ++i) {
    NodeTrack node{Rng::ForStream(seed, kMobilityStreamBase + i), {}, false};
    const Point start{node.rng.Uniform(0.0, field_.width.value()),
                      node.rng.Uniform(0.0, field_.height.value())};
    node.legs.push_back(NextLeg(field_, start, SimTime::Zero(), node.rng));
    nodes_.push_back(std::move(node));
  }
}

MobilityModel MobilityModel::FromScript(const FieldParams& field,
                                        std::vector<std::vector<Leg>> legs) {
  MobilityModel model(field);
  for (auto& track : legs) {
    if (track.empty()) throw std::invalid_argument("FromScript: empty track");
    for (std::size_t i = 1; i < track.size(); ++i) {
      if (track[i].depart != track[i - 1].pause_until) {
        throw std::invalid_argument("FromScript: legs are not contiguous");
      }
    }
    // Hold the final position forever.
    const Leg& last = track.back();
    track.push_back(Leg{last.to, last.to, MetersPerSecond(0.0), last.pause_until,
                        SimTime::Max(), SimTime::Max()});
    model.nodes_.push_back(NodeTrack{Rng(0), std::move(track), true});
  }
  return model;
}

void MobilityModel::ExtendTo(NodeTrack& node, SimTime t) {
  while (node.legs.back().pause_until <= t) {
    const Leg& last = node.legs.back();
    node.legs.push_back(NextLeg(field_, last.to, last.pause_until, node.rng));
  }
}

const std::vector<Leg>& MobilityModel::LegsUntil(int node, SimTime t) {
  NodeTrack& track = nodes_.at(static_cast<std::size_t>(node));
  ExtendTo(track, t);
  return track.legs;
}

Point MobilityModel::PositionOf(int node, SimTime t) {
  const std::vector<Leg>& legs = LegsUntil(node, t);
  // First leg whose pause ends after t.
  auto it = std::upper_bound(
      legs.begin(), legs.end(), t,
      [](SimTime value, const Leg& leg) { return value < leg.pause_until; });
  if (it == legs.end()) --it;
  if (t < it->depart) return it->from;
  return PositionAt(*it, t);
}

std::vector<Interval> OutageSchedule(MobilityModel& model,
                                     const std::vector<int>& path,
                                     SimTime horizon, Seconds dt) {
  if (!(dt.value() > 0.0)) throw std::invalid_argument("OutageSchedule: dt must be > 0");
  const Micros step = ToMicros(dt);
  if (step.value() <= 0) throw std::invalid_argument("OutageSchedule: dt below 1us");

  std::vector<Interval> out;
  bool down = false;
  SimTime start;
  for (std::int64_t k = 0;; ++k) {
    const SimTime t(k * step.value());
    if (t > horizon) break;
    bool path_down = false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (!LinkUp(model.PositionOf(path[i], t), model.PositionOf(path[i + 1], t),
                  model.field().range)) {
        path_down = true;
        break;
      }
    }
    if (path_down && !down) {
      down = true;
      start = t;
    } else if (!path_down && down) {
      down = false;
      out.push_back(Interval{start, t});
    }
  }
  if (down) out.push_back(Interval{start, horizon});
  return out;
}

}  // namespace ubtcp
