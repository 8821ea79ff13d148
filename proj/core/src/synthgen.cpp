// Copyright 2026 The sfcmd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sfcmd/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "sfcmd/dubins.hpp"
#include "sfcmd/error.hpp"

namespace sfcmd::synth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEarthRadiusM = 6378137.0;
constexpr double kWheelbaseM = 2.98;
constexpr double kSteeringRatio = 16.0;

double rad(double deg) { return deg * kPi / 180.0; }

double wrap_pi(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

double compass_to_math(double compass_deg) { return kPi / 2.0 - rad(compass_deg); }

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;  // counter-clockwise from east
};

struct Element {
  double length = 0.0;
  double curvature = 0.0;  // signed, left positive
};

Pose advance(Pose p, const Element& e, double s) {
  if (e.curvature == 0.0) {
    p.x += s * std::cos(p.psi);
    p.y += s * std::sin(p.psi);
    return p;
  }
  const double k = e.curvature;
  const double psi1 = p.psi + k * s;
  p.x += (std::sin(psi1) - std::sin(p.psi)) / k;
  p.y += (std::cos(p.psi) - std::cos(psi1)) / k;
  p.psi = psi1;
  return p;
}

// Trapezoidal speed profile: v0 -> vc over t1, cruise, vc -> v2 over t3.
struct Profile {
  double v0 = 0.0, vc = 0.0, v2 = 0.0, t1 = 0.0, t3 = 0.0, total = 0.0;

  double speed(double t) const {
    if (t < t1) return v0 + (vc - v0) * t / t1;
    if (t > total - t3 && t3 > 0.0) return vc + (v2 - vc) * (t - (total - t3)) / t3;
    return vc;
  }
  double accel(double t) const {
    if (t < t1) return (vc - v0) / t1;
    if (t > total - t3 && t3 > 0.0) return (v2 - vc) / t3;
    return 0.0;
  }
  double distance(double t) const {
    if (t <= t1) return v0 * t + 0.5 * (vc - v0) / std::max(t1, 1e-12) * t * t;
    const double d1 = 0.5 * (v0 + vc) * t1;
    const double cruise_end = total - t3;
    if (t <= cruise_end) return d1 + vc * (t - t1);
    const double u = t - cruise_end;
    return d1 + vc * (cruise_end - t1) + vc * u + 0.5 * (v2 - vc) / t3 * u * u;
  }
  double length() const { return distance(total); }
};

struct Piece {
  Micros start_us = 0;
  Micros duration_us = 0;
  Profile profile;
  std::vector<Element> path;
  Pose start;
  std::optional<Roundabout> roundabout;
};

Pose pose_along(const Piece& piece, double s) {
  Pose p = piece.start;
  for (const Element& e : piece.path) {
    if (s <= e.length) return advance(p, e, s);
    p = advance(p, e, e.length);
    s -= e.length;
  }
  return p;
}

double curvature_at(const Piece& piece, double s) {
  for (const Element& e : piece.path) {
    if (s < e.length) return e.curvature;
    s -= e.length;
  }
  return piece.path.empty() ? 0.0 : piece.path.back().curvature;
}

Pose end_pose(const Piece& piece) {
  Pose p = piece.start;
  for (const Element& e : piece.path) p = advance(p, e, e.length);
  return p;
}

double quantize_duration(double t, double q) { return std::max(q, std::round(t / q) * q); }

Micros to_us(double s) { return static_cast<Micros>(std::llround(s * 1e6)); }

struct RoundaboutPlan {
  std::vector<Element> path;
  double speed = 0.0;
  double duration = 0.0;
};

RoundaboutPlan plan_roundabout(const Roundabout& r, const DriverModel& driver, double quantum) {
  const double v_nom = r.speed.value_or(std::sqrt(driver.circulating_accel * r.radius_m));
  const double r_e = v_nom * v_nom / driver.deflection_accel;
  const double theta_e = rad(driver.deflection_deg);
  const double theta_c = 2.0 * kPi * r.exit_index / r.exits_total;
  RoundaboutPlan plan;
  plan.path = {{r_e * theta_e, -1.0 / r_e}, {r.radius_m * theta_c, 1.0 / r.radius_m}, {r_e * theta_e, -1.0 / r_e}};
  double length = 0.0;
  for (const Element& e : plan.path) length += e.length;
  plan.duration = quantize_duration(length / v_nom, quantum);
  plan.speed = length / plan.duration;
  return plan;
}

std::optional<double> entry_speed(const Segment& seg, const DriverModel& driver, double quantum) {
  if (const auto* t = std::get_if<Turn>(&seg)) {
    const double length = t->radius_m * std::abs(rad(t->arc_deg));
    return length / quantize_duration(length / t->speed, quantum);
  }
  if (const auto* r = std::get_if<Roundabout>(&seg)) return plan_roundabout(*r, driver, quantum).speed;
  return std::nullopt;
}

// Ramp durations at the driver's limit, squeezed to fit `total` if needed.
void set_ramps(Profile& p, double a_max, double total) {
  p.t1 = std::abs(p.vc - p.v0) / a_max;
  p.t3 = std::abs(p.v2 - p.vc) / a_max;
  if (p.t1 + p.t3 > total) {
    const double scale = total / (p.t1 + p.t3);
    p.t1 *= scale;
    p.t3 *= scale;
  }
  p.total = total;
}

// Straight of exact length: quantize the duration and re-solve the cruise speed.
Profile straight_profile(double length, double v0, double vc, double v2, double a_max, double quantum) {
  Profile p{v0, vc, v2, 0.0, 0.0, 0.0};
  double t1 = std::abs(vc - v0) / a_max;
  double t3 = std::abs(v2 - vc) / a_max;
  const double ramps = 0.5 * (v0 + vc) * t1 + 0.5 * (vc + v2) * t3;
  double nominal = 0.0;
  if (length >= ramps) {
    nominal = t1 + t3 + (length - ramps) / vc;
  } else {
    nominal = 2.0 * length / (v0 + v2);
  }
  double total = quantize_duration(nominal, quantum);
  for (int attempt = 0; attempt < 200; ++attempt, total += quantum) {
    double a = t1, b = t3;
    if (length < ramps) {
      a = b = total / 2.0;
    } else if (a + b > total) {
      const double scale = total / (a + b);
      a *= scale;
      b *= scale;
    }
    const double denom = total - 0.5 * (a + b);
    const double cruise = (length - 0.5 * v0 * a - 0.5 * v2 * b) / denom;
    if (cruise > 0.3) {
      p.vc = cruise;
      p.t1 = a;
      p.t3 = b;
      p.total = total;
      return p;
    }
  }
  throw Error(ErrorKind::invalid_argument, "straight segment cannot be timed");
}

class Builder {
 public:
  Builder(const TripScript& script, const LocalFrame& frame)
      : script_(script), frame_(frame), quantum_(script.time_quantum_s) {
    pose_ = {script.start.x, script.start.y, compass_to_math(script.start_heading_deg)};
    speed_ = script.start_speed;
  }

  std::vector<Piece> run() {
    // Connect segments are planned from the pose reached when they come up.
    std::vector<Segment> queue(script_.segments.begin(), script_.segments.end());
    for (std::size_t i = 0; i < queue.size(); ++i) {
      if (const auto* c = std::get_if<Connect>(&queue[i])) {
        std::vector<Segment> expansion = expand(*c);
        queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(i));
        queue.insert(queue.begin() + static_cast<std::ptrdiff_t>(i), expansion.begin(), expansion.end());
      }
      std::optional<double> next;
      if (i + 1 < queue.size()) next = entry_speed(queue[i + 1], script_.driver, quantum_);
      emit(queue[i], next);
    }
    return std::move(pieces_);
  }

 private:
  std::vector<Segment> expand(const Connect& c) const {
    const Xy target = frame_.to_local(c.target);
    const double psi_t = compass_to_math(c.heading_deg);
    const std::array<double, 3> from{pose_.x + c.departure_m * std::cos(pose_.psi),
                                     pose_.y + c.departure_m * std::sin(pose_.psi), pose_.psi};
    const std::array<double, 3> to{target.x - c.approach_m * std::cos(psi_t),
                                   target.y - c.approach_m * std::sin(psi_t), psi_t};
    const DubinsPath path = shortest_csc(from, to, c.turn_radius_m);
    std::vector<Segment> out;
    out.push_back(Straight{0.0, c.departure_m, c.cruise_speed});
    constexpr double kMinArc = 1e-4;
    if (path.first_arc > kMinArc) {
      const double deg = path.first_arc * 180.0 / kPi;
      out.push_back(Turn{c.turn_radius_m, path.first_left() ? deg : -deg, c.turn_speed});
    }
    if (path.straight > 0.5) out.push_back(Straight{0.0, path.straight, c.cruise_speed});
    if (path.second_arc > kMinArc) {
      const double deg = path.second_arc * 180.0 / kPi;
      out.push_back(Turn{c.turn_radius_m, path.second_left() ? deg : -deg, c.turn_speed});
    }
    out.push_back(Straight{0.0, c.approach_m, c.cruise_speed});
    return out;
  }

  void push(Piece piece) {
    piece.start_us = clock_us_;
    piece.start = pose_;
    clock_us_ += piece.duration_us;
    pose_ = end_pose(piece);
    speed_ = piece.profile.speed(piece.profile.total);
    pieces_.push_back(std::move(piece));
  }

  void emit(const Segment& seg, std::optional<double> next_speed) {
    const double a_max = script_.driver.max_long_accel;
    if (const auto* s = std::get_if<Straight>(&seg)) {
      const double v2 = next_speed.value_or(s->speed);
      Profile profile;
      if (s->length_m > 0.0) {
        profile = straight_profile(s->length_m, speed_, s->speed, v2, a_max, quantum_);
      } else {
        profile = {speed_, s->speed, v2, 0.0, 0.0, 0.0};
        set_ramps(profile, a_max, quantize_duration(s->duration_s, quantum_));
      }
      Piece piece;
      piece.profile = profile;
      piece.duration_us = to_us(profile.total);
      piece.path = {{profile.length(), 0.0}};
      push(std::move(piece));
    } else if (const auto* t = std::get_if<Turn>(&seg)) {
      const double length = t->radius_m * std::abs(rad(t->arc_deg));
      const double total = quantize_duration(length / t->speed, quantum_);
      const double v = length / total;
      Piece piece;
      piece.profile = {v, v, v, 0.0, 0.0, total};
      piece.duration_us = to_us(total);
      piece.path = {{length, (t->arc_deg >= 0.0 ? 1.0 : -1.0) / t->radius_m}};
      push(std::move(piece));
    } else if (const auto* r = std::get_if<Roundabout>(&seg)) {
      if (r->entry_heading_deg) {
        const double diff = wrap_pi(pose_.psi - compass_to_math(*r->entry_heading_deg));
        if (std::abs(diff) > rad(2.0)) {
          throw Error(ErrorKind::invalid_argument, "roundabout " + r->id + ": arrival heading differs from entry_heading_deg");
        }
      }
      const RoundaboutPlan plan = plan_roundabout(*r, script_.driver, quantum_);
      Piece piece;
      piece.profile = {plan.speed, plan.speed, plan.speed, 0.0, 0.0, plan.duration};
      piece.duration_us = to_us(plan.duration);
      piece.path = plan.path;
      piece.roundabout = *r;
      push(std::move(piece));
    }
  }

  const TripScript& script_;
  const LocalFrame& frame_;
  double quantum_;
  Pose pose_;
  double speed_ = 0.0;
  Micros clock_us_ = 0;
  std::vector<Piece> pieces_;
};

std::vector<double> lagged_rate(const std::vector<double>& angle, double fs, double tau_s) {
  std::vector<double> out(angle.size(), 0.0);
  const double alpha = (1.0 / fs) / (tau_s + 1.0 / fs);
  double filtered = angle.empty() ? 0.0 : angle.front();
  for (std::size_t i = 0; i < angle.size(); ++i) {
    const double prev = filtered;
    filtered += alpha * (angle[i] - filtered);
    out[i] = (filtered - prev) * fs;
  }
  return out;
}

}  // namespace

LocalFrame::LocalFrame(LatLon origin)
    : origin_(origin),
      metres_per_deg_lat_(kEarthRadiusM * kPi / 180.0),
      metres_per_deg_lon_(kEarthRadiusM * kPi / 180.0 * std::cos(rad(origin.lat))) {}

Xy LocalFrame::to_local(LatLon p) const noexcept {
  return {(p.lon - origin_.lon) * metres_per_deg_lon_, (p.lat - origin_.lat) * metres_per_deg_lat_};
}

LatLon LocalFrame::to_geo(Xy p) const noexcept {
  return {origin_.lat + p.y / metres_per_deg_lat_, origin_.lon + p.x / metres_per_deg_lon_};
}

std::map<Signal, double> TripScript::default_noise() {
  return {{Signal::accel_lat, 0.05},   {Signal::accel_lon, 0.05},   {Signal::accel_vert, 0.05},
          {Signal::speed, 0.02},       {Signal::steering_angle, 0.01}, {Signal::yaw_rate, 0.005},
          {Signal::pitch_rate, 0.005}, {Signal::roll_rate, 0.005},  {Signal::heading, 0.002}};
}

void TripScript::validate() const {
  if (!is_supported_frequency(base_hz)) throw Error(ErrorKind::invalid_argument, "unsupported base_hz");
  if (!(time_quantum_s > 0.0)) throw Error(ErrorKind::invalid_argument, "time_quantum_s must be positive");
  if (!(start_speed > 0.0)) throw Error(ErrorKind::invalid_argument, "start_speed must be positive");
  if (!(gps_noise_m >= 0.0)) throw Error(ErrorKind::invalid_argument, "gps_noise_m must be non-negative");
  for (const auto& [signal, sigma] : noise) {
    if (!(sigma >= 0.0)) throw Error(ErrorKind::invalid_argument, "noise sigma must be non-negative");
  }
  if (!(driver.circulating_accel > 0.0 && driver.deflection_accel > 0.0 && driver.max_long_accel > 0.0 &&
        driver.deflection_deg > 0.0 && driver.deflection_deg < 90.0)) {
    throw Error(ErrorKind::invalid_argument, "invalid driver model");
  }
  if (segments.empty()) throw Error(ErrorKind::invalid_argument, "script has no segments");
  for (const Segment& seg : segments) {
    if (const auto* s = std::get_if<Straight>(&seg)) {
      if (!(s->speed > 0.0) || !((s->duration_s > 0.0) != (s->length_m > 0.0))) {
        throw Error(ErrorKind::invalid_argument, "straight needs a positive speed and exactly one of duration_s, length_m");
      }
    } else if (const auto* t = std::get_if<Turn>(&seg)) {
      if (!(t->radius_m > 0.0 && t->speed > 0.0 && t->arc_deg != 0.0)) {
        throw Error(ErrorKind::invalid_argument, "turn needs positive radius, speed and a non-zero arc");
      }
    } else if (const auto* r = std::get_if<Roundabout>(&seg)) {
      if (r->id.empty() || !(r->radius_m > 0.0) || r->exits_total < 1 || r->exit_index < 1 ||
          (r->speed && !(*r->speed > 0.0))) {
        throw Error(ErrorKind::invalid_argument, "invalid roundabout segment");
      }
    } else if (const auto* c = std::get_if<Connect>(&seg)) {
      if (!(c->cruise_speed > 0.0 && c->turn_radius_m > 0.0 && c->turn_speed > 0.0 && c->departure_m > 0.0 &&
            c->approach_m > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "invalid connect segment");
      }
    }
  }
}

SynthOutput generate(const TripScript& script) {
  script.validate();
  const LocalFrame frame(script.origin);
  const std::vector<Piece> pieces = Builder(script, frame).run();
  const Micros total_us = pieces.back().start_us + pieces.back().duration_us;
  const int fs = script.base_hz;
  const Micros step = kMicrosPerSecond / fs;
  const auto n = static_cast<std::size_t>(total_us / step);

  std::vector<double> ax(n), ay(n), v(n), steer(n), yaw(n), heading(n), xs(n), ys(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Micros t = static_cast<Micros>(i) * step;
    while (k + 1 < pieces.size() && t >= pieces[k].start_us + pieces[k].duration_us) ++k;
    const Piece& piece = pieces[k];
    const double tau = to_seconds(t - piece.start_us);
    const double s = piece.profile.distance(tau);
    const double speed = piece.profile.speed(tau);
    const double kappa = curvature_at(piece, s);
    const Pose pose = pose_along(piece, s);
    ax[i] = speed * speed * kappa;
    ay[i] = piece.profile.accel(tau);
    v[i] = speed;
    yaw[i] = speed * kappa;
    steer[i] = kSteeringRatio * std::atan(kWheelbaseM * kappa);
    double compass = std::fmod(kPi / 2.0 - pose.psi, 2.0 * kPi);
    if (compass < 0.0) compass += 2.0 * kPi;
    heading[i] = compass;
    xs[i] = pose.x;
    ys[i] = pose.y;
  }

  std::vector<double> az(n, 0.0);
  if (script.speed_bumps) {
    for (const Piece& piece : pieces) {
      if (!piece.roundabout) continue;
      const Micros bump = piece.start_us - 2 * kMicrosPerSecond;
      for (std::size_t i = 0; i < n; ++i) {
        const double u = to_seconds(static_cast<Micros>(i) * step - bump);
        if (u >= 0.0 && u < 0.3) az[i] += 3.0 * std::sin(kPi * u / 0.3);
      }
    }
  }

  std::vector<double> roll_angle(n), pitch_angle(n);
  for (std::size_t i = 0; i < n; ++i) {
    roll_angle[i] = 0.02 * ax[i];
    pitch_angle[i] = -0.015 * ay[i];
  }
  std::vector<double> roll = lagged_rate(roll_angle, fs, 0.3);
  std::vector<double> pitch = lagged_rate(pitch_angle, fs, 0.3);

  std::mt19937_64 rng(script.seed);
  auto add_noise = [&](std::vector<double>& xs_, Signal sig) {
    const auto it = script.noise.find(sig);
    if (it == script.noise.end() || it->second == 0.0) return;
    std::normal_distribution<double> dist(0.0, it->second);
    for (double& x : xs_) x += dist(rng);
  };
  add_noise(ax, Signal::accel_lat);
  add_noise(ay, Signal::accel_lon);
  add_noise(az, Signal::accel_vert);
  add_noise(v, Signal::speed);
  add_noise(steer, Signal::steering_angle);
  add_noise(yaw, Signal::yaw_rate);
  add_noise(pitch, Signal::pitch_rate);
  add_noise(roll, Signal::roll_rate);
  add_noise(heading, Signal::heading);
  for (double& h : heading) {
    h = std::fmod(h, 2.0 * kPi);
    if (h < 0.0) h += 2.0 * kPi;
  }
  for (double& speed : v) speed = std::max(speed, 0.0);

  std::vector<double> lat(n), lon(n);
  std::normal_distribution<double> gps(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double ex = script.gps_noise_m > 0.0 ? script.gps_noise_m * gps(rng) : 0.0;
    const double ey = script.gps_noise_m > 0.0 ? script.gps_noise_m * gps(rng) : 0.0;
    const LatLon p = frame.to_geo({xs[i] + ex, ys[i] + ey});
    lat[i] = p.lat;
    lon[i] = p.lon;
  }

  SynthOutput out;
  out.series = TimeSeries(fs, 0, n);
  out.series.set_channel(Signal::accel_lat, std::move(ax));
  out.series.set_channel(Signal::accel_lon, std::move(ay));
  out.series.set_channel(Signal::accel_vert, std::move(az));
  out.series.set_channel(Signal::speed, std::move(v));
  out.series.set_channel(Signal::steering_angle, std::move(steer));
  out.series.set_channel(Signal::yaw_rate, std::move(yaw));
  out.series.set_channel(Signal::pitch_rate, std::move(pitch));
  out.series.set_channel(Signal::roll_rate, std::move(roll));
  out.series.set_channel(Signal::heading, std::move(heading));
  out.series.set_channel(Signal::gps_lat, std::move(lat));
  out.series.set_channel(Signal::gps_lon, std::move(lon));

  struct SiteAcc {
    Xy center;
    double half_width = 0.0;
  };
  std::vector<std::pair<std::string, SiteAcc>> acc;
  int pass_id = 0;
  for (const Piece& piece : pieces) {
    if (!piece.roundabout) continue;
    const Roundabout& r = *piece.roundabout;
    AnnotationInterval a;
    a.pass_id = ++pass_id;
    a.roundabout_id = r.id;
    a.span = {piece.start_us, piece.start_us + piece.duration_us};
    a.exits_total = r.exits_total;
    a.exit_taken = r.exit_index;
    out.annotations.push_back(a);

    auto it = std::find_if(acc.begin(), acc.end(), [&](const auto& e) { return e.first == r.id; });
    if (it == acc.end()) {
      const Pose p = advance(piece.start, piece.path[0], piece.path[0].length);
      SiteAcc site;
      site.center = {p.x - r.radius_m * std::sin(p.psi), p.y + r.radius_m * std::cos(p.psi)};
      acc.emplace_back(r.id, site);
      out.sites.push_back({r.id, frame.to_geo(site.center), r.radius_m});
      it = std::prev(acc.end());
    }
    const std::size_t first = static_cast<std::size_t>(a.span.begin / step);
    const std::size_t last = std::min(n, static_cast<std::size_t>(a.span.end / step));
    for (std::size_t i = first; i < last; ++i) {
      const double cheb = std::max(std::abs(xs[i] - it->second.center.x), std::abs(ys[i] - it->second.center.y));
      it->second.half_width = std::max(it->second.half_width, cheb);
    }
  }
  for (const auto& [id, site] : acc) {
    out.fences.push_back(Geofence::square(id, frame.to_geo(site.center), site.half_width + script.fence_margin_m));
  }
  return out;
}

Geofence oversized_fence(const SynthOutput& trip, const std::string& id, double clearance_s) {
  const auto site = std::find_if(trip.sites.begin(), trip.sites.end(), [&](const auto& s) { return s.id == id; });
  if (site == trip.sites.end()) throw Error(ErrorKind::invalid_argument, "unknown roundabout id " + id);
  const LocalFrame frame(site->center);
  const auto lat = trip.series.channel(Signal::gps_lat);
  const auto lon = trip.series.channel(Signal::gps_lon);
  const Micros clearance = from_seconds(clearance_s);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trip.series.size(); ++i) {
    const Micros t = trip.series.timestamp(i);
    const bool clear = std::all_of(trip.annotations.begin(), trip.annotations.end(), [&](const auto& a) {
      return t + clearance <= a.span.begin || t >= a.span.end + clearance;
    });
    if (!clear) continue;
    const Xy p = frame.to_local({lat[i], lon[i]});
    best = std::min(best, std::max(std::abs(p.x), std::abs(p.y)));
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::invalid_argument, "trip never drives clear of its passes");
  const auto fence = std::find_if(trip.fences.begin(), trip.fences.end(), [&](const auto& f) { return f.id() == id; });
  double current = 0.0;
  if (fence != trip.fences.end()) {
    for (const LatLon& v : fence->polygon()) {
      const Xy p = frame.to_local(v);
      current = std::max(current, std::max(std::abs(p.x), std::abs(p.y)));
    }
  }
  return Geofence::square(id, site->center, std::max(best + 5.0, current));
}

namespace {

struct SiteDef {
  const char* id;
  LatLon center;
  double radius_m;
  int exits_total;
  double first_arm_deg;  // polar angle of arm 0, counter-clockwise from east
};

constexpr SiteDef kSites[] = {
    {"RA1", {57.70974, 11.91848}, 8.0, 4, 0.0},    {"RA2", {57.70207, 11.91152}, 13.0, 4, 0.0},
    {"RA3", {57.70655, 11.92202}, 11.0, 5, -90.0}, {"RA4", {57.70998, 11.92721}, 13.0, 4, 45.0},
    {"RA5", {57.71007, 11.93112}, 14.0, 4, 0.0},   {"RA6", {57.70771, 11.93477}, 26.0, 4, 0.0},
    {"RA7", {57.71113, 11.94337}, 24.0, 4, 0.0},
};

struct PassDef {
  int site;  // index into kSites
  int exit_index;
};

// Exit pattern of the recorded reference drive.
constexpr PassDef kPasses[] = {{0, 3}, {1, 2}, {2, 6}, {2, 2}, {3, 2}, {4, 4}, {3, 1}, {4, 2}, {5, 1},
                               {5, 1}, {6, 1}, {6, 4}, {6, 1}, {4, 2}, {3, 8}, {4, 5}, {5, 14}};

// Local metres (east, north) of the filler loops driven between passes.
constexpr Xy kDetours[] = {{-900, 900},  {-1200, -1800}, {300, -1900}, {900, 1200},   {-300, 1500}, {2100, 800},
                           {600, -1900}, {2200, -1400},  {1600, 1700}, {2600, 900},   {2700, -600}, {600, 1900},
                           {-400, 1300}, {1800, -2000},  {200, 2000},  {2400, -1600}};

constexpr Xy kDetourHub{700.0, -200.0};
constexpr double kDetourScale = 0.465;

// Transit legs keep this far from roundabouts they do not pass through.
constexpr double kSiteClearanceM = 110.0;

double compass_of(Xy from, Xy to) {
  const double deg = 90.0 - std::atan2(to.y - from.y, to.x - from.x) * 180.0 / kPi;
  return std::fmod(deg + 720.0, 360.0);
}

// Appends via points so the straight line from `from` to `to` clears every
// site other than `skip_a` and `skip_b`.
void route_around_sites(TripScript& script, const LocalFrame& frame, Xy from, Xy to, int skip_a, int skip_b) {
  for (int guard = 0; guard < 4; ++guard) {
    const double dx = to.x - from.x, dy = to.y - from.y;
    const double len2 = dx * dx + dy * dy;
    int worst = -1;
    double worst_dist = kSiteClearanceM;
    Xy foot{};
    for (int k = 0; k < static_cast<int>(std::size(kSites)); ++k) {
      if (k == skip_a || k == skip_b) continue;
      const Xy c = frame.to_local(kSites[k].center);
      const double t = len2 > 0.0 ? std::clamp(((c.x - from.x) * dx + (c.y - from.y) * dy) / len2, 0.0, 1.0) : 0.0;
      const Xy q{from.x + t * dx, from.y + t * dy};
      const double dist = std::hypot(q.x - c.x, q.y - c.y);
      if (dist < worst_dist) {
        worst_dist = dist;
        worst = k;
        foot = q;
      }
    }
    if (worst < 0) return;
    const Xy c = frame.to_local(kSites[worst].center);
    // Step off to the side of the line the site is not on.
    double nx = -dy, ny = dx;
    const double nlen = std::hypot(nx, ny);
    nx /= nlen;
    ny /= nlen;
    if ((foot.x - c.x) * nx + (foot.y - c.y) * ny < 0.0) {
      nx = -nx;
      ny = -ny;
    }
    const Xy via{c.x + 1.6 * kSiteClearanceM * nx, c.y + 1.6 * kSiteClearanceM * ny};
    Connect hop;
    hop.target = frame.to_geo(via);
    hop.heading_deg = compass_of(from, to);
    script.segments.push_back(hop);
    from = via;
  }
}

}  // namespace

TripScript reference_script() {
  TripScript script;
  script.noise = TripScript::default_noise();
  const LocalFrame frame(script.origin);
  const DriverModel& driver = script.driver;
  script.start = {-450.0, -60.0};
  script.start_heading_deg = 90.0;
  script.segments.push_back(Straight{12.0, 0.0, 8.3});

  Xy previous = script.start;
  int previous_site = -1;
  int previous_exit_arm = 0;
  const std::size_t count = std::size(kPasses);
  for (std::size_t p = 0; p < count; ++p) {
    const SiteDef& site = kSites[kPasses[p].site];
    const Xy c = frame.to_local(site.center);
    const double arm_step = 2.0 * kPi / site.exits_total;
    int arm = 0;
    if (kPasses[p].site == previous_site) {
      arm = previous_exit_arm;
    } else {
      const double bearing = std::atan2(previous.y - c.y, previous.x - c.x);
      double best = std::numeric_limits<double>::infinity();
      for (int a = 0; a < site.exits_total; ++a) {
        const double d = std::abs(wrap_pi(bearing - (rad(site.first_arm_deg) + a * arm_step)));
        if (d < best) {
          best = d;
          arm = a;
        }
      }
    }
    // Work back from the circulation start to where the entry deflection begins.
    const double phi = rad(site.first_arm_deg) + arm * arm_step;
    const double v_nom = std::sqrt(driver.circulating_accel * site.radius_m);
    const double r_e = v_nom * v_nom / driver.deflection_accel;
    const double psi_p = phi + kPi / 2.0;
    const double psi_s = psi_p + rad(driver.deflection_deg);
    const Xy pc{c.x + site.radius_m * std::cos(phi), c.y + site.radius_m * std::sin(phi)};
    const Xy d{pc.x + r_e * std::sin(psi_p), pc.y - r_e * std::cos(psi_p)};
    const Xy s{d.x - r_e * std::sin(psi_s), d.y + r_e * std::cos(psi_s)};
    double entry_compass = std::fmod(90.0 - psi_s * 180.0 / kPi, 360.0);
    if (entry_compass < 0.0) entry_compass += 360.0;

    if (kPasses[p].site != previous_site) {
      route_around_sites(script, frame, previous, s, kPasses[p].site, previous_site);
    }
    Connect approach;
    approach.target = frame.to_geo(s);
    approach.heading_deg = entry_compass;
    script.segments.push_back(approach);
    Roundabout r;
    r.id = site.id;
    r.radius_m = site.radius_m;
    r.exit_index = kPasses[p].exit_index;
    r.exits_total = site.exits_total;
    r.entry_heading_deg = entry_compass;
    script.segments.push_back(r);

    previous_site = kPasses[p].site;
    previous_exit_arm = (arm + kPasses[p].exit_index) % site.exits_total;
    previous = {c.x + 3.0 * site.radius_m * std::cos(rad(site.first_arm_deg) + previous_exit_arm * arm_step),
                c.y + 3.0 * site.radius_m * std::sin(rad(site.first_arm_deg) + previous_exit_arm * arm_step)};

    if (p + 1 < count && p < std::size(kDetours) && kPasses[p + 1].site != kPasses[p].site) {
      const Xy w{kDetourHub.x + kDetourScale * (kDetours[p].x - kDetourHub.x),
                 kDetourHub.y + kDetourScale * (kDetours[p].y - kDetourHub.y)};
      const Xy next = frame.to_local(kSites[kPasses[p + 1].site].center);
      route_around_sites(script, frame, previous, w, previous_site, -1);
      Connect loop;
      loop.target = frame.to_geo(w);
      loop.heading_deg = compass_of(w, next);
      script.segments.push_back(loop);
      previous = w;
      previous_site = -1;
    }
  }
  script.segments.push_back(Straight{30.0, 0.0, 8.3});
  return script;
}

SynthOutput reference_trip() { return generate(reference_script()); }

TripScript script_from_json(const std::string& text) {
  using nlohmann::json;
  TripScript script;
  script.noise = TripScript::default_noise();
  try {
    const json j = json::parse(text);
    script.base_hz = j.value("base_hz", script.base_hz);
    script.time_quantum_s = j.value("time_quantum_s", script.time_quantum_s);
    script.seed = j.value("seed", script.seed);
    script.gps_noise_m = j.value("gps_noise_m", script.gps_noise_m);
    script.start_heading_deg = j.value("start_heading_deg", script.start_heading_deg);
    script.start_speed = j.value("start_speed", script.start_speed);
    script.speed_bumps = j.value("speed_bumps", script.speed_bumps);
    script.fence_margin_m = j.value("fence_margin_m", script.fence_margin_m);
    if (j.contains("origin")) script.origin = {j["origin"].at(0).get<double>(), j["origin"].at(1).get<double>()};
    if (j.contains("start")) script.start = {j["start"].at(0).get<double>(), j["start"].at(1).get<double>()};
    if (j.contains("noise")) {
      for (const auto& [name, sigma] : j["noise"].items()) script.noise[parse_signal(name)] = sigma.get<double>();
    }
    if (j.contains("driver")) {
      const json& d = j["driver"];
      script.driver.circulating_accel = d.value("circulating_accel", script.driver.circulating_accel);
      script.driver.deflection_accel = d.value("deflection_accel", script.driver.deflection_accel);
      script.driver.deflection_deg = d.value("deflection_deg", script.driver.deflection_deg);
      script.driver.max_long_accel = d.value("max_long_accel", script.driver.max_long_accel);
    }
    for (const json& s : j.at("segments")) {
      const std::string type = s.at("type").get<std::string>();
      if (type == "straight") {
        script.segments.push_back(
            Straight{s.value("duration_s", 0.0), s.value("length_m", 0.0), s.value("speed", 8.3)});
      } else if (type == "turn") {
        script.segments.push_back(Turn{s.at("radius_m").get<double>(), s.at("arc_deg").get<double>(),
                                       s.value("speed", 5.0)});
      } else if (type == "roundabout") {
        Roundabout r;
        r.id = s.at("id").get<std::string>();
        r.radius_m = s.at("radius_m").get<double>();
        r.exit_index = s.at("exit_index").get<int>();
        r.exits_total = s.value("exits_total", 4);
        if (s.contains("speed")) r.speed = s["speed"].get<double>();
        if (s.contains("entry_heading_deg")) r.entry_heading_deg = s["entry_heading_deg"].get<double>();
        script.segments.push_back(r);
      } else if (type == "connect") {
        Connect c;
        c.target = {s.at("to").at(0).get<double>(), s.at("to").at(1).get<double>()};
        c.heading_deg = s.at("heading_deg").get<double>();
        c.cruise_speed = s.value("cruise_speed", c.cruise_speed);
        c.turn_radius_m = s.value("turn_radius_m", c.turn_radius_m);
        c.turn_speed = s.value("turn_speed", c.turn_speed);
        c.departure_m = s.value("departure_m", c.departure_m);
        c.approach_m = s.value("approach_m", c.approach_m);
        script.segments.push_back(c);
      } else {
        throw Error(ErrorKind::parse, "unknown segment type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("trip script: ") + e.what());
  }
  script.validate();
  return script;
}

}  // namespace sfcmd::synth
