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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "sfcmd/error.hpp"
#include "sfcmd/timeseries.hpp"

using namespace sfcmd;

namespace {

ErrorKind kind_of_parse(const std::string& text, int hz) {
  try {
    parse_csv(text, hz);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::io;
}

TimeSeries ramp(int hz, std::size_t n) {
  TimeSeries s(hz, 0, n);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<double>(i);
    b[i] = -static_cast<double>(i);
  }
  s.set_channel(Signal::accel_lon, a);
  s.set_channel(Signal::accel_lat, b);
  return s;
}

}  // namespace

TEST(Catalog, AvailabilityMatrix) {
  EXPECT_TRUE(available_at(Signal::steering_angle, 5));
  EXPECT_TRUE(available_at(Signal::steering_angle, 10));
  EXPECT_FALSE(available_at(Signal::steering_angle, 20));
  EXPECT_TRUE(available_at(Signal::steering_angle, 50));
  EXPECT_FALSE(available_at(Signal::steering_angle, 100));
  EXPECT_TRUE(available_at(Signal::gps_lat, 20));
  EXPECT_FALSE(available_at(Signal::gps_lon, 100));
  EXPECT_FALSE(available_at(Signal::heading, 50));
  for (int hz : kSupportedFrequencies) {
    EXPECT_TRUE(available_at(Signal::accel_lat, hz));
    EXPECT_TRUE(available_at(Signal::yaw_rate, hz));
  }
  EXPECT_FALSE(available_at(Signal::accel_lat, 25));
  EXPECT_EQ(signal_catalog().size(), kSignalCount);
}

TEST(Catalog, CanonicalOrderPutsExperimentSignalsFirst) {
  const auto order = canonical_order({Signal::yaw_rate, Signal::speed, Signal::accel_lat, Signal::steering_angle,
                                      Signal::accel_lon});
  const std::vector<Signal> expected{Signal::accel_lat, Signal::accel_lon, Signal::steering_angle, Signal::yaw_rate,
                                     Signal::speed};
  EXPECT_EQ(order, expected);
  EXPECT_EQ(parse_signal("ax"), Signal::accel_lat);
  EXPECT_EQ(parse_signal("yaw_rate"), Signal::yaw_rate);
  EXPECT_THROW(parse_signal("bogus"), Error);
}

TEST(Csv, ParsesAndWarnsOnUnknownColumns) {
  const std::string text =
      "\xEF\xBB\xBFtimestamp_us,accel_lat,extra,accel_lon\n"
      "1000000,0.5,1,2\n"
      "1100000,0.25,1,3\n"
      "\n"
      "1200000,0.125,1,4\n";
  const CsvLoadResult r = parse_csv(text, 10);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.series.size(), 3u);
  EXPECT_EQ(r.series.start_us(), 1'000'000);
  EXPECT_EQ(r.series.timestamp(2), 1'200'000);
  EXPECT_DOUBLE_EQ(r.series.channel(Signal::accel_lat)[2], 0.125);
  EXPECT_DOUBLE_EQ(r.series.channel(Signal::accel_lon)[0], 2.0);
  EXPECT_FALSE(r.series.has(Signal::speed));
}

TEST(Csv, Errors) {
  EXPECT_EQ(kind_of_parse("", 10), ErrorKind::empty_series);
  EXPECT_EQ(kind_of_parse("timestamp_us,accel_lat\n", 10), ErrorKind::empty_series);
  EXPECT_EQ(kind_of_parse("accel_lat\n0.1\n", 10), ErrorKind::parse);
  EXPECT_EQ(kind_of_parse("timestamp_us,accel_lat\n0,1\n100000\n", 10), ErrorKind::parse);
  EXPECT_EQ(kind_of_parse("timestamp_us,accel_lat\n0,abc\n", 10), ErrorKind::parse);
  EXPECT_EQ(kind_of_parse("timestamp_us,accel_lat\n0,1\n0,1\n", 10), ErrorKind::non_monotone_timestamps);
  EXPECT_EQ(kind_of_parse("timestamp_us,accel_lat\n0,1\n50000,1\n", 10), ErrorKind::frequency_mismatch);
  // 0.9% jitter is tolerated, 1.1% is not.
  EXPECT_NO_THROW(parse_csv("timestamp_us,accel_lat\n0,1\n100900,1\n", 10));
  EXPECT_EQ(kind_of_parse("timestamp_us,accel_lat\n0,1\n101100,1\n", 10), ErrorKind::frequency_mismatch);
}

TEST(Csv, WriteReadRoundTrip) {
  const TimeSeries s = ramp(20, 40);
  const auto path = std::filesystem::temp_directory_path() / "sfcmd_roundtrip.csv";
  write_csv(s, path);
  const TimeSeries back = load_csv(path, 20).series;
  EXPECT_EQ(back.size(), s.size());
  EXPECT_EQ(back.span(), s.span());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_DOUBLE_EQ(back.channel(Signal::accel_lon)[i], s.channel(Signal::accel_lon)[i]);
  }
  std::filesystem::remove(path);
}

TEST(TimeSeries, ChannelLengthMustMatch) {
  TimeSeries s(10, 0, 3);
  EXPECT_THROW(s.set_channel(Signal::speed, {1.0, 2.0}), Error);
  try {
    s.channel(Signal::speed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::missing_channel);
  }
}

TEST(TimeSeries, SliceIsHalfOpen) {
  const TimeSeries s = ramp(10, 100);
  const TimeSeries w = s.slice({1'000'000, 2'000'000});
  EXPECT_EQ(w.size(), 10u);
  EXPECT_EQ(w.start_us(), 1'000'000);
  EXPECT_DOUBLE_EQ(w.channel(Signal::accel_lon)[0], 10.0);
  EXPECT_EQ(s.slice({1'050'000, 1'100'001}).size(), 1u);
}

TEST(Downsample, KeepsEveryKthSampleFromTheFirst) {
  const TimeSeries s = ramp(100, 1003);
  const TimeSeries d = downsample(s, 10);
  EXPECT_EQ(d.frequency(), 10);
  EXPECT_EQ(d.size(), 101u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d.timestamp(i), s.timestamp(i * 10));
    EXPECT_DOUBLE_EQ(d.channel(Signal::accel_lon)[i], s.channel(Signal::accel_lon)[i * 10]);
  }
  EXPECT_EQ(downsample(s, 20).size(), 201u);
  EXPECT_THROW(downsample(ramp(50, 10), 20), Error);
  EXPECT_THROW(downsample(ramp(10, 10), 20), Error);
}

TEST(Normalize, MinMaxClampsToUnitInterval) {
  TimeSeries s(10, 0, 4);
  s.set_channel(Signal::accel_lat, {-6.0, 0.0, 3.0, 9.0});
  s.set_channel(Signal::yaw_rate, {-2.0, 0.0, 0.6, 1.2});
  const TimeSeries n = normalize(s, NormalizationSpec::defaults());
  const auto ax = n.channel(Signal::accel_lat);
  EXPECT_DOUBLE_EQ(ax[0], 0.0);
  EXPECT_DOUBLE_EQ(ax[1], 0.5);
  EXPECT_DOUBLE_EQ(ax[2], 0.75);
  EXPECT_DOUBLE_EQ(ax[3], 1.0);
  EXPECT_DOUBLE_EQ(n.channel(Signal::yaw_rate)[0], 0.0);
  EXPECT_DOUBLE_EQ(n.channel(Signal::yaw_rate)[2], 0.75);

  NormalizationSpec none;
  EXPECT_EQ(normalize(s, none).channel(Signal::accel_lat)[3], 9.0);

  NormalizationSpec partial;
  partial.mode = NormalizationMode::min_max;
  partial.bounds[Signal::accel_lat] = {0.0, 1.0};
  EXPECT_THROW(normalize(s, partial), Error);
  partial.bounds[Signal::yaw_rate] = {1.0, 1.0};
  EXPECT_THROW(normalize(s, partial), Error);
}

TEST(Project, OrdersAndChecksAvailability) {
  TimeSeries s(20, 0, 2);
  s.set_channel(Signal::yaw_rate, {1, 2});
  s.set_channel(Signal::accel_lat, {3, 4});
  s.set_channel(Signal::steering_angle, {5, 6});
  const std::vector<Signal> pick{Signal::yaw_rate, Signal::accel_lat};
  const TimeSeries p = project(s, pick);
  ASSERT_EQ(p.signals().size(), 2u);
  EXPECT_EQ(p.signals()[0], Signal::accel_lat);
  EXPECT_EQ(p.signals()[1], Signal::yaw_rate);

  const std::vector<Signal> one{Signal::accel_lat};
  EXPECT_THROW(project(s, one), Error);
  const std::vector<Signal> steer{Signal::accel_lat, Signal::steering_angle};
  try {
    project(s, steer);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unavailable_signal);
  }
  const std::vector<Signal> missing{Signal::accel_lat, Signal::accel_lon};
  EXPECT_THROW(project(s, missing), Error);
}
