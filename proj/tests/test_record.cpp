#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "aiscell/error.hpp"
#include "aiscell/record.hpp"

using namespace aiscell;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an aiscell::Error";
  return Errc::Io;
}

}  // namespace

TEST(ParseRecord, TrainLineWithLabels) {
  const AisRecord r = parse_record("V1,70,12.3,-5.5,35.5,130.0,129,1000,TANGER,7.5,CEUTA,5000", Schema::Train);
  EXPECT_EQ(r.ship_id, "V1");
  EXPECT_EQ(r.ship_type, 70);
  EXPECT_DOUBLE_EQ(r.speed, 12.3);
  EXPECT_DOUBLE_EQ(r.pos.lon, -5.5);
  EXPECT_DOUBLE_EQ(r.pos.lat, 35.5);
  EXPECT_DOUBLE_EQ(r.course, 130.0);
  EXPECT_EQ(r.heading, 129.0);
  EXPECT_EQ(r.timestamp, 1000);
  EXPECT_EQ(r.departure_port, "TANGER");
  EXPECT_EQ(r.draught, 7.5);
  EXPECT_EQ(r.label_destination, "CEUTA");
  EXPECT_EQ(r.label_arrival, 5000);
}

TEST(ParseRecord, HeadingSentinelIsAbsent) {
  const AisRecord r = parse_record("V1,70,12.3,-5.5,35.5,130.0,511,1000,TANGER,7.5", Schema::Eval);
  EXPECT_FALSE(r.heading.has_value());
  EXPECT_FALSE(r.labeled());
}

TEST(ParseRecord, NineFieldTrainLineIsMissingLabel) {
  EXPECT_EQ(code_of([] { parse_record("V1,70,12.3,-5.5,35.5,130.0,129,1000,TANGER", Schema::Train); }),
            Errc::MissingLabel);
}

TEST(ParseRecord, MalformedInputs) {
  // labels under eval schema
  EXPECT_EQ(code_of([] { parse_record("V1,70,12.3,-5.5,35.5,130.0,129,1000,TANGER,7.5,CEUTA,5000", Schema::Eval); }),
            Errc::MalformedLine);
  EXPECT_EQ(code_of([] { parse_record("V1,70,abc,-5.5,35.5,130.0,129,1000,TANGER,7.5", Schema::Eval); }),
            Errc::MalformedLine);
  EXPECT_EQ(code_of([] { parse_record("V1,70,-1,-5.5,35.5,130.0,129,1000,TANGER,7.5", Schema::Eval); }),
            Errc::MalformedLine);
  // arrival before the record itself
  EXPECT_EQ(code_of([] { parse_record("V1,70,12,-5.5,35.5,130.0,129,1000,TANGER,7.5,CEUTA,999", Schema::Train); }),
            Errc::MalformedLine);
}

TEST(ParseRecord, EmptyOptionalFieldsAndCase) {
  const AisRecord r = parse_record("V1,70,12,-5.5,35.5,360,,1000,tanger,", Schema::Eval);
  EXPECT_FALSE(r.heading.has_value());
  EXPECT_FALSE(r.draught.has_value());
  EXPECT_EQ(r.departure_port, "TANGER");
  EXPECT_EQ(r.course, 0.0);
}

TEST(ParseRecord, RoundTripRandomRecords) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    AisRecord r;
    r.ship_id = "S" + std::to_string(rng() % 1000);
    r.ship_type = int(rng() % 100);
    r.speed = u(rng) * 30.0;
    r.pos = {30 + 16 * u(rng), -6 + 42.5 * u(rng)};
    r.course = u(rng) * 359.9;
    if (rng() % 3) r.heading = double(rng() % 360);
    r.timestamp = 1'500'000'000 + EpochSeconds(rng() % 10'000'000);
    r.departure_port = "PORT" + std::to_string(rng() % 20);
    if (rng() % 2) r.draught = u(rng) * 15.0;
    const bool train = rng() % 2;
    if (train) {
      r.label_destination = "PORT" + std::to_string(rng() % 20);
      r.label_arrival = r.timestamp + EpochSeconds(rng() % 100000);
    }
    const Schema s = train ? Schema::Train : Schema::Eval;
    EXPECT_EQ(parse_record(format_record(r, s), s), r) << format_record(r, s);
  }
}

TEST(ReadRecords, HeaderRequired) {
  std::istringstream good(std::string(kEvalHeader) + "\nV1,70,12,-5.5,35.5,130,129,1000,TANGER,7.5\n");
  EXPECT_EQ(read_records(good, Schema::Eval).size(), 1u);
  std::istringstream missing("V1,70,12,-5.5,35.5,130,129,1000,TANGER,7.5\n");
  EXPECT_THROW(read_records(missing, Schema::Eval), Error);
}

TEST(SpeedBucket, SpecExamples) {
  EXPECT_EQ(speed_bucket_of(12.3, 0.5), 24);
  EXPECT_EQ(speed_bucket_of(0.0, 0.5), 0);
  EXPECT_EQ(speed_bucket_of(0.49999, 0.5), 0);
}

TEST(CourseKey, SpecExamples) {
  EXPECT_EQ(course_key_of(259.7), 260);
  EXPECT_EQ(course_key_of(359.8), 0);
  EXPECT_EQ(course_key_of(130.0), 130);
}

TEST(CourseKey, AlwaysInRange) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c(0.0, 360.0);
  for (int i = 0; i < 100000; ++i) {
    const int k = course_key_of(c(rng));
    EXPECT_GE(k, 0);
    EXPECT_LE(k, 359);
  }
}

TEST(LoadPorts, TwoDistinctPorts) {
  std::istringstream in("NAME,LON,LAT,RADIUS_NM\nCEUTA,-5.3,35.9,2\nTANGER,-5.8,35.8,2.5\n");
  const PortRegistry reg = load_ports(in);
  ASSERT_EQ(reg.size(), 2u);
  ASSERT_NE(reg.find("TANGER"), nullptr);
  EXPECT_DOUBLE_EQ(reg.find("TANGER")->radius_nm, 2.5);
  EXPECT_EQ(reg.find("VALENCIA"), nullptr);
}

TEST(LoadPorts, DuplicateName) {
  std::istringstream in("NAME,LON,LAT,RADIUS_NM\nCEUTA,-5.3,35.9,2\nCEUTA,-5.8,35.8,2\n");
  EXPECT_EQ(code_of([&] { load_ports(in); }), Errc::DuplicatePort);
}

TEST(LoadPorts, EmptyFileIsEmptyRegistry) {
  std::istringstream in("");
  EXPECT_TRUE(load_ports(in).empty());
}

TEST(LoadPorts, WriteThenLoad) {
  PortRegistry reg;
  reg.add({"A", {35.1, 1.25}, 2.0});
  reg.add({"B", {40.0, -3.5}, 1.5});
  std::stringstream buf;
  write_ports(buf, reg);
  EXPECT_EQ(load_ports(buf), reg);
}

TEST(Config, DefaultsAsDocumented) {
  const EngineConfig c = parse_config("");
  EXPECT_EQ(c.dest_granularity, 1.0);
  EXPECT_EQ(c.eta_granularity, 0.005);
  EXPECT_EQ(c.course_tolerance, 15.0);
  EXPECT_EQ(c.speed_bucket, 0.5);
  EXPECT_EQ(c.max_ring_radius, 10);
  EXPECT_EQ(c.robustness_k, 1);
  EXPECT_EQ(c.robustness_window, 64);
  EXPECT_EQ(c.eta_dimension, EtaDimension::Course);
  EXPECT_TRUE(c.time_adjustment);
  EXPECT_FALSE(c.semi_supervised);
  EXPECT_EQ(c.quiet_period, 1800.0);
  EXPECT_EQ(c, EngineConfig{});
}

TEST(Config, ParsesKeysAndRoundTrips) {
  const EngineConfig c = parse_config(
      "# comment\n"
      "eta_granularity = 0.05\n"
      "eta_dimension = departure\n"
      "time_adjustment = false\n"
      "bbox = 31,45,-5,35\n"
      "tie_break_order = type_freq, geo_distance, geo_course, departure_freq\n");
  EXPECT_EQ(c.eta_granularity, 0.05);
  EXPECT_EQ(c.eta_dimension, EtaDimension::Departure);
  EXPECT_FALSE(c.time_adjustment);
  EXPECT_EQ(c.lat_min, 31.0);
  EXPECT_EQ(c.lon_max, 35.0);
  EXPECT_EQ(c.tie_break_order.front(), TieBreak::TypeFreq);
  EXPECT_EQ(parse_config(format_config(c)), c);
}

TEST(Config, UnknownKeyAndBadValuesRejected) {
  EXPECT_EQ(code_of([] { parse_config("no_such_key = 1"); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { parse_config("course_tolerance = 200"); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { parse_config("eta_granularity = 0"); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { parse_config("tie_break_order = geo_course,geo_course"); }), Errc::InvalidConfig);
}
