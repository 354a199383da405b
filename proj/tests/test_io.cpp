#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "corpus.hpp"

using namespace corpus;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::OracleMismatch;
}

}  // namespace

TEST(Io, FanRoundTrip) {
  for (FanPtr f : {cross_polytope(3), cube(), square_cone()}) {
    json j = fan_to_json(*f);
    FanPtr g = fan_from_json(j);
    EXPECT_EQ(g->num_cones(), f->num_cones());
    EXPECT_EQ(g->rays(), f->rays());
    EXPECT_EQ(fan_to_json(*g), j);
  }
  // integers and "p/q" strings are both accepted; rays are kept as given
  FanPtr h = fan_from_json(parse_json_text(R"({"dim": 2, "rays": [[2, 0], ["0", "3/2"]], "cones": [[0, 1]]})"));
  EXPECT_EQ(h->ray(1), (Vec{0, Rational(3, 2)}));
  EXPECT_EQ(h->locate(ivec({1, 1})), h->maximal_cones()[0]);
}

TEST(Io, SubdivisionRoundTrip) {
  for (const auto& s : cone_subdivisions()) {
    json j = subdivision_to_json(s.pi);
    SubdivisionMap back = subdivision_from_json(j);
    EXPECT_EQ(back.assignment, s.pi.assignment) << s.name;
    // the assignment is recomputed when absent
    j.erase("assignment");
    EXPECT_EQ(subdivision_from_json(j).assignment, s.pi.assignment) << s.name;
  }
}

TEST(Io, FunctionForms) {
  FanPtr q = cross_polytope(2);
  PiecewiseLinear l = function_from_json(q, parse_json_text(R"({"ray_values": [1, 1, 1, 1]})"));
  EXPECT_EQ(l.forms(), ones(q).forms());
  json f = function_to_json(l);
  EXPECT_EQ(function_from_json(q, f["forms"]).forms(), l.forms());  // bare array
  EXPECT_EQ(kind_of([&] { function_from_json(q, json{{"forms", {{"1", "0"}}}}); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([&] { function_from_json(q, json{{"slopes", 1}}); }), ErrorKind::InvalidInput);
}

TEST(Io, MalformedInput) {
  EXPECT_EQ(kind_of([] { parse_json_text("{ not json"); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { load_json("/nonexistent/fan.json"); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { fan_from_json(json{{"rays", json::array()}}); }), ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { fan_from_json(parse_json_text(R"({"dim": 2, "rays": [[1.5, 0]], "cones": [[0]]})")); }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(kind_of([] { rational_from_json(json(true)); }), ErrorKind::InvalidInput);
  std::string path = testing::TempDir() + "bad.json";
  std::ofstream(path) << "[1, 2";
  EXPECT_EQ(kind_of([&] { load_json(path); }), ErrorKind::InvalidInput);
  std::remove(path.c_str());
}

TEST(Io, Reports) {
  FanPtr f = cross_polytope(2);
  VerifyResult r = verify_hl_hr(ones(f));
  json j = result_to_json(r);
  EXPECT_TRUE(j["pass"].get<bool>());
  ASSERT_EQ(j["checks"].size(), 2u);
  EXPECT_EQ(j["checks"][0]["check"], "hl");
  EXPECT_EQ(j["checks"][1]["check"], "hr");
  // degree 0 of the quadrants: a single positive class
  json row = j["checks"][1]["table"][0];
  EXPECT_EQ(row["degree"], 0);
  EXPECT_EQ(row["inertia"], json::array({1, 0, 0}));
  EXPECT_EQ(dims_to_json({{0, 1}, {2, 0}, {4, 2}}), parse_json_text(R"({"0": 1, "4": 2})"));
  EXPECT_EQ(dump(json{{"a", 1}}), "{\n  \"a\": 1\n}\n");
}
