#include <functional>
#include <sstream>

#include "finsler/io.hpp"
#include "finsler/random.hpp"
#include "support.hpp"

using namespace finsler;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::precondition;
}

}  // namespace

TEST(MatrixJson, RoundTrip) {
  random::MatrixSampler s(1);
  const Matrix x = s.gaussian(3);
  const io::Json j = io::matrix_to_json(x);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0][0].size(), 2u);
  EXPECT_MATRIX_NEAR(io::matrix_from_json(io::Json::parse(j.dump())), x, 0.0);
}

TEST(MatrixJson, PlainNumbersAreRealEntries) {
  const Matrix x = io::matrix_from_json(io::Json::parse("[[1, 2], [3, [4, 5]]]"));
  EXPECT_EQ(x(0, 1), Complex(2.0, 0.0));
  EXPECT_EQ(x(1, 1), Complex(4.0, 5.0));
}

TEST(MatrixJson, MalformedInputIsParseError) {
  for (const char* text : {"[]", "[[1, 2], [3]]", "[[1, 2], [3, 4]", "{\"a\": 1}",
                           "[[\"x\", 1]]", "[[[1, 2, 3]]]"}) {
    EXPECT_EQ(kind_of([&] { io::parse_matrix_literal(text, 0); }), ErrorKind::parse) << text;
  }
  EXPECT_EQ(kind_of([] { io::read_matrix_file("/nonexistent/matrix.json"); }), ErrorKind::parse);
}

TEST(MatrixLiteral, NamedLiterals) {
  EXPECT_MATRIX_NEAR(io::parse_matrix_literal("identity", 3), linalg::identity(3), 0.0);
  EXPECT_MATRIX_NEAR(io::parse_matrix_literal("zero", 2), Matrix::Zero(2, 2), 0.0);
  EXPECT_THROW(io::parse_matrix_literal("identity", 0), Error);
}

TEST(TrajectoryJson, SchemaKeys) {
  random::MatrixSampler s(2);
  ode::IntegratorConfig cfg;
  cfg.step = 0.25;
  const auto traj = flow::geodesic_ivp(GroupElement::identity(2), s.gaussian(2),
                                       variational::PMetric(4), 1.0, cfg);
  const io::Json j = io::trajectory_to_json(traj);
  EXPECT_EQ(j["metric"]["p"], 4);
  EXPECT_EQ(j["N"], 2);
  EXPECT_EQ(j["times"].size(), 5u);
  for (const char* key : {"g", "v", "w"}) {
    ASSERT_EQ(j[key].size(), 5u);
    EXPECT_EQ(j[key][0].size(), 4u);
  }
  EXPECT_TRUE(j["diagnostics"].contains("spectrum_drift"));
  EXPECT_EQ(j["g"][4][1][0].get<double>(), traj.g[4](0, 1).real());
}

TEST(TrajectoryCsv, HeaderAndRows) {
  ode::IntegratorConfig cfg;
  cfg.step = 0.5;
  const auto traj = flow::geodesic_ivp(GroupElement::identity(2), linalg::identity(2),
                                       variational::PMetric(2), 1.0, cfg);
  std::ostringstream os;
  io::write_trajectory_csv(os, traj, io::Stream::v);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,re(v_11),im(v_11),re(v_12),im(v_12),re(v_21),im(v_21),re(v_22),im(v_22)");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(io::parse_stream("w"), io::Stream::w);
  EXPECT_THROW(io::parse_stream("x"), Error);
}

TEST(BvpJson, CarriesSolverFields) {
  shooting::BvpResult r{linalg::identity(2), 0.0, 0.0,
                        flow::Trajectory{variational::PMetric(2), {}, {}, {}, {}, {}}, false, 0};
  r.distance = 1.5;
  r.converged = true;
  r.endpoint_residual = 1e-12;
  r.iterations = 3;
  const io::Json j = io::bvp_to_json(r, false);
  EXPECT_EQ(j["distance"], 1.5);
  EXPECT_EQ(j["converged"], true);
  EXPECT_EQ(j["iters"], 3);
  EXPECT_FALSE(j.contains("g"));
}
