#include <fstream>

#include <gtest/gtest.h>

#include "affsob/config.hpp"
#include "affsob/errors.hpp"

using namespace affsob;

TEST(Config, DefaultsWhenKeysAbsent) {
  const ExperimentConfig c = parse_config("{}");
  EXPECT_EQ(c.dimension, 2);
  EXPECT_EQ(c.s, 1.0);
  EXPECT_EQ(c.p, 2.0);
  EXPECT_TRUE(c.field.empty());
  EXPECT_EQ(c.seed, 2024u);
}

TEST(Config, FullDocument) {
  const ExperimentConfig c = parse_config(R"({
    "dimension": 2, "s": 0.5, "p": 1.5, "seed": 9,
    "field": {"type": "gaussian_mix", "terms": [
      {"coef": 2.0, "mean": [1, 0], "precision": [[2, 0.5], [0.5, 1]],
       "poly": [{"exp": [1, 0], "coef": 1.0}]}]},
    "quadrature": {"box_nodes": 32, "sphere_nodes": 64, "t_panels": 6},
    "optimizer": {"max_iters": 10, "grad_tol": 1e-5}
  })");
  EXPECT_EQ(c.s, 0.5);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.quadrature.box_nodes, 32);
  EXPECT_EQ(c.quadrature.sphere_nodes, 64);
  EXPECT_EQ(c.optimizer.max_iters, 10);
  ASSERT_TRUE(c.field.analytic.has_value());
  const Eigen::Vector2d x(1.0, 0.0);
  EXPECT_DOUBLE_EQ(c.field.analytic->evaluate(x), 2.0);
  EXPECT_TRUE(c.params().fractional);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(parse_config(R"({"dimensions": 2})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"quadrature": {"nodes": 3}})"), ConfigError);
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_THROW(parse_config(R"({"p": 0.5})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"s": -1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"dimension": 5})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(parse_config(R"({"optimizer": {"backtrack": 2}})"), ConfigError);
}

TEST(Config, RejectsBadFields) {
  EXPECT_THROW(parse_config(R"({"field": {"type": "gaussian_mix", "terms": [{"precision": [[1, 2], [2, 1]]}]}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"dimension": 3, "field": {"type": "gaussian_mix",
                                 "terms": [{"precision": [[1, 0], [0, 1]]}]}})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"field": {"type": "spline"}})"), ConfigError);
}

TEST(Config, MissingFileNamed) {
  try {
    load_config("/nonexistent/missing.json");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.json"), std::string::npos);
  }
}

TEST(Config, GridFieldResolvedRelativeToConfig) {
  const std::string dir = ::testing::TempDir();
  const GridField g = GridField::sample(
      2, 21, 2.0, [](const double* x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); }, 2.0);
  g.save(dir + "cfg_grid.txt");
  {
    std::ofstream out(dir + "cfg_grid.json");
    out << R"({"s": 1, "p": 2, "field": {"type": "grid", "path": "cfg_grid.txt"}})";
  }
  const ExperimentConfig c = load_config(dir + "cfg_grid.json");
  ASSERT_TRUE(c.field.is_grid());
  EXPECT_EQ(c.field.grid->shape()[0], 21);

  std::ofstream bad(dir + "cfg_grid_bad.json");
  bad << R"({"s": 0.5, "field": {"type": "grid", "path": "cfg_grid.txt"}})";
  bad.close();
  EXPECT_THROW(load_config(dir + "cfg_grid_bad.json"), ConfigError);
}

TEST(Config, StandaloneField) {
  const AnalyticField f = parse_analytic_field(
      R"({"type": "gaussian_mix", "terms": [{"precision": [[1,0,0],[0,1,0],[0,0,1]]}]})");
  EXPECT_EQ(f.dimension(), 3);
}
