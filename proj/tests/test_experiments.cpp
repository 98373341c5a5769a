#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "kernlat/errors.hpp"
#include "kernlat/experiments.hpp"
#include "kernlat/oracles.hpp"

using namespace kernlat;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("kernlat_exp_" + name);
  fs::remove_all(dir);
  return dir;
}

std::map<std::pair<std::string, int>, double> by_kind_d(const std::vector<ExperimentRecord>& recs) {
  std::map<std::pair<std::string, int>, double> out;
  for (const auto& r : recs) out[{r.kind, r.d}] = r.value;
  return out;
}

}  // namespace

TEST_CASE("slope fitting") {
  CHECK(fit_slope({{1, 1}, {2, 0.5}, {4, 0.25}, {8, 0.125}}) == doctest::Approx(-1.0));
  CHECK(fit_slope({{1, 1}, {std::exp(1.0), std::exp(-0.5)}}) == doctest::Approx(-0.5));
  CHECK(fit_slope({{2, 3}, {4, 3}, {8, 3}}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fit_slope({{2, 1}}), InvalidArgumentError);
  CHECK_THROWS_AS(fit_slope({{2, 1}, {4, 0}}), InvalidArgumentError);
  CHECK_THROWS_AS(fit_slope({{2, 1}, {-4, 1}}), InvalidArgumentError);
}

TEST_CASE("configs are validated") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.m_from = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgumentError);
  c = {};
  c.m_from = 9;
  c.m_to = 8;
  CHECK_THROWS_AS(c.validate(), InvalidArgumentError);
  c = {};
  c.precision_bits = 52;
  CHECK_THROWS_AS(c.validate(), InvalidArgumentError);
  c = {};
  c.d = 0;
  CHECK_THROWS_AS(run_convergence(c), InvalidArgumentError);
}

TEST_CASE("criterion sets select the record kinds") {
  CHECK(experiment_kinds({CriterionKind::S}) == std::vector<std::string>{"S_zS"});
  CHECK(experiment_kinds({CriterionKind::P}) == std::vector<std::string>{"P_zP"});
  CHECK(experiment_kinds({CriterionKind::S, CriterionKind::P}).size() == 4);

  ExperimentConfig c;
  c.criteria = {CriterionKind::S};
  c.m_from = 3;
  c.m_to = 5;
  c.d = 3;
  const auto recs = run_convergence(c);
  CHECK(recs.size() == 3);
  for (const auto& r : recs) {
    CHECK(r.kind == "S_zS");
    CHECK(r.precision_bits == 53);
    CHECK(r.value > 0.0);
  }

  const auto dir = scratch("filter");
  c.out_dir = dir.string();
  const auto written = emit_outputs(recs, c, StudyKind::Convergence);
  CHECK(written.size() == 2);
  CHECK(fs::exists(dir / "S_zS_1_3_poly3a.txt"));
  CHECK_FALSE(fs::exists(dir / "P_zP_1_3_poly3a.txt"));
  fs::remove_all(dir);
}

TEST_CASE("emitting a single record") {
  ExperimentRecord r{"P_zS", 64, 2, 1, "geo09", 256, 0.25, 0.0, 0.0};
  ExperimentConfig c;
  c.weights = ProductWeights::geometric09();
  const auto dir = scratch("single");
  c.out_dir = dir.string();
  const auto written = emit_outputs({r}, c, StudyKind::Convergence);
  CHECK(written.size() == 2);
  CHECK(slurp(dir / "convergence.csv") == csv_header() + "\nP_zS,64,2,1,geo09,256,0.25,0,0\n");
  CHECK(slurp(dir / "P_zS_1_2_geo09.txt") == "64 0.25\n");
  CHECK_THROWS_AS(emit_outputs({}, c, StudyKind::Convergence), InvalidArgumentError);
  fs::remove_all(dir);
}

TEST_CASE("list weights are quoted in the CSV") {
  ExperimentRecord r{"S_zS", 8, 1, 1, "list:0.5,0.25", 53, 0.5, 0.0, 0.0};
  ExperimentConfig c;
  c.weights = ProductWeights::parse("list:0.5,0.25");
  const auto dir = scratch("quoted");
  c.out_dir = dir.string();
  emit_outputs({r}, c, StudyKind::Convergence);
  CHECK(slurp(dir / "convergence.csv").find("\"list:0.5,0.25\"") != std::string::npos);
  CHECK(fs::exists(dir / "S_zS_1_1_list.txt"));
  fs::remove_all(dir);
}

TEST_CASE("unwritable output directories are reported with their path") {
  const auto blocker = fs::temp_directory_path() / "kernlat_exp_blocker";
  fs::remove_all(blocker);
  std::ofstream(blocker) << "file, not a directory";
  ExperimentConfig c;
  c.out_dir = (blocker / "sub").string();
  ExperimentRecord r{"S_zS", 8, 1, 1, "poly3a", 53, 0.5, 0.0, 0.0};
  try {
    emit_outputs({r}, c, StudyKind::Convergence);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(c.out_dir) != std::string::npos);
  }
  fs::remove_all(blocker);
}

TEST_CASE("identical configs give byte-identical outputs") {
  ExperimentConfig c;
  c.m_from = 3;
  c.m_to = 5;
  c.d = 3;
  c.timings = false;
  const auto dir = scratch("determinism");
  c.out_dir = dir.string();
  const auto first_paths = emit_outputs(run_convergence(c), c, StudyKind::Convergence);
  std::vector<std::string> first;
  for (const auto& p : first_paths) first.push_back(slurp(p));
  const auto second_paths = emit_outputs(run_convergence(c), c, StudyKind::Convergence);
  REQUIRE(first_paths == second_paths);
  for (std::size_t i = 0; i < first.size(); ++i) CHECK(slurp(second_paths[i]) == first[i]);
  CHECK(first_paths.size() == 5);
  fs::remove_all(dir);
}

TEST_CASE("dimension study") {
  ExperimentConfig c;
  c.m = 5;
  c.d_max = 1;
  const auto one = by_kind_d(run_dimension(c));
  const SpaceParams params(1, ProductWeights::poly3alpha(), 1);
  const GeneratingVector trivial(32, {1});
  CHECK(one.at({"S_zS", 1}) == s_star(trivial, params).value);
  CHECK(one.at({"P_zP", 1}) == doctest::Approx(p_star(trivial, params).value).epsilon(1e-14));

  c.weights = ProductWeights::equal();
  c.d_max = 6;
  const auto recs = run_dimension(c);
  const auto vals = by_kind_d(recs);
  for (const char* kind : {"S_zS", "S_zP", "P_zS", "P_zP"}) {
    for (int d = 2; d <= 6; ++d) CHECK(vals.at({kind, d}) >= vals.at({kind, d - 1}));
  }
  const auto dir = scratch("dimension");
  c.out_dir = dir.string();
  emit_outputs(recs, c, StudyKind::Dimension);
  CHECK(fs::exists(dir / "dimension.csv"));
  CHECK(fs::exists(dir / "dim_P_zS_1_32_equal.txt"));
  fs::remove_all(dir);
}

TEST_CASE("S* saturates for fast-decaying weights") {
  ExperimentConfig c;
  c.criteria = {CriterionKind::S};
  c.m = 8;
  c.d_max = 40;
  const auto vals = by_kind_d(run_dimension(c));
  CHECK(vals.at({"S_zS", 40}) / vals.at({"S_zS", 20}) <= 1.01);
}

TEST_CASE("each construction wins on its own criterion in low dimension") {
  for (const auto& w : {ProductWeights::poly3alpha(), ProductWeights::equal(), ProductWeights::poly2()}) {
    for (int alpha : {1, 2}) {
      ExperimentConfig c;
      c.alpha = alpha;
      c.weights = w;
      c.m = 5;
      c.d_max = 2;
      const auto vals = by_kind_d(run_dimension(c));
      for (int d = 1; d <= 2; ++d) {
        CHECK(vals.at({"S_zS", d}) <= vals.at({"S_zP", d}) * (1 + 1e-12));
        CHECK(vals.at({"P_zP", d}) <= vals.at({"P_zS", d}) * (1 + 1e-12));
      }
      const SpaceParams params(alpha, w, 2);
      CHECK(oracles::cbc_exhaustive_oracle(32, 2, params, CriterionKind::S) ==
            cbc_s(32, 2, params).gv);
    }
  }
}
