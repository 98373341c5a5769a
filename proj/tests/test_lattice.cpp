#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <numeric>

#include "kernlat/errors.hpp"
#include "kernlat/lattice.hpp"
#include "support/generators.hpp"

using namespace kernlat;
using testsupport::Gen;

namespace {

// Euler's product formula, independent of the gcd scan in units().
long totient(long n) {
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

std::string message_of(const std::string& text) {
  try {
    parse_generating_vector(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("units of Z_n") {
  CHECK(units(2) == std::vector<long>{1});
  CHECK(units(8) == std::vector<long>{1, 3, 5, 7});
  CHECK(units(9) == std::vector<long>{1, 2, 4, 5, 7, 8});
  CHECK_THROWS_AS(units(1), InvalidArgumentError);
  for (long n = 2; n <= 600; ++n) {
    const auto u = units(n);
    CHECK(static_cast<long>(u.size()) == totient(n));
    CHECK(std::is_sorted(u.begin(), u.end()));
  }
}

TEST_CASE("generating vectors require unit components") {
  CHECK_THROWS_AS(GeneratingVector(8, {1, 2}), InvalidArgumentError);
  CHECK_THROWS_AS(GeneratingVector(8, {0}), InvalidArgumentError);
  CHECK_THROWS_AS(GeneratingVector(8, {9}), InvalidArgumentError);
  CHECK_THROWS_AS(GeneratingVector(1, {1}), InvalidArgumentError);
  CHECK_THROWS_AS(GeneratingVector(8, {}), InvalidArgumentError);
  const GeneratingVector gv(8, {1, 3, 5});
  CHECK(gv.prefix(2) == GeneratingVector(8, {1, 3}));
  CHECK_THROWS_AS(gv.prefix(4), InvalidArgumentError);
}

TEST_CASE("residues are exact for large n") {
  const long n = (1L << 40) + 15;  // odd, so 2^39 + 1 style multipliers stay units when coprime
  const long z = 1'000'003;
  REQUIRE(std::gcd(n, z) == 1);
  const GeneratingVector gv(n, {z});
  const long k = n - 1;
  CHECK(gv.residue(k, 0) == n - z);
}

TEST_CASE("lattice points are {k z / n}") {
  Gen g(21);
  for (int trial = 0; trial < 30; ++trial) {
    const long n = g.integer(2, 300);
    const auto gv = g.vector(n, static_cast<int>(g.integer(1, 6)));
    const auto pts = lattice_points(gv);
    CHECK(pts.size() == n);
    for (double v : pts.point(0)) CHECK(v == 0.0);
    const long k = g.integer(0, n - 1);
    const auto t = pts.point(k);
    for (int j = 0; j < gv.d(); ++j) {
      CHECK(t[j] >= 0.0);
      CHECK(t[j] < 1.0);
      CHECK(t[j] == doctest::Approx(static_cast<double>((k * gv[j]) % n) / n));
    }
    CHECK(pts.materialize().size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("text format round-trips") {
  Gen g(22);
  for (int trial = 0; trial < 100; ++trial) {
    const long n = g.integer(2, 100000);
    const auto gv = g.vector(n, static_cast<int>(g.integer(1, 12)));
    CHECK(parse_generating_vector(serialize(gv)) == gv);
    const VectorMetadata meta{"P", 2, "geo09", 512};
    const auto text = serialize(gv, meta);
    CHECK(parse_generating_vector(text) == gv);
    const auto back = parse_metadata(text);
    REQUIRE(back.has_value());
    CHECK(back->criterion == "P");
    CHECK(back->alpha == 2);
    CHECK(back->weights == "geo09");
    CHECK(back->precision_bits == 512);
  }
  CHECK(serialize(GeneratingVector(8, {1, 5})) == "n=8 z=1,5");
  CHECK(parse_generating_vector("# comment\n\n  n=8 z=1,3  \n") == GeneratingVector(8, {1, 3}));
  CHECK_FALSE(parse_metadata("n=8 z=1").has_value());
}

TEST_CASE("parse errors name the offending field") {
  CHECK(message_of("n=abc z=1").find("'n'") != std::string::npos);
  CHECK(message_of("n=1 z=1").find("'n'") != std::string::npos);
  CHECK(message_of("n=8 z=1,2").find("'z[1]'") != std::string::npos);
  CHECK(message_of("n=8 z=1,x").find("'z[1]'") != std::string::npos);
  CHECK(message_of("n=8").find("'z'") != std::string::npos);
  CHECK(message_of("m=8 z=1").find("'n'") != std::string::npos);
  CHECK(message_of("n=8 y=1").find("'z'") != std::string::npos);
  CHECK(message_of("# only a comment").find("'line'") != std::string::npos);
  CHECK(message_of("n=8 z=1\nn=8 z=3").find("'line'") != std::string::npos);
}

TEST_CASE("vector files round-trip and report I/O failures") {
  const auto dir = std::filesystem::temp_directory_path() / "kernlat_lattice_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "v.txt").string();
  const GeneratingVector gv(1024, {1, 433, 229});
  write_generating_vector(path, gv, VectorMetadata{"S", 1, "poly3a", 53});
  CHECK(read_generating_vector(path) == gv);
  CHECK_THROWS_AS(read_generating_vector((dir / "missing.txt").string()), IoError);
  CHECK_THROWS_AS(write_generating_vector((dir / "no/such/dir/v.txt").string(), gv), IoError);
  std::filesystem::remove_all(dir);
}
