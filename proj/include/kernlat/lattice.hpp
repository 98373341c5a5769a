#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kernlat {

/// Ascending list of the units of Z_n: 1 <= z <= n-1 with gcd(z, n) = 1.
std::vector<long> units(long n);

/// Generating vector of an n-point rank-1 lattice; every component is a unit mod n.
class GeneratingVector {
 public:
  GeneratingVector(long n, std::vector<long> z);

  long n() const { return n_; }
  int d() const { return static_cast<int>(z_.size()); }
  const std::vector<long>& z() const { return z_; }
  long operator[](std::size_t j) const { return z_[j]; }

  /// First d components.
  GeneratingVector prefix(int d) const;

  /// Exact integer residue k * z_j mod n.
  long residue(long k, std::size_t j) const {
    return static_cast<long>((static_cast<__int128>(k) * z_[j]) % n_);
  }

  friend bool operator==(const GeneratingVector&, const GeneratingVector&) = default;

 private:
  long n_;
  std::vector<long> z_;
};

/// Points t_k = {k z / n}, generated on demand from exact residues.
class LatticePointSet {
 public:
  explicit LatticePointSet(GeneratingVector gv) : gv_(std::move(gv)) {}

  long size() const { return gv_.n(); }
  int d() const { return gv_.d(); }
  const GeneratingVector& generating_vector() const { return gv_; }

  std::vector<double> point(long k) const;
  /// All n points, row-major (n x d).
  std::vector<std::vector<double>> materialize() const;

 private:
  GeneratingVector gv_;
};

LatticePointSet lattice_points(const GeneratingVector& gv);

/// Metadata carried as a '#' comment line next to a stored vector.
struct VectorMetadata {
  std::string criterion;  // "S" or "P"
  int alpha = 0;
  std::string weights;
  int precision_bits = 0;
};

/// "n=<int> z=<c1>,<c2>,..."
std::string serialize(const GeneratingVector& gv);
/// serialize() preceded by "# criterion=.. alpha=.. weights=.. precision=.." and a newline.
std::string serialize(const GeneratingVector& gv, const VectorMetadata& meta);

/// Inverse of serialize(); '#' comment lines and blank lines are skipped.
/// Throws ParseError naming the offending field.
GeneratingVector parse_generating_vector(std::string_view text);
/// Metadata comment line, if present.
std::optional<VectorMetadata> parse_metadata(std::string_view text);

GeneratingVector read_generating_vector(const std::string& path);
void write_generating_vector(const std::string& path, const GeneratingVector& gv,
                             const std::optional<VectorMetadata>& meta = std::nullopt);

}  // namespace kernlat
