#include "kernlat/lattice.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "kernlat/errors.hpp"

namespace kernlat {

std::vector<long> units(long n) {
  if (n < 2) throw InvalidArgumentError("units: n must be >= 2, got " + std::to_string(n));
  std::vector<long> u;
  for (long z = 1; z < n; ++z) {
    if (std::gcd(z, n) == 1) u.push_back(z);
  }
  return u;
}

GeneratingVector::GeneratingVector(long n, std::vector<long> z) : n_(n), z_(std::move(z)) {
  if (n_ < 2) throw InvalidArgumentError("generating vector: n must be >= 2");
  if (z_.empty()) throw InvalidArgumentError("generating vector: dimension must be >= 1");
  for (std::size_t j = 0; j < z_.size(); ++j) {
    if (z_[j] < 1 || z_[j] >= n_ || std::gcd(z_[j], n_) != 1) {
      throw InvalidArgumentError("generating vector: z[" + std::to_string(j) +
                                 "] = " + std::to_string(z_[j]) + " is not a unit mod " +
                                 std::to_string(n_));
    }
  }
}

GeneratingVector GeneratingVector::prefix(int d) const {
  if (d < 1 || d > this->d()) throw InvalidArgumentError("prefix dimension out of range");
  return GeneratingVector(n_, std::vector<long>(z_.begin(), z_.begin() + d));
}

std::vector<double> LatticePointSet::point(long k) const {
  std::vector<double> t(static_cast<std::size_t>(gv_.d()));
  const double n = static_cast<double>(gv_.n());
  for (std::size_t j = 0; j < t.size(); ++j) {
    t[j] = static_cast<double>(gv_.residue(k, j)) / n;
  }
  return t;
}

std::vector<std::vector<double>> LatticePointSet::materialize() const {
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(size()));
  for (long k = 0; k < size(); ++k) pts.push_back(point(k));
  return pts;
}

LatticePointSet lattice_points(const GeneratingVector& gv) { return LatticePointSet(gv); }

// ---------------------------------------------------------------- text format

std::string serialize(const GeneratingVector& gv) {
  std::ostringstream os;
  os << "n=" << gv.n() << " z=";
  for (int j = 0; j < gv.d(); ++j) os << (j ? "," : "") << gv[static_cast<std::size_t>(j)];
  return os.str();
}

std::string serialize(const GeneratingVector& gv, const VectorMetadata& meta) {
  std::ostringstream os;
  os << "# criterion=" << meta.criterion << " alpha=" << meta.alpha
     << " weights=" << meta.weights << " precision=" << meta.precision_bits << "\n"
     << serialize(gv);
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

long parse_long(std::string_view token, const std::string& field) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError("field '" + field + "': '" + std::string(token) + "' is not an integer");
  }
  return v;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

}  // namespace

GeneratingVector parse_generating_vector(std::string_view text) {
  std::optional<std::string_view> body;
  for (auto raw : split_lines(text)) {
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (body) throw ParseError("field 'line': more than one vector line");
    body = line;
  }
  if (!body) throw ParseError("field 'line': no vector line found");

  auto line = *body;
  auto space = line.find_first_of(" \t");
  if (space == std::string_view::npos) throw ParseError("field 'z': missing");
  auto n_part = trim(line.substr(0, space));
  auto z_part = trim(line.substr(space + 1));
  if (!n_part.starts_with("n=")) throw ParseError("field 'n': expected 'n=<int>'");
  if (!z_part.starts_with("z=")) throw ParseError("field 'z': expected 'z=<ints>'");

  const long n = parse_long(n_part.substr(2), "n");
  if (n < 2) throw ParseError("field 'n': must be >= 2, got " + std::to_string(n));

  std::vector<long> z;
  auto rest = z_part.substr(2);
  for (std::size_t j = 0;; ++j) {
    auto comma = rest.find(',');
    const std::string field = "z[" + std::to_string(j) + "]";
    const long zj = parse_long(rest.substr(0, comma), field);
    if (zj < 1 || zj >= n || std::gcd(zj, n) != 1) {
      throw ParseError("field '" + field + "': " + std::to_string(zj) + " is not a unit mod " +
                       std::to_string(n));
    }
    z.push_back(zj);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return GeneratingVector(n, std::move(z));
}

std::optional<VectorMetadata> parse_metadata(std::string_view text) {
  for (auto raw : split_lines(text)) {
    auto line = trim(raw);
    if (!line.starts_with("#")) continue;
    line.remove_prefix(1);
    VectorMetadata meta;
    bool seen = false;
    std::istringstream is{std::string(line)};
    std::string kv;
    while (is >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      auto key = kv.substr(0, eq);
      auto value = kv.substr(eq + 1);
      if (key == "criterion") {
        meta.criterion = value;
        seen = true;
      } else if (key == "alpha") {
        meta.alpha = static_cast<int>(parse_long(value, "alpha"));
      } else if (key == "weights") {
        meta.weights = value;
      } else if (key == "precision") {
        meta.precision_bits = static_cast<int>(parse_long(value, "precision"));
      }
    }
    if (seen) return meta;
  }
  return std::nullopt;
}

GeneratingVector read_generating_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open generating-vector file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_generating_vector(ss.str());
}

void write_generating_vector(const std::string& path, const GeneratingVector& gv,
                             const std::optional<VectorMetadata>& meta) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write generating-vector file '" + path + "'");
  out << (meta ? serialize(gv, *meta) : serialize(gv)) << "\n";
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace kernlat
