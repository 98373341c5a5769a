#include "kernlat/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "kernlat/errors.hpp"

namespace kernlat {

namespace {

using Clock = std::chrono::steady_clock;

int kind_rank(const std::string& kind) {
  static const std::map<std::string, int> rank{{"S_zS", 0}, {"S_zP", 1}, {"P_zS", 2}, {"P_zP", 3}};
  auto it = rank.find(kind);
  return it == rank.end() ? 4 : it->second;
}

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class F>
auto timed(bool enabled, double& seconds, F&& fn) {
  const auto start = Clock::now();
  auto result = fn();
  seconds = enabled ? std::chrono::duration<double>(Clock::now() - start).count() : 0.0;
  return result;
}

std::string context(long n, const std::string& kind) {
  return "n=" + std::to_string(n) + " kind=" + kind + ": ";
}

// Rethrows with the (n, kind) cell prepended, preserving the error category.
template <class F>
auto with_context(long n, const std::string& kind, F&& fn) {
  try {
    return fn();
  } catch (const SingularOperatorError& e) {
    throw SingularOperatorError(context(n, kind) + e.what());
  } catch (const PrecisionLossError& e) {
    throw PrecisionLossError(context(n, kind) + e.what());
  } catch (const ResourceGuardError& e) {
    throw ResourceGuardError(context(n, kind) + e.what());
  } catch (const Error& e) {
    throw Error(context(n, kind) + e.what());
  }
}

struct Vectors {
  std::optional<GeneratingVector> z_s, z_p;
  double construct_s = 0.0, construct_p = 0.0;
};

Vectors construct(long n, int d, const ExperimentConfig& cfg, bool need_s, bool need_p) {
  const SpaceParams params(cfg.alpha, cfg.weights, d);
  CbcOptions opts;
  opts.threads = cfg.threads;
  Vectors v;
  if (need_s) {
    v.z_s = with_context(n, "cbc_s", [&] {
      return timed(cfg.timings, v.construct_s, [&] { return cbc_s(n, d, params).gv; });
    });
  }
  if (need_p) {
    v.z_p = with_context(n, "cbc_p", [&] {
      return timed(cfg.timings, v.construct_p, [&] {
        return cbc_p(n, d, params, PrecisionContext{cfg.precision_bits}, opts).gv;
      });
    });
  }
  return v;
}

ExperimentRecord evaluate_kind(const std::string& kind, const GeneratingVector& gv,
                               double construct_s, const ExperimentConfig& cfg) {
  const SpaceParams params(cfg.alpha, cfg.weights, gv.d());
  const bool s_kind = kind[0] == 'S';
  const PrecisionContext ctx = s_kind ? default_s_precision() : PrecisionContext{cfg.precision_bits};
  ExperimentRecord rec;
  rec.kind = kind;
  rec.n = gv.n();
  rec.d = gv.d();
  rec.alpha = cfg.alpha;
  rec.weights = cfg.weights.name();
  rec.precision_bits = ctx.mantissa_bits;
  rec.construct_s = construct_s;
  rec.value = with_context(gv.n(), kind, [&] {
    return timed(cfg.timings, rec.eval_s, [&] {
      return s_kind ? s_star(gv, params, ctx).value : p_star(gv, params, ctx).value;
    });
  });
  return rec;
}

void evaluate_all(const std::vector<std::string>& kinds, const Vectors& v, int d,
                  const ExperimentConfig& cfg, std::vector<ExperimentRecord>& out) {
  for (const auto& kind : kinds) {
    const bool on_s = kind.ends_with("zS");
    const GeneratingVector& full = on_s ? *v.z_s : *v.z_p;
    out.push_back(evaluate_kind(kind, full.prefix(d), on_s ? v.construct_s : v.construct_p, cfg));
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (criteria.empty()) throw InvalidArgumentError("experiment: empty criterion set");
  if (m_from < 1 || m_to < 1 || m < 1) throw InvalidArgumentError("experiment: m must be >= 1");
  if (m_from > m_to) throw InvalidArgumentError("experiment: m_from > m_to");
  if (m_to > 30 || m > 30) throw InvalidArgumentError("experiment: m must be <= 30");
  if (d < 1 || d_max < 1) throw InvalidArgumentError("experiment: d must be >= 1");
  if (alpha < 1) throw InvalidArgumentError("experiment: alpha must be >= 1");
  if (precision_bits < 53) throw InvalidArgumentError("experiment: precision must be >= 53 bits");
}

std::vector<std::string> experiment_kinds(const std::set<CriterionKind>& criteria) {
  const bool s = criteria.contains(CriterionKind::S);
  const bool p = criteria.contains(CriterionKind::P);
  if (s && p) return {"S_zS", "S_zP", "P_zS", "P_zP"};
  if (s) return {"S_zS"};
  if (p) return {"P_zP"};
  return {};
}

std::vector<ExperimentRecord> run_convergence(const ExperimentConfig& config) {
  config.validate();
  const auto kinds = experiment_kinds(config.criteria);
  const bool need_s = config.criteria.contains(CriterionKind::S);
  const bool need_p = config.criteria.contains(CriterionKind::P);
  std::vector<ExperimentRecord> out;
  for (int m = config.m_from; m <= config.m_to; ++m) {
    const long n = 1L << m;
    const Vectors v = construct(n, config.d, config, need_s, need_p);
    evaluate_all(kinds, v, config.d, config, out);
  }
  return out;
}

std::vector<ExperimentRecord> run_dimension(const ExperimentConfig& config) {
  config.validate();
  const auto kinds = experiment_kinds(config.criteria);
  const bool need_s = config.criteria.contains(CriterionKind::S);
  const bool need_p = config.criteria.contains(CriterionKind::P);
  const long n = 1L << config.m;
  const Vectors v = construct(n, config.d_max, config, need_s, need_p);
  std::vector<ExperimentRecord> out;
  for (int d = 1; d <= config.d_max; ++d) evaluate_all(kinds, v, d, config, out);
  return out;
}

double fit_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InvalidArgumentError("fit_slope: need at least two points");
  double sx = 0, sy = 0;
  for (const auto& [n, v] : points) {
    if (!(n > 0) || !(v > 0)) throw InvalidArgumentError("fit_slope: nonpositive value in log domain");
    sx += std::log(n);
    sy += std::log(v);
  }
  const double k = static_cast<double>(points.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (const auto& [n, v] : points) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (sxx == 0.0) throw InvalidArgumentError("fit_slope: all abscissae coincide");
  return sxy / sxx;
}

std::string csv_header() { return "kind,n,d,alpha,weights,precision_bits,value,construct_s,eval_s"; }

std::vector<std::string> emit_outputs(std::vector<ExperimentRecord> records,
                                      const ExperimentConfig& config, StudyKind study) {
  namespace fs = std::filesystem;
  if (records.empty()) throw InvalidArgumentError("emit_outputs: no records");
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    const int ra = kind_rank(a.kind), rb = kind_rank(b.kind);
    if (ra != rb) return ra < rb;
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.n != b.n) return a.n < b.n;
    return a.d < b.d;
  });

  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot use output directory '" + config.out_dir + "'" +
                  (ec ? ": " + ec.message() : std::string()));
  }

  auto open = [](const fs::path& p) {
    std::ofstream f(p, std::ios::trunc | std::ios::binary);
    if (!f) throw IoError("cannot write '" + p.string() + "'");
    return f;
  };

  std::vector<std::string> written;
  const bool conv = study == StudyKind::Convergence;
  const fs::path csv = dir / (conv ? "convergence.csv" : "dimension.csv");
  {
    auto f = open(csv);
    f << csv_header() << "\n";
    for (const auto& r : records) {
      f << r.kind << ',' << r.n << ',' << r.d << ',' << r.alpha << ',' << csv_field(r.weights) << ','
        << r.precision_bits << ',' << format_value(r.value) << ',' << format_value(r.construct_s)
        << ',' << format_value(r.eval_s) << "\n";
    }
    if (!f) throw IoError("write failed for '" + csv.string() + "'");
  }
  written.push_back(csv.string());

  // One plot file per (kind, alpha, fixed parameter, weights) group.
  std::map<std::string, std::vector<const ExperimentRecord*>> groups;
  std::vector<std::string> order;
  const std::string token = config.weights.file_token();
  for (const auto& r : records) {
    const std::string name = conv ? r.kind + "_" + std::to_string(r.alpha) + "_" +
                                        std::to_string(r.d) + "_" + token + ".txt"
                                  : "dim_" + r.kind + "_" + std::to_string(r.alpha) + "_" +
                                        std::to_string(r.n) + "_" + token + ".txt";
    auto [it, fresh] = groups.try_emplace(name);
    if (fresh) order.push_back(name);
    it->second.push_back(&r);
  }
  for (const auto& name : order) {
    const fs::path p = dir / name;
    auto f = open(p);
    for (const auto* r : groups[name]) {
      f << (conv ? r->n : static_cast<long>(r->d)) << ' ' << format_value(r->value) << "\n";
    }
    if (!f) throw IoError("write failed for '" + p.string() + "'");
    written.push_back(p.string());
  }
  return written;
}

}  // namespace kernlat
