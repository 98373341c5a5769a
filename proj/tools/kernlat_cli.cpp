#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "kernlat/cbc.hpp"
#include "kernlat/criteria.hpp"
#include "kernlat/errors.hpp"
#include "kernlat/experiments.hpp"
#include "kernlat/interpolant.hpp"
#include "kernlat/lattice.hpp"

namespace {

using namespace kernlat;

constexpr const char* kPrecisionEnv = "KERNLAT_PRECISION_BITS";

struct Common {
  int alpha = 1;
  std::string weights = "poly3a";
  int precision_bits = 256;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--alpha", c.alpha, "smoothness (1..4 for S, 1..2 for P)")->capture_default_str();
  cmd->add_option("--weights", c.weights, "poly3a | poly2 | geo09 | equal | list:g1,g2,...")
      ->capture_default_str();
  cmd->add_option("--precision-bits", c.precision_bits, "mantissa bits for P work (53 = double)")
      ->envname(kPrecisionEnv)
      ->check(CLI::Range(53, 1 << 16))
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads for the P search (0 = all cores)")
      ->capture_default_str();
}

std::set<CriterionKind> parse_criteria(const std::string& text) {
  std::set<CriterionKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(parse_criterion(item));
  }
  if (out.empty()) throw InvalidArgumentError("empty criterion list");
  return out;
}

void print_slopes(const std::vector<ExperimentRecord>& records) {
  std::map<std::string, std::vector<std::pair<double, double>>> by_kind;
  for (const auto& r : records) by_kind[r.kind].emplace_back(static_cast<double>(r.n), r.value);
  for (const auto& [kind, pts] : by_kind) {
    if (pts.size() < 2) continue;
    std::cout << "slope " << kind << " " << std::setprecision(6) << fit_slope(pts) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice CBC constructions and kernel-interpolation criteria"};
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);

  // cbc
  Common cbc_common;
  long cbc_n = 0;
  int cbc_d = 0;
  std::string cbc_criterion = "S";
  std::string vector_out;
  bool fast_prime = false;
  auto* cbc = app.add_subcommand("cbc", "construct a generating vector");
  cbc->add_option("--n", cbc_n, "number of points")->required();
  cbc->add_option("--d", cbc_d, "dimension")->required();
  cbc->add_option("--criterion", cbc_criterion, "S or P")->capture_default_str();
  cbc->add_option("--vector-out", vector_out, "write the vector to this file");
  cbc->add_flag("--fast-prime", fast_prime, "FFT scoring over the unit group for prime n (S only)");
  add_common(cbc, cbc_common);

  // eval
  Common eval_common;
  std::string vector_in;
  std::string eval_criterion = "S";
  auto* eval = app.add_subcommand("eval", "evaluate a criterion for a stored vector");
  eval->add_option("--vector-in", vector_in, "vector file")->required();
  eval->add_option("--criterion", eval_criterion, "S or P")->capture_default_str();
  add_common(eval, eval_common);

  // convergence
  Common conv_common;
  ExperimentConfig conv_cfg;
  std::string conv_criteria = "S,P";
  bool conv_no_timings = false;
  auto* conv = app.add_subcommand("convergence", "criterion values over n = 2^m");
  conv->add_option("--m-from", conv_cfg.m_from)->capture_default_str();
  conv->add_option("--m-to", conv_cfg.m_to)->capture_default_str();
  conv->add_option("--d", conv_cfg.d)->capture_default_str();
  conv->add_option("--criteria", conv_criteria, "comma-separated subset of S,P")->capture_default_str();
  conv->add_option("--out-dir", conv_cfg.out_dir)->capture_default_str();
  conv->add_flag("--no-timings", conv_no_timings, "write 0 for wall-time columns");
  add_common(conv, conv_common);

  // dimension
  Common dim_common;
  ExperimentConfig dim_cfg;
  std::string dim_criteria = "S,P";
  bool dim_no_timings = false;
  auto* dim = app.add_subcommand("dimension", "criterion values over prefix dimensions");
  dim->add_option("--m", dim_cfg.m)->capture_default_str();
  dim->add_option("--d-max", dim_cfg.d_max)->capture_default_str();
  dim->add_option("--criteria", dim_criteria, "comma-separated subset of S,P")->capture_default_str();
  dim->add_option("--out-dir", dim_cfg.out_dir)->capture_default_str();
  dim->add_flag("--no-timings", dim_no_timings, "write 0 for wall-time columns");
  add_common(dim, dim_common);

  // interp-demo
  Common demo_common;
  long demo_n = 128;
  int demo_d = 4;
  std::uint64_t demo_seed = 1;
  int demo_terms = 8;
  int demo_max_freq = 4;
  long demo_eval = 4099;
  auto* demo = app.add_subcommand("interp-demo", "fit a random unit-norm function and compare bounds");
  demo->add_option("--n", demo_n)->capture_default_str();
  demo->add_option("--d", demo_d)->capture_default_str();
  demo->add_option("--seed", demo_seed)->capture_default_str();
  demo->add_option("--terms", demo_terms)->capture_default_str();
  demo->add_option("--max-freq", demo_max_freq)->capture_default_str();
  demo->add_option("--n-eval", demo_eval, "evaluation lattice size")->capture_default_str();
  add_common(demo, demo_common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cbc) {
      const auto kind = parse_criterion(cbc_criterion);
      const SpaceParams params(cbc_common.alpha, ProductWeights::parse(cbc_common.weights), cbc_d);
      CbcOptions opts;
      opts.threads = cbc_common.threads;
      opts.path = fast_prime ? ScoringPath::FastPrime : ScoringPath::Direct;
      GeneratingVector gv(2, {1});
      double value = 0.0;
      int bits = 53;
      if (kind == CriterionKind::S) {
        const auto r = cbc_s(cbc_n, cbc_d, params, PrecisionContext::native(), opts);
        gv = r.gv;
        value = r.s_star_values.back();
      } else {
        bits = cbc_common.precision_bits;
        const auto r = cbc_p(cbc_n, cbc_d, params, PrecisionContext{bits}, opts);
        gv = r.gv;
        value = r.p_star;
        for (const auto& diag : r.diagnostics) {
          std::cerr << "skipped s=" << diag.s << " z=" << diag.z << ": " << diag.message << "\n";
        }
      }
      const VectorMetadata meta{to_string(kind), cbc_common.alpha, params.weights().name(), bits};
      std::cout << serialize(gv, meta) << "\n";
      std::cout << "value " << std::setprecision(17) << value << "\n";
      if (!vector_out.empty()) write_generating_vector(vector_out, gv, meta);
    } else if (*eval) {
      const auto kind = parse_criterion(eval_criterion);
      const GeneratingVector gv = read_generating_vector(vector_in);
      const SpaceParams params(eval_common.alpha, ProductWeights::parse(eval_common.weights), gv.d());
      const auto v = kind == CriterionKind::S
                         ? s_star(gv, params)
                         : p_star(gv, params, PrecisionContext{eval_common.precision_bits});
      std::cout << to_string(kind) << "* " << std::setprecision(17) << v.value << "\n";
    } else if (*conv || *dim) {
      const bool is_conv = static_cast<bool>(*conv);
      ExperimentConfig cfg = is_conv ? conv_cfg : dim_cfg;
      const Common& c = is_conv ? conv_common : dim_common;
      cfg.criteria = parse_criteria(is_conv ? conv_criteria : dim_criteria);
      cfg.alpha = c.alpha;
      cfg.weights = ProductWeights::parse(c.weights);
      cfg.precision_bits = c.precision_bits;
      cfg.threads = c.threads;
      cfg.timings = !(is_conv ? conv_no_timings : dim_no_timings);
      const auto records = is_conv ? run_convergence(cfg) : run_dimension(cfg);
      for (const auto& path :
           emit_outputs(records, cfg, is_conv ? StudyKind::Convergence : StudyKind::Dimension)) {
        std::cout << "wrote " << path << "\n";
      }
      if (is_conv) print_slopes(records);
    } else if (*demo) {
      const SpaceParams params(demo_common.alpha, ProductWeights::parse(demo_common.weights), demo_d);
      const auto gv = cbc_s(demo_n, demo_d, params).gv;
      const auto f = random_unit_function(params, demo_terms, demo_max_freq, demo_seed);
      const auto ip = fit(gv, params, sample_at_nodes(gv, f));
      const double err = l2_error_estimate(ip, f, demo_eval, demo_seed);
      const double s = s_star(gv, params).value;
      const double p = p_star(gv, params, PrecisionContext{demo_common.precision_bits}).value;
      std::cout << serialize(gv) << "\n" << std::setprecision(10) << "l2_error " << err << "\n"
                << "S* " << s << "\nP* " << p << "\n"
                << "within_bounds " << (err <= std::min(s, p) ? "yes" : "no") << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
