#include "grf/app.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "grf/counterexample.hpp"
#include "grf/errors.hpp"
#include "grf/jet.hpp"
#include "grf/kernel.hpp"
#include "grf/parallel.hpp"

namespace grf::app {

using io::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
    return s;
  }
  return v.dump();
}

json read_document(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      throw SchemaError("", std::string("invalid inline JSON: ") + e.what());
    }
  }
  return io::load_json_file(arg);
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + tmp.string() + "'");
    f << content;
    if (!f.flush()) throw Error("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

json point_json(const Point& p) { return std::vector<double>(p.data(), p.data() + p.size()); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

struct Common {
  std::uint64_t seed = 0;
  std::size_t samples = 20000;
  std::string format = "json";
  std::string output;
  int threads = default_thread_count();
};

struct BoxFlags {
  std::vector<double> lower, upper;
  int resolution = 0;

  Box resolve(int m) const {
    std::vector<double> lo = lower.empty() ? std::vector<double>(m, 0.0) : lower;
    std::vector<double> hi = upper.empty() ? std::vector<double>(m, 1.0) : upper;
    if (static_cast<int>(lo.size()) != m || static_cast<int>(hi.size()) != m)
      throw SchemaError("", "--lower/--upper must have one entry per input dimension");
    const int res = resolution > 0 ? resolution : Box::default_resolution(m);
    try {
      return Box(lo, hi, std::vector<int>(m, res));
    } catch (const std::invalid_argument& e) {
      throw SchemaError("", e.what());
    }
  }
};

void add_common(CLI::App* cmd, Common& c, bool mc) {
  if (mc) {
    cmd->add_option("--seed", c.seed, "Random seed (default 0)");
    cmd->add_option("--samples", c.samples, "Monte Carlo sample count (default 20000)")->check(CLI::Range(100, 100000000));
  }
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output,-o", c.output, "Report path (default: standard output)");
  cmd->add_option("--threads", c.threads, "Worker threads (default: $GRFLAB_THREADS or 1)")->check(CLI::PositiveNumber);
}

void add_box(CLI::App* cmd, BoxFlags& b) {
  cmd->add_option("--lower", b.lower, "Box lower corner (default 0 per axis)");
  cmd->add_option("--upper", b.upper, "Box upper corner (default 1 per axis)");
  cmd->add_option("--resolution", b.resolution, "Grid intervals per axis (default 256/64/16 for m=1/2/3+)")
      ->check(CLI::PositiveNumber);
}

struct KernelInput {
  std::string field, kernel;

  void add(CLI::App* cmd) {
    auto* f = cmd->add_option("--field", field, "Field JSON (path or inline document)");
    auto* k = cmd->add_option("--kernel", kernel, "Kernel JSON (path or inline document)");
    f->excludes(k);
  }

  // Kernel plus provenance digest.
  std::pair<CovarianceKernel, std::string> load() const {
    if (!field.empty()) {
      const KLField fld = io::field_from_json(read_document(field));
      return {CovarianceKernel::from_field(make_field(fld)), io::field_digest(fld)};
    }
    if (!kernel.empty()) {
      const json doc = read_document(kernel);
      return {io::kernel_from_json(doc), io::digest(doc)};
    }
    throw SchemaError("", "one of --field or --kernel is required");
  }
};

std::vector<Point> subsample_grid(const Box& box, std::size_t count) {
  const std::size_t n = box.num_points();
  count = std::min(count, n);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < count; ++i)
    pts.push_back(box.point(count == 1 ? 0 : i * (n - 1) / (count - 1)));
  return pts;
}

}  // namespace

std::string render(const json& report, bool csv) {
  if (!csv) return report.dump(2) + "\n";
  std::ostringstream os;
  const json& rows = report.contains("rows") ? report["rows"] : json::array({report});
  if (rows.empty()) return "";
  std::vector<std::string> keys;
  for (const auto& [key, _] : rows.front().items()) keys.push_back(key);
  for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_cell(row.value(keys[i], json()));
    os << "\n";
  }
  return os.str();
}

json counterexample_report(const std::vector<int>& n_values, const McOptions& opts) {
  json rows = json::array();
  for (int n : n_values) {
    const counterexample::Row r = counterexample::report_row(n, opts);
    rows.push_back({{"n", r.n},
                    {"a_n", r.a_n},
                    {"exact_prob", r.exact_prob},
                    {"mc_prob", r.mc.p_hat},
                    {"stderr", r.mc.std_error},
                    {"ci95", {r.mc.ci_low, r.mc.ci_high}},
                    {"ci_covers_exact", r.mc.ci_low <= r.exact_prob && r.exact_prob <= r.mc.ci_high},
                    {"kernel_sup", r.kernel_sup},
                    {"inv_a_n_sq", 1.0 / (r.a_n * r.a_n)}});
  }
  return {{"command", "counterexample"}, {"seed", opts.seed}, {"n_samples", opts.n_samples}, {"rows", rows}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"grflab: numerical laboratory for smooth Gaussian random fields given as finite "
               "Karhunen-Loeve expansions",
               "grflab"};
  cli.require_subcommand(1);
  Common common;
  BoxFlags box_flags;
  KernelInput kin;
  int exit_status = kOk;
  json report;

  // sample
  std::string field_path;
  std::size_t count = 1;
  auto* sample_cmd = cli.add_subcommand(
      "sample", "Draw sample paths of a Karhunen-Loeve field X = sum sigma_n xi_n f_n and tabulate them on a grid");
  sample_cmd->add_option("--field", field_path, "Field JSON")->required();
  sample_cmd->add_option("--count", count, "Number of paths")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", common.seed, "Random seed (default 0)");
  add_common(sample_cmd, common, false);
  add_box(sample_cmd, box_flags);

  // covariance
  std::vector<double> p_arg, q_arg;
  std::vector<int> alpha_arg, beta_arg;
  auto* cov_cmd = cli.add_subcommand(
      "covariance", "Evaluate the covariance function K(p,q) = E[X(p)X(q)^T] or a mixed partial d_(alpha,beta) K");
  kin.add(cov_cmd);
  cov_cmd->add_option("--p", p_arg, "First point")->required();
  cov_cmd->add_option("--q", q_arg, "Second point")->required();
  cov_cmd->add_option("--alpha", alpha_arg, "Derivative multi-index in p (default 0)");
  cov_cmd->add_option("--beta", beta_arg, "Derivative multi-index in q (default 0)");
  add_common(cov_cmd, common, false);

  // seminorm
  int order = 0;
  std::string against;
  auto* semi_cmd = cli.add_subcommand(
      "seminorm", "Grid C^{r,r} kernel seminorm sup |d_(alpha,beta) K|, or the distance to a second kernel");
  kin.add(semi_cmd);
  semi_cmd->add_option("--order", order, "Derivative order r")->check(CLI::NonNegativeNumber);
  semi_cmd->add_option("--against", against, "Second field JSON; report the kernel distance instead");
  add_common(semi_cmd, common, false);
  add_box(semi_cmd, box_flags);

  // jet-scan
  double rel_tol = kDefaultRankTolerance;
  bool require_pass = false;
  auto* jet_cmd = cli.add_subcommand(
      "jet-scan",
      "Certify maximal rank of the r-jet covariance matrix (d_(alpha,beta) K(p,p)) at every grid point; "
      "the sufficient condition for almost-sure jet transversality");
  kin.add(jet_cmd);
  jet_cmd->add_option("--order", order, "Jet order r")->check(CLI::NonNegativeNumber);
  jet_cmd->add_option("--rel-tol", rel_tol, "Spectral ratio threshold (default 1e-9)")->check(CLI::Range(0.0, 1.0));
  jet_cmd->add_flag("--require-pass", require_pass, "Exit 2 unless every point passes");
  add_common(jet_cmd, common, false);
  add_box(jet_cmd, box_flags);

  // estimate
  std::string event_path;
  auto* est_cmd = cli.add_subcommand(
      "estimate", "Monte Carlo probability of a geometric event (sup-norm ball, zero count, positivity, "
                  "degenerate zero) under the field's law");
  est_cmd->add_option("--field", field_path, "Field JSON")->required();
  est_cmd->add_option("--event", event_path, "Event JSON")->required();
  add_common(est_cmd, common, true);

  // gauss-ratio
  std::vector<std::string> field_paths;
  auto* gr_cmd = cli.add_subcommand(
      "gauss-ratio", "Gaussian inequality ratio E||X||_{r-1} / sqrt(||K||_{(r,r)}) for one field or a family");
  gr_cmd->add_option("--field", field_paths, "Field JSON (repeatable)")->required();
  gr_cmd->add_option("--order", order, "Kernel order r (>= 1)")->check(CLI::PositiveNumber);
  add_common(gr_cmd, common, true);
  add_box(gr_cmd, box_flags);

  // limit-study
  std::string limit_path;
  int distance_order = -1;
  auto* ls_cmd = cli.add_subcommand(
      "limit-study", "Event probabilities along a sequence of fields whose covariances converge in C^{r+2,r+2}");
  ls_cmd->add_option("--fields", field_paths, "Field JSON sequence")->required();
  ls_cmd->add_option("--limit", limit_path, "Limit field JSON")->required();
  ls_cmd->add_option("--event", event_path, "Event JSON")->required();
  ls_cmd->add_option("--order", order, "Event order r; distances use r+2")->check(CLI::NonNegativeNumber);
  ls_cmd->add_option("--distance-order", distance_order, "Override the kernel distance order")
      ->check(CLI::NonNegativeNumber);
  add_common(ls_cmd, common, true);
  add_box(ls_cmd, box_flags);

  // counterexample
  std::vector<int> n_values{2, 5, 10};
  auto* ce_cmd = cli.add_subcommand(
      "counterexample", "Bump-sum fields X_n whose covariances tend to 0 uniformly while P{||X_n|| < 1} = "
                        "(1-1/n)^{n^2} tends to 0: kernel convergence without convergence in law");
  ce_cmd->add_option("--n", n_values, "Values of n (>= 2)")->check(CLI::Range(2, 1000));
  add_common(ce_cmd, common, true);

  // validate
  std::size_t n_points = 16;
  std::optional<double> psd_tol;
  auto* val_cmd = cli.add_subcommand(
      "validate", "Check symmetry and non-negative definiteness of a covariance kernel on grid points");
  kin.add(val_cmd);
  val_cmd->add_option("--points", n_points, "Grid points in the Gram matrix (<= 64)")->check(CLI::Range(1, 64));
  val_cmd->add_option("--tol", psd_tol, "Absolute PSD tolerance (default 1e-9 * max diagonal)");
  add_common(val_cmd, common, false);
  add_box(val_cmd, box_flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    cli.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << cli.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << cli.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand --help surfaces as CallForHelp from the subcommand.
    if (e.get_exit_code() == 0) {
      for (auto* sub : cli.get_subcommands()) out << sub->help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const McOptions mc{common.samples, common.seed, common.threads};
  try {
    if (*sample_cmd) {
      const KLField fld = io::field_from_json(read_document(field_path));
      const FieldPtr field = make_field(fld);
      const Box box = box_flags.resolve(fld.m());
      json rows = json::array();
      json samples = json::array();
      for (std::size_t s = 0; s < count; ++s) {
        const SamplePath path = sample(field, common.seed, s);
        samples.push_back({{"index", s}, {"coeffs", point_json(path.coeffs())}});
        for (std::size_t g = 0; g < box.num_points(); ++g) {
          const Point p = box.point(g);
          rows.push_back({{"sample", s}, {"point", point_json(p)}, {"value", point_json(path.eval(p))}});
        }
      }
      report = {{"command", "sample"},
                {"field_digest", io::field_digest(fld)},
                {"seed", common.seed},
                {"box", io::to_json(box)},
                {"samples", samples},
                {"rows", rows}};
    } else if (*cov_cmd) {
      const auto [kernel, digest] = kin.load();
      if (static_cast<int>(p_arg.size()) != kernel.m() || static_cast<int>(q_arg.size()) != kernel.m())
        throw SchemaError("", "--p and --q need one coordinate per input dimension");
      const MultiIndex alpha = alpha_arg.empty() ? MultiIndex::zero(kernel.m()) : MultiIndex(alpha_arg);
      const MultiIndex beta = beta_arg.empty() ? MultiIndex::zero(kernel.m()) : MultiIndex(beta_arg);
      if (alpha.dim() != kernel.m() || beta.dim() != kernel.m())
        throw SchemaError("", "--alpha and --beta need one entry per input dimension");
      const Point p = Eigen::Map<const Vector>(p_arg.data(), kernel.m());
      const Point q = Eigen::Map<const Vector>(q_arg.data(), kernel.m());
      const Matrix m = kernel.eval_deriv(p, q, alpha, beta);
      json rows = json::array();
      for (Eigen::Index j = 0; j < m.rows(); ++j)
        for (Eigen::Index l = 0; l < m.cols(); ++l) rows.push_back({{"j", j}, {"l", l}, {"value", m(j, l)}});
      report = {{"command", "covariance"}, {"field_digest", digest}, {"p", p_arg}, {"q", q_arg},
                {"alpha", alpha.entries()}, {"beta", beta.entries()}, {"matrix", matrix_json(m)}, {"rows", rows}};
    } else if (*semi_cmd) {
      const auto [kernel, digest] = kin.load();
      const Box box = box_flags.resolve(kernel.m());
      report = {{"command", "seminorm"}, {"field_digest", digest}, {"order", order}, {"box", io::to_json(box)}};
      if (!against.empty()) {
        const KLField other = io::field_from_json(read_document(against));
        report["against_digest"] = io::field_digest(other);
        report["distance"] =
            kernel_distance(kernel, CovarianceKernel::from_field(make_field(other)), {box, order}, common.threads);
      } else {
        report["seminorm"] = kernel_seminorm(kernel, {box, order}, common.threads);
      }
    } else if (*jet_cmd) {
      const auto [kernel, digest] = kin.load();
      const Box box = box_flags.resolve(kernel.m());
      const ScanResult scan = scan_nondegeneracy(kernel, box, order, rel_tol, common.threads);
      const Certificate worst = nondegeneracy_certificate(kernel, scan.worst_point, order, rel_tol);
      json rows = json::array();
      for (std::size_t g = 0; g < box.num_points(); ++g) {
        const Certificate c = nondegeneracy_certificate(kernel, box.point(g), order, rel_tol);
        rows.push_back({{"point", point_json(c.point)}, {"ratio", c.ratio}, {"pass", c.nondegenerate},
                        {"jet_dim", c.jet_dim}, {"rank_estimate", c.rank_estimate}});
      }
      report = {{"command", "jet-scan"},
                {"field_digest", digest},
                {"order", order},
                {"rel_tol", rel_tol},
                {"box", io::to_json(box)},
                {"all_pass", scan.all_pass},
                {"points_checked", scan.points_checked},
                {"points_failed", scan.points_failed},
                {"worst", {{"point", point_json(worst.point)}, {"ratio", worst.ratio}, {"pass", worst.nondegenerate},
                           {"jet_dim", worst.jet_dim}, {"rank_estimate", worst.rank_estimate}}},
                {"rows", rows}};
      if (require_pass && !scan.all_pass) exit_status = kValidationFailed;
    } else if (*est_cmd) {
      const KLField fld = io::field_from_json(read_document(field_path));
      const EventSpec event = io::event_from_json(read_document(event_path));
      const MCEstimate e = estimate_probability(make_field(fld), event, mc);
      report = io::to_json(e);
      report["event"] = io::to_json(event);
      report["field_digest"] = io::field_digest(fld);
      report["command"] = "estimate";
    } else if (*gr_cmd) {
      json rows = json::array();
      double family_max = 0.0;
      for (const auto& path : field_paths) {
        const KLField fld = io::field_from_json(read_document(path));
        const Box box = box_flags.resolve(fld.m());
        const GaussianRatio g = gaussian_ratio(make_field(fld), box, std::max(order, 1), mc);
        family_max = std::max(family_max, g.ratio);
        rows.push_back({{"field_digest", io::field_digest(fld)}, {"ratio", g.ratio},
                        {"zero_denominator", g.zero_denominator}, {"sup_mean", g.sup_mean.p_hat},
                        {"sup_mean_stderr", g.sup_mean.std_error}, {"kernel_seminorm", g.kernel_seminorm}});
      }
      report = {{"command", "gauss-ratio"}, {"order", std::max(order, 1)}, {"seed", common.seed},
                {"n_samples", common.samples}, {"family_max", family_max}, {"rows", rows}};
    } else if (*ls_cmd) {
      std::vector<FieldPtr> fields;
      std::vector<std::string> digests;
      for (const auto& path : field_paths) {
        const KLField fld = io::field_from_json(read_document(path));
        digests.push_back(io::field_digest(fld));
        fields.push_back(make_field(fld));
      }
      const KLField lim = io::field_from_json(read_document(limit_path));
      const EventSpec event = io::event_from_json(read_document(event_path));
      const Box box = box_flags.resolve(lim.m());
      const auto table = limit_study(fields, make_field(lim), event, box, order, mc,
                                     distance_order >= 0 ? std::optional<int>(distance_order) : std::nullopt);
      digests.push_back(io::field_digest(lim));
      json rows = json::array();
      for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& r = table[i];
        rows.push_back({{"label", r.label}, {"field_digest", digests[i]}, {"kernel_distance", r.kernel_distance},
                        {"p_hat", r.estimate.p_hat}, {"stderr", r.estimate.std_error},
                        {"ci95", {r.estimate.ci_low, r.estimate.ci_high}}});
      }
      report = {{"command", "limit-study"}, {"event", io::to_json(event)}, {"order", order},
                {"distance_order", distance_order >= 0 ? distance_order : order + 2},
                {"seed", common.seed}, {"n_samples", common.samples}, {"rows", rows}};
    } else if (*ce_cmd) {
      report = counterexample_report(n_values, mc);
    } else if (*val_cmd) {
      const auto [kernel, digest] = kin.load();
      const Box box = box_flags.resolve(kernel.m());
      const std::vector<Point> pts = subsample_grid(box, n_points);
      std::vector<std::pair<Point, Point>> pairs;
      for (const auto& p : pts)
        for (const auto& q : pts) pairs.emplace_back(p, q);
      const SymmetryReport sym = check_symmetry(kernel, pairs);
      const PsdReport psd = check_psd(kernel, pts, psd_tol);
      report = {{"command", "validate"},
                {"field_digest", digest},
                {"points", pts.size()},
                {"symmetric", sym.passed},
                {"worst_asymmetry", sym.worst_violation},
                {"psd", psd.passed},
                {"min_eigenvalue", psd.min_eigenvalue},
                {"psd_tolerance", psd.tolerance}};
      if (!sym.passed || !psd.passed) exit_status = kValidationFailed;
    }
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const std::string text = render(report, common.format == "csv");
  try {
    if (common.output.empty()) out << text;
    else write_atomically(common.output, text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return exit_status;
}

}  // namespace grf::app
