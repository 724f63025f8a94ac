// rectiscope: command-line driver for the multiscale measure diagnostics.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rectiscope/rectiscope.hpp"

namespace rs = rectiscope;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kInvariant = 3,
};

struct RunConfig {
  std::string input;
  std::optional<int> n;
  int m = 1;
  double p = 2.0;
  int depth = 8;
  std::string q0;
  double threshold = 0.0;
  std::vector<double> eps;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  double tol_fit = 1e-9;
  double tol_report = rs::kReportTolerance;
  std::string region = "cube";

  std::string generate_format = "csv";
  std::string kind = "atom";
  int level = 0;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<std::string> vertices;
  double weight = 1.0;
  double radius = 1.0;
};

void emit_error(const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json err;
  err["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << err.dump() << '\n';
}

std::vector<double> parse_coords(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw rs::InputError("bad coordinate list '" + text + "'");
    }
  }
  if (out.empty()) throw rs::InputError("empty coordinate list");
  return out;
}

rs::DyadicCubeId parse_q0(const std::string& text, int dimension) {
  if (text.empty()) return {0, std::vector<std::int64_t>(dimension, 0)};
  rs::DyadicCubeId id{0, {}};
  for (double c : parse_coords(text)) {
    if (c != std::floor(c)) throw rs::InputError("--q0 takes integer level-0 coordinates");
    id.coords.push_back(static_cast<std::int64_t>(c));
  }
  if (static_cast<int>(id.coords.size()) != dimension) {
    throw rs::InputError("--q0 has " + std::to_string(id.coords.size()) +
                         " coordinates, data has n=" + std::to_string(dimension));
  }
  return id;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("rectiscope");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RECTISCOPE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      throw rs::InputError(std::string("RECTISCOPE_LOG: unknown level '") + env + "'");
    }
    spdlog::set_level(level);
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

rs::DiscreteMeasure load(const RunConfig& cfg) {
  auto mu = rs::load_measure(cfg.input);
  if (cfg.n && *cfg.n != mu.dimension()) {
    throw rs::InputError("--n " + std::to_string(*cfg.n) + " but input has dimension " +
                         std::to_string(mu.dimension()));
  }
  spdlog::info("loaded {} atoms in R^{} (mass {})", mu.size(), mu.dimension(), mu.total_mass());
  return mu;
}

rs::ReportFormat report_format(const RunConfig& cfg) { return rs::parse_report_format(cfg.format); }

void require_plane_dimension(const RunConfig& cfg, int n) {
  if (cfg.m < 1 || cfg.m >= n) {
    throw rs::InputError("--m must satisfy 1 <= m <= n-1 (n=" + std::to_string(n) + ")");
  }
}

int cmd_generate(const RunConfig& cfg) {
  rs::GeneratorSpec spec;
  spec.kind = rs::parse_generator_kind(cfg.kind);
  spec.dimension = cfg.n.value_or(2);
  spec.level = cfg.level;
  spec.seed = cfg.seed;
  spec.count = cfg.count;
  spec.weight = cfg.weight;
  spec.radius = cfg.radius;
  for (const auto& v : cfg.vertices) spec.points.push_back(parse_coords(v));
  if (cfg.generate_format != "csv" && cfg.generate_format != "json") {
    throw rs::InputError("generate writes csv or json");
  }
  const auto mu = rs::generate(spec);
  Output out(cfg.out);
  if (cfg.generate_format == "csv") {
    rs::write_csv(out.stream(), mu);
  } else {
    rs::write_json(out.stream(), mu);
  }
  return kOk;
}

int cmd_beta(const RunConfig& cfg) {
  const auto format = report_format(cfg);
  if (cfg.region != "cube" && cfg.region != "triple") throw rs::InputError("--region is cube or triple");
  const auto mu = load(cfg);
  require_plane_dimension(cfg, mu.dimension());
  const auto tree = rs::MassTree::build(mu, cfg.depth);
  std::optional<rs::DyadicCubeId> root;
  if (!cfg.q0.empty()) root = parse_q0(cfg.q0, mu.dimension());

  std::vector<rs::DyadicCubeId> cubes;
  for (int j = 0; j <= tree.depth(); ++j) {
    for (std::uint32_t i = 0; i < tree.cube_count(j); ++i) {
      auto id = tree.id({j, i});
      if (!root || root->contains(id)) cubes.push_back(std::move(id));
    }
  }
  rs::BetaOptions options;
  options.relative_tolerance = cfg.tol_fit;
  std::vector<rs::BetaResult> rows(cubes.size());
  rs::parallel_for(cubes.size(), cfg.jobs, [&](std::size_t k) {
    rows[k] = cfg.region == "cube" ? rs::cube_beta(mu, tree, cubes[k], cfg.m, cfg.p, options)
                                   : rs::triple_cube_beta(mu, tree, cubes[k], cfg.m, cfg.p, options);
  });
  Output out(cfg.out);
  rs::write_beta_report(out.stream(), rows, format);
  return kOk;
}

int cmd_jones(const RunConfig& cfg) {
  const auto format = report_format(cfg);
  const auto mu = load(cfg);
  require_plane_dimension(cfg, mu.dimension());
  if (cfg.p < 1.0) throw rs::InputError("--p must be >= 1");
  rs::BetaOptions options;
  options.relative_tolerance = cfg.tol_fit;
  std::vector<rs::JonesEstimate> rows(mu.size());
  rs::parallel_for(mu.size(), cfg.jobs, [&](std::size_t a) {
    rows[a] = rs::jones_function(mu, mu.position(a), cfg.m, cfg.p, cfg.depth, options);
  });
  Output out(cfg.out);
  rs::write_jones_report(out.stream(), rows, format);
  return kOk;
}

int cmd_density(const RunConfig& cfg) {
  const auto format = report_format(cfg);
  const auto mu = load(cfg);
  if (cfg.m < 1) throw rs::InputError("--m must be >= 1");
  std::vector<rs::DensityEstimate> rows(mu.size());
  rs::parallel_for(mu.size(), cfg.jobs, [&](std::size_t a) {
    rows[a] = rs::density_estimate(mu, mu.position(a), cfg.m, cfg.depth);
  });
  Output out(cfg.out);
  rs::write_density_report(out.stream(), rows, cfg.m, format);
  return kOk;
}

int cmd_ssum(const RunConfig& cfg) {
  const auto format = report_format(cfg);
  const auto mu = load(cfg);
  const auto tree = rs::MassTree::build(mu, cfg.depth);
  const auto report = rs::density_sum(tree, mu, cfg.depth, {}, cfg.jobs);
  Output out(cfg.out);
  rs::write_ssum_report(out.stream(), report, format);
  return kOk;
}

void require_partition_flags(const RunConfig& cfg, bool single_eps) {
  if (!(cfg.threshold > 0.0)) throw rs::InputError("--N must be given and > 0");
  if (cfg.eps.empty()) throw rs::InputError("--eps must be given");
  if (single_eps && cfg.eps.size() != 1) throw rs::InputError("partition takes exactly one --eps");
}

int cmd_partition(const RunConfig& cfg) {
  const auto format = report_format(cfg);
  require_partition_flags(cfg, true);
  const auto mu = load(cfg);
  const auto root = parse_q0(cfg.q0, mu.dimension());
  const auto tree = rs::MassTree::build(mu, cfg.depth);
  const auto s = rs::density_sum(tree, mu, cfg.depth, {}, cfg.jobs);
  const auto a = rs::level_set_a(s, tree, mu, root, cfg.threshold);
  const auto partition = rs::classify_cubes(tree, mu, a, {root, cfg.threshold, cfg.eps[0], cfg.depth});
  const auto properties = rs::partition_properties_check(partition, cfg.tol_report);
  spdlog::info("A: {} atoms, B: {} atoms", a.atoms.size(), partition.b_atoms.size());
  Output out(cfg.out);
  rs::write_partition_report(out.stream(), partition, properties, format);
  return kOk;
}

int cmd_curve(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "svg") throw rs::InputError("curve writes json or svg");
  require_partition_flags(cfg, false);
  const auto mu = load(cfg);
  if (cfg.format == "svg" && mu.dimension() != 2) throw rs::InputError("svg output needs n = 2");
  const auto root = parse_q0(cfg.q0, mu.dimension());
  const auto tree = rs::MassTree::build(mu, cfg.depth);
  const auto family = rs::extract_rectifiable_family(tree, mu, root, cfg.threshold, cfg.eps,
                                                     cfg.depth, cfg.jobs, cfg.tol_report);
  spdlog::info("uncovered A-mass {} (bound {})", family.uncovered_mass, family.uncovered_bound);
  Output out(cfg.out);
  if (cfg.format == "svg") {
    std::vector<rs::Polyline> curves;
    for (const auto& m : family.members) curves.push_back(m.curve);
    rs::write_svg(out.stream(), mu, curves);
  } else {
    rs::write_family_report(out.stream(), family);
  }
  return kOk;
}

int cmd_diagnose(const RunConfig& cfg) {
  const auto format = report_format(cfg);
  rs::check_exponent_range(cfg.m, cfg.p);
  const auto mu = load(cfg);
  require_plane_dimension(cfg, mu.dimension());
  rs::BetaOptions options;
  options.relative_tolerance = cfg.tol_fit;
  const auto rows = rs::rectifiability_diagnostic(mu, cfg.m, cfg.p, cfg.depth, options, cfg.jobs);
  const auto tree = rs::MassTree::build(mu, cfg.depth);
  const auto liminf = rs::liminf_beta_diagnostic(tree, mu, cfg.depth, cfg.m, cfg.jobs);
  Output out(cfg.out);
  rs::write_diagnostic_report(out.stream(), rows, &liminf, format);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale flatness and density diagnostics for discrete measures"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Point cloud (.csv with x1..xn,w header, or .json)")->required();
    sub->add_option("--n", cfg.n, "Expected ambient dimension")->check(CLI::PositiveNumber);
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--depth", cfg.depth, "Deepest dyadic level K")->check(CLI::Range(0, 52));
    sub->add_option("--out", cfg.out, "Output file (default stdout)");
    sub->add_option("--format", cfg.format, "Output format")->capture_default_str();
    sub->add_option("--jobs", cfg.jobs, "Worker threads; results do not depend on it")
        ->check(CLI::PositiveNumber);
  };
  auto add_beta_flags = [&](CLI::App* sub) {
    sub->add_option("--m", cfg.m, "Plane dimension m")->capture_default_str();
    sub->add_option("--p", cfg.p, "Exponent p >= 1")->capture_default_str();
    sub->add_option("--tol-fit", cfg.tol_fit, "Relative tolerance of the L^p plane fit")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };
  auto add_partition_flags = [&](CLI::App* sub) {
    sub->add_option("--q0", cfg.q0, "Top cube as level-0 integer coordinates, e.g. 0,0");
    sub->add_option("--N", cfg.threshold, "Threshold on S_K defining A");
    sub->add_option("--tol-report", cfg.tol_report, "Relative slack of certificate comparisons")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  };

  auto* generate = app.add_subcommand("generate", "Write a fixture point cloud");
  generate->add_option("--kind", cfg.kind, "atom, segment, polyline, cantor-quarter-line, "
                                           "four-corner-cantor, uniform-square, circle, random-uniform")
      ->required();
  generate->add_option("--n", cfg.n, "Ambient dimension")->check(CLI::PositiveNumber);
  generate->add_option("--level", cfg.level, "Subdivision level or Cantor generation");
  generate->add_option("--seed", cfg.seed, "Seed for random-uniform");
  generate->add_option("--count", cfg.count, "Atom count for random-uniform");
  generate->add_option("--vertex", cfg.vertices, "Vertex as comma-separated coordinates (repeatable)");
  generate->add_option("--weight", cfg.weight, "Atom weight for the atom kind");
  generate->add_option("--radius", cfg.radius, "Circle radius");
  generate->add_option("--out", cfg.out, "Output file (default stdout)");
  generate->add_option("--format", cfg.generate_format, "csv or json")->capture_default_str();

  auto* beta = app.add_subcommand("beta", "Beta numbers of every stored cube");
  add_input(beta);
  add_common(beta);
  add_beta_flags(beta);
  beta->add_option("--q0", cfg.q0, "Only cubes inside this level-0 cube");
  beta->add_option("--region", cfg.region, "cube or triple")->capture_default_str();

  auto* jones = app.add_subcommand("jones", "Truncated Jones function at every atom");
  add_input(jones);
  add_common(jones);
  add_beta_flags(jones);

  auto* density = app.add_subcommand("density", "Ball density ratios at every atom");
  add_input(density);
  add_common(density);
  density->add_option("--m", cfg.m, "Density dimension m")->capture_default_str();

  auto* ssum = app.add_subcommand("ssum", "Truncated density sum S_K at every atom");
  add_input(ssum);
  add_common(ssum);

  auto* partition = app.add_subcommand("partition", "Good/bad cube partition for one epsilon");
  add_input(partition);
  add_common(partition);
  add_partition_flags(partition);
  partition->add_option("--eps", cfg.eps, "Badness ratio epsilon");

  auto* curve = app.add_subcommand("curve", "Tree curves and tours for a list of epsilons");
  add_input(curve);
  add_common(curve);
  add_partition_flags(curve);
  curve->add_option("--eps", cfg.eps, "Badness ratio epsilon (repeatable)");

  auto* diagnose = app.add_subcommand("diagnose", "Jones, density and liminf-beta proxies per atom");
  add_input(diagnose);
  add_common(diagnose);
  add_beta_flags(diagnose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what(), kUsage);
    return kUsage;
  }

  try {
    configure_logging();
    if (generate->parsed()) return cmd_generate(cfg);
    if (beta->parsed()) return cmd_beta(cfg);
    if (jones->parsed()) return cmd_jones(cfg);
    if (density->parsed()) return cmd_density(cfg);
    if (ssum->parsed()) return cmd_ssum(cfg);
    if (partition->parsed()) return cmd_partition(cfg);
    if (curve->parsed()) return cmd_curve(cfg);
    if (diagnose->parsed()) return cmd_diagnose(cfg);
  } catch (const rs::RangeError& e) {
    emit_error("range", e.what(), kUsage);
    return kUsage;
  } catch (const rs::InputError& e) {
    emit_error("input", e.what(), kUsage);
    return kUsage;
  } catch (const rs::InvariantViolation& e) {
    emit_error("invariant", e.what(), kInvariant);
    return kInvariant;
  } catch (const std::exception& e) {
    emit_error("runtime", e.what(), kFailure);
    return kFailure;
  }
  return kFailure;
}
