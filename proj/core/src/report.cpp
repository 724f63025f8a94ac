#include "rectiscope/report.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>

#include "rectiscope/errors.hpp"
#include "rectiscope/io.hpp"

namespace rectiscope {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json config_json(const PartitionConfig& c) {
  Json j;
  j["q0"] = c.root.to_string();
  j["N"] = c.threshold;
  j["eps"] = c.epsilon;
  j["depth"] = c.depth;
  return j;
}

Json properties_json(const PartitionProperties& p) {
  Json j;
  j["inheritance"] = p.inheritance;
  j["inheritance_violations"] = p.inheritance_violations;
  j["mass_retained"] = p.mass_retained;
  j["mass_b"] = p.mass_b;
  j["mass_bound"] = p.mass_bound;
  j["diameter_sum"] = p.diameter_sum;
  j["diameter_total"] = p.diameter_total;
  j["diameter_bound"] = p.diameter_bound;
  return j;
}

Json polyline_json(const Polyline& curve) {
  Json j;
  j["vertices"] = Json::array();
  for (const auto& v : curve.vertices) j["vertices"].push_back(v);
  j["length"] = curve.length;
  return j;
}

void dump(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw InputError("report format must be json or csv, got '" + name + "'");
}

void write_beta_report(std::ostream& out, std::span<const BetaResult> rows, ReportFormat format) {
  if (format == ReportFormat::csv) {
    out << "region,level,mass,beta,normalization,converged\n";
    for (const auto& r : rows) {
      out << region_label(r.region) << ',' << region_level(r.region) << ','
          << format_number(r.mass) << ',' << format_number(r.value) << ','
          << to_string(r.normalization) << ',' << (r.converged ? "true" : "false") << '\n';
    }
    return;
  }
  Json doc = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["region"] = region_label(r.region);
    j["level"] = region_level(r.region);
    j["mass"] = r.mass;
    j["beta"] = number(r.value);
    j["normalization"] = to_string(r.normalization);
    j["converged"] = r.converged;
    doc.push_back(std::move(j));
  }
  dump(out, doc);
}

void write_ssum_report(std::ostream& out, const SsumReport& report, ReportFormat format) {
  if (format == ReportFormat::csv) {
    out << "atom,S_K,last_increment,window_ratio,classification\n";
    for (std::size_t a = 0; a < report.atoms.size(); ++a) {
      const auto& r = report.atoms[a];
      out << a << ',' << format_number(r.partial_sum) << ',' << format_number(r.last_increment)
          << ',' << format_number(r.window_ratio) << ','
          << (r.error ? std::string("error") : to_string(r.growth)) << '\n';
    }
    return;
  }
  Json doc;
  doc["depth"] = report.depth;
  doc["thresholds"] = {{"converging", report.thresholds.converging},
                       {"diverging", report.thresholds.diverging},
                       {"note", "heuristic on a_K / a_{K-2}"}};
  doc["atoms"] = Json::array();
  for (std::size_t a = 0; a < report.atoms.size(); ++a) {
    const auto& r = report.atoms[a];
    Json j;
    j["atom"] = a;
    j["S_K"] = number(r.partial_sum);
    j["last_increment"] = number(r.last_increment);
    j["window_ratio"] = number(r.window_ratio);
    j["classification"] = r.error ? std::string("error") : to_string(r.growth);
    if (r.error) j["error"] = *r.error;
    doc["atoms"].push_back(std::move(j));
  }
  dump(out, doc);
}

void write_density_report(std::ostream& out, std::span<const DensityEstimate> per_atom, int m,
                          ReportFormat format) {
  if (format == ReportFormat::csv) {
    out << "atom,k,ratio\n";
    for (std::size_t a = 0; a < per_atom.size(); ++a) {
      for (std::size_t k = 0; k < per_atom[a].ratio.size(); ++k) {
        out << a << ',' << k << ',' << format_number(per_atom[a].ratio[k]) << '\n';
      }
    }
    return;
  }
  Json doc;
  doc["m"] = m;
  doc["omega_m"] = unit_ball_volume(m);
  doc["atoms"] = Json::array();
  for (std::size_t a = 0; a < per_atom.size(); ++a) {
    Json j;
    j["atom"] = a;
    j["ratios"] = per_atom[a].ratio;
    j["min"] = per_atom[a].min;
    j["max"] = per_atom[a].max;
    doc["atoms"].push_back(std::move(j));
  }
  dump(out, doc);
}

void write_jones_report(std::ostream& out, std::span<const JonesEstimate> per_atom,
                        ReportFormat format) {
  if (format == ReportFormat::csv) {
    out << "atom,k,beta,mass,J_partial\n";
    for (std::size_t a = 0; a < per_atom.size(); ++a) {
      double partial = 0.0;
      for (std::size_t k = 0; k < per_atom[a].beta.size(); ++k) {
        partial += per_atom[a].beta[k] * per_atom[a].beta[k] * std::log(2.0);
        out << a << ',' << k << ',' << format_number(per_atom[a].beta[k]) << ','
            << format_number(per_atom[a].mass[k]) << ',' << format_number(partial) << '\n';
      }
    }
    return;
  }
  Json doc = Json::array();
  for (std::size_t a = 0; a < per_atom.size(); ++a) {
    Json j;
    j["atom"] = a;
    j["J"] = per_atom[a].value;
    j["depth"] = per_atom[a].depth;
    j["beta"] = per_atom[a].beta;
    Json empty = Json::array();
    for (bool e : per_atom[a].empty) empty.push_back(e);
    j["empty_octave"] = std::move(empty);
    doc.push_back(std::move(j));
  }
  dump(out, doc);
}

void write_diagnostic_report(std::ostream& out, std::span<const RectifiabilityDiagnostic> rows,
                             const LiminfBetaReport* liminf, ReportFormat format) {
  if (format == ReportFormat::csv) {
    out << "atom,J,density_min,density_max";
    if (liminf) out << ",liminf_beta,liminf_level";
    out << '\n';
    for (std::size_t a = 0; a < rows.size(); ++a) {
      out << a << ',' << format_number(rows[a].jones) << ',' << format_number(rows[a].density_min)
          << ',' << format_number(rows[a].density_max);
      if (liminf) {
        out << ',' << format_number(liminf->minimum[a]) << ',' << liminf->argmin_level[a];
      }
      out << '\n';
    }
    return;
  }
  Json doc = Json::array();
  for (std::size_t a = 0; a < rows.size(); ++a) {
    Json j;
    j["atom"] = a;
    j["J"] = rows[a].jones;
    j["density_min"] = rows[a].density_min;
    j["density_max"] = rows[a].density_max;
    if (liminf) {
      j["liminf_beta"] = number(liminf->minimum[a]);
      j["liminf_level"] = liminf->argmin_level[a];
    }
    doc.push_back(std::move(j));
  }
  dump(out, doc);
}

void write_partition_report(std::ostream& out, const GoodBadPartition& partition,
                            const PartitionProperties& properties, ReportFormat format) {
  if (format == ReportFormat::csv) {
    out << "cube,level,label,massA,mass\n";
    for (const auto& c : partition.cubes) {
      out << c.id.to_string() << ',' << c.id.level << ',' << to_string(c.label) << ','
          << format_number(c.mass_a) << ',' << format_number(c.mass) << '\n';
    }
    return;
  }
  Json doc;
  doc["config"] = config_json(partition.config);
  doc["eta"] = partition.eta;
  doc["mass_a"] = partition.mass_a;
  doc["mass_b"] = partition.b_mass;
  doc["good_diameter_sum"] = partition.good_diameter_sum;
  doc["properties"] = properties_json(properties);
  doc["b_atoms"] = partition.b_atoms;
  doc["cubes"] = Json::array();
  for (const auto& c : partition.cubes) {
    Json j;
    j["cube"] = c.id.to_string();
    j["level"] = c.id.level;
    j["label"] = to_string(c.label);
    j["massA"] = c.mass_a;
    j["mass"] = c.mass;
    doc["cubes"].push_back(std::move(j));
  }
  dump(out, doc);
}

void write_polyline_json(std::ostream& out, const Polyline& curve) { dump(out, polyline_json(curve)); }

Polyline read_polyline_json(std::istream& in) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(std::string("invalid polyline JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array() ||
      !doc.contains("length") || !doc["length"].is_number()) {
    throw InputError("polyline JSON must be {\"vertices\": [[...]], \"length\": number}");
  }
  Polyline p;
  for (const auto& v : doc["vertices"]) p.vertices.push_back(v.get<std::vector<double>>());
  p.length = doc["length"].get<double>();
  return p;
}

void write_family_report(std::ostream& out, const FamilyReport& family) {
  Json doc;
  doc["q0"] = family.a.root.to_string();
  doc["N"] = family.a.threshold;
  doc["depth"] = family.a.depth;
  doc["eta"] = family.a.eta;
  doc["mass_a"] = family.a.mass;
  doc["uncovered_mass"] = family.uncovered_mass;
  doc["uncovered_bound"] = family.uncovered_bound;
  doc["curves"] = Json::array();
  for (const auto& m : family.members) {
    Json j;
    j["eps"] = m.epsilon;
    j["mass_b"] = m.partition.b_mass;
    j["properties"] = properties_json(m.properties);
    j["tree_length"] = m.tree.length;
    j["half_good_diameter_sum"] = m.tree.half_good_diameter_sum;
    j["length_bound"] = m.certificate.bound;
    j["certificate"] = m.certificate.pass ? "pass" : "fail";
    j["coverage"] = {{"b_count", m.coverage.b_count},
                     {"max_distance", m.coverage.max_distance},
                     {"h1_estimate", m.coverage.h1_estimate},
                     {"level", m.coverage.level}};
    j["polyline"] = polyline_json(m.curve);
    doc["curves"].push_back(std::move(j));
  }
  dump(out, doc);
}

void write_svg(std::ostream& out, const DiscreteMeasure& mu, std::span<const Polyline> curves) {
  if (mu.dimension() != 2) throw InputError("SVG output requires dimension 2");
  double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi[2] = {-lo[0], -lo[1]};
  auto extend = [&](std::span<const double> x) {
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], x[d]);
      hi[d] = std::max(hi[d], x[d]);
    }
  };
  for (std::size_t a = 0; a < mu.size(); ++a) extend(mu.position(a));
  for (const auto& c : curves) {
    for (const auto& v : c.vertices) extend(v);
  }
  if (!(lo[0] <= hi[0])) lo[0] = lo[1] = 0.0, hi[0] = hi[1] = 1.0;
  const double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-9});
  const double size = 800.0, margin = 20.0, scale = (size - 2 * margin) / span;
  auto sx = [&](double x) { return format_number(margin + (x - lo[0]) * scale); };
  auto sy = [&](double y) { return format_number(size - margin - (y - lo[1]) * scale); };

  double max_w = 0.0;
  for (double w : mu.weights()) max_w = std::max(max_w, w);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  for (const auto& c : curves) {
    out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      if (i) out << ' ';
      out << sx(c.vertices[i][0]) << ',' << sy(c.vertices[i][1]);
    }
    out << "\"/>\n";
  }
  for (std::size_t a = 0; a < mu.size(); ++a) {
    auto x = mu.position(a);
    const double r = 0.5 + 2.5 * std::sqrt(mu.weight(a) / max_w);
    out << "<circle cx=\"" << sx(x[0]) << "\" cy=\"" << sy(x[1]) << "\" r=\"" << format_number(r)
        << "\" fill=\"#2c3e50\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace rectiscope
