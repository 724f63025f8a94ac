#include "rectiscope/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <vector>

#include "rectiscope/errors.hpp"

namespace rectiscope {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw InputError("line " + std::to_string(line) + ": cannot parse number '" + field + "'");
  }
  return value;
}

}  // namespace

DiscreteMeasure read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.size() < 2) throw InputError("CSV header must be x1,...,xn,w");
  const std::size_t n = header.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (header[i] != "x" + std::to_string(i + 1)) {
      throw InputError("CSV header column " + std::to_string(i + 1) + " must be x" +
                       std::to_string(i + 1) + ", got '" + header[i] + "'");
    }
  }
  if (header.back() != "w") throw InputError("last CSV header column must be w");

  DiscreteMeasure mu(static_cast<int>(n));
  std::vector<double> x(n);
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != n + 1) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(n + 1) +
                       " fields, got " + std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = parse_number(fields[i], line_no);
    const double w = parse_number(fields[n], line_no);
    try {
      mu.add(x, w);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return mu;
}

void write_csv(std::ostream& out, const DiscreteMeasure& mu) {
  for (int i = 1; i <= mu.dimension(); ++i) out << 'x' << i << ',';
  out << "w\n";
  for (std::size_t a = 0; a < mu.size(); ++a) {
    for (double c : mu.position(a)) out << format_number(c) << ',';
    out << format_number(mu.weight(a)) << '\n';
  }
}

DiscreteMeasure read_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("atoms") ||
      !doc["n"].is_number_integer() || !doc["atoms"].is_array()) {
    throw InputError("JSON point cloud must be {\"n\": int, \"atoms\": [...]}");
  }
  const int n = doc["n"].get<int>();
  DiscreteMeasure mu(n);
  std::size_t index = 0;
  for (const auto& atom : doc["atoms"]) {
    if (!atom.is_object() || !atom.contains("x") || !atom.contains("w") || !atom["x"].is_array() ||
        !atom["w"].is_number()) {
      throw InputError("atom " + std::to_string(index) + ": expected {\"x\": [...], \"w\": number}");
    }
    std::vector<double> x;
    for (const auto& c : atom["x"]) {
      if (!c.is_number()) throw InputError("atom " + std::to_string(index) + ": non-numeric coordinate");
      x.push_back(c.get<double>());
    }
    mu.add(x, atom["w"].get<double>());
    ++index;
  }
  return mu;
}

void write_json(std::ostream& out, const DiscreteMeasure& mu) {
  nlohmann::ordered_json doc;
  doc["n"] = mu.dimension();
  doc["atoms"] = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < mu.size(); ++a) {
    auto p = mu.position(a);
    nlohmann::ordered_json atom;
    atom["x"] = std::vector<double>(p.begin(), p.end());
    atom["w"] = mu.weight(a);
    doc["atoms"].push_back(std::move(atom));
  }
  out << doc.dump(2) << '\n';
}

DiscreteMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? read_json(in) : read_csv(in);
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace rectiscope
