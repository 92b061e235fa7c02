#include "wcalc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wcalc/errors.hpp"

namespace wcalc {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::IoError, std::string("malformed JSON in ") + what);
  return j;
}

}  // namespace

DiscreteMeasure parse_measure_json(const std::string& text) {
  const json j = parse_json(text, "measure");
  if (!j.contains("dimension") || !j.contains("atoms") || !j.contains("weights"))
    fail(ErrorCode::IoError, "measure JSON needs dimension, atoms, weights");
  const int d = j["dimension"].get<int>();
  std::vector<Vec> atoms;
  for (const auto& row : j["atoms"]) {
    Vec x(d);
    if (static_cast<int>(row.size()) != d)
      fail(ErrorCode::DimensionMismatch, "atom length does not match dimension");
    for (int k = 0; k < d; ++k) x(k) = row[static_cast<size_t>(k)].get<double>();
    atoms.push_back(x);
  }
  std::vector<double> weights;
  for (const auto& w : j["weights"]) weights.push_back(w.get<double>());
  return make_measure(std::move(atoms), std::move(weights));
}

DiscreteMeasure read_measure_json(const std::string& path) {
  return parse_measure_json(read_file(path));
}

std::string measure_to_json(const DiscreteMeasure& mu) {
  std::string out = "{\"dimension\": " + std::to_string(mu.dimension()) + ", \"atoms\": [";
  for (int i = 0; i < mu.size(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (int k = 0; k < mu.dimension(); ++k) {
      if (k) out += ", ";
      out += format_double(mu.atom(i)(k));
    }
    out += "]";
  }
  out += "], \"weights\": [";
  for (int i = 0; i < mu.size(); ++i) {
    if (i) out += ", ";
    out += format_double(mu.weight(i));
  }
  out += "]}";
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) cells.push_back(cell);
  return cells;
}

}  // namespace

MeasureCurve parse_curve_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) fail(ErrorCode::IoError, "empty curve CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split(line, ',');
  if (header.size() < 3 || header[0] != "t" || header[1] != "atom")
    fail(ErrorCode::IoError, "curve CSV header must start with t,atom,x0,...");
  int d = 0;
  while (2 + static_cast<size_t>(d) < header.size() &&
         header[2 + static_cast<size_t>(d)] == "x" + std::to_string(d))
    ++d;
  if (d == 0) fail(ErrorCode::IoError, "curve CSV has no coordinate columns");
  bool has_velocities = header.size() == 2 + 2 * static_cast<size_t>(d);
  if (has_velocities)
    for (int k = 0; k < d; ++k)
      if (header[2 + static_cast<size_t>(d) + static_cast<size_t>(k)] != "v" + std::to_string(k))
        fail(ErrorCode::IoError, "curve CSV velocity columns must be v0..v{D-1}");
  if (!has_velocities && header.size() != 2 + static_cast<size_t>(d))
    fail(ErrorCode::IoError, "curve CSV has unexpected columns");

  std::vector<double> times;
  std::vector<std::vector<Vec>> atom_blocks;
  std::vector<std::vector<Vec>> velocity_blocks;
  int line_no = 1;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != header.size())
      fail(ErrorCode::IoError, "curve CSV row " + std::to_string(line_no) + " has wrong arity");
    const double t = std::stod(cells[0]);
    const int atom = std::stoi(cells[1]);
    if (times.empty() || t != times.back()) {
      times.push_back(t);
      atom_blocks.emplace_back();
      velocity_blocks.emplace_back();
    }
    if (atom != static_cast<int>(atom_blocks.back().size()))
      fail(ErrorCode::IoError, "curve CSV atoms must be 0..n-1 within each time block");
    Vec x(d), v(d);
    for (int k = 0; k < d; ++k) x(k) = std::stod(cells[2 + static_cast<size_t>(k)]);
    atom_blocks.back().push_back(x);
    if (has_velocities) {
      for (int k = 0; k < d; ++k)
        v(k) = std::stod(cells[2 + static_cast<size_t>(d) + static_cast<size_t>(k)]);
      velocity_blocks.back().push_back(v);
    }
  }
  if (times.size() < 2) fail(ErrorCode::IoError, "curve CSV needs at least two time blocks");

  const size_t n = atom_blocks.front().size();
  const std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  for (size_t b = 0; b < atom_blocks.size(); ++b) {
    if (atom_blocks[b].size() != n)
      fail(ErrorCode::IoError, "curve CSV atom count changes between time blocks");
    measures.emplace_back(atom_blocks[b], weights);
    if (has_velocities) velocities.emplace_back(velocity_blocks[b]);
  }
  if (has_velocities)
    return MeasureCurve(std::move(times), std::move(measures), std::move(velocities));
  return MeasureCurve(std::move(times), std::move(measures));
}

MeasureCurve read_curve_csv(const std::string& path) {
  return parse_curve_csv(read_file(path));
}

std::string curve_to_csv(const MeasureCurve& curve) {
  const int d = curve.dimension();
  std::string out = "t,atom";
  for (int k = 0; k < d; ++k) out += ",x" + std::to_string(k);
  for (int k = 0; k < d; ++k) out += ",v" + std::to_string(k);
  out += "\n";
  for (int s = 0; s < curve.samples(); ++s) {
    for (int i = 0; i < curve.atom_count(); ++i) {
      out += format_double(curve.time(s)) + "," + std::to_string(i);
      for (int k = 0; k < d; ++k) out += "," + format_double(curve.measure(s).atom(i)(k));
      for (int k = 0; k < d; ++k) {
        const double v = curve.has_velocities() ? curve.velocity(s)[i](k) : 0.0;
        out += "," + format_double(v);
      }
      out += "\n";
    }
  }
  return out;
}

void write_curve_csv(const std::string& path, const MeasureCurve& curve) {
  write_file(path, curve_to_csv(curve));
}

std::string plan_to_json(const TransportPlan& plan) {
  std::string out = "{\"gamma\": [";
  for (int i = 0; i < plan.gamma().rows(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (int j = 0; j < plan.gamma().cols(); ++j) {
      if (j) out += ", ";
      out += format_double(plan.gamma()(i, j));
    }
    out += "]";
  }
  out += "], \"cost\": " + format_double(plan.cost()) + "}";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << content;
}

std::string content_digest(const std::string& bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::string& path) { return content_digest(read_file(path)); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

void JsonWriter::prefix(const std::string& key) {
  if (needs_comma_) out_ += ", ";
  if (!key.empty()) out_ += "\"" + json_escape(key) + "\": ";
}

JsonWriter& JsonWriter::begin_object(const std::string& key) {
  prefix(key);
  out_ += "{";
  needs_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += "}";
  needs_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& key) {
  prefix(key);
  out_ += "[";
  needs_comma_ = false;
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += "]";
  needs_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, double v) {
  prefix(key);
  out_ += format_double(v);
  needs_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, long v) {
  prefix(key);
  out_ += std::to_string(v);
  needs_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const std::string& v) {
  prefix(key);
  out_ += "\"" + json_escape(v) + "\"";
  needs_comma_ = true;
  return *this;
}

JsonWriter& JsonWriter::element(double v) {
  prefix("");
  out_ += format_double(v);
  needs_comma_ = true;
  return *this;
}

}  // namespace wcalc
