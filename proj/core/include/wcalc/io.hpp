#pragma once

#include <cstdint>
#include <string>

#include "wcalc/curve.hpp"
#include "wcalc/measure.hpp"
#include "wcalc/transport.hpp"

namespace wcalc {

/// Measure JSON: {"dimension": D, "atoms": [[..], ..], "weights": [..]};
/// field order irrelevant.
DiscreteMeasure parse_measure_json(const std::string& text);
DiscreteMeasure read_measure_json(const std::string& path);
std::string measure_to_json(const DiscreteMeasure& mu);

/// Curve CSV with header t,atom,x0..x{D-1}[,v0..v{D-1}]; rows grouped by
/// time, atom indices 0..n-1 within each block.
MeasureCurve parse_curve_csv(const std::string& text);
MeasureCurve read_curve_csv(const std::string& path);
std::string curve_to_csv(const MeasureCurve& curve);
void write_curve_csv(const std::string& path, const MeasureCurve& curve);

std::string plan_to_json(const TransportPlan& plan);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit content hash, as 16 hex digits.
std::string content_digest(const std::string& bytes);
std::string file_digest(const std::string& path);

/// Number formatting used by every emitted JSON/CSV value: shortest form of
/// %.17g, which round-trips doubles exactly.
std::string format_double(double v);

/// Minimal deterministic JSON emitter: insertion-ordered keys, doubles via
/// format_double.
class JsonWriter {
 public:
  JsonWriter& begin_object(const std::string& key = "");
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key = "");
  JsonWriter& end_array();
  JsonWriter& field(const std::string& key, double v);
  JsonWriter& field(const std::string& key, long v);
  JsonWriter& field(const std::string& key, int v) { return field(key, static_cast<long>(v)); }
  JsonWriter& field(const std::string& key, const std::string& v);
  JsonWriter& element(double v);
  std::string str() const { return out_; }

 private:
  void prefix(const std::string& key);
  std::string out_;
  bool needs_comma_ = false;
};

}  // namespace wcalc
