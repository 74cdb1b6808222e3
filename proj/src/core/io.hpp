#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "model.hpp"

namespace mgpe {

// GPF1 snapshot: "GPF1" magic, u32 version, u64 n_points, f64 length,
// f64 time, f64 lambda, then n_points (re, im) f64 pairs. Little-endian
// throughout and byte-deterministic for identical inputs.
void write_snapshot(const std::string& path, const ComplexField& f, double time,
                    double lambda);

struct Snapshot {
  ComplexField field;
  double time;
  double lambda;
};
Snapshot read_snapshot(const std::string& path);

// Streaming CSV writer with the fixed header
// t,norm,free_energy,mu_mean,mu_var,dissipation_rate,ground_mode_occ.
class ObservableCsvWriter {
 public:
  explicit ObservableCsvWriter(const std::string& path);
  ~ObservableCsvWriter();
  ObservableCsvWriter(const ObservableCsvWriter&) = delete;
  ObservableCsvWriter& operator=(const ObservableCsvWriter&) = delete;

  void write(const Observables& rec);
  void close();

 private:
  std::FILE* f_ = nullptr;
  std::string path_;
};

std::vector<Observables> read_observables_csv(const std::string& path);

// Density history: one row per retained snapshot.
struct HeatmapData {
  std::vector<double> times;
  std::vector<std::vector<double>> rows;
};

// Writes a lossless CSV matrix (rows = times, columns = positions), an 8-bit
// P5 graymap with density mapped linearly min -> black, max -> white (a zero
// range maps to 128), and a JSON sidecar with the mapping bounds.
void emit_heatmap(const HeatmapData& data, const std::string& csv_path,
                  const std::string& pgm_path, const std::string& meta_path);

// Full-precision float formatting shared by all text outputs.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mgpe
