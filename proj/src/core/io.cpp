#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mgpe {

namespace {

constexpr char kMagic[4] = {'G', 'P', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

void store_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void store_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void store_f64(std::string& buf, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  store_u64(buf, bits);
}

std::uint32_t load_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t load_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

double load_f64(const unsigned char* p) {
  const std::uint64_t bits = load_u64(p);
  double d;
  std::memcpy(&d, &bits, sizeof(d));
  return d;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

void write_snapshot(const std::string& path, const ComplexField& f, double time,
                    double lambda) {
  std::string buf;
  buf.reserve(40 + 16 * f.n());
  buf.append(kMagic, 4);
  store_u32(buf, kVersion);
  store_u64(buf, f.n());
  store_f64(buf, f.grid.length());
  store_f64(buf, time);
  store_f64(buf, lambda);
  for (const Complex& z : f.values) {
    store_f64(buf, z.real());
    store_f64(buf, z.imag());
  }
  write_text_file(path, buf);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open snapshot '" + path + "'");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 40 || std::memcmp(buf.data(), kMagic, 4) != 0) {
    fail(ErrorKind::Io, "'" + path + "' is not a GPF1 snapshot");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  const std::uint32_t version = load_u32(p + 4);
  if (version != kVersion) {
    fail(ErrorKind::Io, "unsupported snapshot version " + std::to_string(version));
  }
  const std::uint64_t n = load_u64(p + 8);
  const double length = load_f64(p + 16);
  const double time = load_f64(p + 24);
  const double lambda = load_f64(p + 32);
  if (buf.size() != 40 + 16 * n) {
    fail(ErrorKind::Io, "snapshot '" + path + "' has a truncated payload");
  }
  Grid1D grid(static_cast<std::size_t>(n), length);
  std::vector<Complex> values(n);
  for (std::uint64_t j = 0; j < n; ++j) {
    values[j] = Complex(load_f64(p + 40 + 16 * j), load_f64(p + 48 + 16 * j));
  }
  return Snapshot{ComplexField(grid, std::move(values)), time, lambda};
}

ObservableCsvWriter::ObservableCsvWriter(const std::string& path) : path_(path) {
  f_ = std::fopen(path.c_str(), "wb");
  if (!f_) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  std::fputs("t,norm,free_energy,mu_mean,mu_var,dissipation_rate,ground_mode_occ\n", f_);
}

ObservableCsvWriter::~ObservableCsvWriter() {
  if (f_) std::fclose(f_);
}

void ObservableCsvWriter::write(const Observables& rec) {
  if (!f_) fail(ErrorKind::Io, "writer for '" + path_ + "' is closed");
  const std::string line = format_double(rec.t) + "," + format_double(rec.norm) + "," +
                           format_double(rec.free_energy) + "," +
                           format_double(rec.mu_mean) + "," + format_double(rec.mu_var) +
                           "," + format_double(rec.dissipation_rate) + "," +
                           format_double(rec.ground_mode_occ) + "\n";
  if (std::fputs(line.c_str(), f_) < 0) {
    fail(ErrorKind::Io, "write to '" + path_ + "' failed");
  }
}

void ObservableCsvWriter::close() {
  if (!f_) return;
  const int rc = std::fclose(f_);
  f_ = nullptr;
  if (rc != 0) fail(ErrorKind::Io, "closing '" + path_ + "' failed");
}

std::vector<Observables> read_observables_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::vector<Observables> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    Observables rec;
    std::istringstream ss(line);
    std::string tok;
    double* fields[7] = {&rec.t,      &rec.norm,   &rec.free_energy,     &rec.mu_mean,
                         &rec.mu_var, &rec.dissipation_rate, &rec.ground_mode_occ};
    for (double* field : fields) {
      if (!std::getline(ss, tok, ',')) fail(ErrorKind::Io, "short CSV row in '" + path + "'");
      *field = std::stod(tok);
    }
    out.push_back(rec);
  }
  return out;
}

void emit_heatmap(const HeatmapData& data, const std::string& csv_path,
                  const std::string& pgm_path, const std::string& meta_path) {
  if (data.rows.size() < 2) {
    fail(ErrorKind::Argument, "heatmap needs at least two snapshots");
  }
  const std::size_t cols = data.rows.front().size();
  for (const auto& row : data.rows) {
    if (row.size() != cols) {
      fail(ErrorKind::Argument, "heatmap rows live on different grids");
    }
  }
  if (data.times.size() != data.rows.size()) {
    fail(ErrorKind::Argument, "heatmap times/rows size mismatch");
  }

  std::string csv;
  csv.reserve(data.rows.size() * cols * 12);
  double lo = data.rows[0][0], hi = data.rows[0][0];
  for (const auto& row : data.rows) {
    for (std::size_t j = 0; j < cols; ++j) {
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
      csv += format_double(row[j]);
      csv += (j + 1 == cols) ? '\n' : ',';
    }
  }
  write_text_file(csv_path, csv);

  const double range = hi - lo;
  std::string pgm = "P5\n" + std::to_string(cols) + " " + std::to_string(data.rows.size()) +
                    "\n255\n";
  for (const auto& row : data.rows) {
    for (std::size_t j = 0; j < cols; ++j) {
      unsigned char g = 128;
      if (range > 0.0) {
        const double u = (row[j] - lo) / range;
        g = static_cast<unsigned char>(std::lround(255.0 * std::clamp(u, 0.0, 1.0)));
      }
      pgm.push_back(static_cast<char>(g));
    }
  }
  write_text_file(pgm_path, pgm);

  std::string meta = "{\n";
  meta += "  \"rows\": " + std::to_string(data.rows.size()) + ",\n";
  meta += "  \"cols\": " + std::to_string(cols) + ",\n";
  meta += "  \"rho_min\": " + format_double(lo) + ",\n";
  meta += "  \"rho_max\": " + format_double(hi) + ",\n";
  meta += "  \"t_first\": " + format_double(data.times.front()) + ",\n";
  meta += "  \"t_last\": " + format_double(data.times.back()) + ",\n";
  meta += "  \"orientation\": \"rows are time samples, columns are grid positions\"\n";
  meta += "}\n";
  write_text_file(meta_path, meta);
}

}  // namespace mgpe
