#include "cosparse/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace cosparse {

namespace {

std::ofstream open_out(const std::string& path, std::ios_base::openmode mode = std::ios_base::out) {
  std::ofstream out(path, mode);
  require(out.good(), "cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path, std::ios_base::openmode mode = std::ios_base::in) {
  std::ifstream in(path, mode);
  require(in.good(), "cannot open for reading: " + path);
  return in;
}

}  // namespace

void write_matrix_text(const std::string& path, const Matrix& a) {
  auto out = open_out(path);
  out << a.rows() << " " << a.cols() << "\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
    out << "\n";
  }
  require(out.good(), "write failed: " + path);
}

Matrix read_matrix_text(const std::string& path) {
  auto in = open_in(path);
  Index rows = -1, cols = -1;
  in >> rows >> cols;
  require(in.good() && rows >= 0 && cols >= 0, "bad matrix header in " + path);
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      in >> a(i, j);
      require(!in.fail(), "truncated matrix in " + path);
    }
  return a;
}

void write_vector_text(const std::string& path, const Vector& v) {
  auto out = open_out(path);
  out << v.size() << "\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < v.size(); ++i) out << v[i] << "\n";
  require(out.good(), "write failed: " + path);
}

Vector read_vector_text(const std::string& path) {
  auto in = open_in(path);
  Index n = -1;
  in >> n;
  require(in.good() && n >= 0, "bad vector header in " + path);
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    in >> v[i];
    require(!in.fail(), "truncated vector in " + path);
  }
  return v;
}

void write_matrix_raw(const std::string& path, const Matrix& a) {
  auto out = open_out(path, std::ios_base::binary);
  const int64_t dims[2] = {a.rows(), a.cols()};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  require(out.good(), "write failed: " + path);
}

Matrix read_matrix_raw(const std::string& path) {
  auto in = open_in(path, std::ios_base::binary);
  int64_t dims[2] = {-1, -1};
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  require(in.good() && dims[0] >= 0 && dims[1] >= 0, "bad raw header in " + path);
  Matrix a(dims[0], dims[1]);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      require(!in.fail(), "truncated raw matrix in " + path);
      a(i, j) = v;
    }
  return a;
}

void write_pgm(const std::string& path, const Matrix& img, int bits) {
  require(bits == 8 || bits == 16, "write_pgm: bits must be 8 or 16");
  require(img.size() > 0, "write_pgm: empty image");
  auto out = open_out(path, std::ios_base::binary);
  const long maxval = (1L << bits) - 1;
  out << "P5\n" << img.cols() << " " << img.rows() << "\n" << maxval << "\n";
  const double lo = img.minCoeff(), hi = img.maxCoeff();
  const double scale = hi > lo ? static_cast<double>(maxval) / (hi - lo) : 0.0;
  for (Index i = 0; i < img.rows(); ++i)
    for (Index j = 0; j < img.cols(); ++j) {
      const long v = std::lround((img(i, j) - lo) * scale);
      if (bits == 8) {
        const unsigned char b = static_cast<unsigned char>(v);
        out.write(reinterpret_cast<const char*>(&b), 1);
      } else {
        const unsigned char b[2] = {static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 2);
      }
    }
  require(out.good(), "write failed: " + path);
}

void write_phase_grid_csv(const std::string& path, const PhaseGrid& grid) {
  auto out = open_out(path);
  out << "sigma,delta,rho,m,l,p,trials,successes,rate\n";
  out << std::setprecision(10);
  for (Index j = 0; j < static_cast<Index>(grid.delta_values.size()); ++j)
    for (Index i = 0; i < static_cast<Index>(grid.rho_values.size()); ++i) {
      out << grid.sigma << "," << grid.delta_values[static_cast<size_t>(j)] << ","
          << grid.rho_values[static_cast<size_t>(i)] << "," << grid.m_at(j) << ","
          << grid.l_at(i, j) << "," << grid.p() << "," << grid.trials << ","
          << static_cast<long>(grid.successes(i, j)) << "," << grid.rate(i, j) << "\n";
    }
  require(out.good(), "write failed: " + path);
}

void write_snr_csv(const std::string& path, const std::vector<SnrEntry>& entries) {
  auto out = open_out(path);
  out << "N,L,m,algorithm,snr_db,status\n";
  out << std::setprecision(10);
  for (const auto& e : entries)
    out << e.n << "," << e.lines << "," << e.m << "," << to_string(e.algorithm) << ","
        << e.snr_db << "," << e.status << "\n";
  require(out.good(), "write failed: " + path);
}

void write_gap_trace_csv(const std::string& path, const RecoveryResult& result) {
  auto out = open_out(path);
  out << "iteration,eliminated\n";
  for (size_t k = 0; k < result.eliminated.size(); ++k) {
    out << k + 1 << ",";
    const auto& rows = result.eliminated[k];
    for (size_t r = 0; r < rows.size(); ++r) out << (r ? ";" : "") << rows[r];
    out << "\n";
  }
  require(out.good(), "write failed: " + path);
}

nlohmann::json certificate_to_json(const Certificate& cert) {
  nlohmann::json j;
  j["kind"] = to_string(cert.kind);
  j["value"] = cert.value;
  if (cert.threshold)
    j["threshold"] = *cert.threshold;
  else
    j["threshold"] = nullptr;
  j["holds"] = cert.holds;
  j["extras"] = cert.extras;
  return j;
}

nlohmann::json recovery_to_json(const RecoveryResult& result) {
  nlohmann::json j;
  j["status"] = to_string(result.status);
  j["iterations"] = result.iterations;
  j["indeterminate"] = result.indeterminate;
  j["cosupport"] = result.estimated_cosupport.rows();
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  require(out.good(), "write failed: " + path);
}

nlohmann::json read_json(const std::string& path) {
  auto in = open_in(path);
  nlohmann::json j;
  in >> j;
  require(!in.fail(), "bad json in " + path);
  return j;
}

}  // namespace cosparse
