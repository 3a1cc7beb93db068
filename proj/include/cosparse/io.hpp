#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cosparse/guarantees.hpp"
#include "cosparse/harness.hpp"
#include "cosparse/solvers.hpp"
#include "cosparse/types.hpp"

namespace cosparse {

// Plain-text exchange format: a header line "rows cols" (vectors: "n"),
// then one row per line, full double precision. Readable by numpy.loadtxt
// with skiprows=1.
void write_matrix_text(const std::string& path, const Matrix& a);
Matrix read_matrix_text(const std::string& path);
void write_vector_text(const std::string& path, const Vector& v);
Vector read_vector_text(const std::string& path);

// Raw dump: two little-endian int64 dimensions, then row-major doubles.
void write_matrix_raw(const std::string& path, const Matrix& a);
Matrix read_matrix_raw(const std::string& path);

// Binary PGM (P5), values mapped linearly from [min, max] onto the full
// range; bits is 8 or 16. A constant image maps to 0.
void write_pgm(const std::string& path, const Matrix& img, int bits = 8);

// one row per (delta, rho) cell: sigma,delta,rho,m,l,p,trials,successes,rate
// (infeasible cells keep successes = -1 and rate = nan)
void write_phase_grid_csv(const std::string& path, const PhaseGrid& grid);

// N,L,m,algorithm,snr_db,status
void write_snr_csv(const std::string& path, const std::vector<SnrEntry>& entries);

// iteration,eliminated with the per-iteration row indices ';'-joined
void write_gap_trace_csv(const std::string& path, const RecoveryResult& result);

nlohmann::json certificate_to_json(const Certificate& cert);
nlohmann::json recovery_to_json(const RecoveryResult& result);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace cosparse
