#pragma once

// Config ingestion and report emission for the command-line tool.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fonb/cuntz.hpp"
#include "fonb/cycles.hpp"
#include "fonb/filters.hpp"
#include "fonb/ifs.hpp"
#include "fonb/verifier.hpp"

namespace fonb {

using json = nlohmann::json;

/// A number, or a string holding a decimal or a fraction "p/q".
double parse_number(const json& value);

struct RunConfig {
  std::optional<AffineIFS> ifs;
  std::optional<std::vector<double>> dual;  // L
  std::optional<UnitaryMatrix> matrix;
  std::size_t max_len = 5;
  std::size_t p_max = 12;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::vector<double> probes;
  std::size_t grid_size = 512;
};

/// Keys: R, B, optional L; or a matrix {"N": n, "rows": [[[re, im], ...], ...]},
/// top level or under "matrix". Optional max_len, p_max, tol, seed, probes,
/// grid_size. Throws Error(invalid_argument) on malformed input.
RunConfig parse_config(const json& doc);
RunConfig load_config(const std::filesystem::path& path);

UnitaryMatrix parse_matrix(const json& doc);

/// %.17g
std::string format_double(double x);

/// Header comment `# fractal-onb v1`, then the column line, then rows.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

/// Reads a one-column (or `index,value` / `re,im`) signal; `#` lines and a
/// non-numeric header are skipped.
std::vector<cplx> read_signal_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Piecewise-constant plot of real and imaginary parts over [0, 1].
std::string svg_step_plot(std::span<const cplx> values, const std::string& title);

/// Polyline through (x_k, y_k).
std::string svg_curve(std::span<const double> xs, std::span<const double> ys, const std::string& title);

json to_json(const SpectrumReport& r);
json to_json(const QmfReport& r);
json to_json(const CycleSearch& s);
json to_json(const GramReport& r);
json to_json(const CuntzReport& r);

}  // namespace fonb
