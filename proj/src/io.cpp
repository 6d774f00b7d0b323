#include "fonb/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fonb {

namespace {

double parse_decimal(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(Errc::invalid_argument, "not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw Error(Errc::invalid_argument, "not a number: '" + text + "'");
  return value;
}

std::vector<double> parse_numbers(const json& arr, const char* key) {
  if (!arr.is_array()) throw Error(Errc::invalid_argument, std::string(key) + " must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const json& v : arr) out.push_back(parse_number(v));
  return out;
}

cplx parse_entry(const json& v) {
  if (v.is_array()) {
    if (v.size() != 2) throw Error(Errc::invalid_argument, "matrix entries are [re, im]");
    return {parse_number(v[0]), parse_number(v[1])};
  }
  return parse_number(v);
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 240.0;
constexpr double kHeight = 160.0;
constexpr double kMargin = 16.0;

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

Frame make_frame(double x0, double x1, double lo, double hi) {
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return {x0, x1, lo - pad, hi + pad};
}

std::string svg_open(const Frame& f, const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"12\" font-size=\"10\" text-anchor=\"middle\">" << xml_escape(title)
     << "</text>\n"
     << "<line x1=\"" << short_num(f.px(f.x0)) << "\" y1=\"" << short_num(f.py(0)) << "\" x2=\""
     << short_num(f.px(f.x1)) << "\" y2=\"" << short_num(f.py(0)) << "\" stroke=\"#bbb\"/>\n";
  return os.str();
}

}  // namespace

double parse_number(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw Error(Errc::invalid_argument, "expected a number, got " + value.dump());
  const std::string text = value.get<std::string>();
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const double den = parse_decimal(text.substr(slash + 1));
    if (den == 0.0) throw Error(Errc::invalid_argument, "zero denominator in '" + text + "'");
    return parse_decimal(text.substr(0, slash)) / den;
  }
  return parse_decimal(text);
}

UnitaryMatrix parse_matrix(const json& doc) {
  if (!doc.is_object() || !doc.contains("rows")) throw Error(Errc::invalid_argument, "matrix needs \"rows\"");
  const json& rows = doc.at("rows");
  if (!rows.is_array() || rows.empty()) throw Error(Errc::invalid_argument, "matrix rows must be an array");
  const std::size_t n = rows.size();
  if (doc.contains("N") && parse_number(doc.at("N")) != static_cast<double>(n)) {
    throw Error(Errc::invalid_argument, "matrix N disagrees with the row count");
  }
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) throw Error(Errc::invalid_argument, "matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_entry(rows[i][j]);
    }
  }
  return UnitaryMatrix::from_matrix(std::move(m));
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::invalid_argument, "config must be a JSON object");
  RunConfig cfg;
  const bool has_system = doc.contains("R") || doc.contains("B");
  const bool has_matrix = doc.contains("matrix") || doc.contains("rows");
  if (has_system && has_matrix) throw Error(Errc::invalid_argument, "config holds both a system and a matrix");
  if (has_system) {
    if (!doc.contains("R") || !doc.contains("B")) throw Error(Errc::invalid_argument, "system needs both R and B");
    cfg.ifs.emplace(parse_number(doc.at("R")), parse_numbers(doc.at("B"), "B"));
    if (doc.contains("L")) cfg.dual = parse_numbers(doc.at("L"), "L");
  }
  if (has_matrix) cfg.matrix = parse_matrix(doc.contains("matrix") ? doc.at("matrix") : doc);

  auto count = [&](const char* key, std::size_t& out) {
    if (!doc.contains(key)) return;
    const double v = parse_number(doc.at(key));
    if (!(v >= 0.0) || v != std::floor(v)) throw Error(Errc::invalid_argument, std::string(key) + " must be a count");
    out = static_cast<std::size_t>(v);
  };
  count("max_len", cfg.max_len);
  count("p_max", cfg.p_max);
  count("grid_size", cfg.grid_size);
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("tol")) {
    cfg.tol = parse_number(doc.at("tol"));
    if (!(cfg.tol > 0.0)) throw Error(Errc::invalid_argument, "tol must be positive");
  }
  if (doc.contains("probes")) cfg.probes = parse_numbers(doc.at("probes"), "probes");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_argument, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, "config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + path.string());
  out << text;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  os << "# fractal-onb v1\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  write_text(path, os.str());
}

std::vector<cplx> read_signal_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_argument, "cannot open signal " + path.string());
  std::vector<cplx> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      try {
        parse_decimal(fields[0]);
      } catch (const Error&) {
        continue;  // header
      }
    }
    switch (fields.size()) {
      case 1: out.emplace_back(parse_decimal(fields[0]), 0.0); break;
      case 2: out.emplace_back(parse_decimal(fields[0]), parse_decimal(fields[1])); break;
      case 3: out.emplace_back(parse_decimal(fields[1]), parse_decimal(fields[2])); break;
      default: throw Error(Errc::invalid_argument, "signal rows hold 1 to 3 fields");
    }
  }
  return out;
}

std::string svg_step_plot(std::span<const cplx> values, const std::string& title) {
  if (values.empty()) throw Error(Errc::invalid_argument, "nothing to plot");
  double lo = 0.0, hi = 0.0;
  bool complex_valued = false;
  for (const cplx& v : values) {
    lo = std::min({lo, v.real(), v.imag()});
    hi = std::max({hi, v.real(), v.imag()});
    complex_valued = complex_valued || std::abs(v.imag()) > 1e-12;
  }
  const Frame f = make_frame(0.0, 1.0, lo, hi);
  const auto cells = static_cast<double>(values.size());
  auto path = [&](auto part) {
    std::ostringstream d;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double y = f.py(part(values[k]));
      d << (k ? " L" : "M") << short_num(f.px(static_cast<double>(k) / cells)) << ' ' << short_num(y) << " L"
        << short_num(f.px(static_cast<double>(k + 1) / cells)) << ' ' << short_num(y);
    }
    return d.str();
  };
  std::ostringstream os;
  os << svg_open(f, title);
  os << "<path d=\"" << path([](cplx v) { return v.real(); }) << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (complex_valued) {
    os << "<path d=\"" << path([](cplx v) { return v.imag(); })
       << "\" fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"3 2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_curve(std::span<const double> xs, std::span<const double> ys, const std::string& title) {
  if (xs.size() != ys.size() || xs.empty()) throw Error(Errc::invalid_argument, "curve needs matching samples");
  const auto [ylo, yhi] = std::minmax_element(ys.begin(), ys.end());
  const auto [xlo, xhi] = std::minmax_element(xs.begin(), xs.end());
  const Frame f = make_frame(*xlo, *xhi > *xlo ? *xhi : *xlo + 1.0, *ylo, *yhi);
  std::ostringstream os;
  os << svg_open(f, title) << "<path d=\"";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    os << (k ? " L" : "M") << short_num(f.px(xs[k])) << ' ' << short_num(f.py(ys[k]));
  }
  os << "\" fill=\"none\" stroke=\"black\"/>\n</svg>\n";
  return os.str();
}

json to_json(const SpectrumReport& r) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < r.matrix.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.matrix.cols(); ++j) row.push_back({r.matrix(i, j).real(), r.matrix(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"pass", r.pass}, {"defect", r.defect}, {"matrix", std::move(rows)}};
}

json to_json(const QmfReport& r) {
  return {{"pass", r.pass}, {"max_deviation", r.max_deviation}, {"grid_size", r.grid_size}, {"tol", r.tol}};
}

json to_json(const CycleSearch& s) {
  json cycles = json::array();
  for (const ExtremeCycle& c : s.cycles) {
    cycles.push_back({{"points", c.points}, {"letters", c.letters}, {"period", c.period()}});
  }
  return {{"cycles", std::move(cycles)},
          {"search", {{"p_max", s.p_max}, {"tol", s.tol}, {"words_examined", s.words_examined}}}};
}

json to_json(const GramReport& r) {
  return {{"size", r.size},     {"max_off_diagonal", r.max_off_diagonal}, {"max_diag_deviation", r.max_diag_deviation},
          {"tol", r.tol},       {"method", r.method},                     {"pass", r.pass}};
}

json to_json(const CuntzReport& r) {
  return {{"pass", r.pass},
          {"max_orthogonality_defect", r.max_orthogonality_defect},
          {"max_completeness_defect", r.max_completeness_defect},
          {"grid_size", r.grid_size},
          {"functions", r.functions},
          {"tol", r.tol}};
}

}  // namespace fonb
