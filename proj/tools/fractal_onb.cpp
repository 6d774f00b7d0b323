// fractal-onb: command-line front end.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fonb/basis.hpp"
#include "fonb/cuntz.hpp"
#include "fonb/cycles.hpp"
#include "fonb/io.hpp"
#include "fonb/verifier.hpp"

namespace fs = std::filesystem;
using namespace fonb;

namespace {

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kFail = 2;

struct Flags {
  std::string config;
  std::optional<std::size_t> max_len;
  std::optional<std::size_t> p_max;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::vector<double> probes;
  std::string out;
  std::string format = "csv";
  std::string signal;
  std::size_t count = 1000;
  std::size_t iters = 100;
  double bump = 0.5;
};

struct Context {
  RunConfig cfg;
  Flags flags;
  bool tol_given = false;

  double tol_or(double fallback) const { return tol_given ? cfg.tol : fallback; }
  bool writing() const { return !flags.out.empty(); }
  fs::path out(const std::string& name) const { return fs::path(flags.out) / name; }
};

Context load(const Flags& flags) {
  if (flags.config.empty()) throw Error(Errc::invalid_argument, "--config is required");
  Context ctx{load_config(flags.config), flags};
  ctx.tol_given = flags.tol.has_value();
  if (flags.max_len) ctx.cfg.max_len = *flags.max_len;
  if (flags.p_max) ctx.cfg.p_max = *flags.p_max;
  if (flags.tol) {
    if (!(*flags.tol > 0.0)) throw Error(Errc::invalid_argument, "--tol must be positive");
    ctx.cfg.tol = *flags.tol;
  }
  if (flags.seed) ctx.cfg.seed = *flags.seed;
  if (!flags.probes.empty()) ctx.cfg.probes = flags.probes;
  return ctx;
}

const AffineIFS& need_system(const Context& ctx) {
  if (!ctx.cfg.ifs) throw Error(Errc::invalid_argument, "config needs a system (R, B)");
  return *ctx.cfg.ifs;
}

const std::vector<double>& need_dual(const Context& ctx) {
  need_system(ctx);
  if (!ctx.cfg.dual) throw Error(Errc::invalid_argument, "config needs L");
  return *ctx.cfg.dual;
}

const UnitaryMatrix& need_matrix(const Context& ctx) {
  if (!ctx.cfg.matrix) throw Error(Errc::invalid_argument, "config needs a matrix");
  return *ctx.cfg.matrix;
}

int emit(const Context& ctx, const json& report, bool pass) {
  std::cout << report.dump(2) << '\n';
  if (ctx.writing()) write_text(ctx.out("report.json"), report.dump(2) + "\n");
  return pass ? kPass : kFail;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + format_double(xs[i]);
  return s;
}

std::string word_name(const std::vector<std::size_t>& w) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "_" : "") + std::to_string(w[i]);
  return s;
}

// ---------------------------------------------------------------------------

int cmd_check_pair(const Context& ctx) {
  const AffineIFS& ifs = need_system(ctx);
  const auto& dual = need_dual(ctx);
  const double tol = ctx.tol_or(1e-10);
  const SpectrumReport spectrum = is_spectrum(ifs.digits(), ifs.scale(), dual, tol);
  json report{{"command", "check-pair"}, {"R", ifs.scale()}, {"B", ifs.digits()}, {"L", dual},
              {"spectrum", to_json(spectrum)}};
  bool pass = spectrum.pass;
  try {
    const SpectrumReport hadamard = is_hadamard_pair(ifs.digits(), dual, ifs.scale(), tol);
    report["hadamard_pair"] = to_json(hadamard);
    pass = pass && hadamard.pass;
  } catch (const Error& e) {
    if (e.code() != Errc::non_integer_input) throw;
    report["hadamard_pair"] = nullptr;
  }
  report["pass"] = pass;
  return emit(ctx, report, pass);
}

int cmd_find_cycles(const Context& ctx) {
  const AffineIFS& ifs = need_system(ctx);
  const CycleSearch search = find_extreme_cycles(ifs, need_dual(ctx), ctx.cfg.p_max, ctx.cfg.tol);
  json report = to_json(search);
  report["command"] = "find-cycles";
  return emit(ctx, report, true);
}

int gen_fractal(const Context& ctx) {
  const AffineIFS& ifs = need_system(ctx);
  const auto& dual = need_dual(ctx);
  const CycleSearch search = find_extreme_cycles(ifs, dual, ctx.cfg.p_max, 1e-9);
  const auto elements = gen_fractal_onb(ifs, dual, search.cycles, ctx.cfg.max_len);
  const GramReport gram = gram_matrix(elements, 1e-10, ctx.tol_or(1e-6));

  std::vector<double> probes = ctx.cfg.probes;
  if (probes.empty()) probes = {0.1, 0.3, 0.7};
  json curves = json::array();
  for (double t : probes) {
    curves.push_back({{"t", t}, {"h_by_max_len", parseval_curve(ifs, elements, t, ctx.cfg.max_len)}});
  }

  json report{{"command", "gen-basis"},
              {"kind", "piecewise-exponential"},
              {"max_len", ctx.cfg.max_len},
              {"elements", elements.size()},
              {"cycles", to_json(search)["cycles"]},
              {"gram", to_json(gram)},
              {"completeness_diagnostic",
               {{"note", "Parseval sums sum_e |<e_{-t}, e>|^2; monotone evidence, not a proof"}, {"probes", curves}}}};
  try {
    report["integer_spectrum"] = integer_spectrum(ifs, dual, search.cycles, ctx.cfg.max_len);
  } catch (const Error&) {
    report["integer_spectrum"] = nullptr;
  }

  if (ctx.writing() && ctx.flags.format != "json") {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < elements.size(); ++k) {
      const auto& e = elements[k];
      const auto pieces = e.pieces();
      const bool single = std::all_of(pieces.begin(), pieces.end(), [&](const ExpPiece& p) {
        return std::abs(p.freq - pieces[0].freq) <= 1e-9 * std::max(1.0, std::abs(p.freq));
      });
      rows.push_back({std::to_string(k), join(e.provenance().word), format_double(e.provenance().cycle_point),
                      std::to_string(e.depth()), format_double(pieces[0].freq), single ? "1" : "0"});
    }
    write_csv(ctx.out("elements.csv"), {"index", "word", "cycle_point", "depth", "frequency", "uniform_frequency"},
              rows);
    std::vector<std::vector<std::string>> gram_rows;
    for (Eigen::Index i = 0; i < gram.matrix.rows(); ++i) {
      std::vector<std::string> row;
      for (Eigen::Index j = 0; j < gram.matrix.cols(); ++j) row.push_back(format_double(std::abs(gram.matrix(i, j))));
      gram_rows.push_back(std::move(row));
    }
    std::vector<std::string> cols;
    for (std::size_t j = 0; j < elements.size(); ++j) cols.push_back("e" + std::to_string(j));
    write_csv(ctx.out("gram_abs.csv"), cols, gram_rows);
  }
  if (ctx.writing() && ctx.flags.format == "svg") {
    const auto grid = verification_grid(ifs, 512);
    std::vector<double> xs(grid.begin(), grid.end());
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k < elements.size(); ++k) {
      std::vector<double> ys(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = elements[k](xs[i]).real();
      write_text(ctx.out("element_" + std::to_string(k) + ".svg"),
                 svg_curve(xs, ys, "Re element " + std::to_string(k) + " word [" +
                                       join(elements[k].provenance().word) + "]"));
    }
  }
  return emit(ctx, report, gram.pass);
}

int gen_walsh(const Context& ctx) {
  const UnitaryMatrix& a = need_matrix(ctx);
  const auto elements = gen_walsh_basis(a, ctx.cfg.max_len);
  const GramReport gram = walsh_gram(elements, ctx.tol_or(1e-12));
  json report{{"command", "gen-basis"},
              {"kind", "walsh"},
              {"N", a.size()},
              {"max_len", ctx.cfg.max_len},
              {"elements", elements.size()},
              {"gram", to_json(gram)}};

  if (ctx.writing() && ctx.flags.format != "json") {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < elements.size(); ++k) {
      const StepWalsh fine = elements[k].refined(ctx.cfg.max_len);
      const auto values = fine.values();
      for (std::size_t c = 0; c < values.size(); ++c) {
        rows.push_back({std::to_string(k), word_name(elements[k].word()), std::to_string(c),
                        format_double(values[c].real()), format_double(values[c].imag())});
      }
    }
    write_csv(ctx.out("elements.csv"), {"index", "word", "cell", "re", "im"}, rows);
  }
  if (ctx.writing() && ctx.flags.format == "svg") {
    for (const StepWalsh& e : elements) {
      const StepWalsh fine = e.refined(ctx.cfg.max_len);
      write_text(ctx.out("walsh_" + word_name(e.word()) + ".svg"),
                 svg_step_plot(fine.values(), "S_w 1, w = " + word_name(e.word())));
    }
  }
  return emit(ctx, report, gram.pass);
}

int cmd_gen_basis(const Context& ctx) {
  if (ctx.cfg.matrix) return gen_walsh(ctx);
  return gen_fractal(ctx);
}

int cmd_transform(const Context& ctx) {
  const UnitaryMatrix& a = need_matrix(ctx);
  if (ctx.flags.signal.empty()) throw Error(Errc::invalid_argument, "--signal is required");
  const auto signal = read_signal_csv(ctx.flags.signal);
  const std::size_t level = walsh_level(a.size(), signal.size());
  const auto coeffs = walsh_analyze(a, signal);
  const auto back = walsh_synthesize(a, coeffs);
  double err = 0.0;
  for (std::size_t k = 0; k < signal.size(); ++k) err = std::max(err, std::abs(back[k] - signal[k]));
  const double tol = ctx.tol_or(1e-10);

  if (ctx.writing()) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> word(level);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      std::size_t q = k;
      for (std::size_t t = level; t-- > 0;) {
        word[t] = q % a.size();
        q /= a.size();
      }
      rows.push_back({std::to_string(k), word_name(word), format_double(coeffs[k].real()),
                      format_double(coeffs[k].imag())});
    }
    write_csv(ctx.out("coefficients.csv"), {"index", "word", "re", "im"}, rows);
    rows.clear();
    for (std::size_t k = 0; k < back.size(); ++k) {
      rows.push_back({std::to_string(k), format_double(back[k].real()), format_double(back[k].imag())});
    }
    write_csv(ctx.out("reconstruction.csv"), {"index", "re", "im"}, rows);
  }
  json report{{"command", "transform"}, {"length", signal.size()}, {"level", level},
              {"roundtrip_max_error", err}, {"tol", tol}, {"pass", err <= tol}};
  return emit(ctx, report, err <= tol);
}

int cmd_sample(const Context& ctx) {
  const AffineIFS& ifs = need_system(ctx);
  const auto xs = sample_measure(ifs, ctx.flags.count, ctx.cfg.seed);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < xs.size(); ++k) rows.push_back({std::to_string(k), format_double(xs[k])});
  if (ctx.writing()) {
    write_csv(ctx.out("sample.csv"), {"index", "x"}, rows);
  } else {
    std::cout << "# fractal-onb v1\nindex,x\n";
    for (const auto& r : rows) std::cout << r[0] << ',' << r[1] << '\n';
  }
  return kPass;
}

int cmd_transfer(const Context& ctx) {
  const AffineIFS& ifs = need_system(ctx);
  const auto& dual = need_dual(ctx);
  TransferGrid h0 = make_transfer_grid(dual, ifs.scale());
  const Interval hull = candidate_interval(dual, ifs.scale());
  const double centre = hull.lo + 0.7 * hull.width();
  const double width = 0.1 * std::max(hull.width(), 1e-12);
  for (std::size_t i = 0; i < h0.t.size(); ++i) {
    const double u = (h0.t[i] - centre) / width;
    if (std::abs(u) < 1.0) h0.h[i] += ctx.flags.bump * std::pow(std::cos(0.5 * M_PI * u), 2);
  }
  const TransferGrid h = transfer_iterate(ifs, dual, h0, ctx.flags.iters);
  const TransferGrid one = transfer_iterate(ifs, dual, make_transfer_grid(dual, ifs.scale()), ctx.flags.iters);
  double dev = 0.0, const_dev = 0.0;
  for (std::size_t i = 0; i < h.h.size(); ++i) {
    dev = std::max(dev, std::abs(h.h[i] - 1.0));
    const_dev = std::max(const_dev, std::abs(one.h[i] - 1.0));
  }
  const double tol = ctx.tol_or(1e-3);
  if (ctx.writing() && ctx.flags.format != "json") {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < h.t.size(); ++i) rows.push_back({format_double(h.t[i]), format_double(h.h[i])});
    write_csv(ctx.out("transfer.csv"), {"t", "h"}, rows);
  }
  if (ctx.writing() && ctx.flags.format == "svg") {
    write_text(ctx.out("transfer.svg"), svg_curve(h.t, h.h, "h after " + std::to_string(ctx.flags.iters) + " steps"));
  }
  json report{{"command", "transfer"},          {"iters", ctx.flags.iters},  {"interval", {h.a, h.b}},
              {"points", h.t.size()},           {"bump", ctx.flags.bump},    {"sup_deviation", dev},
              {"constant_defect", const_dev},   {"tol", tol},                {"pass", dev <= tol && const_dev <= 1e-12}};
  return emit(ctx, report, dev <= tol && const_dev <= 1e-12);
}

int cmd_verify_cuntz(const Context& ctx) {
  const double tol = ctx.tol_or(1e-10);
  std::vector<Function> tests;
  std::optional<CuntzRep> rep;
  std::vector<double> grid;
  if (ctx.cfg.matrix) {
    const UnitaryMatrix& a = need_matrix(ctx);
    const AffineIFS ifs = AffineIFS::unit_interval(a.size());
    grid = verification_grid(ifs, ctx.cfg.grid_size);
    rep = CuntzRep::validated(ifs, walsh_filters(a), grid, tol);
    CounterRng rng(ctx.cfg.seed, 7);
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<cplx> values(a.size() * a.size());
      for (cplx& v : values) v = {rng.uniform() - 0.5, rng.uniform() - 0.5};
      tests.emplace_back(StepWalsh(a.size(), 2, std::move(values)));
    }
    tests.emplace_back(Evaluable([](double x) { return expi(1.3 * x); }));
    tests.emplace_back(Evaluable([](double x) { return cplx(x * x, -x); }));
  } else {
    const AffineIFS& ifs = need_system(ctx);
    const auto& dual = need_dual(ctx);
    grid = verification_grid(ifs, ctx.cfg.grid_size);
    rep = CuntzRep::validated(ifs, exponential_basis(dual), grid, tol);
    for (double t : {0.0, 0.75, -1.3, 2.5, 7.0 / 3.0}) tests.emplace_back(PiecewiseExp::exponential(ifs, t));
  }
  const CuntzReport report = verify_cuntz(*rep, tests, grid, tol);
  json out = to_json(report);
  out["command"] = "verify-cuntz";
  return emit(ctx, out, report.pass);
}

int exit_code(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::wrong_arity:
    case Errc::length_mismatch:
    case Errc::index_out_of_range:
      return kUsage;
    default:
      return kFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthonormal bases from Cuntz representations on fractal measures"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config, "JSON config file");
  app.add_option("--max-len", flags.max_len, "maximal operator-word length");
  app.add_option("--p-max", flags.p_max, "maximal cycle period");
  app.add_option("--tol", flags.tol, "tolerance");
  app.add_option("--seed", flags.seed, "random seed");
  app.add_option("--probes", flags.probes, "probe points t1,t2,...")->delimiter(',');
  app.add_option("--out", flags.out, "output directory");
  app.add_option("--format", flags.format, "artifacts written to --out")
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  using Handler = int (*)(const Context&);
  std::vector<std::pair<CLI::App*, Handler>> commands{
      {app.add_subcommand("check-pair", "is L a spectrum for R^{-1} B"), cmd_check_pair},
      {app.add_subcommand("find-cycles", "extreme cycles of (B, L)"), cmd_find_cycles},
      {app.add_subcommand("gen-basis", "generate and verify a truncated basis"), cmd_gen_basis},
      {app.add_subcommand("transform", "Walsh coefficients of a signal"), cmd_transform},
      {app.add_subcommand("sample", "draw points from mu_B"), cmd_sample},
      {app.add_subcommand("transfer", "iterate the transfer operator on a perturbed constant"), cmd_transfer},
      {app.add_subcommand("verify-cuntz", "check the Cuntz relations on a grid"), cmd_verify_cuntz},
  };
  commands[3].first->add_option("--signal", flags.signal, "signal CSV of length N^n");
  commands[4].first->add_option("--count", flags.count, "number of samples");
  commands[5].first->add_option("--iters", flags.iters, "iterations");
  commands[5].first->add_option("--bump", flags.bump, "bump amplitude");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    const Context ctx = load(flags);
    for (const auto& [sub, handler] : commands) {
      if (sub->parsed()) return handler(ctx);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
