#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spinweb/errors.hpp"
#include "spinweb/projcalc.hpp"
#include "spinweb/splitcore.hpp"
#include "spinweb/su2rep.hpp"
#include "spinweb/verify.hpp"
#include "spinweb/webgeo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitIo = 2;
constexpr int kExitPrecondition = 3;

struct Config {
  std::string input_path;
  double tol = 1e-9;
  int nodes = -1; // reserved quadrature override (informational)
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  std::string output; // empty = stdout
  std::size_t bubbles = 2;
  std::string spins = "1/2,1/2,1/2,1/2";
};

std::string format_full(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

/// RFC-4180-style CSV with a header row, LF endings, 17 significant digits.
void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows,
              const std::string& output) {
  std::ostringstream buf;
  for (std::size_t k = 0; k < header.size(); ++k)
    buf << (k ? "," : "") << header[k];
  buf << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw spinweb::input_error("CSV rows must be rectangular");
    for (std::size_t k = 0; k < row.size(); ++k) buf << (k ? "," : "") << row[k];
    buf << "\n";
  }
  if (output.empty()) {
    std::cout << buf.str();
    return;
  }
  std::ofstream file(output, std::ios::binary);
  if (!file) throw spinweb::input_error("cannot open output file: " + output);
  file << buf.str();
  if (!file) throw spinweb::input_error("cannot write output file: " + output);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw spinweb::input_error("cannot read input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<spinweb::su2::Spin> parse_spin_list(const std::string& text) {
  std::vector<spinweb::su2::Spin> spins;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) spins.push_back(spinweb::su2::Spin::parse(item));
  if (spins.empty()) throw spinweb::input_error("empty spin list");
  return spins;
}

spinweb::geo::SpinWeb load_spin_web(const Config& cfg) {
  namespace geo = spinweb::geo;
  if (!cfg.input_path.empty()) return geo::parse_web_json(read_file(cfg.input_path));
  return geo::SpinWeb(geo::standard_web(cfg.bubbles),
                      spinweb::proj::RepTuple(parse_spin_list(cfg.spins)));
}

int run_verify(const Config& cfg) {
  using namespace spinweb;
  const verify::RunReport report =
      verify::run_acceptance(cfg.tol / 1e-9, cfg.samples);
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : report.checks)
    rows.push_back({c.name, format_full(c.expected), format_full(c.actual),
                    format_full(c.tolerance), c.ok ? "1" : "0"});
  emit_csv({"check", "expected", "actual", "tolerance", "ok"}, rows, cfg.output);
  std::size_t failed = 0;
  for (const auto& c : report.checks)
    if (!c.ok) {
      ++failed;
      std::cerr << "FAIL " << c.name << ": expected " << format_full(c.expected)
                << ", got " << format_full(c.actual) << "\n";
    }
  std::cerr << (report.passed ? "all checks passed" : "checks failed") << " ("
            << report.checks.size() - failed << "/" << report.checks.size() << ")\n";
  return report.passed ? kExitOk : kExitCheckFailed;
}

int run_moments(const Config& cfg) {
  using namespace spinweb;
  std::vector<std::vector<std::string>> rows;
  double max_diff = 0.0;
  int idx[8];
  for (int code = 0; code < 256; ++code) {
    for (int k = 0; k < 8; ++k) idx[k] = ((code >> k) & 1) + 1;
    const su2::Rational exact =
        su2::pair_moment(idx[0], idx[1], idx[2], idx[3], idx[4], idx[5], idx[6], idx[7]);
    const la::CMatrix quad = su2::haar_integrate(
        [&](const su2::EulerAngles& a) {
          const la::CMatrix g = su2::wigner_matrix(su2::half(), a);
          la::CMatrix out(1, 1);
          out(0, 0) = g(idx[0] - 1, idx[1] - 1) * g(idx[2] - 1, idx[3] - 1) *
                      std::conj(g(idx[4] - 1, idx[5] - 1) * g(idx[6] - 1, idx[7] - 1));
          return out;
        },
        4);
    const double diff = std::abs(exact.value() - quad(0, 0).real());
    max_diff = std::max(max_diff, diff);
    std::vector<std::string> row;
    for (int k = 0; k < 8; ++k) row.push_back(std::to_string(idx[k]));
    row.push_back(std::to_string(exact.num));
    row.push_back(std::to_string(exact.den));
    row.push_back(format_full(quad(0, 0).real()));
    row.push_back(format_full(diff));
    rows.push_back(std::move(row));
  }
  emit_csv({"mu1", "nu1", "mu2", "nu2", "rho1", "sigma1", "rho2", "sigma2", "num",
            "den", "quadrature", "absdiff"},
           rows, cfg.output);
  std::cerr << "256 pair moments, max |closed form - quadrature| = "
            << format_full(max_diff) << "\n";
  return max_diff <= cfg.tol * 1e-3 ? kExitOk : kExitCheckFailed;
}

int run_rich(const Config& cfg, bool as_splitting) {
  using namespace spinweb;
  if (cfg.input_path.empty()) throw input_error("this command needs an input file");
  const auto blocks = split::parse_bitvector_blocks(read_file(cfg.input_path));
  if (blocks.empty()) throw input_error("input contains no bit vectors");
  for (const auto& block : blocks) {
    const std::size_t n = block[0].size();
    if (as_splitting) {
      std::cout << (split::is_splitting(block, n) ? "true" : "false") << "\n";
      continue;
    }
    const split::RichReport rep = split::rich_report(block, n);
    if (rep.rich) {
      std::cout << "true\n";
    } else if (rep.unseparated) {
      std::cout << "false (i=" << rep.unseparated->first + 1 << ", j="
                << rep.unseparated->second + 1 << " unseparated)\n";
    } else {
      std::cout << "false (i=" << *rep.uncovered + 1 << " uncovered)\n";
    }
  }
  return kExitOk;
}

int run_decompose(const Config& cfg) {
  using namespace spinweb;
  const geo::SpinWeb sw = load_spin_web(cfg);
  const geo::ConsistencyReport consistency = geo::check_consistent(sw.web.paths);
  if (!consistency.ok) {
    for (const auto& v : consistency.violations)
      std::cerr << "inconsistent parametrization: paths " << v.i + 1 << " and "
                << v.j + 1 << " meet at parameters " << format_full(v.ti) << " vs "
                << format_full(v.tj) << "\n";
    return kExitPrecondition;
  }
  const geo::DecompositionResult dec = geo::decompose(sw.web.paths, {0.0, 1.0});
  for (std::size_t k = 0; k < dec.breakpoints.size(); ++k)
    std::cout << (k ? ", " : "") << format_full(dec.breakpoints[k]);
  std::cout << "\n";
  for (const auto& piece : dec.pieces) {
    std::cout << "piece [" << format_full(piece.lo) << ", " << format_full(piece.hi)
              << "]:";
    for (const auto& v : piece.splitting.elements()) std::cout << " " << v.str();
    std::cout << "\n";
  }
  return kExitOk;
}

int run_degeneracy(const Config& cfg) {
  using namespace spinweb;
  const geo::SpinWeb sw = load_spin_web(cfg);
  const geo::DegeneracyReport rep = geo::is_weakly_degenerate(sw);
  if (rep.degenerate) {
    std::string bits = rep.witness->str();
    std::string pretty;
    for (std::size_t k = 0; k < bits.size(); ++k) {
      pretty += bits[k];
      if (k + 1 < bits.size()) pretty += ",";
    }
    std::cout << "degenerate, witness (" << pretty << ")\n";
  } else {
    std::cout << "not degenerate\n";
  }
  return kExitOk;
}

int run_converge(const Config& cfg) {
  using namespace spinweb;
  const proj::RepTuple rep(parse_spin_list(cfg.spins));
  const std::size_t n = rep.n();
  if (n < 2) throw input_error("converge needs at least two strands");
  // Alternate the two pairings used by the standard web when n = 4;
  // otherwise alternate the coarsest splitting with the finest.
  std::vector<proj::YOperator> projectors;
  if (n == 4) {
    projectors.push_back(proj::projector_PV(
        rep, split::Splitting({split::BitVector("1100"), split::BitVector("0011")}),
        proj::PVEngine::lie_kernel));
    projectors.push_back(proj::projector_PV(
        rep, split::Splitting({split::BitVector("1010"), split::BitVector("0101")}),
        proj::PVEngine::lie_kernel));
  } else {
    projectors.push_back(proj::projector_PV(
        rep, split::Splitting({split::BitVector(std::string(n, '1'))}),
        proj::PVEngine::lie_kernel));
    projectors.push_back(
        proj::projector_PV(rep, split::max_splitting(n), proj::PVEngine::lie_kernel));
  }
  const la::CMatrix p0 = proj::projector_P0(rep).matrix;
  la::CMatrix a = projectors[0].matrix;
  std::vector<std::vector<std::string>> rows;
  double bound = 1.0;
  bool monotone = true;
  const std::size_t max_steps = 120;
  for (std::size_t step = 0; step < max_steps; ++step) {
    if (step > 0) a = la::multiply(projectors[step % 2].matrix, a);
    const double norm = la::operator_norm(a - p0);
    if (norm > bound + cfg.tol) monotone = false;
    rows.push_back({std::to_string(step), format_full(norm), format_full(bound)});
    bound = norm;
    if (norm < cfg.tol) break;
  }
  emit_csv({"step", "norm", "bound"}, rows, cfg.output);
  std::cerr << "deflated product norm after " << rows.size() << " steps: "
            << rows.back()[1] << "\n";
  return monotone && bound < cfg.tol ? kExitOk : kExitCheckFailed;
}

int run_decay(const Config& cfg) {
  using namespace spinweb;
  const proj::RepTuple rep(parse_spin_list(cfg.spins));
  const split::Splitting v1({split::BitVector("1100"), split::BitVector("0011")});
  if (rep.n() != 4) throw input_error("decay uses the four-strand fixture; pass 4 spins");
  proj::FilterDescriptor filter(rep, v1, 1);
  const std::size_t l = 6;
  proj::DecaySchedule schedule(
      filter,
      std::vector<std::vector<split::Splitting>>(l + 1, {split::max_splitting(4)}), l,
      0.5);
  const std::vector<double> series = proj::decay_experiment(schedule);
  const double rate =
      1.0 - static_cast<double>(su2::trivial_multiplicity(
                {rep.spins[0], rep.spins[1]})) /
                static_cast<double>(rep.spins[0].dim() * rep.spins[1].dim());
  std::vector<std::vector<std::string>> rows;
  bool ok = true;
  for (std::size_t step = 0; step < series.size(); ++step) {
    const double bound = std::pow(rate, static_cast<double>(step + 1));
    ok = ok && std::abs(series[step] - bound) <= cfg.tol;
    rows.push_back({std::to_string(step), format_full(series[step]), format_full(bound)});
  }
  emit_csv({"step", "norm", "bound"}, rows, cfg.output);
  std::cerr << "ideal-gap decay over " << series.size() << " steps, rate "
            << format_full(rate) << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-web splitting and projector calculus"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--tol", cfg.tol, "numeric tolerance")->check(CLI::PositiveNumber);
  app.add_option("--nodes", cfg.nodes, "quadrature degree override");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--samples", cfg.samples, "Monte-Carlo sample count");
  app.add_option("--output", cfg.output, "output file (default stdout)");
  app.add_option("--bubbles", cfg.bubbles, "bubbles per type for the generated web");
  app.add_option("--spins", cfg.spins, "comma-separated spin labels");

  auto* cmd_verify = app.add_subcommand("verify", "run the full acceptance suite");
  auto* cmd_moments = app.add_subcommand("moments", "print the 256-row pair-moment table");
  auto* cmd_rich = app.add_subcommand("rich", "decide richness per input block");
  cmd_rich->add_option("input", cfg.input_path, "bitstring blocks file");
  auto* cmd_splitting = app.add_subcommand("splitting", "decide the splitting property per block");
  cmd_splitting->add_option("input", cfg.input_path, "bitstring blocks file");
  auto* cmd_decompose = app.add_subcommand("decompose", "breakpoints and piece splittings");
  cmd_decompose->add_option("input", cfg.input_path, "web JSON file");
  auto* cmd_degeneracy = app.add_subcommand("degeneracy", "weak-degeneracy witness");
  cmd_degeneracy->add_option("input", cfg.input_path, "web JSON file");
  auto* cmd_converge = app.add_subcommand("converge", "alternating projector products CSV");
  auto* cmd_decay = app.add_subcommand("decay", "ideal-gap decay series CSV");
  // Let the shared options (--tol, --seed, ...) appear after the subcommand.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitIo : kExitOk;
  }

  try {
    if (cfg.samples < 100) throw spinweb::input_error("--samples must be at least 100");
    if (cmd_verify->parsed()) return run_verify(cfg);
    if (cmd_moments->parsed()) return run_moments(cfg);
    if (cmd_rich->parsed()) return run_rich(cfg, false);
    if (cmd_splitting->parsed()) return run_rich(cfg, true);
    if (cmd_decompose->parsed()) return run_decompose(cfg);
    if (cmd_degeneracy->parsed()) return run_degeneracy(cfg);
    if (cmd_converge->parsed()) return run_converge(cfg);
    if (cmd_decay->parsed()) return run_decay(cfg);
  } catch (const spinweb::precondition_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const spinweb::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
