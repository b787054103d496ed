// Command-line front end: closed-form evaluation (density, cdf, moments,
// asymptotes), sampling, the two simulation engines, and the verification
// suite.  Bulk output is CSV (or JSON) rows; sampling commands additionally
// write a JSON metadata sidecar.  Exit codes: 0 success, 1 failed
// verification, 2 usage error, 3 numerical-tolerance failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stoparea/arealaw.h"
#include "stoparea/dist.h"
#include "stoparea/errors.h"
#include "stoparea/pathsim.h"
#include "stoparea/perpetuity.h"
#include "stoparea/stats.h"
#include "stoparea/verify.h"
#include "stoparea/version.h"

namespace {

using namespace stoparea;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "a" or "a:b:steps" -> grid (linear, or geometric when log_spaced).
std::vector<double> parse_grid(const std::string& text, bool log_spaced) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto to_d = [](const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw CLI::ValidationError("bad number '" + s + "'");
    return v;
  };
  if (parts.size() == 1) return {to_d(parts[0])};
  if (parts.size() != 3)
    throw CLI::ValidationError("range must be 'a:b:steps', got '" + text + "'");
  const double a = to_d(parts[0]);
  const double b = to_d(parts[1]);
  const long steps = std::lround(to_d(parts[2]));
  if (steps < 1) throw CLI::ValidationError("range needs steps >= 1");
  if (steps == 1) return {a};
  if (log_spaced && !(a > 0.0 && b > 0.0))
    throw CLI::ValidationError("log-spaced range needs positive endpoints");
  std::vector<double> g(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(steps - 1);
    g[static_cast<std::size_t>(i)] =
        log_spaced ? a * std::pow(b / a, f) : a + (b - a) * f;
  }
  return g;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Quotes a CSV cell only when it needs it, so numeric cells round-trip as
// bare decimal text.
std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_table(const Table& t, const std::string& format, std::ostream& os) {
  if (format == "csv") {
    for (std::size_t i = 0; i < t.header.size(); ++i)
      os << (i ? "," : "") << csv_cell(t.header[i]);
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << csv_cell(row[i]);
      os << "\n";
    }
    return;
  }
  // JSON: array of objects keyed by the header.  Numeric cells are emitted
  // bare; anything that does not parse as a number is quoted.
  os << "[\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << "  {";
    for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
      const std::string& cell = t.rows[r][i];
      std::size_t pos = 0;
      bool numeric = true;
      try {
        (void)std::stod(cell, &pos);
        numeric = pos == cell.size();
      } catch (...) {
        numeric = false;
      }
      os << (i ? ", " : "") << "\"" << t.header[i] << "\": ";
      if (numeric)
        os << cell;
      else
        os << "\"" << cell << "\"";
    }
    os << "}" << (r + 1 < t.rows.size() ? "," : "") << "\n";
  }
  os << "]\n";
}

struct Meta {
  std::string command;
  double alpha = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double eps = 0.0;
  std::string law_tag;
  std::size_t horizon_failures = 0;
};

std::string meta_json(const Meta& m) {
  std::ostringstream os;
  os << "{\"command\": \"" << m.command << "\", \"alpha\": " << num(m.alpha)
     << ", \"n\": " << m.n << ", \"seed\": " << m.seed
     << ", \"dt\": " << num(m.dt) << ", \"eps\": " << num(m.eps)
     << ", \"law_tag\": \"" << m.law_tag << "\""
     << ", \"horizon_failures\": " << m.horizon_failures
     << ", \"version\": \"" << STOPAREA_VERSION << "\"}\n";
  return os.str();
}

// Writes rows to --out (or stdout) and, when requested, the metadata sidecar
// to <out>.meta.json (or stderr when writing to stdout).
void emit(const Table& t, const std::string& format, const std::string& out,
          const Meta* meta) {
  if (out.empty()) {
    write_table(t, format, std::cout);
    if (meta) std::cerr << meta_json(*meta);
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  write_table(t, format, os);
  if (meta) {
    const std::string side = out + ".meta.json";
    std::ofstream ms(side, std::ios::binary);
    if (!ms) throw std::runtime_error("cannot open metadata file: " + side);
    ms << meta_json(*meta);
  }
}

Table value_rows(const std::vector<double>& values) {
  Table t;
  t.header = {"value"};
  for (double v : values) t.rows.push_back({num(v)});
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stopped-area law of a spectrally positive stable process: "
               "evaluation, sampling, simulation, verification"};
  app.require_subcommand(1);

  // Shared option state; each subcommand registers the flags it uses.
  double alpha = 1.5;
  std::size_t n = 100'000;
  std::uint64_t seed = 1;
  double dt = 0.0;  // 0 = per-command default
  double eps = 1e-10;
  std::string x_text = "1";
  std::string s_text = "0";
  std::string format = "csv";
  std::string out;
  std::string observable = "area";
  std::string law_kind = "area";
  bool log_x = false;
  bool tail_asym = false;
  double verify_alpha = 0.0;

  auto add_common = [&](CLI::App* sub, bool with_alpha = true) {
    if (with_alpha)
      sub->add_option("--alpha", alpha, "stability index in [1,2]")
          ->check(CLI::Range(1.0, 2.0));
    sub->add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out, "output path (default stdout)");
  };

  CLI::App* c_density = app.add_subcommand("density", "density values on an x grid");
  add_common(c_density);
  c_density->add_option("--x", x_text, "x value or range a:b:steps");
  c_density->add_flag("--log-x", log_x, "log-spaced range");
  c_density->add_option("--eps", eps, "series certification tolerance")
      ->check(CLI::PositiveNumber);

  CLI::App* c_cdf = app.add_subcommand("cdf", "distribution function on an x grid");
  add_common(c_cdf);
  c_cdf->add_option("--x", x_text, "x value or range a:b:steps");
  c_cdf->add_flag("--log-x", log_x, "log-spaced range");
  c_cdf->add_option("--eps", eps, "cdf error tolerance");

  CLI::App* c_asym = app.add_subcommand("asymptote", "asymptote values on an x grid");
  add_common(c_asym);
  c_asym->add_option("--x", x_text, "x value or range a:b:steps");
  c_asym->add_flag("--log-x", log_x, "log-spaced range");
  c_asym->add_flag("--tail", tail_asym, "tail asymptote instead of the zero one");

  CLI::App* c_mom = app.add_subcommand("moments", "fractional moments E[A^s]");
  add_common(c_mom);
  c_mom->add_option("--s", s_text, "order or range a:b:steps (s < 1/(alpha+1))");

  CLI::App* c_sample = app.add_subcommand("sample", "draws from the stopped-area law");
  add_common(c_sample);
  c_sample->add_option("--n", n, "number of draws")->check(CLI::PositiveNumber);
  c_sample->add_option("--seed", seed, "RNG seed");

  CLI::App* c_path = app.add_subcommand("simulate-path",
                                        "path-simulation draws of (T, area)");
  add_common(c_path);
  c_path->add_option("--n", n, "number of paths")->check(CLI::PositiveNumber);
  c_path->add_option("--seed", seed, "RNG seed");
  c_path->add_option("--dt", dt, "base Euler step (default 0.04)")
      ->check(CLI::PositiveNumber);
  c_path->add_option("--observable", observable, "area or hitting-time")
      ->check(CLI::IsMember({"area", "hitting-time"}));

  CLI::App* c_perp = app.add_subcommand("simulate-perpetuity",
                                        "perpetuity draws of exp(-Z) integrals");
  add_common(c_perp);
  c_perp->add_option("--n", n, "number of draws")->check(CLI::PositiveNumber);
  c_perp->add_option("--seed", seed, "RNG seed");
  c_perp->add_option("--dt", dt, "time step (default 2e-3)")
      ->check(CLI::PositiveNumber);
  c_perp->add_option("--eps", eps, "small-jump cutoff (default 0.05)");
  c_perp->add_option("--law", law_kind, "area or frechet exponent")
      ->check(CLI::IsMember({"area", "frechet"}));

  CLI::App* c_verify = app.add_subcommand("verify", "run the acceptance checks");
  add_common(c_verify, false);
  c_verify->add_option("--alpha", verify_alpha,
                       "restrict to alpha-parametric checks at this alpha")
      ->check(CLI::Range(1.0, 2.0));
  c_verify->add_option("--seed", seed, "RNG seed (default: suite default)");
  bool seed_given = false;

  try {
    app.parse(argc, argv);
    seed_given = c_verify->count("--seed") > 0 || c_sample->count("--seed") > 0 ||
                 c_path->count("--seed") > 0 || c_perp->count("--seed") > 0;

    if (*c_density || *c_cdf || *c_asym) {
      const auto grid = parse_grid(x_text, log_x);
      const auto ctx = arealaw::make_alpha_context(alpha);
      arealaw::AreaLaw law(ctx, *c_density ? eps : 1e-10);
      Table t;
      t.header = {"x", "value", "regime", "error_bound"};
      for (double x : grid) {
        if (*c_density) {
          const auto d = law.density(x);
          t.rows.push_back(
              {num(x), num(d.value), to_string(d.regime), num(d.error_bound)});
        } else if (*c_cdf) {
          const double eps_cdf = c_cdf->count("--eps") ? eps : 1e-6;
          t.rows.push_back({num(x), num(law.cdf(x, eps_cdf)), "cdf", num(eps_cdf)});
        } else {
          const double v = tail_asym ? law.density_tail_asymptote(x)
                                     : law.density_zero_asymptote(x);
          t.rows.push_back(
              {num(x), num(v), tail_asym ? "tail_asymptote" : "zero_asymptote",
               num(0.0)});
        }
      }
      emit(t, format, out, nullptr);
      return 0;
    }

    if (*c_mom) {
      const auto grid = parse_grid(s_text, false);
      const auto ctx = arealaw::make_alpha_context(alpha);
      Table t;
      t.header = {"s", "value"};
      for (double s : grid)
        t.rows.push_back({num(s), num(arealaw::fractional_moment(ctx, s))});
      emit(t, format, out, nullptr);
      return 0;
    }

    if (*c_sample) {
      const auto ctx = arealaw::make_alpha_context(alpha);
      const auto batch = arealaw::sample_area_any(ctx, n, {seed, 0});
      Meta m{"sample", alpha, n, seed, 0.0, 0.0, to_string(batch.law), 0};
      emit(value_rows(batch.values), format, out, &m);
      return 0;
    }

    if (*c_path) {
      const auto ctx = arealaw::make_alpha_context(alpha);
      pathsim::PathConfig cfg;
      if (dt > 0.0) cfg.dt = dt;
      else cfg.dt = 0.04;
      const auto batches = pathsim::batch_stopped_areas(ctx, cfg, n, {seed, 0});
      const bool want_area = observable == "area";
      const SampleBatch& b = want_area ? batches.areas : batches.hitting_times;
      Meta m{"simulate-path", alpha, n,    seed, cfg.dt, 0.0, to_string(b.law),
             batches.horizon_failures};
      emit(value_rows(b.values), format, out, &m);
      return 0;
    }

    if (*c_perp) {
      const auto spec = law_kind == "area"
                            ? perpetuity::make_area_process_spec(alpha)
                            : perpetuity::make_frechet_process_spec(alpha);
      const double step = dt > 0.0 ? dt : 2e-3;
      const double cutoff = c_perp->count("--eps") ? eps : 0.05;
      const double horizon = perpetuity::default_horizon(spec);
      const auto batch =
          perpetuity::simulate_perpetuity(spec, cutoff, horizon, step, n, {seed, 0});
      Meta m{"simulate-perpetuity", alpha,  n, seed, step, cutoff,
             to_string(batch.law), 0};
      emit(value_rows(batch.values), format, out, &m);
      return 0;
    }

    // verify
    verify::Options opt;
    opt.alpha = verify_alpha;
    if (seed_given) opt.seed = seed;
    const auto results = verify::run_acceptance(opt);
    Table t;
    t.header = {"id", "passed", "detail"};
    for (const auto& r : results)
      t.rows.push_back({r.id, r.passed ? "1" : "0", r.detail});
    emit(t, format, out, nullptr);
    return verify::all_passed(results) ? 0 : 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ToleranceError& e) {
    std::cerr << "tolerance failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    // Out-of-domain requests (x <= 0, moment order outside the valid strip)
    // are bad requests, not numerical failures.
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
