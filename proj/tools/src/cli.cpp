#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <charconv>
#include <filesystem>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "superlattice/asymptotics.hpp"
#include "superlattice/errors.hpp"
#include "superlattice/evolution.hpp"
#include "superlattice/hopper.hpp"
#include "superlattice/io.hpp"
#include "superlattice/symbol.hpp"

namespace superlattice::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Context {
  fs::path out_dir;
  unsigned threads = 0;
  std::vector<std::string> outputs;
  std::ostream* log = nullptr;

  void write(const std::string& name, const std::string& content) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());
    io::write_atomic(out_dir / name, content);
    outputs.push_back(name);
  }
};

double parse_number(const std::string& text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) throw DomainError("not a number: '" + text + "'");
  return value;
}

std::int64_t parse_integer(const std::string& text) {
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) throw DomainError("not an integer: '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!piece.empty()) parts.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.empty()) throw DomainError("empty list");
  return parts;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text)) out.push_back(parse_number(p));
  return out;
}

std::vector<std::int64_t> parse_integer_list(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& p : split(text)) out.push_back(parse_integer(p));
  return out;
}

symbol::SymbolSpec make_spec(double s, const std::string& trunc) {
  if (trunc == "inf" || trunc == "infinite") return symbol::SymbolSpec::infinite(s);
  return symbol::SymbolSpec::at_order(s, parse_integer(trunc));
}

std::string json_to_flag(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number()) return io::format_number(value.get<double>());
  if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) joined += (joined.empty() ? "" : ",") + json_to_flag(item);
    return joined;
  }
  throw DomainError("unsupported config value " + value.dump());
}

// Fills options the command line left unset.
void apply_config(CLI::App& sub, const json& params) {
  if (!params.is_object()) throw DomainError("config parameters must be a JSON object");
  for (const auto& [key, value] : params.items()) {
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (!opt) throw DomainError("unknown config key '" + key + "' for " + sub.get_name());
    if (opt->count() > 0) continue;
    opt->add_result(json_to_flag(value));
    opt->run_callback();
  }
}

json collect_parameters(const CLI::App& sub) {
  json params = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "out") continue;
    if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
      params[name] = joined;
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

void require(const CLI::App& sub, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (sub.get_option(std::string("--") + n)->count() == 0)
      throw DomainError(std::string("missing required option --") + n);
}

// subcommand handlers ------------------------------------------------------

struct SymbolArgs {
  double s = 0.0;
  std::string trunc = "inf";
  std::int64_t n = 128;
};

void run_symbol(const SymbolArgs& a, Context& ctx) {
  const auto spec = make_spec(a.s, a.trunc);
  const auto grid = symbol::symbol_grid(spec, a.n, ctx.threads);
  ctx.write("symbol_grid.csv", io::grid_csv(grid));
  ctx.write("symbol_diagonal.csv", io::diagonal_csv(grid));
}

struct EvolveArgs {
  double s = 0.0;
  std::string trunc = "inf";
  double t = 0.0;
  std::string window = "auto";
  std::string grid = "auto";
};

void run_evolve(const EvolveArgs& a, Context& ctx) {
  const auto spec = make_spec(a.s, a.trunc);
  std::int64_t radius = 0;
  if (a.window == "auto")
    radius = static_cast<std::int64_t>(std::ceil(6.0 * std::pow(std::max(a.t, 1.0), 1.0 / spec.alpha())));
  else
    radius = parse_integer(a.window);
  evolution::GridOptions options;
  options.threads = ctx.threads;
  if (a.grid == "plan") options.refine = false;
  else if (a.grid != "auto") options.n = parse_integer(a.grid);
  const auto result = evolution::spectral_solve_delta(spec, a.t, radius, options);
  ctx.write("field.csv", io::field_csv(result.field));
  ctx.write("field.json", io::dump(io::evolution_json(result, spec)));
  *ctx.log << "grid_n=" << result.grid_n << " stride=" << result.stride << " captured_mass=" << result.captured_mass
           << " window_mass=" << result.window_mass << '\n';
}

struct ScanArgs {
  double s = 0.0;
  std::string trunc = "inf";
  std::string t_list = "25,50,100,200,400";
};

void run_fwhm_scan(const ScanArgs& a, Context& ctx) {
  const auto spec = make_spec(a.s, a.trunc);
  const auto times = parse_number_list(a.t_list);
  asymptotics::WidthOptions options;
  options.threads = ctx.threads;
  const auto points = asymptotics::fwhm_series(spec, times, options);
  const auto fit = asymptotics::fit_exponent(points);
  json report = io::fit_json(fit);
  report["s"] = spec.s();
  report["truncation"] = io::spec_json(spec)["truncation"];
  report["alpha"] = spec.alpha();
  report["expected_kappa"] = 1.0 / spec.alpha();
  if (spec.alpha() == 2.0) {
    const double gamma = spec.is_infinite() ? asymptotics::gamma_coefficient(spec.s())
                                            : asymptotics::truncation_coefficient(spec.s(), *spec.order());
    const double measured = asymptotics::fit_prefactor(points, 0.5);
    const double gaussian = asymptotics::gaussian_fwhm_prefactor(gamma);
    const double half = asymptotics::half_fwhm_prefactor(gamma);
    report["gamma"] = gamma;
    report["prefactor_fixed_half"] = measured;
    report["prefactor_gaussian"] = gaussian;
    report["prefactor_half_constant"] = half;
    report["prefactor_match"] = std::abs(measured - gaussian) <= std::abs(measured - half) ? "gaussian" : "half_constant";
  }
  ctx.write("fwhm.csv", io::series_csv(points));
  ctx.write("fit.json", io::dump(report));
  *ctx.log << "kappa=" << fit.kappa << " stderr=" << fit.stderr_kappa << " c=" << fit.c << '\n';
}

struct ProfileArgs {
  double s = 0.0;
  double extent = 10.0;
  double resolution = 0.05;
};

void run_profile(const ProfileArgs& a, Context& ctx) {
  asymptotics::ProfileOptions options;
  options.threads = ctx.threads;
  const auto profile = asymptotics::limit_profile(a.s, a.extent, a.resolution, options);
  const auto width = asymptotics::fwhm(profile);
  json report;
  report["s"] = a.s;
  report["alpha"] = profile.alpha;
  report["spacing"] = profile.spacing;
  report["radius"] = profile.radius;
  report["center"] = profile.at(0, 0);
  report["window_integral"] = profile.integral();
  report["grid_integral"] = profile.grid_mass;
  report["fwhm"] = width.width;
  report["fwhm_within_window"] = width.within_window;
  ctx.write("profile.csv", io::profile_csv(profile, a.s > 4.0));
  ctx.write("profile.json", io::dump(report));
}

struct HopperArgs {
  double s = 0.0;
  double t = 0.0;
  std::int64_t walkers = 100000;
  std::uint64_t seed = 1;
  std::int64_t window = 20;
  std::string k_cap = "auto";
};

void run_hopper(const HopperArgs& a, Context& ctx) {
  hopper::HopperConfig config;
  config.s = a.s;
  config.t_final = a.t;
  config.n_walkers = a.walkers;
  config.seed = a.seed;
  config.window = lattice::Window::centered(a.window);
  if (a.k_cap != "auto") config.k_cap = parse_integer(a.k_cap);
  const auto run = hopper::simulate(config, ctx.threads);

  evolution::GridOptions grid;
  grid.stride = 1;
  grid.refine = false;
  grid.threads = ctx.threads;
  const auto reference = evolution::spectral_solve_delta(symbol::SymbolSpec::infinite(a.s), a.t, a.window, grid);
  const double tv = hopper::tv_distance(run.histogram, reference.field);
  json report = io::histogram_json(config, run);
  report["tv_distance"] = tv;
  report["spectral_grid_n"] = reference.grid_n;
  ctx.write("histogram.csv", io::histogram_csv(run.histogram));
  ctx.write("histogram.json", io::dump(report));
  *ctx.log << "tv_distance=" << tv << " out_of_window=" << run.histogram.out_of_window << '\n';
}

struct TruncationArgs {
  double s = 0.0;
  std::string n_list = "1,2,5,10,20,50,100,200,400";
  std::string prefactor_n_list = "5,10,20";
  std::string t_list = "25,50,100,200,400";
};

void run_truncation(const TruncationArgs& a, Context& ctx) {
  const auto orders = parse_integer_list(a.n_list);
  std::string table = "N,coefficient,reference\n";
  std::vector<std::pair<double, double>> growth;
  for (std::int64_t n : orders) {
    const double c = asymptotics::truncation_coefficient(a.s, n);
    double reference = std::nan("");
    if (a.s > 2.0 && a.s < 4.0) reference = asymptotics::truncation_growth(a.s, n);
    else if (a.s > 4.0) reference = asymptotics::truncation_limit(a.s);
    table += std::to_string(n) + ',' + io::format_number(c) + ',' + io::format_number(reference) + '\n';
    growth.emplace_back(static_cast<double>(n), c);
  }
  json report;
  report["s"] = a.s;
  if (growth.size() >= 4) report["coefficient_growth_exponent"] = asymptotics::fit_exponent(growth).kappa;
  if (a.s > 4.0) report["limit"] = asymptotics::truncation_limit(a.s);

  std::string prefactors = "N,prefactor,gaussian_prefactor,half_prefactor\n";
  if (a.prefactor_n_list != "none") {
    const auto times = parse_number_list(a.t_list);
    asymptotics::WidthOptions options;
    options.threads = ctx.threads;
    for (std::int64_t n : parse_integer_list(a.prefactor_n_list)) {
      const auto points = asymptotics::fwhm_series(symbol::SymbolSpec::at_order(a.s, n), times, options);
      const double gamma = asymptotics::truncation_coefficient(a.s, n);
      prefactors += std::to_string(n) + ',' + io::format_number(asymptotics::fit_prefactor(points, 0.5)) + ',' +
                    io::format_number(asymptotics::gaussian_fwhm_prefactor(gamma)) + ',' +
                    io::format_number(asymptotics::half_fwhm_prefactor(gamma)) + '\n';
    }
  }
  ctx.write("truncation.csv", table);
  ctx.write("truncation_prefactors.csv", prefactors);
  ctx.write("truncation.json", io::dump(report));
}

int exit_code_for(const std::exception_ptr& error, std::ostream& err) {
  try {
    std::rethrow_exception(error);
  } catch (const FlatFieldError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const WindowTooSmallError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const json::exception& e) {
    err << "usage error: bad config: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::bad_alloc&) {
    err << "numerical error: out of memory\n";
    return kNumerical;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mellin-transformed path Laplacians on the square lattice", "superlattice"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", SUPERLATTICE_VERSION);
  std::string config_path;
  unsigned threads = 0;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "JSON parameters or a previous run manifest");
  app.add_option("--threads", threads, "worker threads (0: SUPERLATTICE_THREADS or all cores)");

  std::map<std::string, std::function<void(Context&)>> handlers;
  auto common = [&](CLI::App* sub, double& s) {
    sub->add_option("--s", s, "Mellin exponent (> 2)");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
  };

  SymbolArgs sym;
  auto* sym_cmd = app.add_subcommand("symbol", "sample the symbol on the Brillouin zone");
  common(sym_cmd, sym.s);
  sym_cmd->add_option("--trunc", sym.trunc, "truncation order N or inf")->capture_default_str();
  sym_cmd->add_option("--n", sym.n, "grid size (even, >= 8)")->capture_default_str();
  handlers["symbol"] = [&](Context& c) { require(*sym_cmd, {"s"}); run_symbol(sym, c); };

  EvolveArgs evo;
  auto* evo_cmd = app.add_subcommand("evolve", "solve from a point mass by spectral quadrature");
  common(evo_cmd, evo.s);
  evo_cmd->add_option("--trunc", evo.trunc, "truncation order N or inf")->capture_default_str();
  evo_cmd->add_option("--t", evo.t, "time");
  evo_cmd->add_option("--window", evo.window, "window radius or auto (6 t^{1/alpha})")->capture_default_str();
  evo_cmd->add_option("--grid", evo.grid, "quadrature size n, auto (refine) or plan")->capture_default_str();
  handlers["evolve"] = [&](Context& c) { require(*evo_cmd, {"s", "t"}); run_evolve(evo, c); };

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("fwhm-scan", "FWHM over a list of times and its power-law fit");
  common(scan_cmd, scan.s);
  scan_cmd->add_option("--trunc", scan.trunc, "truncation order N or inf")->capture_default_str();
  scan_cmd->add_option("--t-list", scan.t_list, "comma-separated times")->capture_default_str();
  handlers["fwhm-scan"] = [&](Context& c) { require(*scan_cmd, {"s"}); run_fwhm_scan(scan, c); };

  ProfileArgs prof;
  auto* prof_cmd = app.add_subcommand("profile", "limit profile of the rescaled solution");
  common(prof_cmd, prof.s);
  prof_cmd->add_option("--extent", prof.extent, "half-width of the sampled square")->capture_default_str();
  prof_cmd->add_option("--resolution", prof.resolution, "sample spacing")->capture_default_str();
  handlers["profile"] = [&](Context& c) { require(*prof_cmd, {"s"}); run_profile(prof, c); };

  HopperArgs hop;
  auto* hop_cmd = app.add_subcommand("hopper", "Monte Carlo walkers compared with the spectral solution");
  common(hop_cmd, hop.s);
  hop_cmd->add_option("--t", hop.t, "final time");
  hop_cmd->add_option("--walkers", hop.walkers, "number of walkers")->capture_default_str();
  hop_cmd->add_option("--seed", hop.seed, "random seed")->capture_default_str();
  hop_cmd->add_option("--window", hop.window, "histogram window radius")->capture_default_str();
  hop_cmd->add_option("--k-cap", hop.k_cap, "largest jump distance or auto")->capture_default_str();
  handlers["hopper"] = [&](Context& c) { require(*hop_cmd, {"s", "t"}); run_hopper(hop, c); };

  TruncationArgs tr;
  auto* tr_cmd = app.add_subcommand("truncation", "finite truncation coefficients and width prefactors");
  common(tr_cmd, tr.s);
  tr_cmd->add_option("--n-list", tr.n_list, "truncation orders for the coefficient table")->capture_default_str();
  tr_cmd->add_option("--prefactor-n-list", tr.prefactor_n_list, "orders for width prefactors, or none")
      ->capture_default_str();
  tr_cmd->add_option("--t-list", tr.t_list, "times for the prefactor fits")->capture_default_str();
  handlers["truncation"] = [&](Context& c) { require(*tr_cmd, {"s"}); run_truncation(tr, c); };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto started = std::chrono::steady_clock::now();
  Context ctx;
  ctx.log = &out;
  try {
    if (!config_path.empty()) {
      const json config = json::parse(io::read_file(config_path));
      if (config.contains("parameters")) {
        if (config.value("subcommand", sub->get_name()) != sub->get_name())
          throw DomainError("manifest is for subcommand '" + config.value("subcommand", "") + "'");
        apply_config(*sub, config.at("parameters"));
      } else {
        apply_config(*sub, config);
      }
    }
    ctx.out_dir = out_dir;
    ctx.threads = threads;
    handlers.at(sub->get_name())(ctx);

    json manifest;
    manifest["subcommand"] = sub->get_name();
    manifest["parameters"] = collect_parameters(*sub);
    manifest["version"] = SUPERLATTICE_VERSION;
    manifest["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    manifest["outputs"] = ctx.outputs;
    ctx.write(sub->get_name() + "_manifest.json", io::dump(manifest));
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
  return kOk;
}

}  // namespace superlattice::cli
