#include "involute/cli.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "involute/bounds.hpp"
#include "involute/geometry.hpp"
#include "involute/series_io.hpp"
#include "involute/solution.hpp"
#include "involute/wedge.hpp"

namespace involute::cli {

using nlohmann::json;

nlohmann::json config_to_json(const RunConfig& c) {
  return {{"mode", std::string(mode_name(c.mode))},
          {"truncation", c.truncation ? json(*c.truncation) : json(nullptr)},
          {"tau_bv", c.tau_bv},
          {"tau_glue", c.tau_glue},
          {"rank_threshold", c.rank_threshold},
          {"quadrature_order", c.quadrature_order},
          {"seed", c.seed}};
}

void merge_config(RunConfig& c, const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(Errc::parse_error, "config must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "mode")
        c.mode = parse_mode(value.get<std::string>());
      else if (key == "truncation")
        c.truncation = value.is_null() ? std::nullopt : std::optional<unsigned>(value.get<unsigned>());
      else if (key == "tau_bv")
        c.tau_bv = value.get<double>();
      else if (key == "tau_glue")
        c.tau_glue = value.get<double>();
      else if (key == "rank_threshold")
        c.rank_threshold = value.get<double>();
      else if (key == "quadrature_order")
        c.quadrature_order = value.get<unsigned>();
      else if (key == "seed")
        c.seed = value.get<std::uint64_t>();
      else
        throw Error(Errc::parse_error, "unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("config: ") + e.what());
  }
}

void validate(const RunConfig& c) {
  if (c.truncation && *c.truncation < 1) throw Error(Errc::invalid_argument, "truncation must be at least 1");
  if (!(c.tau_bv > 0) || !(c.tau_glue > 0) || !(c.rank_threshold > 0))
    throw Error(Errc::invalid_argument, "tolerances must be positive");
  if (c.quadrature_order < 1) throw Error(Errc::invalid_argument, "quadrature order must be positive");
}

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error:
    case Errc::variable_mismatch:
    case Errc::mode_mismatch:
    case Errc::unknown_variable:
    case Errc::arity_mismatch:
    case Errc::dimension_mismatch:
    case Errc::invalid_argument:
    case Errc::truncation_too_small:
    case Errc::degree_out_of_range:
    case Errc::nonpositive_eps:
      return 2;
    default:
      return 1;
  }
}

namespace {

bool same_up_to(const Series& a, const Series& b, unsigned degree) {
  if (a.variables() != b.variables()) return false;
  auto low = [degree](const Series& s) {
    TermMap t;
    for (const auto& [e, c] : s.terms())
      if (e.degree() <= degree) t.emplace(e, c);
    return t;
  };
  const TermMap x = low(a), y = low(b);
  return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), [](const auto& p, const auto& q) {
           return p.first == q.first && p.second == q.second;
         });
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  RunConfig config;
  std::string out_path;
  std::string command;

  json base() const { return {{"command", command}, {"config", config_to_json(config)}}; }

  void emit(const json& report) const {
    const std::string text = dump_json(report);
    if (out_path.empty())
      out_ << text;
    else
      write_text_file(out_path, text);
  }

  int fail(const Error& e) const {
    json r = base();
    r["status"] = "error";
    r["error"] = std::string(e.name());
    r["message"] = e.what();
    if (const auto* nas = dynamic_cast<const NotASolution*>(&e)) {
      r["failing_layer"] = nas->layer();
      r["residual"] = nas->residual();
    }
    emit(r);
    const int code = exit_code_for(e.code());
    if (code == 2) err_ << e.what() << "\n";
    return code;
  }

  Series convert(const Series& s) const { return config.mode == Mode::exact ? to_exact(s) : to_floating(s); }

  int verify(const std::string& input) {
    const Series f = convert(read_series_file(input));
    const auto report = solution::verify_solution(f);
    json r = base();
    r["input"] = input;
    json norms = json::object();
    std::string failing;
    for (const auto& [name, v] : report.norms) {
      norms[name] = format_rational(v);
      const bool bad = f.mode() == Mode::exact ? v != 0 : v.get_d() >= config.rank_threshold;
      if (bad && failing.empty()) failing = name;
    }
    r["residuals"] = norms;
    r["status"] = failing.empty() ? "ok" : "not_a_solution";
    if (!failing.empty()) r["failing"] = failing;
    emit(r);
    return failing.empty() ? 0 : 1;
  }

  int pullback(const std::string& input, const std::string& output) {
    const Series h = convert(read_series_file(input));
    const Series f = config.truncation ? solution::pullback(h, *config.truncation) : solution::pullback(h);
    write_series_file(output, f);
    json r = base();
    r["input"] = input;
    r["output"] = output;
    r["truncation"] = f.truncation();
    r["terms"] = f.size();
    r["status"] = "ok";
    emit(r);
    return 0;
  }

  int reconstruct(const std::string& input, const std::string& output) {
    const Series f = convert(read_series_file(input));
    const Series h = solution::hypocomplex_reconstruct(f);
    write_series_file(output, h);
    json r = base();
    r["input"] = input;
    r["output"] = output;
    r["truncation"] = h.truncation();
    r["terms"] = h.size();
    r["status"] = "ok";
    emit(r);
    return 0;
  }

  int obstruct(const std::string& vfile, const std::string& solution_file) {
    const json doc = read_json_file(vfile);
    solution::OneForm v;
    try {
      for (const auto& c : doc.at("components")) v.components.push_back(convert(series_from_json(c)));
    } catch (const json::exception& e) {
      throw Error(Errc::parse_error, std::string("one-form file: ") + e.what());
    }
    if (v.components.empty()) throw Error(Errc::parse_error, "one-form needs at least one component");

    json r = base();
    r["input"] = vfile;
    const auto compat = solution::check_compatibility(v);
    r["closed"] = compat.closed();
    r["compatibility_residual"] = format_rational(compat.max_residual());
    if (!compat.closed()) throw Error(Errc::not_closed, "d v != 0; max residual " + format_rational(compat.max_residual()));

    unsigned degree = 0;
    for (const auto& c : v.components) degree = std::max(degree, c.degree());
    const unsigned d = config.truncation.value_or(degree + 1);
    const Series f = solution::inhomogeneous_solve(v, d);
    const auto back = solution::recover_inhomogeneity(f);
    bool roundtrip = back.m() == v.m();
    for (std::size_t j = 0; roundtrip && j < v.m(); ++j)
      roundtrip = same_up_to(back.components[j], v.components[j], d - 1);
    r["roundtrip"] = roundtrip;
    r["solution_truncation"] = d;
    r["solution_terms"] = f.size();
    if (!solution_file.empty()) {
      write_series_file(solution_file, f);
      r["solution"] = solution_file;
    }
    json certs = json::array();
    for (const auto& c : v.components) {
      if (c.is_zero()) {
        certs.push_back(nullptr);
        continue;
      }
      const auto cert = solution::analyticity_certificate(c);
      certs.push_back({{"C", cert.c}, {"M", cert.m}, {"argmax", cert.argmax}});
    }
    r["certificates"] = certs;
    r["status"] = roundtrip ? "ok" : "roundtrip_failed";
    emit(r);
    return roundtrip ? 0 : 1;
  }

  int bounds(std::size_t dim, unsigned degree, const std::string& nodes, const std::string& eps_text,
             std::size_t trials, std::size_t grid) {
    auto rep = bounds::bound_constant(dim, degree, bounds::parse_node_family(nodes));
    if (!eps_text.empty()) {
      const Rational eps = eps_text.find('/') != std::string::npos ? parse_rational(eps_text)
                                                                    : Rational(std::stod(eps_text));
      rep = bounds::rescale_bound(rep, eps);
    }
    json r = base();
    r["m"] = rep.m;
    r["k"] = rep.k;
    r["method"] = std::string(bounds::method_name(rep.method));
    r["nodes"] = std::string(bounds::node_family_name(rep.nodes));
    r["R"] = rep.r;
    r["R_exact"] = format_rational(rep.r_exact);
    r["lambda"] = format_rational(rep.lambda);
    r["R1_raw"] = rep.r1_raw;
    r["running_max_applied"] = rep.running_max_applied;
    r["eps"] = format_rational(rep.eps);
    r["composition"] = rep.composition;
    r["sample_grid"] = rep.sample_grid;
    r["verified"] = rep.verified;

    std::mt19937_64 rng(config.seed);
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trials; ++i) {
      const auto p = bounds::random_poly(dim, degree, rng);
      const auto v = bounds::verify_bound(p, rep, grid);
      if (!v.pass) ++violations;
      min_margin = std::min(min_margin, v.margin);
    }
    r["trials"] = {{"count", trials},
                   {"violations", violations},
                   {"grid_points_per_axis", grid},
                   {"min_margin", trials ? json(min_margin) : json(nullptr)}};

    bool witness_ok = true;
    if (dim == 1 && degree >= 1) {
      const auto w = bounds::chebyshev_witness(degree);
      witness_ok = bounds::respects_witness(rep, w);
      r["witness"] = {{"polynomial", "T_" + std::to_string(degree)},
                      {"max_coefficient", w.max_coefficient.get_str()},
                      {"lower_bound", w.lower_bound},
                      {"respected", witness_ok}};
    }
    const bool ok = rep.verified && violations == 0 && witness_ok;
    r["status"] = ok ? "ok" : "bound_violated";
    emit(r);
    return ok ? 0 : 1;
  }

  int flag(std::size_t n, std::size_t samples) {
    if (n < 1) throw Error(Errc::invalid_argument, "n must be at least 1");
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 10);
    auto q = [&] {
      Rational x(num(rng), den(rng));
      x.canonicalize();
      return x;
    };
    const auto chart = geometry::make_chart(n, 1);
    Rational worst(0);
    bool in_plane = true;
    for (std::size_t k = 0; k < samples; ++k) {
      geometry::ExactChartPoint p;
      p.z = {q(), q()};
      for (std::size_t j = 0; j + 1 < n; ++j) {
        p.s.push_back(q());
        p.t.push_back(q());
      }
      const auto fp = geometry::flag_lift(p);
      const auto mu = geometry::mu_projection(fp);
      const auto b = geometry::blow_down(chart, p);
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, sup_norm(mu[i] - b[i]));
      in_plane = in_plane && geometry::line_in_plane(fp);
    }
    json r = base();
    r["n"] = n;
    r["samples"] = samples;
    r["max_discrepancy"] = format_rational(worst);
    r["lines_in_planes"] = in_plane;
    const bool ok = worst == 0 && in_plane;
    r["status"] = ok ? "ok" : "mismatch";
    emit(r);
    return ok ? 0 : 1;
  }

  int wedge(const std::string& spec_file, const std::string& germ_file, const std::string& function,
            const std::string& germ_dir) {
    const wedge::WedgeSpec spec = wedge::wedge_from_json(read_json_file(spec_file));
    if (germ_file.empty() == function.empty())
      throw Error(Errc::invalid_argument, "give exactly one of --germ and --function");
    wedge::SampledFunction f;
    if (!germ_file.empty())
      f = wedge::from_germ(convert(read_series_file(germ_file)));
    else if (function == "rational")
      f = wedge::rational_example(spec.n);
    else if (function == "direction-dependent")
      f = wedge::direction_dependent_example(spec);
    else
      throw Error(Errc::invalid_argument, "unknown function '" + function + "'");

    wedge::DemoOptions opt;
    opt.boundary.tolerance = config.tau_bv;
    opt.extend.tolerance = config.tau_bv;
    opt.glue_tolerance = config.tau_glue;
    opt.quadrature_order = config.quadrature_order;
    opt.lift.seed = config.seed;
    opt.extend.seed = config.seed;
    const auto demo = wedge::full_eowt_demo(spec, f, opt);

    json r = base();
    r["spec"] = wedge_to_json(spec);
    r["function"] = germ_file.empty() ? function : germ_file;
    r["analytic"] = f.analytic();
    r["directions"] = demo.directions;
    r["boundary_status"] = {{"direction_independent", demo.boundary.direction_independent},
                            {"max_direction_gap", demo.boundary.max_direction_gap},
                            {"edge_points", demo.boundary.points.size()},
                            {"increments", demo.boundary.increments}};
    if (!germ_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(germ_dir, ec);
      if (ec) throw Error(Errc::invalid_argument, "cannot create '" + germ_dir + "': " + ec.message());
    }
    json files = json::array();
    json charts = json::array();
    json weak = json::array();
    bool recovered = f.analytic();
    for (std::size_t k = 0; k < demo.charts.size(); ++k) {
      const auto& c = demo.charts[k];
      json cj = {{"direction", c.direction}, {"ball_radius", c.ball_radius}, {"weak_cr_residual", c.weak_cr_residual}};
      if (c.holdout_error) cj["holdout_max_error"] = *c.holdout_error;
      charts.push_back(cj);
      weak.push_back(c.weak_cr_residual);
      if (f.analytic()) recovered = recovered && c.ambient_germ == *f.germ;
      if (!germ_dir.empty()) {
        const auto path = std::filesystem::path(germ_dir) / ("chart" + std::to_string(k + 1) + ".json");
        write_series_file(path, c.ambient_germ);
        files.push_back(path.string());
      }
    }
    r["charts"] = charts;
    r["per_chart_germ_files"] = files;
    r["overlap_max_disagreement"] = demo.overlap_max_disagreement;
    r["weak_cr_residuals"] = weak;
    if (f.analytic()) r["recovered"] = recovered;
    r["status"] = "ok";
    emit(r);
    return f.analytic() && !recovered ? 1 : 0;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Involutive structures on the real blow-up: series, reconstruction, bounds and wedges"};
  app.require_subcommand(1);

  std::optional<std::string> mode;
  std::optional<unsigned> truncation;
  std::optional<std::string> config_file;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  app.add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--truncation", truncation, "Truncation degree D");
  app.add_option("--config", config_file, "JSON file with RunConfig fields");
  app.add_option("--seed", seed, "Seed for randomized runs");
  app.add_option("--out", out_path, "Write the report here instead of stdout");

  std::string input, output, vfile, solution_file, nodes = "equispaced", eps, spec, germ, function, germ_dir;
  std::size_t dim = 1, n = 2, samples = 50, trials = 100, grid = 64;
  unsigned degree = 2;

  auto* verify = app.add_subcommand("verify", "Frame residuals of a chart series");
  verify->add_option("input", input, "Chart series file")->required();
  auto* pullback = app.add_subcommand("pullback", "Germ (z, w) to chart series (z, zbar, s, t)");
  pullback->add_option("input", input, "Germ file")->required();
  pullback->add_option("output", output, "Chart series file to write")->required();
  auto* reconstruct = app.add_subcommand("reconstruct", "Chart solution to germ");
  reconstruct->add_option("input", input, "Chart series file")->required();
  reconstruct->add_option("output", output, "Germ file to write")->required();
  auto* obstruct = app.add_subcommand("obstruct", "Solve the inhomogeneous system for a closed one-form");
  obstruct->add_option("--v", vfile, "One-form file {\"components\": [series, ...]}")->required();
  obstruct->add_option("--solution", solution_file, "Write the chart solution here");
  auto* bounds = app.add_subcommand("bounds", "Coefficient bound constant");
  bounds->add_option("--dim", dim, "Number of variables m")->required();
  bounds->add_option("--degree", degree, "Degree k")->required();
  bounds->add_option("--nodes", nodes, "equispaced or chebyshev");
  bounds->add_option("--eps", eps, "Box half-width, decimal or p/q");
  bounds->add_option("--trials", trials, "Random polynomials to check");
  bounds->add_option("--grid", grid, "Grid points per axis");
  auto* wedge = app.add_subcommand("wedge", "Edge of the wedge pipeline");
  wedge->add_option("--spec", spec, "Wedge spec file")->required();
  wedge->add_option("--germ", germ, "Ambient germ file (analytic mode)");
  wedge->add_option("--function", function, "rational or direction-dependent (numeric mode)");
  wedge->add_option("--germ-dir", germ_dir, "Directory for per-chart germ files");
  auto* flag = app.add_subcommand("flag", "Flag correspondence check");
  flag->add_option("--n", n, "Ambient dimension")->required();
  flag->add_option("--samples", samples, "Random points");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Runner run(out, err);
  run.command = app.get_subcommands().front()->get_name();
  run.out_path = out_path;
  try {
    try {
      if (config_file) merge_config(run.config, read_json_file(*config_file));
      if (mode) run.config.mode = parse_mode(*mode);
      if (truncation) run.config.truncation = truncation;
      if (seed) run.config.seed = *seed;
      validate(run.config);

      if (verify->parsed()) return run.verify(input);
      if (pullback->parsed()) return run.pullback(input, output);
      if (reconstruct->parsed()) return run.reconstruct(input, output);
      if (obstruct->parsed()) return run.obstruct(vfile, solution_file);
      if (bounds->parsed()) return run.bounds(dim, degree, nodes, eps, trials, grid);
      if (wedge->parsed()) return run.wedge(spec, germ, function, germ_dir);
      if (flag->parsed()) return run.flag(n, samples);
    } catch (const Error& e) {
      return run.fail(e);
    } catch (const std::invalid_argument& e) {
      return run.fail(Error(Errc::invalid_argument, e.what()));
    }
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace involute::cli
