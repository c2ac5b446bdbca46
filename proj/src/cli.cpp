#include "hvlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "CLI11.hpp"

#include "hvlab/errors.hpp"
#include "hvlab/inequalities.hpp"
#include "hvlab/kochenspecker.hpp"
#include "hvlab/models.hpp"
#include "hvlab/quantum.hpp"

namespace hvlab::cli {

namespace {

using io::Json;

constexpr double kOracleTol = 1e-12;

CommandResult ok_if(bool holds, Json payload) {
  return CommandResult{holds ? kHolds : kViolation, std::move(payload), {}, {}};
}

ks::RaySet load_rays(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  return ks::parse_rays(in);
}

CommandResult predict_photon(double alpha, double beta, bool oracle) {
  const quantum::Angle a(alpha), b(beta);
  const auto stats = quantum::photon_stats(a, b);
  Json j{{"experiment", "photon"}, {"alpha", a.value()}, {"beta", b.value()}};
  j["stats"] = io::to_json(stats);
  bool match = true;
  if (oracle) {
    const double diff = stats.max_abs_diff(quantum::born_oracle_photon(a, b));
    j["oracle"] = io::to_json(quantum::born_oracle_photon(a, b));
    j["max_abs_diff"] = diff;
    match = diff <= kOracleTol;
  }
  return ok_if(match, std::move(j));
}

CommandResult predict_spin1(const std::string& frame_a, const std::string& frame_b, bool oracle) {
  const auto a = io::parse_frame(frame_a);
  const auto b = io::parse_frame(frame_b);
  const auto joint = quantum::spin1_joint(a, b);
  Json j{{"experiment", "spin1"}};
  j["joint"] = io::to_json(joint);
  Json pairs = Json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < 3; ++k) row.push_back(io::to_json(quantum::spin1_pair_stats(a[i], b[k])));
    pairs.push_back(row);
  }
  j["pairs"] = pairs;
  bool match = true;
  if (oracle) {
    const auto born = quantum::born_oracle_spin1(a, b);
    double diff = joint.max_abs_diff(born);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < 3; ++k) {
        diff = std::max(diff, quantum::spin1_pair_stats(a[i], b[k]).max_abs_diff(born.pair(i, k)));
      }
    j["oracle_joint"] = io::to_json(born);
    j["max_abs_diff"] = diff;
    match = diff <= kOracleTol;
  }
  return ok_if(match, std::move(j));
}

CommandResult scan_boole(double min, double max, double step, const std::string& csv) {
  const auto scan = inequalities::scan_f(min, max, step);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw InputError("cannot write '" + csv + "'");
    inequalities::write_scan_csv(scan, out);
  }
  Json j{{"min", min}, {"max", max}, {"step", step}, {"points", scan.points.size()},
         {"violations", scan.violations.size()}};
  auto worst = std::min_element(scan.points.begin(), scan.points.end(),
                                [](const auto& x, const auto& y) { return x.f < y.f; });
  j["min_f"] = worst->f;
  j["argmin_theta"] = worst->theta;
  if (!scan.violations.empty()) {
    j["first_violation"] = scan.violations.front().theta;
    j["last_violation"] = scan.violations.back().theta;
  }
  if (!csv.empty()) j["csv"] = csv;
  return ok_if(scan.violations.empty(), std::move(j));
}

CommandResult lhv_check(const std::string& path, double tol) {
  const auto model = io::parse_model(io::read_json_file(path));
  const auto raw = models::induced_raw_model(model);
  const auto freedom = models::check_freedom(raw, tol);
  const auto pi = models::check_parameter_independence(raw);
  Json j{{"variant", models::variant_name(model.variant)}, {"tol", tol}};
  j["freedom"] = io::to_json(freedom);
  j["parameter_independence"] = io::to_json(pi);
  bool holds = freedom.probabilistic && freedom.surjective && pi.holds;
  if (model.variant == models::Variant::photon) {
    const auto boole = inequalities::boole_audit(model);
    j["boole"] = io::to_json(boole);
    holds = holds && boole.holds;
  } else {
    const auto pairs = models::all_setting_pairs(model);
    const auto pc = models::check_perfect_correlation(model, pairs);
    j["perfect_correlation"] = io::to_json(pc);
    holds = holds && pc.holds;
  }
  j["holds"] = holds;
  return ok_if(holds, std::move(j));
}

CommandResult stochastic_check(const std::string& path, double tol) {
  const auto model = io::parse_stochastic_model(io::read_json_file(path));
  const auto report = models::check_bell_locality(models::joint_table(model), tol);
  Json j = io::to_json(report);
  j["tol"] = tol;
  return ok_if(report.bell_local && report.freedom, std::move(j));
}

CommandResult stochastic_reduce(const std::string& path) {
  const auto model = io::parse_stochastic_model(io::read_json_file(path));
  const auto d = models::derandomize(model);
  Json j{{"certified", d.certified}, {"max_abs_diff", d.max_abs_diff}};
  j["table"] = io::to_json(d.table);
  bool holds = d.certified;
  const auto boole = inequalities::boole_audit(d.table);
  j["boole"] = io::to_json(boole);
  holds = holds && boole.holds;
  if (d.table.na() == 2 && d.table.nb() == 2) {
    const auto poly = inequalities::local_polytope_feasible(d.table);
    j["polytope"] = io::to_json(poly);
    holds = holds && poly.feasible;
  }
  return ok_if(holds, std::move(j));
}

CommandResult ks_peres(const std::string& emit) {
  const auto rays = ks::peres33();
  const auto g = ks::orthogonality_graph(rays);
  if (!emit.empty()) {
    std::ofstream out(emit);
    if (!out) throw InputError("cannot write '" + emit + "'");
    ks::write_rays(rays, out);
  }
  Json j{{"rays", rays.size()}, {"pairs", g.pairs.size()}, {"triads", g.triads.size()}};
  if (!emit.empty()) j["emitted"] = emit;
  return ok_if(true, std::move(j));
}

}  // namespace

CommandResult dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Hidden-variable no-go laboratory", "hvlab"};
  app.require_subcommand(1);

  // predict
  auto* predict = app.add_subcommand("predict", "Quantum predictions");
  predict->require_subcommand(1);
  double alpha = 0, beta = 0;
  bool oracle = false;
  auto* photon = predict->add_subcommand("photon", "Photon EPR-Bohm statistics");
  photon->add_option("--alpha", alpha, "Alice's polarizer angle (radians)")->required();
  photon->add_option("--beta", beta, "Bob's polarizer angle (radians)")->required();
  photon->add_flag("--oracle", oracle, "Recompute with the Born-rule oracle");
  std::string frame_a, frame_b;
  auto* spin1 = predict->add_subcommand("spin1", "Spin-one statistics for two frames");
  spin1->add_option("--frame-a", frame_a, "Nine reals, one ray per row")->required();
  spin1->add_option("--frame-b", frame_b, "Nine reals, one ray per row")->required();
  spin1->add_flag("--oracle", oracle, "Recompute with the Born-rule oracle");

  // scan-boole
  double scan_min = 0.0, scan_max = 2.0 * std::numbers::pi, scan_step = 1e-3;
  std::string csv;
  auto* scan = app.add_subcommand("scan-boole", "Scan f(theta) for Boole violations");
  scan->add_option("--min", scan_min, "Start of the range (radians)");
  scan->add_option("--max", scan_max, "End of the range (radians)");
  scan->add_option("--step", scan_step, "Grid step (radians)");
  scan->add_option("--csv", csv, "Write theta,f,violation rows to this path");

  // lhv
  std::string model_path;
  double tol = finprob::kIdentityTol;
  std::uint64_t shots = 0, seed = 0;
  auto* lhv = app.add_subcommand("lhv", "Deterministic hidden-variable models");
  lhv->require_subcommand(1);
  auto* lhv_check_cmd = lhv->add_subcommand("check", "Check Freedom, Parameter Independence and Nature constraints");
  lhv_check_cmd->add_option("model", model_path, "Model JSON")->required();
  lhv_check_cmd->add_option("--tol", tol, "Independence tolerance");
  auto* lhv_table = lhv->add_subcommand("table", "Predicted conditional table");
  lhv_table->add_option("model", model_path, "Model JSON")->required();
  auto* lhv_sim = lhv->add_subcommand("simulate", "Empirical conditional table");
  lhv_sim->add_option("model", model_path, "Model JSON")->required();
  lhv_sim->add_option("--shots", shots, "Number of shots")->required();
  lhv_sim->add_option("--seed", seed, "Seed")->required();

  // polytope
  std::string table_path;
  auto* polytope = app.add_subcommand("polytope", "Local-polytope membership of a 2x2 table");
  polytope->add_option("table", table_path, "Table JSON")->required();
  polytope->add_option("--tol", tol, "Feasibility tolerance")->default_val(inequalities::kFeasibilityTol);

  // stochastic
  auto* stochastic = app.add_subcommand("stochastic", "Stochastic Bell-local models");
  stochastic->require_subcommand(1);
  auto* st_check = stochastic->add_subcommand("check", "Check Bell-Locality and Freedom");
  st_check->add_option("model", model_path, "Stochastic model JSON")->required();
  st_check->add_option("--tol", tol, "Tolerance");
  auto* st_reduce = stochastic->add_subcommand("reduce", "Derandomize and audit");
  st_reduce->add_option("model", model_path, "Stochastic model JSON")->required();

  // ks
  std::string rays_path, emit, ks_model;
  bool count = false;
  auto* ks_cmd = app.add_subcommand("ks", "Kochen-Specker colorability");
  ks_cmd->require_subcommand(1);
  auto* ks_color = ks_cmd->add_subcommand("color", "Search for a coloring");
  ks_color->add_option("rays", rays_path, "Ray file")->required();
  ks_color->add_flag("--count", count, "Count every coloring");
  auto* ks_peres_cmd = ks_cmd->add_subcommand("peres33", "The 33-ray set");
  ks_peres_cmd->add_option("--emit", emit, "Write the rays to this path");
  auto* ks_obs = ks_cmd->add_subcommand("obstruction", "Frame-function obstruction");
  ks_obs->add_option("rays", rays_path, "Ray file")->required();
  ks_obs->add_option("--model", ks_model, "Spin-one model JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return CommandResult{kHolds, nullptr, {}, app.help()};
  } catch (const CLI::CallForAllHelp&) {
    return CommandResult{kHolds, nullptr, {}, app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return CommandResult{kInputError, nullptr, "usage error: " + msg, {}};
  }

  try {
    if (photon->parsed()) return predict_photon(alpha, beta, oracle);
    if (spin1->parsed()) return predict_spin1(frame_a, frame_b, oracle);
    if (scan->parsed()) return scan_boole(scan_min, scan_max, scan_step, csv);
    if (lhv_check_cmd->parsed()) return lhv_check(model_path, tol);
    if (lhv_table->parsed()) {
      const auto m = io::parse_model(io::read_json_file(model_path));
      return ok_if(true, io::to_json(models::predicted_table(m)));
    }
    if (lhv_sim->parsed()) {
      const auto m = io::parse_model(io::read_json_file(model_path));
      if (shots == 0) throw InputError("--shots must be at least 1");
      Json j = io::to_json(models::simulate(m, shots, seed));
      j["shots"] = shots;
      j["seed"] = seed;
      return ok_if(true, std::move(j));
    }
    if (polytope->parsed()) {
      const auto t = io::parse_table(io::read_json_file(table_path));
      const auto r = inequalities::local_polytope_feasible(t, tol);
      Json j = io::to_json(r);
      j["boole"] = io::to_json(inequalities::boole_audit(t));
      return ok_if(r.feasible, std::move(j));
    }
    if (st_check->parsed()) return stochastic_check(model_path, tol);
    if (st_reduce->parsed()) return stochastic_reduce(model_path);
    if (ks_color->parsed()) {
      const auto g = ks::orthogonality_graph(load_rays(rays_path));
      const auto r = ks::search_coloring(g, ks::SearchOptions{count});
      Json j = io::to_json(r);
      j["rays"] = g.rays.size();
      j["pairs"] = g.pairs.size();
      j["triads"] = g.triads.size();
      return ok_if(r.colorable, std::move(j));
    }
    if (ks_peres_cmd->parsed()) return ks_peres(emit);
    if (ks_obs->parsed()) {
      const auto rays = load_rays(rays_path);
      std::optional<models::FactorizedModel> model;
      if (!ks_model.empty()) model = io::parse_model(io::read_json_file(ks_model));
      const auto r = ks::frame_function_obstruction(rays, model ? &*model : nullptr);
      return ok_if(r.model_exists, io::to_json(r));
    }
  } catch (const InputError& e) {
    return CommandResult{kInputError, nullptr, std::string("input error: ") + e.what(), {}};
  } catch (const ConditioningError& e) {
    return CommandResult{kInputError, nullptr, std::string("conditioning error: ") + e.what(), {}};
  } catch (const RefusalError& e) {
    return CommandResult{kInputError, nullptr, std::string("refused: ") + e.what(), {}};
  }
  return CommandResult{kInputError, nullptr, "usage error: no command given", {}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto result = dispatch(args);
  if (!result.help.empty()) out << result.help;
  if (!result.payload.is_null()) out << io::dump(result.payload) << '\n';
  if (!result.diagnostic.empty()) err << "hvlab: " << result.diagnostic << '\n';
  return result.exit_code;
}

}  // namespace hvlab::cli
