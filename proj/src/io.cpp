#include "hvlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hvlab/errors.hpp"

namespace hvlab::io {

namespace {

void write_number(double x, std::string& out) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

void write(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(e, indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      write_number(j.get<double>(), out);
      return;
    default:
      out += j.dump();
  }
}

[[noreturn]] void schema_error(const std::string& what) { throw InputError("schema: " + what); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<double> real_list(const Json& j, const char* what) {
  if (!j.is_array()) schema_error(std::string(what) + " must be an array of reals");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) schema_error(std::string(what) + " must be an array of reals");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<double> weights_or_uniform(const Json& j, const char* key, std::size_t n) {
  if (!j.contains(key)) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  auto w = real_list(j.at(key), key);
  if (w.size() != n) schema_error(std::string(key) + " must have one weight per value");
  return w;
}

std::string label_of(const Json& e) {
  if (e.is_string()) return e.get<std::string>();
  if (e.is_number_integer()) return std::to_string(e.get<long long>());
  if (e.is_number()) {
    std::string s;
    write_number(e.get<double>(), s);
    return s;
  }
  schema_error("hidden values must be strings or numbers");
}

quantum::Frame frame_of(const Json& e) {
  auto v = real_list(e, "frame");
  if (v.size() != 9) schema_error("a frame is nine reals, one ray per row");
  std::array<double, 9> rows{};
  std::copy(v.begin(), v.end(), rows.begin());
  return quantum::Frame::from_rows(rows);
}

std::vector<models::Setting> parse_settings(const Json& j, const char* key, models::Variant variant) {
  const Json& list = require(j, key);
  if (!list.is_array() || list.empty()) schema_error(std::string(key) + " must be a nonempty array");
  std::vector<models::Setting> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto label = std::to_string(i);
    if (variant == models::Variant::photon) {
      if (!list[i].is_number()) schema_error(std::string(key) + ": photon settings are angles in radians");
      out.push_back(models::Setting::of_angle(label, list[i].get<double>()));
    } else {
      out.push_back(models::Setting::of_frame(label, frame_of(list[i])));
    }
  }
  return out;
}

Json settings_json(const std::vector<models::Setting>& s) {
  Json out = Json::array();
  for (const auto& x : s) {
    if (x.angle) out.push_back(x.angle->value());
    else if (x.frame) {
      Json rows = Json::array();
      for (double v : x.frame->rows()) rows.push_back(v);
      out.push_back(rows);
    } else out.push_back(x.label);
  }
  return out;
}

models::Variant parse_variant(const Json& j) {
  const Json& v = require(j, "variant");
  if (v == "photon") return models::Variant::photon;
  if (v == "spin1") return models::Variant::spin1;
  schema_error("variant must be \"photon\" or \"spin1\"");
}

std::size_t parse_index(const std::string& key, std::size_t bound, const char* what) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || key.empty() || v >= bound) {
    schema_error(std::string(what) + ": index '" + key + "' out of range");
  }
  return v;
}

// Reads {setting-index: {z-index: entry}} (or nested arrays) into a dense grid,
// requiring every cell.
template <class T, class Read>
std::vector<std::vector<T>> parse_grid(const Json& j, const char* key, std::size_t rows, std::size_t cols,
                                       Read read) {
  const Json& m = require(j, key);
  std::vector<std::vector<std::optional<T>>> grid(rows, std::vector<std::optional<T>>(cols));
  auto fill_row = [&](std::size_t r, const Json& row) {
    if (row.is_object()) {
      for (auto it = row.begin(); it != row.end(); ++it) grid[r][parse_index(it.key(), cols, key)] = read(it.value());
    } else if (row.is_array()) {
      if (row.size() != cols) schema_error(std::string(key) + ": one entry per hidden value required");
      for (std::size_t c = 0; c < cols; ++c) grid[r][c] = read(row[c]);
    } else {
      schema_error(std::string(key) + ": rows must be objects or arrays");
    }
  };
  if (m.is_object()) {
    for (auto it = m.begin(); it != m.end(); ++it) fill_row(parse_index(it.key(), rows, key), it.value());
  } else if (m.is_array()) {
    if (m.size() != rows) schema_error(std::string(key) + ": one row per setting required");
    for (std::size_t r = 0; r < rows; ++r) fill_row(r, m[r]);
  } else {
    schema_error(std::string(key) + " must be an object or array");
  }
  std::vector<std::vector<T>> out(rows);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (!grid[r][c]) schema_error(std::string(key) + ": missing entry for setting " + std::to_string(r) +
                                    ", hidden value " + std::to_string(c));
      out[r].push_back(*grid[r][c]);
    }
  return out;
}

template <class F>
auto with_schema_errors(F f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InputError(std::string("schema: ") + e.what());
  }
}

void read_hidden_values(const Json& j, std::vector<std::string>& z, std::vector<double>& p_z) {
  const Json& zs = require(j, "z");
  if (!zs.is_array() || zs.empty()) schema_error("z must be a nonempty array");
  for (const auto& e : zs) z.push_back(label_of(e));
  p_z = weights_or_uniform(j, "p_z", z.size());
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

models::FactorizedModel parse_model(const Json& j) {
  return with_schema_errors([&] {
    models::FactorizedModel m;
    m.variant = parse_variant(j);
    m.settings_a = parse_settings(j, "settings_a", m.variant);
    m.settings_b = parse_settings(j, "settings_b", m.variant);
    m.p_a = weights_or_uniform(j, "p_a", m.settings_a.size());
    m.p_b = weights_or_uniform(j, "p_b", m.settings_b.size());
    read_hidden_values(j, m.z, m.p_z);
    const auto labels = models::outcome_labels(m.variant);
    auto outcome = [&](const Json& e) -> std::size_t {
      for (std::size_t k = 0; k < labels.size(); ++k) {
        if ((e.is_string() && e.get<std::string>() == labels[k]) ||
            (m.variant == models::Variant::photon && e.is_number_integer() && e.get<long long>() == static_cast<long long>(k))) {
          return k;
        }
      }
      schema_error(m.variant == models::Variant::photon ? "photon outcomes are 0 or 1"
                                                        : "spin-one outcomes are \"z1\", \"z2\" or \"z3\"");
    };
    m.response_f = parse_grid<std::size_t>(j, "response_f", m.settings_a.size(), m.z.size(), outcome);
    m.response_g = parse_grid<std::size_t>(j, "response_g", m.settings_b.size(), m.z.size(), outcome);
    m.validate();
    return m;
  });
}

Json to_json(const models::FactorizedModel& m) {
  Json j;
  j["variant"] = models::variant_name(m.variant);
  j["settings_a"] = settings_json(m.settings_a);
  j["settings_b"] = settings_json(m.settings_b);
  j["p_a"] = m.p_a;
  j["p_b"] = m.p_b;
  j["z"] = m.z;
  j["p_z"] = m.p_z;
  const auto labels = models::outcome_labels(m.variant);
  auto grid = [&](const std::vector<std::vector<std::size_t>>& resp) {
    Json out = Json::object();
    for (std::size_t s = 0; s < resp.size(); ++s) {
      Json row = Json::object();
      for (std::size_t z = 0; z < resp[s].size(); ++z) {
        if (m.variant == models::Variant::photon) row[std::to_string(z)] = resp[s][z];
        else row[std::to_string(z)] = labels[resp[s][z]];
      }
      out[std::to_string(s)] = row;
    }
    return out;
  };
  j["response_f"] = grid(m.response_f);
  j["response_g"] = grid(m.response_g);
  return j;
}

models::StochasticKernelModel parse_stochastic_model(const Json& j) {
  return with_schema_errors([&] {
    if (j.contains("variant") && parse_variant(j) != models::Variant::photon) {
      schema_error("stochastic models are supported for the photon variant only");
    }
    models::StochasticKernelModel m;
    m.settings_a = parse_settings(j, "settings_a", models::Variant::photon);
    m.settings_b = parse_settings(j, "settings_b", models::Variant::photon);
    m.p_a = weights_or_uniform(j, "p_a", m.settings_a.size());
    m.p_b = weights_or_uniform(j, "p_b", m.settings_b.size());
    read_hidden_values(j, m.z, m.p_z);
    auto dist = [](const Json& e) -> std::array<double, 2> {
      if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return {e[0].get<double>(), e[1].get<double>()};
      }
      if (e.is_object() && e.size() == 2 && e.contains("0") && e.contains("1")) {
        return {e.at("0").get<double>(), e.at("1").get<double>()};
      }
      schema_error("kernel entries are outcome distributions {\"0\": p0, \"1\": p1} or [p0, p1]");
    };
    m.kernel_f = parse_grid<std::array<double, 2>>(j, "kernel_f", m.settings_a.size(), m.z.size(), dist);
    m.kernel_g = parse_grid<std::array<double, 2>>(j, "kernel_g", m.settings_b.size(), m.z.size(), dist);
    m.validate();
    return m;
  });
}

Json to_json(const models::StochasticKernelModel& m) {
  Json j;
  j["variant"] = "photon";
  j["settings_a"] = settings_json(m.settings_a);
  j["settings_b"] = settings_json(m.settings_b);
  j["p_a"] = m.p_a;
  j["p_b"] = m.p_b;
  j["z"] = m.z;
  j["p_z"] = m.p_z;
  auto grid = [](const std::vector<std::vector<std::array<double, 2>>>& k) {
    Json out = Json::object();
    for (std::size_t s = 0; s < k.size(); ++s) {
      Json row = Json::object();
      for (std::size_t z = 0; z < k[s].size(); ++z) row[std::to_string(z)] = Json{{"0", k[s][z][0]}, {"1", k[s][z][1]}};
      out[std::to_string(s)] = row;
    }
    return out;
  };
  j["kernel_f"] = grid(m.kernel_f);
  j["kernel_g"] = grid(m.kernel_g);
  return j;
}

models::ConditionalTable parse_table(const Json& j) {
  return with_schema_errors([&] {
    auto settings = [&](const char* key) {
      const Json& list = require(j, key);
      if (!list.is_array() || list.empty()) schema_error(std::string(key) + " must be a nonempty array");
      std::vector<models::Setting> out;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto label = std::to_string(i);
        if (list[i].is_number()) out.push_back(models::Setting::of_angle(label, list[i].get<double>()));
        else if (list[i].is_array()) out.push_back(models::Setting::of_frame(label, frame_of(list[i])));
        else out.push_back(models::Setting{label, std::nullopt, std::nullopt});
      }
      return out;
    };
    auto sa = settings("settings_a");
    auto sb = settings("settings_b");
    std::vector<std::string> outcomes = models::outcome_labels(models::Variant::photon);
    if (j.contains("outcomes")) {
      outcomes.clear();
      for (const auto& e : j.at("outcomes")) outcomes.push_back(label_of(e));
      if (outcomes.empty()) schema_error("outcomes must be nonempty");
    }
    auto t = models::make_table(std::move(sa), std::move(sb), outcomes, outcomes);
    const Json& cells = require(j, "cells");
    auto shape_error = [] { schema_error("cells must be nested [a][b][f][g] matching settings and outcomes"); };
    if (!cells.is_array() || cells.size() != t.na()) shape_error();
    for (std::size_t a = 0; a < t.na(); ++a) {
      if (!cells[a].is_array() || cells[a].size() != t.nb()) shape_error();
      for (std::size_t b = 0; b < t.nb(); ++b) {
        if (!cells[a][b].is_array() || cells[a][b].size() != t.nf()) shape_error();
        for (std::size_t f = 0; f < t.nf(); ++f) {
          const Json& row = cells[a][b][f];
          if (!row.is_array() || row.size() != t.ng()) shape_error();
          for (std::size_t g = 0; g < t.ng(); ++g) {
            if (!row[g].is_number()) shape_error();
            t.at(a, b, f, g) = row[g].get<double>();
          }
        }
      }
    }
    if (j.contains("present")) {
      const Json& p = j.at("present");
      for (std::size_t a = 0; a < t.na(); ++a)
        for (std::size_t b = 0; b < t.nb(); ++b) t.present[a * t.nb() + b] = p.at(a).at(b).get<bool>();
    }
    t.validate(inequalities::kFeasibilityTol);
    return t;
  });
}

Json to_json(const models::ConditionalTable& t) {
  Json j;
  j["settings_a"] = settings_json(t.settings_a);
  j["settings_b"] = settings_json(t.settings_b);
  j["outcomes"] = t.outcomes_f;
  Json cells = Json::array();
  Json present = Json::array();
  bool all_present = true;
  for (std::size_t a = 0; a < t.na(); ++a) {
    Json row_a = Json::array();
    Json pres_a = Json::array();
    for (std::size_t b = 0; b < t.nb(); ++b) {
      Json block = Json::array();
      for (std::size_t f = 0; f < t.nf(); ++f) {
        Json row = Json::array();
        for (std::size_t g = 0; g < t.ng(); ++g) row.push_back(t.at(a, b, f, g));
        block.push_back(row);
      }
      row_a.push_back(block);
      pres_a.push_back(static_cast<bool>(t.is_present(a, b)));
      all_present = all_present && t.is_present(a, b);
    }
    cells.push_back(row_a);
    present.push_back(pres_a);
  }
  j["cells"] = cells;
  if (!all_present || !t.counts.empty()) j["present"] = present;
  if (!t.counts.empty()) {
    Json counts = Json::array();
    for (std::size_t a = 0; a < t.na(); ++a) {
      Json row = Json::array();
      for (std::size_t b = 0; b < t.nb(); ++b) row.push_back(t.counts[a * t.nb() + b]);
      counts.push_back(row);
    }
    j["counts"] = counts;
  }
  return j;
}

quantum::Frame parse_frame(const std::string& text) {
  std::string s = text;
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::array<double, 9> rows{};
  for (double& x : rows) {
    if (!(in >> x)) throw InputError("a frame is nine reals, one ray per row");
  }
  std::string extra;
  if (in >> extra) throw InputError("a frame is nine reals, one ray per row");
  return quantum::Frame::from_rows(rows);
}

Json to_json(const quantum::PairStats& s) {
  return Json{{"p11", s.p11}, {"p10", s.p10}, {"p01", s.p01}, {"p00", s.p00}, {"mismatch", s.mismatch()}};
}

Json to_json(const quantum::SpinJointTable& t) {
  Json cells = Json::array();
  for (const auto& row : t.cells) cells.push_back(Json(row));
  return cells;
}

Json to_json(const inequalities::BooleReport& r) {
  return Json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}, {"holds", r.holds}};
}

Json to_json(const inequalities::PolytopeResult& r) {
  Json j{{"feasible", r.feasible}, {"residual", r.residual}};
  if (r.feasible) {
    Json w = Json::array();
    for (std::size_t k = 0; k < r.weights.size(); ++k) {
      if (r.weights[k] <= 0.0) continue;
      const auto& s = inequalities::strategies()[k];
      w.push_back(Json{{"strategy", k},
                       {"alice", {s.alice[0], s.alice[1]}},
                       {"bob", {s.bob[0], s.bob[1]}},
                       {"weight", r.weights[k]}});
    }
    j["weights"] = w;
  } else {
    j["weights"] = nullptr;
  }
  return j;
}

Json to_json(const ks::SearchReport& r) {
  Json j{{"colorable", r.colorable}};
  j["witness"] = r.witness ? Json(*r.witness) : Json(nullptr);
  j["nodes"] = r.nodes_explored;
  j["exhausted"] = r.exhausted;
  if (r.count) j["count"] = *r.count;
  return j;
}

Json to_json(const models::PerfectCorrelationReport& r) {
  Json j{{"holds", r.holds}, {"shared_rays_checked", r.shared_rays_checked}};
  Json skipped = Json::array();
  for (const auto& [a, b] : r.skipped) skipped.push_back({a, b});
  j["skipped_pairs"] = skipped;
  if (r.witness) {
    j["witness"] = Json{{"z", r.witness->z}, {"frame_a", r.witness->frame_a}, {"frame_b", r.witness->frame_b},
                        {"i", r.witness->i}, {"j", r.witness->j}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const ks::ObstructionReport& r) {
  Json j{{"model_exists", r.model_exists}, {"reason", r.reason}};
  if (r.correlation) {
    j["perfect_correlation"] = to_json(*r.correlation);
    if (r.failing_z) j["failing_z"] = *r.failing_z;
    Json derived = Json::array();
    for (const auto& c : r.derived) derived.push_back(c);
    j["derived_colorings"] = derived;
  } else {
    j["search"] = to_json(r.search);
  }
  return j;
}

Json to_json(const models::FreedomReport& r) {
  Json j{{"probabilistic", r.probabilistic}, {"residual", r.residual}, {"surjective", r.surjective}};
  j["missing_triple"] = r.missing_triple ? Json(*r.missing_triple) : Json(nullptr);
  j["pairwise"] = Json{{"ab", r.pair_ab}, {"az", r.pair_az}, {"bz", r.pair_bz},
                       {"residual_ab", r.residual_ab}, {"residual_az", r.residual_az},
                       {"residual_bz", r.residual_bz}};
  return j;
}

Json to_json(const models::PIReport& r) {
  Json j{{"holds", r.holds}};
  if (r.witness) {
    j["witness"] = Json{{"variable", std::string(1, r.witness->variable)}, {"setting", r.witness->setting},
                        {"z", r.witness->z}, {"atoms", {r.witness->atom_1, r.witness->atom_2}}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const models::BellLocalityReport& r) {
  return Json{{"bell_local", r.bell_local}, {"locality_residual", r.locality_residual},
              {"freedom", r.freedom}, {"freedom_residual", r.freedom_residual}};
}

}  // namespace hvlab::io
