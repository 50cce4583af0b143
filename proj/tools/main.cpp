// moduli: command-line laboratory for flat special-unitary connections on
// degenerating curves.  Subcommands: holonomy, residues, solve, dimension,
// strata, implode-check, verlinde, betas.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "json_writer.hpp"
#include "moduli/alcove.hpp"
#include "moduli/lie_core.hpp"
#include "moduli/local_model.hpp"
#include "moduli/plucker.hpp"
#include "moduli/rep_variety.hpp"
#include "moduli/trinion.hpp"

namespace {

using namespace moduli;
using jsonw::Value;
using jsonw::ValuePtr;
using njson = nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

// ---------------------------------------------------------------------------
// Serialization helpers.

ValuePtr emit_complex(cplx z) {
  auto pair = Value::array();
  pair->push(Value::make(z.real()));
  pair->push(Value::make(z.imag()));
  return pair;
}

// Row-major array of [re, im] pairs.
ValuePtr emit_matrix(const Matrix& m) {
  auto arr = Value::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr->push(emit_complex(m(i, j)));
  return arr;
}

ValuePtr emit_real_vector(const RealVector& v) {
  auto arr = Value::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr->push(Value::make(v[i]));
  return arr;
}

Matrix parse_matrix(const njson& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n * n)
    throw std::runtime_error("matrix JSON must be a row-major array of n*n [re, im] pairs");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const auto& e = j[i * n + k];
      m(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

ValuePtr emit_rep_point(const rep_variety::RepPoint& p) {
  auto obj = Value::object();
  obj->set("n", Value::make(p.n()));
  obj->set("g", Value::make(p.genus()));
  obj->set("split", Value::make(p.split));
  obj->set("t", emit_complex(p.t));
  obj->set("alpha", emit_real_vector(p.alpha.vec()));
  obj->set("b1", emit_matrix(p.b1.matrix()));
  obj->set("b2", emit_matrix(p.b2.matrix()));
  auto handles = Value::array();
  for (const auto& [c, d] : p.handles) {
    auto pair = Value::array();
    pair->push(emit_matrix(c.matrix()));
    pair->push(emit_matrix(d.matrix()));
    handles->push(pair);
  }
  obj->set("handles", handles);
  return obj;
}

rep_variety::RepPoint parse_rep_point(const njson& j) {
  const int n = j.at("n").get<int>();
  RealVector alpha(n);
  for (int i = 0; i < n; ++i) alpha[i] = j.at("alpha").at(i).get<double>();
  rep_variety::RepPoint p{
      alcove::AlcovePoint(alpha),
      lie_core::GroupElement(parse_matrix(j.at("b1"), n)),
      lie_core::GroupElement(parse_matrix(j.at("b2"), n)),
      {},
      cplx(j.at("t").at(0).get<double>(), j.at("t").at(1).get<double>()),
      j.value("split", -1)};
  for (const auto& pair : j.at("handles"))
    p.handles.emplace_back(lie_core::GroupElement(parse_matrix(pair.at(0), n)),
                           lie_core::GroupElement(parse_matrix(pair.at(1), n)));
  return p;
}

ValuePtr emit_pattern(const alcove::MultiplicityPattern& p) {
  auto obj = Value::object();
  auto idx = Value::array();
  for (int i : p.indices()) idx->push(Value::make(i));
  obj->set("I", idx);
  obj->set("k", Value::make(p.k()));
  return obj;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + tmp);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move output into place: " + path);
}

alcove::AlcovePoint parse_alpha(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  RealVector v(static_cast<int>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
  return alcove::AlcovePoint(v);
}

int worker_count() {
  if (const char* env = std::getenv("MODULI_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Config file support: a flat JSON object whose keys are long option names.
// The values are injected before the explicit flags and every scalar option
// takes its last occurrence, so command-line flags win on conflict.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  njson j = njson::parse(in);
  std::vector<std::string> tokens;
  for (auto it = j.begin(); it != j.end(); ++it) {
    tokens.push_back("--" + it.key());
    if (it.value().is_string())
      tokens.push_back(it.value().get<std::string>());
    else if (it.value().is_boolean()) {
      if (!it.value().get<bool>()) tokens.pop_back();
    } else {
      tokens.push_back(it.value().dump());
    }
  }
  return tokens;
}

void take_last_everywhere(CLI::App* app) {
  for (auto* opt : app->get_options())
    if (opt->get_expected_min() > 0 && opt->get_expected_max() == 1)
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  for (auto* sub : app->get_subcommands({})) take_last_everywhere(sub);
}

// ---------------------------------------------------------------------------
// Subcommands.  Numerical failures are carried in the report and flip the
// exit status to 2; usage problems exit with 1.

struct CommonOpts {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
};

int run_holonomy(const CommonOpts& common, int n, const std::string& alpha_csv, double t,
                 const std::string& path_kind, const std::string& gauge_name, double radius,
                 int steps) {
  auto alpha = parse_alpha(alpha_csv);
  if (alpha.n() != n) throw CLI::ValidationError("--alpha must have n entries");

  local_model::Gauge gauge = local_model::Gauge::unitary;
  if (gauge_name == "holomorphic")
    gauge = local_model::Gauge::holomorphic;
  else if (gauge_name == "blowup1")
    gauge = local_model::Gauge::blowup_patch_1;
  else if (gauge_name == "blowup2")
    gauge = local_model::Gauge::blowup_patch_2;

  const double r = radius > 0 ? radius : std::sqrt(std::abs(t) > 0 ? std::abs(t) : 0.25);
  local_model::PathOnQuadric path = [&] {
    if (path_kind == "gamma") return local_model::PathOnQuadric::gamma_loop(t, r);
    if (path_kind == "x-loop")
      return local_model::PathOnQuadric::x_axis_loop(
          r, std::abs(t) > 0 ? t / r : cplx(0.5, 0.0));
    return local_model::PathOnQuadric::y_axis_loop(
        std::abs(t) > 0 ? t / r : cplx(0.5, 0.0), r);
  }();

  local_model::ModelConnection conn(alpha, gauge);
  auto report = Value::object();
  report->set("subcommand", Value::make("holonomy"));
  report->set("n", Value::make(n));
  report->set("alpha", emit_real_vector(alpha.vec()));
  report->set("t", Value::make(t));
  report->set("path", Value::make(path_kind));
  report->set("gauge", Value::make(gauge_name));
  report->set("radius", Value::make(r));
  int exit_code = 0;
  try {
    Matrix hol = local_model::transport(conn, path, steps);
    report->set("holonomy", emit_matrix(hol));
    auto unitary = lie_core::GroupElement(lie_core::project_special_unitary(hol));
    auto [proj, conj] = lie_core::project_to_alcove(unitary);
    report->set("alcove_projection", emit_real_vector(proj.vec()));
  } catch (const PathTooCloseToSingularity& e) {
    report->set("error", Value::make(std::string(e.what())));
    exit_code = kExitNumerical;
  }
  write_output(report->dump(), common.out);
  return exit_code;
}

int run_residues(const CommonOpts& common, int n, const std::string& alpha_csv,
                 const std::string& gauge_name, double radius) {
  auto alpha = parse_alpha(alpha_csv);
  if (alpha.n() != n) throw CLI::ValidationError("--alpha must have n entries");
  auto report = Value::object();
  report->set("subcommand", Value::make("residues"));
  report->set("n", Value::make(n));
  report->set("alpha", emit_real_vector(alpha.vec()));
  report->set("gauge", Value::make(gauge_name));
  report->set("radius", Value::make(radius));
  auto list = Value::array();
  auto add = [&](const char* name, local_model::Gauge g, local_model::Divisor d) {
    local_model::ModelConnection conn(alpha, g);
    auto entry = Value::object();
    entry->set("divisor", Value::make(name));
    entry->set("matrix", emit_matrix(local_model::residue(conn, d, radius)));
    list->push(entry);
  };
  if (gauge_name == "blowup1")
    add("proper_y", local_model::Gauge::blowup_patch_1, local_model::Divisor::proper_y);
  else if (gauge_name == "blowup2")
    add("proper_x", local_model::Gauge::blowup_patch_2, local_model::Divisor::proper_x);
  else {
    add("x_axis_limit", local_model::Gauge::holomorphic, local_model::Divisor::x_axis_limit);
    add("y_axis_limit", local_model::Gauge::holomorphic, local_model::Divisor::y_axis_limit);
  }
  report->set("residues", list);
  write_output(report->dump(), common.out);
  return 0;
}

int run_solve(const CommonOpts& common, int g, int n, const std::string& alpha_csv,
              double t) {
  auto alpha = parse_alpha(alpha_csv);
  if (alpha.n() != n) throw CLI::ValidationError("--alpha must have n entries");
  auto report = Value::object();
  report->set("subcommand", Value::make("solve"));
  report->set("seed", Value::make(static_cast<long long>(common.seed)));
  int exit_code = 0;
  try {
    auto p = rep_variety::solve_relation(common.seed, g, n, alpha, cplx(t, 0.0));
    report->set("point", emit_rep_point(p));
    report->set("residual", Value::make(rep_variety::relation_residual(p)));
  } catch (const NoConvergence& e) {
    report->set("error", Value::make(std::string(e.what())));
    exit_code = kExitNumerical;
  }
  write_output(report->dump(), common.out);
  return exit_code;
}

int run_dimension(const CommonOpts& common, int g, int n, int trials, double t,
                  bool disconnected, int h) {
  struct Row {
    int trial = 0;
    std::uint64_t seed = 0;
    int dimension = -1;
    double residual = 0.0;
    std::string error;
  };
  std::vector<Row> rows(trials);
  std::atomic<int> next{0};
  const int workers = std::min(worker_count(), std::max(trials, 1));
  auto work = [&]() {
    for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) {
      Row& row = rows[i];
      row.trial = i;
      row.seed = common.seed + static_cast<std::uint64_t>(i);
      try {
        std::mt19937_64 rng(row.seed);
        auto alpha = alcove::random_alcove_point(rng, n);
        auto p = disconnected
                     ? rep_variety::build_disconnected(row.seed, h, g, n, alpha)
                     : rep_variety::solve_relation(row.seed, g, n, alpha, cplx(t, 0.0));
        row.residual = rep_variety::relation_residual(p);
        row.dimension = rep_variety::tangent_dimension(p);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  const int expected = (2 * g - 2) * (n * n - 1);
  bool any_error = false;
  for (const auto& row : rows)
    if (!row.error.empty()) any_error = true;

  if (common.format == "csv") {
    std::string csv = "trial,seed,variant,t,dimension,residual,expected,error\n";
    for (const auto& row : rows) {
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%d,%llu,%s,%.17g,%d,%.17g,%d,%s\n", row.trial,
                    static_cast<unsigned long long>(row.seed),
                    disconnected ? "disconnected" : "connected", t, row.dimension,
                    row.residual, expected, row.error.c_str());
      csv += buf;
    }
    write_output(csv, common.out);
    return any_error ? kExitNumerical : 0;
  }

  auto report = Value::object();
  report->set("subcommand", Value::make("dimension"));
  report->set("g", Value::make(g));
  report->set("n", Value::make(n));
  report->set("variant", Value::make(disconnected ? "disconnected" : "connected"));
  report->set("t", Value::make(t));
  report->set("expected", Value::make(expected));
  auto list = Value::array();
  for (const auto& row : rows) {
    auto entry = Value::object();
    entry->set("trial", Value::make(row.trial));
    entry->set("seed", Value::make(static_cast<long long>(row.seed)));
    if (row.error.empty()) {
      entry->set("dimension", Value::make(row.dimension));
      entry->set("residual", Value::make(row.residual));
    } else {
      entry->set("error", Value::make(row.error));
    }
    list->push(entry);
  }
  report->set("trials", list);
  write_output(report->dump(), common.out);
  return any_error ? kExitNumerical : 0;
}

int run_strata(const CommonOpts& common, int n) {
  auto faces = alcove::enumerate_faces(n);
  if (common.format == "csv") {
    std::string csv = "I,k\n";
    for (const auto& f : faces) {
      std::string idx;
      for (int i : f.indices()) {
        if (!idx.empty()) idx += ' ';
        idx += std::to_string(i);
      }
      csv += idx + "," + std::to_string(f.k()) + "\n";
    }
    write_output(csv, common.out);
    return 0;
  }
  auto report = Value::object();
  report->set("subcommand", Value::make("strata"));
  report->set("n", Value::make(n));
  report->set("count", Value::make(static_cast<long long>(faces.size())));
  auto list = Value::array();
  for (const auto& f : faces) {
    auto entry = emit_pattern(f);
    entry->set("reversed", emit_pattern(alcove::reversal_on_patterns(f)));
    entry->set("commutator_dim", Value::make(lie_core::commutator_subgroup_dim(f)));
    list->push(entry);
  }
  report->set("faces", list);
  write_output(report->dump(), common.out);
  return 0;
}

int run_implode_check(const CommonOpts& common, const std::vector<std::string>& inputs,
                      int budget) {
  if (inputs.size() != 2)
    throw CLI::ValidationError("implode-check needs exactly two --in files");
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return parse_rep_point(njson::parse(in));
  };
  auto p = load(inputs[0]);
  auto q = load(inputs[1]);
  auto res = rep_variety::implode_equivalent(p, q, budget);
  auto report = Value::object();
  report->set("subcommand", Value::make("implode-check"));
  report->set("equivalent", Value::make(res.equivalent));
  report->set("distance", Value::make(res.distance));
  report->set("starts_used", Value::make(res.starts_used));
  report->set("confidence", Value::make(res.confidence));
  write_output(report->dump(), common.out);
  return 0;
}

int run_verlinde(const CommonOpts& common, int genus, int level,
                 const std::string& graph_file) {
  auto report = Value::object();
  report->set("subcommand", Value::make("verlinde"));
  report->set("genus", Value::make(genus));
  report->set("level", Value::make(level));
  if (!graph_file.empty()) {
    std::ifstream in(graph_file);
    if (!in) throw std::runtime_error("cannot read " + graph_file);
    njson j = njson::parse(in);
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    trinion::TrinionGraph graph(j.at("vertices").get<int>(), edges);
    const long long count = trinion::count_lattice_points(graph, level);
    const long long closed = trinion::verlinde_closed_form(graph.genus(), level);
    report->set("count", Value::make(count));
    report->set("closed_form", Value::make(closed));
    report->set("agree", Value::make(count == closed));
    write_output(report->dump(), common.out);
    return count == closed ? 0 : kExitNumerical;
  }
  auto check = trinion::verlinde_crosscheck(genus, level);
  if (common.format == "csv") {
    std::string csv = "genus,level,count,closed_form,agree\n";
    csv += std::to_string(genus) + "," + std::to_string(level) + "," +
           std::to_string(check.count) + "," + std::to_string(check.closed_form) + "," +
           (check.agree ? "true" : "false") + "\n";
    write_output(csv, common.out);
    return check.agree ? 0 : kExitNumerical;
  }
  report->set("count", Value::make(check.count));
  report->set("closed_form", Value::make(check.closed_form));
  report->set("agree", Value::make(check.agree));
  auto per = Value::array();
  for (long long c : check.per_graph) per->push(Value::make(c));
  report->set("per_graph", per);
  write_output(report->dump(), common.out);
  return check.agree ? 0 : kExitNumerical;
}

int run_betas(const CommonOpts& common, int n, const std::string& pattern_csv, int k) {
  std::vector<int> indices;
  {
    std::stringstream ss(pattern_csv);
    std::string item;
    while (std::getline(ss, item, ',')) indices.push_back(std::stoi(item));
  }
  if (indices.empty() || indices.back() != n)
    throw CLI::ValidationError("--pattern must list I_1 < ... < I_l = n");
  auto pattern = alcove::MultiplicityPattern::from_indices(indices, k);

  std::mt19937_64 rng(common.seed);
  auto b = plucker::random_betas(rng, pattern);

  auto report = Value::object();
  report->set("subcommand", Value::make("betas"));
  report->set("n", Value::make(n));
  report->set("stratum", emit_pattern(plucker::stratum_of_betas(b)));
  auto points = Value::array();
  for (int point = 0; point < 2; ++point) {
    auto entries = Value::array();
    for (int j = 1; j <= n; ++j) {
      const auto& form = b.at(point, j);
      auto entry = Value::object();
      if (!form) {
        entry->set("zero", Value::make(true));
      } else {
        auto rows = Value::array();
        for (Eigen::Index r = 0; r < form->rows.rows(); ++r) {
          auto rowv = Value::array();
          for (Eigen::Index c = 0; c < form->rows.cols(); ++c)
            rowv->push(emit_complex(form->rows(r, c)));
          rows->push(rowv);
        }
        entry->set("basis", rows);
        entry->set("scale", emit_complex(form->scale));
      }
      entries->push(entry);
    }
    points->push(entries);
  }
  report->set("points", points);

  auto frame = plucker::compatibility_quotients(b);
  auto gammas = Value::array();
  for (int point = 0; point < 2; ++point) {
    auto list = Value::array();
    for (const auto& entry : frame.blocks[point]) {
      if (entry)
        list->push(emit_complex(entry->gamma.scale));
      else
        list->push(Value::make_null());
    }
    gammas->push(list);
  }
  report->set("gamma_scales", gammas);

  auto pairings = Value::array();
  for (const auto& v : plucker::antidiagonal_identify(b)) {
    if (v)
      pairings->push(emit_complex(*v));
    else
      pairings->push(Value::make_null());
  }
  report->set("antidiagonal_pairings", pairings);
  write_output(report->dump(), common.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for flat SU(n) connections on degenerating curves"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string config_path;

  std::vector<std::string> args(argv + 1, argv + argc);
  for (size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "output file (default stdout)");
    sub->add_option("--format", common.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", common.seed, "rng seed");
  };

  int h_n = 2, h_steps = 4096;
  double h_t = 0.25, h_radius = 0.0;
  std::string h_alpha, h_path = "gamma", h_gauge = "unitary";
  auto* holonomy = app.add_subcommand("holonomy", "parallel transport of the model connection");
  holonomy->add_option("--n", h_n)->required();
  holonomy->add_option("--alpha", h_alpha, "comma-separated weights")->required();
  holonomy->add_option("--t", h_t);
  holonomy->add_option("--path", h_path)->check(CLI::IsMember({"gamma", "x-loop", "y-loop"}));
  holonomy->add_option("--gauge", h_gauge)
      ->check(CLI::IsMember({"unitary", "holomorphic", "blowup1", "blowup2"}));
  holonomy->add_option("--radius", h_radius);
  holonomy->add_option("--steps", h_steps);
  add_common(holonomy);

  int r_n = 2;
  double r_radius = 0.3;
  std::string r_alpha, r_gauge = "blowup1";
  auto* residues = app.add_subcommand("residues", "residues along the blow-up divisors");
  residues->add_option("--n", r_n)->required();
  residues->add_option("--alpha", r_alpha)->required();
  residues->add_option("--gauge", r_gauge)
      ->check(CLI::IsMember({"blowup1", "blowup2", "holomorphic"}));
  residues->add_option("--radius", r_radius);
  add_common(residues);

  int s_g = 2, s_n = 2;
  double s_t = 0.0;
  std::string s_alpha;
  auto* solve = app.add_subcommand("solve", "solve the presentation relation");
  solve->add_option("--g", s_g)->required();
  solve->add_option("--n", s_n)->required();
  solve->add_option("--alpha", s_alpha)->required();
  solve->add_option("--t", s_t);
  add_common(solve);

  int d_g = 2, d_n = 2, d_trials = 5, d_h = 1;
  double d_t = 0.3;
  bool d_disconnected = false;
  auto* dimension = app.add_subcommand("dimension", "tangent dimension at solved points");
  dimension->add_option("--g", d_g)->required();
  dimension->add_option("--n", d_n)->required();
  dimension->add_option("--trials", d_trials);
  dimension->add_option("--t", d_t);
  dimension->add_flag("--disconnected", d_disconnected);
  dimension->add_option("--split", d_h, "handles on the first component (disconnected)");
  add_common(dimension);

  int st_n = 3;
  auto* strata = app.add_subcommand("strata", "enumerate the simplex faces");
  strata->add_option("--n", st_n)->required();
  add_common(strata);

  std::vector<std::string> ic_inputs;
  int ic_budget = 50;
  auto* implode = app.add_subcommand("implode-check", "implosion equivalence search");
  implode->add_option("--in", ic_inputs, "two point files");
  implode->add_option("--budget", ic_budget);
  add_common(implode);

  int v_genus = 2, v_level = 1;
  std::string v_graph;
  auto* verlinde = app.add_subcommand("verlinde", "lattice count vs closed form");
  verlinde->add_option("--genus", v_genus);
  verlinde->add_option("--level", v_level)->required();
  verlinde->add_option("--graph", v_graph, "graph JSON file");
  add_common(verlinde);

  int b_n = 3, b_k = 0;
  std::string b_pattern;
  auto* betas = app.add_subcommand("betas", "random framing data on a stratum");
  betas->add_option("--n", b_n)->required();
  betas->add_option("--pattern", b_pattern, "comma-separated indices I")->required();
  betas->add_option("--k", b_k)->check(CLI::IsMember({0, 1}));
  add_common(betas);

  take_last_everywhere(&app);

  try {
    if (!config_path.empty() && !args.empty()) {
      auto injected = config_tokens(config_path);
      args.insert(args.begin() + 1, injected.begin(), injected.end());
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (holonomy->parsed())
      return run_holonomy(common, h_n, h_alpha, h_t, h_path, h_gauge, h_radius, h_steps);
    if (residues->parsed()) return run_residues(common, r_n, r_alpha, r_gauge, r_radius);
    if (solve->parsed()) return run_solve(common, s_g, s_n, s_alpha, s_t);
    if (dimension->parsed())
      return run_dimension(common, d_g, d_n, d_trials, d_t, d_disconnected, d_h);
    if (strata->parsed()) return run_strata(common, st_n);
    if (implode->parsed()) return run_implode_check(common, ic_inputs, ic_budget);
    if (verlinde->parsed()) return run_verlinde(common, v_genus, v_level, v_graph);
    if (betas->parsed()) return run_betas(common, b_n, b_pattern, b_k);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
