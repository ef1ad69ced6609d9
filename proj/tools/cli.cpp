#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nestnorm/experiment.hpp"
#include "nestnorm/io.hpp"
#include "nestnorm/oracle.hpp"
#include "nestnorm/reductions.hpp"

namespace nestnorm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GaussianCluster parse_cluster(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 4) throw std::invalid_argument("cluster must be x,y,stddev,count: " + text);
  if (!(v[2] > 0.0)) throw std::invalid_argument("cluster stddev must be positive");
  if (!(v[3] >= 1.0)) throw std::invalid_argument("cluster count must be positive");
  return {{v[0], v[1]}, v[2], static_cast<std::size_t>(v[3])};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

void append_csv(const fs::path& path, const std::vector<std::string>& row) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw InputError("cannot write " + path.string());
  if (fresh) out << kCsvVersion << '\n' << kCsvColumns << '\n';
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
  out << '\n';
}

struct ObjectiveFlags {
  std::string objective;
  std::string outer;
};

std::pair<NormSpec, NormSpec> resolve_objective(const ProblemInstance& inst,
                                                const ObjectiveFlags& f) {
  NormSpec inner = f.objective.empty() ? inst.inner.value_or(NormSpec::l1())
                                       : NormSpec::parse(f.objective);
  NormSpec outer = f.outer.empty() ? inst.outer.value_or(NormSpec::l1()) : NormSpec::parse(f.outer);
  return {inner, outer};
}

// Exact nested optimum, or nullopt when the instance is over budget and the
// oracle is optional.
std::optional<double> oracle_cost(const ProblemInstance& inst, const NormSpec& inner,
                                  const NormSpec& outer, const std::string& mode) {
  if (mode == "off") return std::nullopt;
  try {
    const auto res = exact_assignment(
        inst.metric, inst.k,
        [&](const AssignmentSolution& s) { return nested_cost(inst.metric, inst.k, inner, outer, s); },
        OracleBudget::from_env());
    return res.cost;
  } catch (const OracleBudgetExceeded& e) {
    if (mode == "on") throw BudgetError(e.what());
    return std::nullopt;
  }
}

struct RunOptions {
  std::string instance;
  ObjectiveFlags obj;
  double eps = 0.5;
  std::string oracle = "auto";
  std::string out_json, out_svg, out_csv;
  int max_guess = -1;
};

int do_run(const RunOptions& o, std::ostream& out) {
  const auto inst = load_instance(o.instance);
  const auto [inner, outer] = resolve_objective(inst, o.obj);
  DispatchOptions dopts;
  if (o.max_guess >= 0) dopts.max_guess_size = static_cast<std::size_t>(o.max_guess);

  const auto t0 = std::chrono::steady_clock::now();
  const Approximation a = dispatch(inst.metric, inst.k, inner, outer, o.eps, dopts);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto opt = oracle_cost(inst, inner, outer, o.oracle);
  std::optional<double> ratio;
  if (opt) ratio = *opt > 0.0 ? a.cost / *opt : (a.cost > 0.0 ? 1e300 : 1.0);

  json result = result_to_json(inst.metric, a, o.eps);
  result["objective"] = {{"inner", inner.describe()}, {"outer", outer.describe()}};
  if (opt) {
    result["oracle_cost"] = *opt;
    result["ratio"] = *ratio;
  }
  if (!o.out_json.empty()) save_json(o.out_json, result);
  if (!o.out_svg.empty()) {
    const BallSolution* balls = a.balls ? &*a.balls : nullptr;
    write_text(o.out_svg, render_svg(inst.metric, &a.solution, balls,
                                     inner.describe() + " / " + outer.describe()));
  }
  if (!o.out_csv.empty()) {
    append_csv(o.out_csv, {o.instance, inner.describe(), outer.describe(), num(o.eps), num(a.cost),
                           opt ? num(*opt) : "", ratio ? num(*ratio) : "", num(a.factor), a.route,
                           num(wall)});
  }
  out << "cost " << num(a.cost) << "  factor " << num(a.factor) << "  route " << a.route << '\n';
  if (opt) out << "oracle " << num(*opt) << "  ratio " << num(*ratio) << '\n';
  return 0;
}

struct GenerateOptions {
  std::uint64_t seed = 1;
  std::vector<std::string> clusters;
  std::string facilities = "points";
  int k = 0;
  ObjectiveFlags obj;
  std::string out;
};

int do_generate(const GenerateOptions& o, std::ostream& out) {
  GeneratorSpec spec;
  spec.seed = o.seed;
  for (const auto& c : o.clusters) spec.clusters.push_back(parse_cluster(c));
  if (o.facilities.rfind("grid:", 0) == 0) {
    spec.facility_mode = GeneratorSpec::FacilityMode::Grid;
    spec.grid_step = std::stod(o.facilities.substr(5));
    if (!(spec.grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  } else if (o.facilities != "points") {
    throw std::invalid_argument("facilities must be 'points' or 'grid:<step>'");
  }
  auto gen = generate(spec);
  ProblemInstance inst;
  inst.metric = std::move(gen.metric);
  inst.labels = std::move(gen.labels);
  inst.k = o.k > 0 ? static_cast<std::size_t>(o.k) : spec.clusters.size();
  if (!o.obj.objective.empty()) inst.inner = NormSpec::parse(o.obj.objective);
  if (!o.obj.outer.empty()) inst.outer = NormSpec::parse(o.obj.outer);
  json j = instance_to_json(inst);
  j["seed"] = o.seed;
  save_json(o.out, j);
  out << "wrote " << inst.metric.num_points() << " points, " << inst.metric.num_facilities()
      << " facilities to " << o.out << '\n';
  return 0;
}

struct PlotOptions {
  std::string instance, result, out_svg, title;
};

int do_plot(const PlotOptions& o, std::ostream& out) {
  const auto inst = load_instance(o.instance);
  std::optional<AssignmentSolution> sol;
  std::optional<BallSolution> balls;
  if (!o.result.empty()) {
    const json r = load_json(o.result);
    sol = assignment_from_result(r);
    balls = balls_from_result(r);
    if (balls->empty()) balls.reset();
  }
  write_text(o.out_svg, render_svg(inst.metric, sol ? &*sol : nullptr, balls ? &*balls : nullptr,
                                   o.title));
  out << "wrote " << o.out_svg << '\n';
  return 0;
}

struct DissectOptions {
  std::string instance;
  double eps = 0.5;
  std::size_t ell = 8;
  std::string out_dir, out_json;
  int max_guess = -1;
};

int do_dissect(const DissectOptions& o, std::ostream& out) {
  const auto inst = load_instance(o.instance);
  if (inst.labels.empty()) throw std::invalid_argument("dissect needs an instance with labels");
  DispatchOptions dopts;
  if (o.max_guess >= 0) dopts.max_guess_size = static_cast<std::size_t>(o.max_guess);
  const std::vector<std::pair<std::string, NormSpec>> configs = {
      {"topl", NormSpec::topl(o.ell)}, {"kmedian", NormSpec::l1()}, {"msr", NormSpec::linf()}};
  json summary = json::object();
  for (const auto& [name, inner] : configs) {
    const auto a = dispatch(inst.metric, inst.k, inner, NormSpec::l1(), o.eps, dopts);
    const double rec = recovery_score(a.solution, inst.labels);
    summary[name] = {{"objective", inner.describe()}, {"cost", a.cost}, {"recovery", rec},
                     {"result", result_to_json(inst.metric, a, o.eps)}};
    out << std::left << std::setw(8) << name << " " << std::setw(8) << inner.describe()
        << " cost " << std::setw(12) << num(a.cost) << " recovery " << num(rec) << '\n';
    if (!o.out_dir.empty()) {
      fs::create_directories(o.out_dir);
      const BallSolution* balls = a.balls ? &*a.balls : nullptr;
      write_text(fs::path(o.out_dir) / (name + ".svg"),
                 render_svg(inst.metric, &a.solution, balls, inner.describe() + " / l1"));
    }
  }
  if (!o.out_json.empty()) save_json(o.out_json, summary);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nested norm clustering: generate instances, solve, plot", "nestnorm"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Sample a planar instance from Gaussian clusters");
  g->add_option("--seed", gen.seed, "RNG seed");
  g->add_option("--cluster", gen.clusters, "Cluster as x,y,stddev,count (repeatable)")->required();
  g->add_option("--facilities", gen.facilities, "'points' or 'grid:<step>'");
  g->add_option("--k", gen.k, "Number of centers (default: number of clusters)");
  g->add_option("--objective", gen.obj.objective, "Inner norm stored in the instance");
  g->add_option("--outer", gen.obj.outer, "Outer norm stored in the instance");
  g->add_option("-o,--out", gen.out, "Output instance JSON")->required();

  RunOptions run_opts;
  auto* r = app.add_subcommand("run", "Solve an instance and emit JSON, SVG and CSV");
  r->add_option("instance", run_opts.instance, "Instance JSON")->required();
  r->add_option("--objective", run_opts.obj.objective, "Inner norm: l1, linf, topl:L, ord:w,... or sym:w;w");
  r->add_option("--outer", run_opts.obj.outer, "Outer norm, same syntax");
  r->add_option("--epsilon", run_opts.eps, "Accuracy parameter")->check(CLI::PositiveNumber);
  r->add_option("--oracle", run_opts.oracle, "Exact optimum: auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  r->add_option("--out-json", run_opts.out_json, "Result JSON");
  r->add_option("--out-svg", run_opts.out_svg, "Scatter plot (planar instances)");
  r->add_option("--out-csv", run_opts.out_csv, "CSV file to append a row to");
  r->add_option("--max-guess", run_opts.max_guess, "Cap on the number of guessed balls");

  PlotOptions plot;
  auto* p = app.add_subcommand("plot", "Render an instance and optionally a result as SVG");
  p->add_option("instance", plot.instance, "Instance JSON")->required();
  p->add_option("--result", plot.result, "Result JSON from run");
  p->add_option("--out-svg", plot.out_svg, "Output SVG")->required();
  p->add_option("--title", plot.title, "Plot title");

  DissectOptions dis;
  auto* d = app.add_subcommand(
      "dissect", "Compare top-l, k-median-like and min-sum-of-radii-like solutions on labelled data");
  d->add_option("instance", dis.instance, "Instance JSON with labels")->required();
  d->add_option("--epsilon", dis.eps, "Accuracy parameter")->check(CLI::PositiveNumber);
  d->add_option("--ell", dis.ell, "l of the top-l norm")->check(CLI::PositiveNumber);
  d->add_option("--out-dir", dis.out_dir, "Directory for one SVG per configuration");
  d->add_option("--out-json", dis.out_json, "Summary JSON");
  d->add_option("--max-guess", dis.max_guess, "Cap on the number of guessed balls");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*g) return do_generate(gen, out);
    if (*r) return do_run(run_opts, out);
    if (*p) return do_plot(plot, out);
    if (*d) return do_dissect(dis, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace nestnorm::cli
