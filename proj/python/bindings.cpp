#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nestnorm/ball_kmedian.hpp"
#include "nestnorm/experiment.hpp"
#include "nestnorm/io.hpp"
#include "nestnorm/knapsack.hpp"
#include "nestnorm/msrdc.hpp"
#include "nestnorm/norms.hpp"
#include "nestnorm/oracle.hpp"
#include "nestnorm/reductions.hpp"

namespace py = pybind11;
using namespace nestnorm;

namespace {

std::vector<Point2> to_points(const std::vector<std::pair<double, double>>& xy) {
  std::vector<Point2> out;
  out.reserve(xy.size());
  for (const auto& [x, y] : xy) out.push_back({x, y});
  return out;
}

std::vector<std::pair<double, double>> from_points(const std::vector<Point2>& pts) {
  std::vector<std::pair<double, double>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.emplace_back(p.x, p.y);
  return out;
}

MetricInstance from_rows(std::size_t num_facilities, const std::vector<std::vector<double>>& rows) {
  const std::size_t total = rows.size();
  if (num_facilities > total) throw std::invalid_argument("more facilities than matrix rows");
  std::vector<double> flat;
  flat.reserve(total * total);
  for (const auto& row : rows) {
    if (row.size() != total) throw std::invalid_argument("distance matrix must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return MetricInstance(total - num_facilities, num_facilities, std::move(flat));
}

BallSolution to_balls(const RadiusMap& radius) {
  BallSolution s;
  for (const auto& [x, r] : radius) s.open(x, r);
  return s;
}

py::object json_to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Approximation algorithms for clustering with nested norm objectives";

  py::register_exception<InputError>(mod, "InputError");
  py::register_exception<OracleBudgetExceeded>(mod, "OracleBudgetExceeded");

  py::class_<MetricInstance>(mod, "Metric")
      .def(py::init(&from_rows), py::arg("num_facilities"), py::arg("matrix"),
           "Matrix over points then facilities; the last num_facilities rows are facilities.")
      .def_static("planar",
                  [](const std::vector<std::pair<double, double>>& points,
                     const std::vector<std::pair<double, double>>& facilities) {
                    return MetricInstance::planar(to_points(points), to_points(facilities));
                  },
                  py::arg("points"), py::arg("facilities"))
      .def_property_readonly("num_points", &MetricInstance::num_points)
      .def_property_readonly("num_facilities", &MetricInstance::num_facilities)
      .def_property_readonly("points", [](const MetricInstance& m) { return from_points(m.point_coords()); })
      .def_property_readonly("facilities", [](const MetricInstance& m) { return from_points(m.facility_coords()); })
      .def("dist", &MetricInstance::dist, py::arg("point"), py::arg("facility"))
      .def("validate",
           [](const MetricInstance& m) -> std::optional<std::string> {
             auto v = validate_metric(m);
             if (!v) return std::nullopt;
             return v->describe();
           },
           "None for a valid metric, otherwise a description of the first violation.");

  mod.def("top_ell", [](const std::vector<double>& x, std::size_t ell) { return top_ell(x, ell); },
          py::arg("x"), py::arg("ell"));
  mod.def("ordered_norm",
          [](const std::vector<double>& w, const std::vector<double>& x) { return ordered_norm_padded(w, x); },
          py::arg("w"), py::arg("x"), "w . sort_desc(x), zero-padding the shorter vector.");
  mod.def("proxy_topl",
          [](double y, const std::vector<double>& x, std::size_t ell) { return proxy_topl(y, x, ell); },
          py::arg("y"), py::arg("x"), py::arg("ell"));
  mod.def("proxy_ordered",
          [](const std::vector<double>& x, const std::vector<double>& w, const std::vector<double>& t) {
            return proxy_ordered(x, w, t);
          },
          py::arg("x"), py::arg("w"), py::arg("t"));
  mod.def("sparsify_weights",
          [](const std::vector<double>& w, double eps) { return sparsify_weights(w, eps); },
          py::arg("w"), py::arg("eps"));

  mod.def("solve_knapsack_lp",
          [](const std::vector<std::pair<double, double>>& items, double budget) {
            std::vector<KnapsackItem> its;
            for (const auto& [v, w] : items) its.push_back({v, w});
            auto r = solve_knapsack_lp(its, budget);
            return py::make_tuple(r.u, r.value, r.fractional);
          },
          py::arg("items"), py::arg("budget"),
          "items are (value, weight) pairs; returns (u, value, fractional index or None).");

  mod.def("ball_kmedian_cost",
          [](const MetricInstance& m, std::size_t k, double rho, const RadiusMap& radius) {
            return ball_kmedian_cost({&m, k, rho}, to_balls(radius));
          },
          py::arg("metric"), py::arg("k"), py::arg("rho"), py::arg("radius"));
  mod.def("solve_ball_kmedian",
          [](const MetricInstance& m, std::size_t k, double rho, double eps,
             std::optional<std::size_t> max_guess) {
            BallKMedianOptions opts;
            opts.max_guess_size = max_guess;
            auto r = solve_ball_kmedian({&m, k, rho}, eps, opts);
            py::dict d;
            d["radius"] = r.solution.radius;
            d["cost"] = r.cost;
            d["guesses_tried"] = r.guesses_tried;
            d["lambda_final"] = r.lambda_final;
            return d;
          },
          py::arg("metric"), py::arg("k"), py::arg("rho"), py::arg("eps") = 0.5,
          py::arg("max_guess") = py::none());
  mod.def("exact_ball_kmedian",
          [](const MetricInstance& m, std::size_t k, double rho) {
            auto r = exact_ball_kmedian({&m, k, rho}, OracleBudget::from_env());
            return py::make_tuple(r.solution.radius, r.cost);
          },
          py::arg("metric"), py::arg("k"), py::arg("rho"));

  mod.def("solve_msrdc",
          [](const MetricInstance& m, std::size_t k, const std::vector<double>& diffs,
             const std::vector<double>& thresholds, double eps) {
            auto r = solve_msrdc({&m, k, ThresholdCost(diffs, thresholds)}, eps);
            py::dict d;
            d["radius"] = r.solution.radius;
            d["cost"] = r.cost;
            d["scaled_cost"] = r.scaled_cost;
            return d;
          },
          py::arg("metric"), py::arg("k"), py::arg("diffs"), py::arg("thresholds"), py::arg("eps") = 0.5,
          "Radius cost h(r) = sum_i diffs[i] * max(0, r - thresholds[i]).");
  mod.def("solve_linf_ord",
          [](const MetricInstance& m, std::size_t k, const std::vector<double>& w, double eps) {
            auto r = solve_linf_ord(m, k, w, eps);
            py::dict d;
            d["radius"] = r.solution.radius;
            d["value"] = r.value;
            d["thresholds_tried"] = r.thresholds_tried;
            return d;
          },
          py::arg("metric"), py::arg("k"), py::arg("w"), py::arg("eps") = 1.0);
  mod.def("exact_cover_ord",
          [](const MetricInstance& m, std::size_t k, const std::vector<double>& w) {
            auto r = exact_cover_ord(m, k, w, OracleBudget::from_env());
            return py::make_tuple(r.solution.radius, r.cost);
          },
          py::arg("metric"), py::arg("k"), py::arg("w"));

  mod.def("nested_cost",
          [](const MetricInstance& m, std::size_t k, const std::string& inner, const std::string& outer,
             const std::vector<FacilityId>& centers, const std::vector<FacilityId>& assign) {
            return nested_cost(m, k, NormSpec::parse(inner), NormSpec::parse(outer), {centers, assign});
          },
          py::arg("metric"), py::arg("k"), py::arg("inner"), py::arg("outer"), py::arg("centers"),
          py::arg("assign"));
  mod.def("solve",
          [](const MetricInstance& m, std::size_t k, const std::string& inner, const std::string& outer,
             double eps, std::optional<std::size_t> max_guess) {
            DispatchOptions opts;
            opts.max_guess_size = max_guess;
            auto a = dispatch(m, k, NormSpec::parse(inner), NormSpec::parse(outer), eps, opts);
            return json_to_python(result_to_json(m, a, eps));
          },
          py::arg("metric"), py::arg("k"), py::arg("inner"), py::arg("outer") = "l1", py::arg("eps") = 0.5,
          py::arg("max_guess") = py::none(),
          "Routes (inner, outer) to a solver; returns the result record as a dict.");

  mod.def("load_instance",
          [](const std::filesystem::path& path) {
            auto inst = load_instance(path);
            py::dict d;
            d["metric"] = inst.metric;
            d["k"] = inst.k;
            d["inner"] = inst.inner ? py::cast(inst.inner->describe()) : py::none();
            d["outer"] = inst.outer ? py::cast(inst.outer->describe()) : py::none();
            d["labels"] = inst.labels;
            return d;
          },
          py::arg("path"));
  mod.def("generate",
          [](std::uint64_t seed, const std::vector<std::tuple<double, double, double, std::size_t>>& clusters,
             std::optional<double> grid_step) {
            GeneratorSpec spec;
            spec.seed = seed;
            for (const auto& [x, y, sd, n] : clusters) spec.clusters.push_back({{x, y}, sd, n});
            if (grid_step) {
              spec.facility_mode = GeneratorSpec::FacilityMode::Grid;
              spec.grid_step = *grid_step;
            }
            auto g = generate(spec);
            return py::make_tuple(std::move(g.metric), g.labels);
          },
          py::arg("seed"), py::arg("clusters"), py::arg("grid_step") = py::none(),
          "clusters are (x, y, stddev, count); returns (metric, labels).");
  mod.def("recovery_score",
          [](const std::vector<FacilityId>& assign, const std::vector<int>& labels) {
            return recovery_score({{}, assign}, labels);
          },
          py::arg("assign"), py::arg("labels"));
  mod.def("render_svg",
          [](const MetricInstance& m, std::optional<std::vector<FacilityId>> centers,
             std::optional<std::vector<FacilityId>> assign, std::optional<RadiusMap> radius,
             const std::string& title) {
            std::optional<AssignmentSolution> sol;
            if (centers || assign) sol = AssignmentSolution{centers.value_or(std::vector<FacilityId>{}),
                                                            assign.value_or(std::vector<FacilityId>{})};
            std::optional<BallSolution> balls;
            if (radius) balls = to_balls(*radius);
            return render_svg(m, sol ? &*sol : nullptr, balls ? &*balls : nullptr, title);
          },
          py::arg("metric"), py::arg("centers") = py::none(), py::arg("assign") = py::none(),
          py::arg("radius") = py::none(), py::arg("title") = "");
}
