#include "nestnorm/io.hpp"

#include <algorithm>
#include <fstream>

#include "nestnorm/norms.hpp"

namespace nestnorm {

using nlohmann::json;

NormSpec norm_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  NormSpec out;
  if (type == "l1") {
    out = NormSpec::l1();
  } else if (type == "linf") {
    out = NormSpec::linf();
  } else if (type == "topl") {
    const long ell = j.at("ell").get<long>();
    if (ell < 1) throw std::invalid_argument("topl needs ell >= 1");
    out = NormSpec::topl(static_cast<std::size_t>(ell));
  } else if (type == "ord") {
    out = NormSpec::ord(j.at("w").get<std::vector<double>>());
  } else if (type == "sym_max_ord") {
    out = NormSpec::sym_max_ord(j.at("ws").get<std::vector<std::vector<double>>>());
  } else {
    throw std::invalid_argument("unknown objective type '" + type + "'");
  }
  out.validate();
  return out;
}

json norm_to_json(const NormSpec& norm) {
  switch (norm.kind) {
    case NormSpec::Kind::L1: return {{"type", "l1"}};
    case NormSpec::Kind::Linf: return {{"type", "linf"}};
    case NormSpec::Kind::Topl: return {{"type", "topl"}, {"ell", norm.ell}};
    case NormSpec::Kind::Ord: return {{"type", "ord"}, {"w", norm.w}};
    case NormSpec::Kind::SymMaxOrd: return {{"type", "sym_max_ord"}, {"ws", norm.ws}};
  }
  return nullptr;
}

namespace {

std::vector<Point2> read_coords(const json& j, const char* what) {
  std::vector<Point2> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2)
      throw std::invalid_argument(std::string(what) + " entries must be [x, y] pairs");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

bool present(const json& j, const char* key) { return j.contains(key) && !j.at(key).is_null(); }

}  // namespace

ProblemInstance instance_from_json(const json& j) {
  ProblemInstance inst;
  const bool has_points = present(j, "points");
  const bool has_matrix = present(j, "matrix");
  if (has_points == has_matrix)
    throw std::invalid_argument("instance needs either \"points\" or \"matrix\", not both");
  if (has_points) {
    if (!present(j, "facilities")) throw std::invalid_argument("planar instance needs \"facilities\"");
    inst.metric = MetricInstance::planar(read_coords(j.at("points"), "points"),
                                         read_coords(j.at("facilities"), "facilities"));
  } else {
    const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
    const std::size_t total = rows.size();
    const std::size_t nf = j.at("facilities").get<std::size_t>();
    if (nf > total) throw std::invalid_argument("more facilities than matrix rows");
    std::vector<double> flat;
    flat.reserve(total * total);
    for (const auto& row : rows) {
      if (row.size() != total) throw std::invalid_argument("distance matrix must be square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    inst.metric = MetricInstance(total - nf, nf, std::move(flat));
  }
  const long k = j.at("k").get<long>();
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  inst.k = static_cast<std::size_t>(k);
  if (present(j, "objective")) {
    const auto& obj = j.at("objective");
    inst.inner = norm_from_json(obj);
    if (present(obj, "outer")) inst.outer = norm_from_json(obj.at("outer"));
  }
  if (present(j, "labels")) inst.labels = j.at("labels").get<std::vector<int>>();
  if (!inst.labels.empty() && inst.labels.size() != inst.metric.num_points())
    throw std::invalid_argument("labels must have one entry per point");
  return inst;
}

json instance_to_json(const ProblemInstance& inst) {
  json j;
  const auto& m = inst.metric;
  if (m.has_coordinates()) {
    json pts = json::array(), fac = json::array();
    for (const auto& p : m.point_coords()) pts.push_back({p.x, p.y});
    for (const auto& p : m.facility_coords()) fac.push_back({p.x, p.y});
    j["points"] = pts;
    j["facilities"] = fac;
    j["matrix"] = nullptr;
  } else {
    const std::size_t total = m.num_points() + m.num_facilities();
    json rows = json::array();
    for (std::size_t i = 0; i < total; ++i) {
      json row = json::array();
      for (std::size_t c = 0; c < total; ++c) row.push_back(m.matrix()[i * total + c]);
      rows.push_back(row);
    }
    j["points"] = nullptr;
    j["facilities"] = m.num_facilities();
    j["matrix"] = rows;
  }
  j["k"] = inst.k;
  if (inst.inner) {
    json obj = norm_to_json(*inst.inner);
    if (inst.outer) obj["outer"] = norm_to_json(*inst.outer);
    j["objective"] = obj;
  } else {
    j["objective"] = nullptr;
  }
  if (!inst.labels.empty()) j["labels"] = inst.labels;
  return j;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("cannot parse " + path.string() + ": " + e.what());
  }
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  return instance_from_json(load_json(path));
}

void save_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json result_to_json(const MetricInstance& m, const Approximation& a, double eps) {
  json j;
  j["X"] = a.solution.centers;
  json radii = json::object();
  if (a.balls) {
    for (const auto& [x, r] : a.balls->radius) radii[std::to_string(x)] = r;
  }
  j["r"] = radii;
  j["cost"] = a.cost;
  j["assignment"] = a.solution.assign;
  j["meta"] = {{"epsilon", eps},
               {"guesses_tried", a.guesses_tried},
               {"lambda_final", a.lambda_final},
               {"factor", a.factor},
               {"route", a.route},
               {"num_points", m.num_points()}};
  if (a.balls) {
    auto sorted = a.balls->radii();
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    j["radii_sorted"] = sorted;
  }
  if (a.ord_value) j["ord_value"] = *a.ord_value;
  return j;
}

BallSolution balls_from_result(const json& j) {
  BallSolution out;
  if (!present(j, "r")) return out;
  for (const auto& [key, value] : j.at("r").items())
    out.open(static_cast<FacilityId>(std::stoul(key)), value.get<double>());
  return out;
}

AssignmentSolution assignment_from_result(const json& j) {
  AssignmentSolution out;
  if (present(j, "X")) out.centers = j.at("X").get<std::vector<FacilityId>>();
  if (present(j, "assignment")) out.assign = j.at("assignment").get<std::vector<FacilityId>>();
  return out;
}

}  // namespace nestnorm
