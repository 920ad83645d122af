#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>
#include <string>
#include <vector>

#include "opbac/errors.hpp"
#include "opbac/heuristics.hpp"
#include "opbac/instance.hpp"
#include "opbac/search.hpp"

namespace py = pybind11;
using namespace opbac;

namespace {

ShrinkStrategy shrink_from(const std::string& s) {
  if (s == "none") return ShrinkStrategy::None;
  if (s == "c1c2") return ShrinkStrategy::C1C2;
  if (s == "s1") return ShrinkStrategy::S1;
  if (s == "c1c2s3") return ShrinkStrategy::C1C2S3;
  if (s == "s1s3") return ShrinkStrategy::S1S3;
  throw py::value_error("unknown shrink strategy: " + s);
}

BranchHeur heur_from(const std::string& s) {
  if (s == "pb") return BranchHeur::PB;
  if (s == "vp") return BranchHeur::VP;
  if (s == "vp_ea4op") return BranchHeur::VP_EA4OP;
  throw py::value_error("unknown branch heuristic: " + s);
}

SolveConfig config_from(const py::kwargs& kw) {
  SolveConfig cfg;
  for (auto item : kw) {
    std::string key = py::cast<std::string>(item.first);
    py::handle v = item.second;
    if (key == "time_limit_s") cfg.time_limit_s = py::cast<double>(v);
    else if (key == "seed") cfg.seed = py::cast<unsigned>(v);
    else if (key == "shrink") cfg.sep.shrink = shrink_from(py::cast<std::string>(v));
    else if (key == "cc_strats") cfg.sep.cc_strats = py::cast<bool>(v);
    else if (key == "eph") cfg.eph = py::cast<bool>(v);
    else if (key == "egh") cfg.egh = py::cast<bool>(v);
    else if (key == "cycle_cover") cfg.cycle_cover = py::cast<bool>(v);
    else if (key == "edge_cover") cfg.edge_cover = py::cast<bool>(v);
    else if (key == "vertex_cover") cfg.vertex_cover = py::cast<bool>(v);
    else if (key == "path_cuts") cfg.path_cuts = py::cast<bool>(v);
    else if (key == "sep_subloops") cfg.sep_subloops = py::cast<int>(v);
    else if (key == "branch_heur") cfg.branch_heur = heur_from(py::cast<std::string>(v));
    else if (key == "heur_stride") cfg.heur_stride = py::cast<int>(v);
    else throw py::value_error("unknown solve option: " + key);
  }
  return cfg;
}

py::dict report_to_dict(const SolveReport& rep) {
  py::dict stats;
  py::dict cuts;
  for (const auto& [family, count] : rep.stats.cuts_by_family)
    cuts[py::str(family)] = count;
  stats["cuts"] = cuts;
  stats["cuts_added"] = rep.stats.cuts_added;
  stats["cols_added"] = rep.stats.cols_added;
  stats["nodes"] = rep.stats.nodes;
  stats["lp_solves"] = rep.stats.lp_solves;
  stats["pricing_rounds"] = rep.stats.pricing_rounds;

  std::vector<int> tour1;
  tour1.reserve(rep.tour.size());
  for (int v : rep.tour) tour1.push_back(v + 1);

  const char* status = rep.status == SolveStatus::Optimal     ? "OPTIMAL"
                       : rep.status == SolveStatus::TimeLimit ? "TIME_LIMIT"
                                                              : "INFEASIBLE";
  py::dict out;
  out["status"] = status;
  out["LB"] = rep.lb;
  out["UB"] = rep.ub;
  out["tour"] = tour1;
  out["time_s"] = rep.time_s;
  out["stats"] = stats;
  return out;
}

py::dict validate_tour(const Instance& inst, const std::vector<int>& tour1) {
  py::dict out;
  out["budget"] = inst.d0;
  auto invalid = [&](const std::string& reason) {
    out["verdict"] = "INVALID";
    out["reason"] = reason;
    return out;
  };
  if (tour1.empty()) return invalid("empty tour");
  std::set<int> seen;
  for (int v : tour1) {
    if (v < 1 || v > inst.n)
      return invalid("vertex " + std::to_string(v) + " out of range");
    if (!seen.insert(v).second)
      return invalid("vertex " + std::to_string(v) + " repeated (tour not simple)");
  }
  if (!seen.count(inst.depot + 1))
    return invalid("depot " + std::to_string(inst.depot + 1) + " missing");
  std::vector<int> seq;
  seq.reserve(tour1.size());
  for (int v : tour1) seq.push_back(v - 1);
  Tour t = make_tour(inst, std::move(seq));
  out["verdict"] = (t.length <= inst.d0) ? "FEASIBLE" : "INFEASIBLE";
  out["length"] = t.length;
  out["score"] = t.score;
  return out;
}

}  // namespace

PYBIND11_MODULE(_opbac, m) {
  m.doc() = "Branch-and-cut solver for the orienteering problem";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError",
                                           PyExc_ValueError);
  py::register_exception<BackendError>(m, "BackendError", PyExc_RuntimeError);

  py::class_<Instance>(m, "Instance")
      .def_readonly("name", &Instance::name)
      .def_readonly("n", &Instance::n)
      .def_readonly("depot", &Instance::depot)
      .def_readonly("d0", &Instance::d0)
      .def_readonly("scores", &Instance::scores)
      .def("distance", &Instance::distance, py::arg("u"), py::arg("v"))
      .def("__repr__", [](const Instance& inst) {
        return "<Instance " + inst.name + " n=" + std::to_string(inst.n) +
               " d0=" + std::to_string(inst.d0) + ">";
      });

  m.def("parse", &parse_instance, py::arg("text"),
        "Parse an OPLib/TSPLIB instance from a string.");
  m.def("load", &load_instance, py::arg("path"),
        "Load an OPLib/TSPLIB instance from a file.");
  m.def(
      "solve",
      [](const Instance& inst, const py::kwargs& kw) {
        SolveConfig cfg = config_from(kw);
        SolveReport rep;
        {
          py::gil_scoped_release release;
          rep = solve(inst, cfg);
        }
        return report_to_dict(rep);
      },
      py::arg("instance"),
      "Solve an instance to optimality; keyword options mirror the CLI "
      "(time_limit_s, seed, shrink, eph, egh, ...). Returns a report dict "
      "with a 1-based tour.");
  m.def("validate", &validate_tour, py::arg("instance"), py::arg("tour"),
        "Check a 1-based tour: verdict FEASIBLE/INFEASIBLE/INVALID with "
        "recomputed length and score.");
}
