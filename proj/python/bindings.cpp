// Copyright 2026 The kmlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kmlp/certify.hpp"
#include "kmlp/cutplane.hpp"
#include "kmlp/instance_gen.hpp"

namespace py = pybind11;
using namespace kmlp;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointSet to_points(const Array& a) {
  if (a.ndim() != 2) throw InputError("points must be a 2-d array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  const auto m = static_cast<std::size_t>(a.shape(1));
  return PointSet(n, m, std::vector<double>(a.data(), a.data() + n * m));
}

Array from_points(const PointSet& p) {
  Array out({p.size(), p.dim()});
  std::copy(p.coords().begin(), p.coords().end(), out.mutable_data());
  return out;
}

Partition to_partition(const std::vector<int>& labels) {
  int k = 0;
  for (int v : labels) k = std::max(k, v + 1);
  return Partition(static_cast<std::size_t>(k), labels);
}

Array dense(const SymMatrix& x) {
  const auto n = x.size();
  Array out({n, n});
  const auto d = x.dense();
  std::copy(d.begin(), d.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_kmlp, m) {
  m.doc() = "LP relaxation bounds and certificates for K-means";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def(
      "generate",
      [](const std::string& model, std::size_t n, std::size_t dim, double delta,
         double r1, double radius, std::size_t n_prime, std::uint64_t seed) {
        GenSpec g;
        g.model = parse_model(model);
        g.n = n;
        g.m = dim;
        g.delta = delta;
        g.r1 = r1;
        g.radius = radius;
        g.n_prime = n_prime;
        g.seed = seed;
        const auto inst = generate(g);
        return py::make_tuple(from_points(inst.points), inst.planted.assignment());
      },
      py::arg("model"), py::arg("n") = 100, py::arg("m") = 2, py::arg("delta") = 3.0,
      py::arg("r1") = 1.0, py::arg("radius") = 0.0, py::arg("n_prime") = 1,
      py::arg("seed") = 0,
      "Returns (points, planted labels) for ssm, sbm, five-point or five-ball.");

  m.def(
      "kmeans_cost",
      [](const Array& points, const std::vector<int>& labels) {
        return kmeans_cost(to_points(points), to_partition(labels));
      },
      py::arg("points"), py::arg("labels"));

  m.def(
      "kmeans_bruteforce",
      [](const Array& points, std::size_t k) {
        const auto s = kmeans_bruteforce(to_points(points), k);
        return py::make_tuple(s.cost, s.partition.assignment());
      },
      py::arg("points"), py::arg("k"));

  m.def(
      "solve",
      [](const Array& points, std::size_t k, double eps_opt, std::size_t t_max,
         std::size_t max_rounds, std::uint64_t seed) {
        SolveConfig cfg;
        cfg.k = k;
        cfg.eps_opt = eps_opt;
        cfg.t_max = t_max;
        cfg.max_rounds = max_rounds;
        cfg.seed = seed;
        cfg.lloyd.seed = seed;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve_kmeans_lp(to_points(points), cfg);
        }
        py::dict out;
        out["status"] = std::string(status_name(r.status));
        out["f_lb"] = r.f_lb;
        out["f_ub"] = r.f_ub;
        out["r_g"] = r.r_g;
        out["tight"] = r.tight;
        out["rounds"] = r.trace.rounds.size();
        out["num_cuts"] = r.pool.size();
        out["assignments"] = r.partition.assignment();
        out["x"] = dense(r.x_lb);
        return out;
      },
      py::arg("points"), py::arg("k") = 2, py::arg("eps_opt") = 1e-4,
      py::arg("t_max") = 0, py::arg("max_rounds") = 200, py::arg("seed") = 0,
      "Cutting-plane solve; returns a dict with bounds, status and the LP matrix.");

  m.def(
      "solve_full_lp",
      [](const Array& points, std::size_t k, std::size_t t) {
        const auto r = solve_full_lp(squared_distances(to_points(points)), k, t);
        py::dict out;
        out["objective"] = r.solution.primal_objective;
        out["safe_bound"] = r.safe_bound;
        out["tight"] = r.tight;
        out["num_cuts"] = r.num_cuts;
        out["x"] = dense(r.x);
        return out;
      },
      py::arg("points"), py::arg("k") = 2, py::arg("t") = 2);

  m.def(
      "certify",
      [](const Array& points, const std::vector<int>& labels, bool lexicographic) {
        const auto d = squared_distances(to_points(points));
        const auto p = to_partition(labels);
        const auto st = certify(gamma_values(d, p), lexicographic
                                                        ? CertifyOrder::kLexicographic
                                                        : CertifyOrder::kMostNegative);
        const auto prox = proximity_check(d, p);
        py::dict out;
        out["success"] = st.success;
        out["repairs"] = st.repairs;
        out["deficit"] = st.deficit;
        out["eta"] = two_cluster_stats(d, p).eta;
        out["proximity"] = std::string(verdict_name(prox.verdict));
        return out;
      },
      py::arg("points"), py::arg("labels"), py::arg("lexicographic") = false,
      "Two-cluster certificate of the given partition.");

  m.def("recovery_threshold", &recovery_threshold, py::arg("r1"));
}
