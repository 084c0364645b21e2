#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "latgrow/competing.hpp"
#include "latgrow/config.hpp"
#include "latgrow/experiment.hpp"
#include "latgrow/fpp.hpp"
#include "latgrow/fpphe.hpp"
#include "latgrow/fpphe_det.hpp"
#include "latgrow/mdla.hpp"
#include "latgrow/multiscale.hpp"

namespace py = pybind11;
using namespace latgrow;

namespace {

// structured results cross the boundary as JSON text; the Python side decodes
using Json = nlohmann::json;

SeedRule seed_rule(const std::string& s) {
  if (s == "absorb") return SeedRule::absorb;
  if (s == "block") return SeedRule::block;
  throw DomainError("seed_rule must be absorb or block");
}

template <class T>
py::array_t<T> as_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<std::uint8_t> labels_of(const SiteGrid& g) {
  const Window& w = g.window();
  py::array_t<std::uint8_t> out(static_cast<py::ssize_t>(w.size()));
  auto* p = out.mutable_data();
  for (SiteIndex s = 0; s < w.size(); ++s) p[s] = static_cast<std::uint8_t>(g.label(s));
  return out;
}

py::array_t<double> times_of(const SiteGrid& g) {
  const Window& w = g.window();
  py::array_t<double> out(static_cast<py::ssize_t>(w.size()));
  auto* p = out.mutable_data();
  for (SiteIndex s = 0; s < w.size(); ++s) p[s] = g.occupied_at(s);
  return out;
}

Json proportion(const stats::Proportion& p) {
  return {{"successes", p.successes}, {"trials", p.trials}, {"estimate", p.estimate},
          {"lo", p.lo}, {"hi", p.hi}, {"sigma", p.sigma}};
}

RationalTime rational(const py::object& o) {
  if (py::isinstance<py::str>(o)) return RationalTime::parse(o.cast<std::string>());
  auto t = o.cast<std::pair<std::int64_t, std::int64_t>>();
  return {t.first, t.second};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "lattice growth simulations";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  m.def("fpp_arrivals",
        [](int dim, std::int64_t radius, double rate, double t_max, std::uint64_t seed, std::uint64_t run_id) {
          Window w(dim, radius);
          RngStream s(seed, run_id, "python-fpp");
          std::vector<SiteIndex> src{w.origin()};
          return as_array(event_driven_growth(src, rate, w, t_max, s).time);
        },
        py::arg("dim"), py::arg("radius"), py::arg("rate") = 1.0, py::arg("t_max") = kNever,
        py::arg("seed") = 1, py::arg("run_id") = 0);

  m.def("estimate_shape",
        [](double rate, int dim, std::int64_t radius, double t, std::size_t reps, std::uint64_t seed,
           std::int64_t margin, unsigned threads) {
          py::gil_scoped_release nogil;
          return estimate_shape(rate, Window(dim, radius), t, reps, seed, margin, threads).to_json().dump();
        },
        py::arg("rate"), py::arg("dim"), py::arg("radius"), py::arg("t"), py::arg("reps"), py::arg("seed"),
        py::arg("margin") = 10, py::arg("threads") = 1);

  m.def("run_fpphe",
        [](int dim, std::int64_t radius, double p, double lambda, double t_max, std::uint64_t seed,
           std::uint64_t run_id, std::int64_t margin, const std::string& rule) {
          FppheConfig c(Window(dim, radius));
          c.p = p;
          c.lambda = lambda;
          c.t_max = t_max;
          c.margin = margin;
          c.seed_rule = seed_rule(rule);
          RngStream s(seed, run_id, "python-fpphe");
          FppheRun r = run_fpphe(c, s);
          py::dict out;
          out["labels"] = labels_of(r.grid);
          out["times"] = times_of(r.grid);
          out["stop_time"] = r.stop_time;
          out["outcome"] = r.outcome.to_json().dump();
          return out;
        },
        py::arg("dim"), py::arg("radius"), py::arg("p"), py::arg("lam"), py::arg("t_max") = 1000.0,
        py::arg("seed") = 1, py::arg("run_id") = 0, py::arg("margin") = 10, py::arg("seed_rule") = "absorb");

  m.def("fpphe_sweep",
        [](const std::vector<double>& ps, const std::vector<double>& lambdas, std::size_t reps, int dim,
           std::int64_t radius, double t_max, std::uint64_t seed, std::int64_t margin, const std::string& rule,
           unsigned threads) {
          std::vector<PhaseRow> rows;
          {
            py::gil_scoped_release nogil;
            rows = sweep(ps, lambdas, reps, Window(dim, radius), t_max, seed, margin, seed_rule(rule), threads);
          }
          Json out = Json::array();
          for (const auto& r : rows) {
            out.push_back({{"p", r.p}, {"lambda", r.lambda}, {"reps", r.reps}, {"survived", r.survived},
                           {"extinct", r.extinct}, {"undecided", r.undecided},
                           {"survival", proportion(r.survival)},
                           {"mean_extinction_time", r.mean_extinction_time}, {"mean_speed", r.mean_speed}});
          }
          return out.dump();
        },
        py::arg("p_grid"), py::arg("lambda_grid"), py::arg("reps"), py::arg("dim"), py::arg("radius"),
        py::arg("t_max"), py::arg("seed"), py::arg("margin") = 10, py::arg("seed_rule") = "absorb",
        py::arg("threads") = 1);

  m.def("run_fpphe_det",
        [](int dim, std::int64_t radius, double p, const py::object& lambda, const py::object& t_max,
           std::uint64_t seed, std::uint64_t run_id, std::int64_t margin, const std::string& rule) {
          DetConfig c(Window(dim, radius));
          c.p = p;
          c.lambda = rational(lambda);
          if (!t_max.is_none()) c.t_max = rational(t_max);
          c.margin = margin;
          c.seed_rule = seed_rule(rule);
          RngStream s(seed, run_id, "python-fpphe-det");
          DetState st = run_deterministic(c, s);
          std::vector<std::uint8_t> labels(st.label.size());
          for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<std::uint8_t>(st.label[i]);
          py::dict out;
          out["labels"] = as_array(labels);
          out["ticks"] = as_array(st.tick);
          out["ticks_per_unit"] = st.ticks_per_unit;
          out["stop_tick"] = st.stop_tick;
          out["stop"] = std::string(stop_reason_name(st.stop));
          out["ties"] = st.ties;
          return out;
        },
        py::arg("dim"), py::arg("radius"), py::arg("p"), py::arg("lam"), py::arg("t_max") = py::none(),
        py::arg("seed") = 1, py::arg("run_id") = 0, py::arg("margin") = 10, py::arg("seed_rule") = "absorb");

  m.def("coexistence_scan",
        [](double p, const py::object& lambda, std::size_t reps, int dim, std::int64_t radius, std::uint64_t seed,
           std::int64_t margin, unsigned threads) {
          RationalTime q = rational(lambda);
          CoexistenceReport r;
          {
            py::gil_scoped_release nogil;
            r = coexistence_scan(p, q, reps, Window(dim, radius), seed, margin, SeedRule::absorb, threads);
          }
          return Json{{"eta1", proportion(r.eta1)}, {"eta2", proportion(r.eta2)}, {"joint", proportion(r.joint)}}
              .dump();
        },
        py::arg("p"), py::arg("lam"), py::arg("reps"), py::arg("dim"), py::arg("radius"), py::arg("seed"),
        py::arg("margin") = 10, py::arg("threads") = 1);

  m.def("run_mdla",
        [](const std::string& construction, int dim, std::int64_t radius, double mu, double t_max,
           std::uint64_t seed, std::uint64_t run_id, std::int64_t margin, std::optional<std::int64_t> target) {
          MdlaConfig c(Window(dim, radius));
          c.mu = mu;
          c.t_max = t_max;
          c.margin = margin;
          c.target_radius = target;
          RngStream s(seed, run_id, "python-mdla");
          MdlaRun r(c.window);
          {
            py::gil_scoped_release nogil;
            if (construction == "direct") {
              r = run_direct(c, s);
            } else if (construction == "holes") {
              r = run_holes(c, s);
            } else {
              throw DomainError("construction must be direct or holes");
            }
          }
          std::vector<SiteIndex> sites;
          std::vector<double> times;
          for (const auto& [site, t] : r.aggregate) {
            sites.push_back(site);
            times.push_back(t);
          }
          py::dict out;
          out["sites"] = as_array(sites);
          out["times"] = as_array(times);
          out["stop_time"] = r.stop_time;
          out["stop"] = std::string(stop_reason_name(r.stop));
          out["metrics"] = fill_metrics(r, c.checkpoints.empty() ? geometric_checkpoints(r.stop_time) : c.checkpoints)
                               .to_json()
                               .dump();
          return out;
        },
        py::arg("construction"), py::arg("dim"), py::arg("radius"), py::arg("mu"), py::arg("t_max"),
        py::arg("seed") = 1, py::arg("run_id") = 0, py::arg("margin") = 10, py::arg("target_radius") = py::none());

  m.def("compare_constructions",
        [](double mu, int dim, std::int64_t radius, std::int64_t target, std::size_t reps, std::uint64_t seed,
           unsigned threads) {
          py::gil_scoped_release nogil;
          auto r = compare_constructions(mu, Window(dim, radius), target, reps, seed, false, threads);
          return Json{{"ks_statistic", r.ks.statistic}, {"p_value", r.ks.p_value}, {"unfinished", r.unfinished},
                      {"direct_times", r.direct_times}, {"holes_times", r.holes_times}}
              .dump();
        },
        py::arg("mu"), py::arg("dim"), py::arg("radius"), py::arg("target"), py::arg("reps"), py::arg("seed"),
        py::arg("threads") = 1);

  m.def("coupling_lambda", &coupling_lambda, py::arg("dim"));

  m.def("encapsulation",
        [](double r, double alpha, double lambda, double c_hat, std::size_t reps, std::int64_t radius,
           std::uint64_t seed, unsigned threads) {
          EncapsulationParams p;
          p.r = r;
          p.alpha = alpha;
          p.lambda = lambda;
          p.c_hat = c_hat;
          py::gil_scoped_release nogil;
          return encapsulation_experiment(p, reps, Window(2, radius), seed, threads).to_json().dump();
        },
        py::arg("r"), py::arg("alpha"), py::arg("lam"), py::arg("c_hat"), py::arg("reps"), py::arg("radius"),
        py::arg("seed"), py::arg("threads") = 1);

  m.def("schedule",
        [](double epsilon, double lambda, double alpha, double c1, double c_fpp, double c_fpp_prime, double L1,
           int d, int k_max) {
          ScaleParams p;
          p.epsilon = epsilon;
          p.lambda = lambda;
          p.alpha = alpha;
          p.c1 = c1;
          p.c_fpp = c_fpp;
          p.c_fpp_prime = c_fpp_prime;
          p.L1 = L1;
          p.d = d;
          p.k_max = k_max;
          ScaleSchedule s = build_schedule(p);
          Json rows = Json::array();
          for (const auto& r : s.rows) {
            rows.push_back({{"k", r.k}, {"epsilon_k", r.epsilon_k}, {"eps_sum", r.eps_sum}, {"lambda1", r.lambda1},
                            {"lambda2", r.lambda2}, {"lambda_eff", r.lambda_eff}, {"log_L", r.log_L},
                            {"log_R", r.log_R}, {"log_R_enc", r.log_R_enc}, {"log_R_outer", r.log_R_outer},
                            {"log_T1", r.log_T1}});
          }
          return Json{{"rows", rows}, {"surrogate", s.surrogate}, {"verification", verify_schedule(s).to_json()}}
              .dump();
        },
        py::arg("epsilon") = 0.05, py::arg("lam") = 0.5, py::arg("alpha") = 4.0, py::arg("c1") = 1.0,
        py::arg("c_fpp") = 1.0, py::arg("c_fpp_prime") = 1.0, py::arg("L1") = 1e6, py::arg("d") = 2,
        py::arg("k_max") = 50);

  m.def("format_log_value", &format_log_value, py::arg("log_value"));

  m.def("config_hash",
        [](const std::map<std::string, std::string>& raw) { return validate_config(raw).hash(); },
        py::arg("config"));

  m.def("run_experiment",
        [](const std::map<std::string, std::string>& raw) {
          ExperimentConfig c = validate_config(raw);
          std::ostringstream log;
          int code;
          {
            py::gil_scoped_release nogil;
            code = run_experiment(c, log);
          }
          return py::make_tuple(code, log.str());
        },
        py::arg("config"));
}
