// Copyright 2026 The rltb Authors
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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rltb/boundary_search.hpp"
#include "rltb/campaign.hpp"
#include "rltb/correlation.hpp"
#include "rltb/error.hpp"
#include "rltb/explicit_mdp.hpp"
#include "rltb/gridworld.hpp"
#include "rltb/safety_testing.hpp"
#include "rltb/serialization.hpp"
#include "rltb/trace_fuzzer.hpp"

namespace py = pybind11;

namespace {

// Plain Python objects cross the boundary as JSON text.
py::object to_python(const rltb::Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

rltb::Json from_python(const py::object& obj) {
  const std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return rltb::Json::parse(text);
}

class PyEnvironment {
 public:
  explicit PyEnvironment(std::unique_ptr<rltb::Environment> env) : env_(std::move(env)) {}

  static PyEnvironment gridworld(const py::object& config, std::uint64_t seed) {
    return PyEnvironment(rltb::gridworld_new(rltb::gridworld_config_from_json(from_python(config)), seed));
  }
  static PyEnvironment fig2(std::uint64_t seed) {
    return PyEnvironment(std::make_unique<rltb::ExplicitMdpEnvironment>(rltb::fig2_model(), seed));
  }

  std::vector<std::string> action_labels() const { return env_->action_set().labels(); }
  std::string reset() { return env_->reset().encoding(); }
  py::tuple step(std::size_t action) {
    const auto outcome = env_->step(rltb::ActionId{action});
    return py::make_tuple(outcome.state.encoding(), outcome.reward, std::string(rltb::to_string(outcome.terminal)));
  }
  std::string current_state() const { return env_->current_state().encoding(); }
  std::string current_terminal() const { return std::string(rltb::to_string(env_->current_terminal())); }
  double min_transition_probability() const { return env_->min_transition_probability(); }
  void reseed(std::uint64_t seed) { env_->reseed(seed); }

  rltb::Environment& get() { return *env_; }

 private:
  std::unique_ptr<rltb::Environment> env_;
};

rltb::SearchConfig search_config(double confidence, std::optional<std::size_t> reps,
                                 const std::vector<std::string>& action_order, std::uint64_t seed,
                                 const rltb::ActionSet& actions) {
  rltb::SearchConfig config;
  config.confidence = confidence;
  config.explicit_repetitions = reps;
  config.seed = seed;
  for (const auto& label : action_order) config.action_order.push_back(actions.at(label));
  return config;
}

}  // namespace

PYBIND11_MODULE(_rltb, m) {
  m.doc() = "Search-based testing of reinforcement learning agents";

  py::register_exception<rltb::Error>(m, "RltbError", PyExc_RuntimeError);

  m.def("repetitions", &rltb::repetitions, py::arg("confidence"), py::arg("min_probability"),
        "Samples per action so that every successor with probability >= p is seen with confidence c.");

  m.def(
      "pearson_correlation",
      [](const std::vector<double>& xs, const std::vector<double>& ys) { return rltb::pearson_correlation(xs, ys); },
      py::arg("xs"), py::arg("ys"));

  m.def(
      "fitness",
      [](double coverage, double r_pos, double r_neg, double lambda_cov, double lambda_pos, double lambda_neg) {
        return rltb::fitness(coverage, r_pos, r_neg, {lambda_cov, lambda_pos, lambda_neg});
      },
      py::arg("coverage"), py::arg("r_pos"), py::arg("r_neg"), py::arg("lambda_cov") = 2.0,
      py::arg("lambda_pos") = 1.5, py::arg("lambda_neg") = 1.0);

  py::class_<PyEnvironment>(m, "Environment")
      .def_static("gridworld", &PyEnvironment::gridworld, py::arg("config"), py::arg("seed") = 0)
      .def_static("fig2", &PyEnvironment::fig2, py::arg("seed") = 0)
      .def_property_readonly("action_labels", &PyEnvironment::action_labels)
      .def("reset", &PyEnvironment::reset)
      .def("step", &PyEnvironment::step, py::arg("action"))
      .def_property_readonly("state", &PyEnvironment::current_state)
      .def_property_readonly("terminal", &PyEnvironment::current_terminal)
      .def("min_transition_probability", &PyEnvironment::min_transition_probability)
      .def("reseed", &PyEnvironment::reseed, py::arg("seed"));

  m.def(
      "search_reference",
      [](PyEnvironment& env, double confidence, std::optional<std::size_t> repetitions,
         const std::vector<std::string>& action_order, std::uint64_t seed) {
        const auto& actions = env.get().action_set();
        const auto result = rltb::search_reference(env.get(), search_config(confidence, repetitions, action_order,
                                                                             seed, actions));
        return to_python(rltb::to_json(result, actions));
      },
      py::arg("env"), py::arg("confidence") = 0.9, py::arg("repetitions") = py::none(),
      py::arg("action_order") = std::vector<std::string>{}, py::arg("seed") = 0);

  m.def(
      "build_suite",
      [](PyEnvironment& env, const py::object& search, const std::string& spec) {
        const auto& actions = env.get().action_set();
        const auto result = rltb::search_result_from_json(from_python(search), actions);
        return to_python(rltb::to_json(rltb::build_suite(result, rltb::parse_suite_spec(spec), actions.size()), actions));
      },
      py::arg("env"), py::arg("search"), py::arg("spec") = "simple");

  m.def(
      "run_campaign",
      [](const std::string& config_path, std::optional<std::string> output_dir) {
        auto config = rltb::load_campaign_config(config_path);
        if (output_dir) config.output_dir = *output_dir;
        rltb::Json summary;
        {
          py::gil_scoped_release release;
          summary = rltb::run_campaign(config).summary;
        }
        return to_python(summary);
      },
      py::arg("config_path"), py::arg("output_dir") = py::none());
}
