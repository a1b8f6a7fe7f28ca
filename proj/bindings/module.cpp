// Python bindings for the learner stack and the analytic envelopes.  The
// module mirrors the C++ API one-to-one: construct a learner, alternate
// predict()/update(), and query the same diagnostics the C++ callers see.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heavytail/base_olo.hpp"
#include "heavytail/clipping.hpp"
#include "heavytail/composite.hpp"
#include "heavytail/concentration.hpp"
#include "heavytail/dimension_free.hpp"
#include "heavytail/errors.hpp"
#include "heavytail/regularizer.hpp"

namespace py = pybind11;

using namespace heavytail;

PYBIND11_MODULE(_heavytail, m) {
  m.doc() =
      "Parameter-free online learning under heavy-tailed gradient noise";

  py::register_exception<Error>(m, "HeavytailError", PyExc_RuntimeError);

  py::enum_<Domain>(m, "Domain")
      .value("FULL_LINE", Domain::kFullLine)
      .value("NONNEGATIVE_HALF_LINE", Domain::kNonnegativeHalfLine);

  py::class_<BaseLearner>(m, "BaseLearner")
      .def(py::init<double, Domain>(), py::arg("epsilon"),
           py::arg("domain") = Domain::kFullLine)
      .def("predict", &BaseLearner::predict)
      .def("update", &BaseLearner::update, py::arg("cost"))
      .def_property_readonly("wealth", &BaseLearner::wealth)
      .def_property_readonly("betting_fraction",
                             &BaseLearner::betting_fraction)
      .def_property_readonly("epsilon", &BaseLearner::epsilon);

  py::class_<PsiConstants>(m, "PsiConstants")
      .def_readonly("c1", &PsiConstants::c1)
      .def_readonly("c2", &PsiConstants::c2)
      .def_readonly("p1", &PsiConstants::p1)
      .def_readonly("p2", &PsiConstants::p2)
      .def_readonly("alpha1", &PsiConstants::alpha1)
      .def_readonly("alpha2", &PsiConstants::alpha2)
      .def_readonly("lipschitz", &PsiConstants::lipschitz);

  m.def("compute_psi_constants", &compute_psi_constants, py::arg("sigma"),
        py::arg("b"), py::arg("delta"), py::arg("epsilon"),
        py::arg("horizon"));

  m.def("clip", py::overload_cast<double, double>(&clip), py::arg("g"),
        py::arg("tau"));
  m.def("clip_vector",
        py::overload_cast<const std::vector<double>&, double>(&clip),
        py::arg("g"), py::arg("tau"));
  m.def("default_clip_threshold", &default_clip_threshold,
        py::arg("moment_power"), py::arg("sigma"), py::arg("lipschitz"),
        py::arg("horizon"));

  py::class_<ClippedMomentBounds>(m, "ClippedMomentBounds")
      .def_readonly("bias", &ClippedMomentBounds::bias)
      .def_readonly("second_moment", &ClippedMomentBounds::second_moment);
  m.def("clipped_moment_bounds", &clipped_moment_bounds,
        py::arg("moment_power"), py::arg("sigma"), py::arg("lipschitz"),
        py::arg("tau"));

  py::class_<CompositeConfig>(m, "CompositeConfig")
      .def(py::init<>())
      .def_readwrite("sigma", &CompositeConfig::sigma)
      .def_readwrite("b", &CompositeConfig::b)
      .def_readwrite("delta", &CompositeConfig::delta)
      .def_readwrite("epsilon", &CompositeConfig::epsilon)
      .def_readwrite("horizon", &CompositeConfig::horizon)
      .def_readwrite("solver_tol", &CompositeConfig::solver_tol)
      .def_readwrite("max_solver_iterations",
                     &CompositeConfig::max_solver_iterations);

  py::class_<SolveInfo>(m, "SolveInfo")
      .def_readonly("x", &SolveInfo::x)
      .def_readonly("y", &SolveInfo::y)
      .def_readonly("iterate", &SolveInfo::iterate)
      .def_readonly("residual", &SolveInfo::residual)
      .def_readonly("iterations", &SolveInfo::iterations);

  py::class_<CompositeLearner>(m, "CompositeLearner")
      .def(py::init<const CompositeConfig&>(), py::arg("config"))
      .def("predict", &CompositeLearner::predict)
      .def("update", &CompositeLearner::update, py::arg("g"))
      .def_property_readonly("lipschitz", &CompositeLearner::lipschitz)
      .def_property_readonly(
          "constants",
          [](const CompositeLearner& self) { return self.constants(); })
      .def_property_readonly(
          "last_solve",
          [](const CompositeLearner& self) { return self.last_solve(); });

  m.def("composite_regret_bound_rhs", &composite_regret_bound_rhs,
        py::arg("config"), py::arg("delta"), py::arg("u"));

  py::class_<ClippedConfig>(m, "ClippedConfig")
      .def(py::init<>())
      .def_readwrite("sigma", &ClippedConfig::sigma)
      .def_readwrite("lipschitz", &ClippedConfig::lipschitz)
      .def_readwrite("moment_power", &ClippedConfig::moment_power)
      .def_readwrite("delta", &ClippedConfig::delta)
      .def_readwrite("epsilon", &ClippedConfig::epsilon)
      .def_readwrite("horizon", &ClippedConfig::horizon)
      .def_readwrite("tau", &ClippedConfig::tau);

  py::class_<ClippedLearner>(m, "ClippedLearner")
      .def(py::init<const ClippedConfig&>(), py::arg("config"))
      .def("predict", &ClippedLearner::predict)
      .def("update", &ClippedLearner::update, py::arg("g"))
      .def_property_readonly("tau", &ClippedLearner::tau)
      .def_property_readonly("last_update_clipped",
                             &ClippedLearner::last_update_clipped);

  py::class_<DirectionLearner>(m, "DirectionLearner")
      .def(py::init<std::int64_t, double, double>(), py::arg("dimension"),
           py::arg("tau"), py::arg("eta"))
      .def("predict", &DirectionLearner::predict)
      .def("update", &DirectionLearner::update, py::arg("g"))
      .def_property_readonly("tau", &DirectionLearner::tau)
      .def_property_readonly("eta", &DirectionLearner::eta);

  py::class_<ReductionConfig>(m, "ReductionConfig")
      .def(py::init<>())
      .def_readwrite("sigma", &ReductionConfig::sigma)
      .def_readwrite("lipschitz", &ReductionConfig::lipschitz)
      .def_readwrite("moment_power", &ReductionConfig::moment_power)
      .def_readwrite("delta", &ReductionConfig::delta)
      .def_readwrite("epsilon", &ReductionConfig::epsilon)
      .def_readwrite("horizon", &ReductionConfig::horizon)
      .def_readwrite("dimension", &ReductionConfig::dimension);

  py::class_<DimensionFreeLearner>(m, "DimensionFreeLearner")
      .def(py::init<const ReductionConfig&>(), py::arg("config"))
      .def("predict", &DimensionFreeLearner::predict)
      .def("update", &DimensionFreeLearner::update, py::arg("g"))
      .def_property_readonly("last_magnitude",
                             &DimensionFreeLearner::last_magnitude)
      .def_property_readonly(
          "last_direction",
          [](const DimensionFreeLearner& self) {
            return self.last_direction();
          });

  py::class_<EnvelopeInputs>(m, "EnvelopeInputs")
      .def(py::init<>())
      .def_readwrite("sigma", &EnvelopeInputs::sigma)
      .def_readwrite("b_running_max", &EnvelopeInputs::b_running_max)
      .def_readwrite("nu", &EnvelopeInputs::nu)
      .def_readwrite("delta", &EnvelopeInputs::delta);

  m.def("scalar_envelope", &scalar_envelope, py::arg("inputs"), py::arg("t"));
  m.def("vector_envelope", &vector_envelope, py::arg("inputs"), py::arg("t"));
  m.def("sum_squares_envelope", &sum_squares_envelope, py::arg("inputs"),
        py::arg("t"));

  py::class_<FixedParamBounds>(m, "FixedParamBounds")
      .def_readonly("sum_bound", &FixedParamBounds::sum_bound)
      .def_readonly("squares_bound", &FixedParamBounds::squares_bound);
  m.def("fixed_param_bounds", &fixed_param_bounds, py::arg("sigma"),
        py::arg("b"), py::arg("T"), py::arg("delta"));
}
