#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polarity/conditions.hpp"
#include "polarity/geometry.hpp"
#include "polarity/weights.hpp"

namespace polarity {

enum class Parameterization { Interval, Box, Ellipsoid, SymPolygon, SymPolytope };
const char* parameterization_name(Parameterization p);
Parameterization parameterization_from_name(const std::string& name);

enum class Optimizer { Annealing, MultiStart };
const char* optimizer_name(Optimizer o);
Optimizer optimizer_from_name(const std::string& name);

struct SearchConfig {
  int dim = 1;
  Parameterization parameterization = Parameterization::Interval;
  int generators = 4;               // k for the polygon / polytope parameterizations
  double log_scale_bound = 4.0;     // log half-extents and generator coordinates stay in range
  double translation_bound = 1.0;   // tau in [-b, b]^n
  bool vary_mu = true;
  bool vary_tau = true;
  Optimizer optimizer = Optimizer::Annealing;
  int steps = 400;
  int restarts = 4;
  double step_size = 0.3;
  double step_decay = 0.995;
  double cooling = 0.995;
  int probes = 100;
  std::uint64_t seed = 0;
  IntegrateOptions integrate;
};

struct TrajectoryPoint {
  int step = 0;
  double value = 0.0;  // best value so far
};

struct SearchReport {
  std::string direction;  // "max" or "min"
  double best_value = 0.0;
  Estimate best_estimate;
  std::optional<Configuration> best_config;
  std::vector<double> best_parameters;
  std::vector<TrajectoryPoint> trajectory;
  bool lower_bound_evidence = false;
  bool upper_bound_evidence = false;
  int evaluations = 0;
  int failed_evaluations = 0;
  double initial_temperature = 0.0;
  std::vector<std::string> notes;
};

// sup of u(E+mu)^{1/q} w((E+mu)°+tau)^{1/p'} over the parameterized bodies.
SearchReport conjecture_sup_search(const WeightPair& pair, const Exponents& e, const SearchConfig& c);

// Extremes of |E||E°| over the parameterized symmetric bodies.
SearchReport mahler_search(const SearchConfig& c, bool minimize);

struct DilationPoint {
  double scale = 0.0;
  double value = 0.0;
  double u_part = 0.0;  // u(sE+s mu)^{1/q}
  double w_part = 0.0;  // w((sE+s mu)°+tau)^{1/p'}
};

std::vector<DilationPoint> dilation_ray(const WeightPair& pair, const Exponents& e, const Body& body, const Vec& mu,
                                        const Vec& tau, const std::vector<double>& scales,
                                        const IntegrateOptions& io = {});

// Conjecture functional at one configuration.
Estimate conjecture_functional(const WeightPair& pair, const Exponents& e, const Configuration& c,
                               const IntegrateOptions& io = {});

// "integrable", "not integrable" or "unknown" for membership in L^1(R^n).
std::string global_integrability(const Weight& w);

}  // namespace polarity
