#pragma once

#include <json.hpp>

#include "polarity/conditions.hpp"
#include "polarity/fourier.hpp"
#include "polarity/geometry.hpp"
#include "polarity/search.hpp"
#include "polarity/weights.hpp"

namespace polarity {

using Json = nlohmann::json;

// Parsing failures raise ConfigInvalid with the offending field in the message.
Json to_json(const Vec& v);
Json to_json(const Mat& m);  // flat, row-major
Vec vec_from_json(const Json& j, const char* field, int expected = -1);
Mat mat_from_json(const Json& j, const char* field, int cols);

Json to_json(const Body& b);
Json to_json(const TranslatedBody& r);  // body fields plus "shift" when nonzero
Body body_from_json(const Json& j);
TranslatedBody region_from_json(const Json& j);

Json to_json(const Estimate& e);
Json to_json(const Weight& w);
// default_dim is used for power weights that omit "dim".
Weight weight_from_json(const Json& j, int default_dim);

Json to_json(const SimpleFunction& f);
SimpleFunction simple_function_from_json(const Json& j);

Exponents exponents_from_json(const Json& j);
// {"dim", "u", and one of "v" / "w"}
WeightPair pair_from_json(const Json& j, const Exponents& e);

IntegrateOptions integrate_from_json(const Json& j, std::uint64_t seed);
VerdictThresholds thresholds_from_json(const Json& j);
ConditionSampling condition_sampling_from_json(const Json& j, std::uint64_t seed);
ComparabilitySampling comparability_sampling_from_json(const Json& j, int dim, std::uint64_t seed);
AutoGridOptions grid_options_from_json(const Json& j);
SearchConfig search_config_from_json(const Json& j, std::uint64_t seed);

Json to_json(const Configuration& c);
Json to_json(const TrendFit& f);
Json to_json(const TrendAssessment& a);
Json to_json(const ConditionReport& r);
Json to_json(const ComparabilityReport& r);
Json to_json(const ReverseHolderReport& r);
Json to_json(const RegionSpec& r);
Json to_json(const SufficiencyReport& r);
Json to_json(const GridSpec& g);
Json to_json(const GridFunction& g);
Json to_json(const LowerBoundReport& r);
Json to_json(const LevelSetReport& r);
Json to_json(const StrongTypeReport& r);
Json to_json(const HausdorffYoungReport& r);
Json to_json(const SearchReport& r);
Json to_json(const JohnResult& r);

}  // namespace polarity
