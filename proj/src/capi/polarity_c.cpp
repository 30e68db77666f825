#include "polarity/polarity.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "polarity/errors.hpp"
#include "polarity/runner.hpp"

struct polarity_body {
  polarity::TranslatedBody region;
};

struct polarity_weight {
  polarity::Weight weight;
};

namespace {

thread_local std::string g_last_error;

polarity_status set_error(polarity_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class Fn>
polarity_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return POLARITY_OK;
  } catch (const polarity::Error& e) {
    return set_error(static_cast<polarity_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(POLARITY_ERR_CONFIG_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(POLARITY_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(POLARITY_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(POLARITY_ERR_INTERNAL, "unknown failure");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require_ptr(const void* p, const char* what) {
  if (!p) polarity::fail(polarity::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

polarity::Vec point(const double* x, int n, int dim) {
  require_ptr(x, "point");
  if (n != dim) polarity::fail(polarity::ErrorCode::DimensionMismatch, "point dimension differs");
  return Eigen::Map<const polarity::Vec>(x, n);
}

polarity::VolumeOptions options(uint64_t samples, uint64_t seed) {
  polarity::VolumeOptions o;
  o.seed = seed;
  if (samples > 0) {
    o.method = polarity::VolumeMethod::MonteCarlo;
    o.samples = samples;
  }
  return o;
}

void fill(const polarity::Estimate& e, polarity_estimate* out) {
  out->value = e.value;
  out->abs_error = e.abs_error;
  out->exact = e.is_exact() ? 1 : 0;
  out->samples = e.samples;
  out->seed = e.seed;
}

polarity::PreparedRun prepare(const char* command, const char* config_json, int has_seed, uint64_t seed) {
  require_ptr(command, "command");
  require_ptr(config_json, "config");
  polarity::Json config;
  try {
    config = polarity::Json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    polarity::fail(polarity::ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  std::optional<std::uint64_t> override;
  if (has_seed) override = seed;
  return polarity::prepare_run(command, config, override);
}

}  // namespace

extern "C" {

const char* polarity_version(void) { return POLARITY_VERSION_STRING; }

const char* polarity_status_name(polarity_status status) {
  if (status == POLARITY_OK) return "Ok";
  if (status == POLARITY_ERR_INTERNAL) return "Internal";
  const int s = static_cast<int>(status);
  if (s >= 1 && s <= static_cast<int>(polarity::ErrorCode::ManifestMismatch))
    return polarity::error_name(static_cast<polarity::ErrorCode>(s));
  return "Unknown";
}

const char* polarity_last_error(void) { return g_last_error.c_str(); }

void polarity_string_free(char* s) { std::free(s); }

polarity_status polarity_body_from_json(const char* json, polarity_body** out) {
  return guarded([&] {
    require_ptr(json, "json");
    require_ptr(out, "out");
    *out = nullptr;
    auto j = polarity::Json::parse(json);
    *out = new polarity_body{polarity::region_from_json(j)};
  });
}

polarity_status polarity_body_to_json(const polarity_body* body, char** out) {
  return guarded([&] {
    require_ptr(body, "body");
    require_ptr(out, "out");
    *out = copy_string(polarity::to_json(body->region).dump());
  });
}

void polarity_body_free(polarity_body* body) { delete body; }

polarity_status polarity_body_dim(const polarity_body* body, int* out) {
  return guarded([&] {
    require_ptr(body, "body");
    require_ptr(out, "out");
    *out = body->region.dim();
  });
}

polarity_status polarity_body_contains(const polarity_body* body, const double* x, int n, int* out) {
  return guarded([&] {
    require_ptr(body, "body");
    require_ptr(out, "out");
    *out = polarity::contains(body->region, point(x, n, body->region.dim())) ? 1 : 0;
  });
}

polarity_status polarity_body_polar(const polarity_body* body, polarity_body** out) {
  return guarded([&] {
    require_ptr(body, "body");
    require_ptr(out, "out");
    *out = nullptr;
    *out = new polarity_body{polarity::TranslatedBody(polarity::polar(body->region))};
  });
}

polarity_status polarity_body_volume(const polarity_body* body, uint64_t samples, uint64_t seed,
                                     polarity_estimate* out) {
  return guarded([&] {
    require_ptr(body, "body");
    require_ptr(out, "out");
    fill(polarity::volume(body->region, options(samples, seed)), out);
  });
}

polarity_status polarity_mahler_volume(const polarity_body* body, uint64_t samples, uint64_t seed,
                                       polarity_estimate* out) {
  return guarded([&] {
    require_ptr(body, "body");
    require_ptr(out, "out");
    if (body->region.has_shift())
      polarity::fail(polarity::ErrorCode::NonSymmetricBody, "Mahler volume needs an origin-symmetric body");
    fill(polarity::mahler_volume(body->region.base, options(samples, seed)), out);
  });
}

polarity_status polarity_weight_from_json(const char* json, int dim, polarity_weight** out) {
  return guarded([&] {
    require_ptr(json, "json");
    require_ptr(out, "out");
    *out = nullptr;
    auto j = polarity::Json::parse(json);
    *out = new polarity_weight{polarity::weight_from_json(j, dim)};
  });
}

polarity_status polarity_weight_to_json(const polarity_weight* w, char** out) {
  return guarded([&] {
    require_ptr(w, "weight");
    require_ptr(out, "out");
    *out = copy_string(polarity::to_json(w->weight).dump());
  });
}

void polarity_weight_free(polarity_weight* w) { delete w; }

polarity_status polarity_weight_eval(const polarity_weight* w, const double* x, int n, double* out) {
  return guarded([&] {
    require_ptr(w, "weight");
    require_ptr(out, "out");
    const int dim = w->weight.dim() == 0 ? n : w->weight.dim();
    *out = w->weight(point(x, n, dim));
  });
}

polarity_status polarity_weight_integrate(const polarity_weight* w, const polarity_body* region, uint64_t samples,
                                          uint64_t seed, polarity_estimate* out) {
  return guarded([&] {
    require_ptr(w, "weight");
    require_ptr(region, "region");
    require_ptr(out, "out");
    fill(polarity::integrate(w->weight, region->region, options(samples, seed)), out);
  });
}

polarity_status polarity_conjugate(double p, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = polarity::conjugate(p);
  });
}

polarity_status polarity_epsilon_of_delta(double delta, double c, int n, double* out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = polarity::epsilon_of_delta(delta, c, n);
  });
}

polarity_status polarity_commands(char** out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = copy_string(polarity::Json(polarity::command_names()).dump());
  });
}

polarity_status polarity_tolerances(char** out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = copy_string(polarity::tolerance_table().dump());
  });
}

polarity_status polarity_validate(const char* command, const char* config_json, int has_seed_override,
                                  uint64_t seed_override) {
  return guarded([&] { prepare(command, config_json, has_seed_override, seed_override); });
}

polarity_status polarity_run(const char* command, const char* config_json, int has_seed_override,
                             uint64_t seed_override, char** result_json) {
  return guarded([&] {
    require_ptr(result_json, "result_json");
    *result_json = nullptr;
    polarity::PreparedRun run = prepare(command, config_json, has_seed_override, seed_override);
    polarity::RunOutput out = run.execute();
    *result_json = copy_string(polarity::output_to_json(run, out).dump());
  });
}

}  // extern "C"
