#include "lipspace.h"

#include <cstring>
#include <string>
#include <vector>

#include "json.hpp"
#include "lipspace/convex.hpp"
#include "lipspace/embeddings.hpp"
#include "lipspace/errors.hpp"
#include "lipspace/fragmentation.hpp"
#include "lipspace/metric.hpp"
#include "lipspace/run.hpp"

namespace {

thread_local std::string g_last_error;

lipspace_status status_of(lipspace::ErrorCode code) {
  return static_cast<lipspace_status>(static_cast<int>(code));
}

template <typename Fn>
lipspace_status guarded(Fn&& fn) {
  try {
    fn();
    return LIPSPACE_OK;
  } catch (const lipspace::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LIPSPACE_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct lipspace_model {
  lipspace::ModelPtr ptr;
};

struct lipspace_norm {
  lipspace::PolyhedralNorm norm;
};

extern "C" {

const char* lipspace_last_error(void) { return g_last_error.c_str(); }

void lipspace_string_free(char* s) { delete[] s; }

lipspace_status lipspace_model_create(const char* spec, lipspace_model** out) {
  return guarded([&] {
    if (!spec || !out)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    *out = new lipspace_model{lipspace::make_model(spec)};
  });
}

lipspace_status lipspace_model_from_json(const char* json_text,
                                         lipspace_model** out) {
  return guarded([&] {
    if (!json_text || !out)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    *out = new lipspace_model{lipspace::model_from_json(json_text)};
  });
}

lipspace_status lipspace_model_to_json(const lipspace_model* model, char** out) {
  return guarded([&] {
    if (!model || !out)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    *out = dup_string(lipspace::model_to_json(*model->ptr));
  });
}

size_t lipspace_model_size(const lipspace_model* model) {
  return model ? model->ptr->size() : 0;
}

double lipspace_model_delta(const lipspace_model* model) {
  return model ? model->ptr->delta() : 0.0;
}

double lipspace_model_fine_dist(const lipspace_model* model, size_t i, size_t j) {
  if (!model || i >= model->ptr->size() || j >= model->ptr->size()) return -1.0;
  return model->ptr->d()(i, j);
}

double lipspace_model_coarse_dist(const lipspace_model* model, size_t i,
                                  size_t j) {
  if (!model || i >= model->ptr->size() || j >= model->ptr->size()) return -1.0;
  return model->ptr->rho()(i, j);
}

void lipspace_model_free(lipspace_model* model) { delete model; }

lipspace_status lipspace_lip_constant(const lipspace_model* model,
                                      const double* values, size_t n, int coarse,
                                      double* out) {
  return guarded([&] {
    if (!model || !values || !out)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    lipspace::ScalarField f(model->ptr, std::vector<double>(values, values + n));
    *out = lipspace::lip_constant(f, coarse ? lipspace::MetricChoice::Coarse
                                            : lipspace::MetricChoice::Fine);
  });
}

lipspace_status lipspace_mcshane_extend(const lipspace_model* model,
                                        const size_t* subset,
                                        const double* values, size_t m, double L,
                                        double lo, double hi,
                                        double* out_values) {
  return guarded([&] {
    if (!model || !subset || !values || !out_values)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    lipspace::ScalarField ext = lipspace::mcshane_extend(
        model->ptr, std::vector<std::size_t>(subset, subset + m),
        std::vector<double>(values, values + m), L, lo, hi);
    std::memcpy(out_values, ext.values().data(),
                ext.size() * sizeof(double));
  });
}

lipspace_status lipspace_closed_ball(const lipspace_model* model,
                                     const size_t* points, size_t m, double r,
                                     size_t* out_indices, size_t capacity,
                                     size_t* out_count) {
  return guarded([&] {
    if (!model || !points || !out_count)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    auto members = lipspace::closed_ball(
        *model->ptr, std::vector<std::size_t>(points, points + m), r);
    *out_count = members.size();
    if (out_indices)
      for (size_t i = 0; i < members.size() && i < capacity; ++i)
        out_indices[i] = members[i];
  });
}

lipspace_status lipspace_szlenk_index(const lipspace_model* model, double eps,
                                      double delta, int* out_finite,
                                      int* out_index) {
  return guarded([&] {
    if (!model || !out_finite || !out_index)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    auto trace = lipspace::szlenk_index(model->ptr, eps, delta);
    *out_finite = trace.finite ? 1 : 0;
    *out_index =
        trace.finite ? trace.finite_index() : (int)trace.fixpoint().size();
  });
}

lipspace_status lipspace_norm_preset(const char* name, lipspace_norm** out) {
  return guarded([&] {
    if (!name || !out)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    *out = new lipspace_norm{lipspace::PolyhedralNorm::preset(name)};
  });
}

lipspace_status lipspace_norm_eval(const lipspace_norm* norm, const double* x,
                                   size_t n, double* out) {
  return guarded([&] {
    if (!norm || !x || !out)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    *out = lipspace::norm_eval(norm->norm, lipspace::Vec(x, x + n));
  });
}

lipspace_status lipspace_norm_face_count(const lipspace_norm* norm, int* out) {
  return guarded([&] {
    if (!norm || !out)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    *out = lipspace::face_count(norm->norm);
  });
}

void lipspace_norm_free(lipspace_norm* norm) { delete norm; }

lipspace_status lipspace_mazur_map(const double* x, size_t n, double q1,
                                   double q2, double* out) {
  return guarded([&] {
    if (!x || !out)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    lipspace::Vec y = lipspace::mazur_map(lipspace::Vec(x, x + n), q1, q2);
    std::memcpy(out, y.data(), y.size() * sizeof(double));
  });
}

lipspace_status lipspace_run_json(const char* config_json, char** report_json,
                                  int* exit_status) {
  return guarded([&] {
    if (!config_json || !report_json || !exit_status)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    nlohmann::json cfg;
    try {
      cfg = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument,
                            std::string("bad config JSON: ") + e.what());
    }
    lipspace::RunConfig rc;
    rc.command = cfg.value("command", "");
    rc.params_json = cfg.contains("params") ? cfg["params"].dump() : "{}";
    rc.out_dir = cfg.value("out_dir", "");
    lipspace::RunOutcome outcome = lipspace::run(rc);
    *report_json = dup_string(outcome.report_json);
    *exit_status = outcome.exit_status;
  });
}

lipspace_status lipspace_list_commands(char** out_json) {
  return guarded([&] {
    if (!out_json)
      throw lipspace::Error(lipspace::ErrorCode::InvalidArgument, "null argument");
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : lipspace::list_commands())
      rows.push_back({{"command", row.command},
                      {"operation", row.operation},
                      {"description", row.description}});
    *out_json = dup_string(rows.dump(2) + "\n");
  });
}

}  // extern "C"
