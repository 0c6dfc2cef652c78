#include "cartan/cartan.h"

#include <new>
#include <string>

#include "cartan/commands.hpp"
#include "cartan/compactness.hpp"
#include "cartan/error.hpp"
#include "cartan/json_io.hpp"
#include "cartan/metrics.hpp"

struct cartan_domain {
  cartan::Domain domain;
};

struct cartan_map {
  cartan::HoloMap map;
};

struct cartan_report {
  cartan::Report report;
};

namespace {

thread_local std::string last_error;

cartan_status status_of(cartan::ErrorKind k) {
  switch (k) {
    case cartan::ErrorKind::InvalidArgument: return CARTAN_INVALID_ARGUMENT;
    case cartan::ErrorKind::OutsideDomain: return CARTAN_OUTSIDE_DOMAIN;
    case cartan::ErrorKind::Conditioning: return CARTAN_CONDITIONING;
    case cartan::ErrorKind::Parse: return CARTAN_PARSE_ERROR;
  }
  return CARTAN_INTERNAL;
}

template <class F>
cartan_status try_(F&& f) {
  try {
    f();
    last_error.clear();
    return CARTAN_OK;
  } catch (const cartan::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return CARTAN_PARSE_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CARTAN_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CARTAN_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CARTAN_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) cartan::fail(cartan::ErrorKind::InvalidArgument, std::string(what) + " is null");
}

cartan::CVec read_vec(const cartan_complex* v, Eigen::Index n) {
  need(v, "input vector");
  cartan::CVec out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = {v[i].re, v[i].im};
  return out;
}

void write_vec(const cartan::CVec& v, cartan_complex* out) {
  need(out, "output buffer");
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = {v(i).real(), v(i).imag()};
}

void write_mat(const cartan::CMat& m, cartan_complex* out) {
  need(out, "output buffer");
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = {m(r, c).real(), m(r, c).imag()};
}

cartan::Point point_of(const cartan_domain* d, const cartan_complex* z) {
  need(d, "domain");
  return {read_vec(z, d->domain.dimension())};
}

}  // namespace

extern "C" {

const char* cartan_version(void) { return cartan::tool_version(); }

const char* cartan_last_error(void) { return last_error.c_str(); }

const char* cartan_status_string(cartan_status status) {
  switch (status) {
    case CARTAN_OK: return "ok";
    case CARTAN_INVALID_ARGUMENT: return "invalid-argument";
    case CARTAN_OUTSIDE_DOMAIN: return "outside-domain";
    case CARTAN_CONDITIONING: return "conditioning";
    case CARTAN_PARSE_ERROR: return "parse-error";
    case CARTAN_CHECK_FAILED: return "check-failed";
    case CARTAN_INTERNAL: return "internal";
  }
  return "unknown";
}

cartan_status cartan_domain_parse(const char* json, cartan_domain** out) {
  return try_([&] {
    need(json, "json");
    need(out, "out");
    *out = new cartan_domain{cartan::jsonio::parse_domain(cartan::jsonio::parse(json))};
  });
}

void cartan_domain_free(cartan_domain* d) { delete d; }

cartan_status cartan_domain_dimension(const cartan_domain* d, size_t* out) {
  return try_([&] {
    need(d, "domain");
    need(out, "out");
    *out = static_cast<size_t>(d->domain.dimension());
  });
}

cartan_status cartan_domain_contains(const cartan_domain* d, const cartan_complex* z, int* out) {
  return try_([&] {
    need(out, "out");
    const auto p = point_of(d, z);
    *out = cartan::contains(d->domain, p) ? 1 : 0;
  });
}

cartan_status cartan_domain_boundary_distance(const cartan_domain* d, const cartan_complex* z, double* out) {
  return try_([&] {
    need(out, "out");
    const auto p = point_of(d, z);
    *out = cartan::boundary_distance(d->domain, p);
  });
}

cartan_status cartan_metric_matrix(const cartan_domain* d, const cartan_complex* z, cartan_complex* gram) {
  return try_([&] {
    const auto p = point_of(d, z);
    write_mat(cartan::metric_matrix(d->domain, p).gram, gram);
  });
}

cartan_status cartan_bergman_form(const cartan_domain* d, const cartan_complex* z, const cartan_complex* u,
                                  double* out) {
  return try_([&] {
    need(out, "out");
    const auto p = point_of(d, z);
    *out = cartan::bergman_form(d->domain, p, {read_vec(u, d->domain.dimension())});
  });
}

cartan_status cartan_rayleigh_sup(const cartan_domain* d, const cartan_complex* z, const cartan_complex* grad,
                                  double* out) {
  return try_([&] {
    need(out, "out");
    const auto p = point_of(d, z);
    *out = cartan::rayleigh_sup(d->domain, p, read_vec(grad, d->domain.dimension()));
  });
}

cartan_status cartan_map_parse(const cartan_domain* d, const char* json, cartan_map** out) {
  return try_([&] {
    need(d, "domain");
    need(json, "json");
    need(out, "out");
    *out = new cartan_map{cartan::jsonio::parse_map(d->domain, cartan::jsonio::parse(json))};
  });
}

void cartan_map_free(cartan_map* m) { delete m; }

cartan_status cartan_map_evaluate(const cartan_map* m, const cartan_complex* z, cartan_complex* out) {
  return try_([&] {
    need(m, "map");
    const cartan::Point p{read_vec(z, m->map.source().dimension())};
    if (!cartan::contains(m->map.source(), p))
      cartan::fail(cartan::ErrorKind::OutsideDomain, "point outside " + m->map.source().describe());
    write_vec(m->map.evaluate(p).coords, out);
  });
}

cartan_status cartan_map_jacobian(const cartan_map* m, const cartan_complex* z, cartan_complex* out) {
  return try_([&] {
    need(m, "map");
    const cartan::Point p{read_vec(z, m->map.source().dimension())};
    if (!cartan::contains(m->map.source(), p))
      cartan::fail(cartan::ErrorKind::OutsideDomain, "point outside " + m->map.source().describe());
    write_mat(m->map.jacobian(p), out);
  });
}

cartan_status cartan_distortion_ratio(const cartan_map* m, const cartan_complex* z, double* ratio,
                                      cartan_complex* direction) {
  return try_([&] {
    need(m, "map");
    need(ratio, "ratio");
    const auto dr = cartan::distortion_ratio(m->map, {read_vec(z, m->map.source().dimension())});
    *ratio = dr.ratio;
    if (direction != nullptr) write_vec(dr.direction.coords, direction);
  });
}

cartan_status cartan_run(const char* command, const char* config_json, const cartan_run_options* options,
                         cartan_report** out) {
  return try_([&] {
    need(command, "command");
    need(config_json, "config_json");
    need(out, "out");
    cartan::RunOptions opts;
    if (options != nullptr) {
      if (options->has_seed) opts.seed = options->seed;
      if (options->has_samples) opts.samples = options->samples;
      opts.workers = options->workers == 0 ? 1 : options->workers;
      opts.format = options->format == CARTAN_FORMAT_CSV ? cartan::OutputFormat::Csv : cartan::OutputFormat::Json;
    }
    *out = new cartan_report{cartan::run_command(command, config_json, opts)};
  });
}

const char* cartan_report_text(const cartan_report* r) { return r ? r->report.text.c_str() : ""; }

const char* cartan_report_error(const cartan_report* r) { return r ? r->report.error.c_str() : ""; }

int cartan_report_exit_code(const cartan_report* r) { return r ? r->report.exit_code : 2; }

void cartan_report_free(cartan_report* r) { delete r; }

}  // extern "C"
