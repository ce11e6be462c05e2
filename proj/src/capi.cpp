#include "besselforge/besselforge.h"

#include "besselforge/error.hpp"
#include "besselforge/experiments.hpp"
#include "besselforge/kernels.hpp"
#include "besselforge/operators.hpp"
#include "besselforge/pickrell.hpp"
#include "besselforge/specfun.hpp"

#include <cmath>
#include <exception>
#include <new>
#include <string>

using namespace besselforge;

struct bf_grid {
  specfun::QuadratureGrid grid;
};
struct bf_operator {
  operators::DiscreteOperator op;
};
struct bf_config {
  experiments::ExperimentConfig cfg;
};
struct bf_result {
  experiments::ExperimentResult result;
};

namespace {

thread_local std::string last_error;

template <class F>
bf_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return BF_OK;
  } catch (const UsageError& e) {
    last_error = e.what();
    return BF_ERR_USAGE;
  } catch (const DomainError& e) {
    last_error = e.what();
    return BF_ERR_DOMAIN;
  } catch (const NumericalError& e) {
    last_error = e.what();
    return BF_ERR_NUMERICAL;
  } catch (const ConstructionError& e) {
    last_error = e.what();
    return BF_ERR_CONSTRUCTION;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BF_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return BF_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw UsageError(std::string(what) + " must not be null");
}

kernels::KernelSpec spec_of(const char* family, int n, double s) {
  need(family, "family");
  kernels::KernelSpec spec{kernels::parse_family(family), n, s};
  spec.validate();
  return spec;
}

} // namespace

extern "C" {

const char* bf_version(void) { return BESSELFORGE_VERSION; }

const char* bf_last_error(void) { return last_error.c_str(); }

bf_status bf_log_gamma(double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = specfun::log_gamma(x);
  });
}

bf_status bf_jacobi_p(int degree, double alpha, double u, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = specfun::jacobi_p(degree, alpha, u);
  });
}

bf_status bf_bessel_j(double nu, double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = specfun::bessel_j(nu, x);
  });
}

bf_status bf_kernel_eval(const char* family, int n, double s, double x1, double x2, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = kernels::evaluate(spec_of(family, n, s), x1, x2);
  });
}

bf_status bf_heine_mehler_residual(int n, double alpha, double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = kernels::heine_mehler_residual(n, alpha, x);
  });
}

bf_status bf_hellinger(int n, double s, double s2, double* hel, double* one_minus_hel) {
  return guarded([&] {
    const double lh = pickrell::hellinger_log(n, s, s2);
    if (hel) *hel = std::exp(lh);
    if (one_minus_hel) *one_minus_hel = 0.0 - std::expm1(lh);
  });
}

bf_status bf_grid_parse(const char* spec, bf_grid** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new bf_grid{specfun::GridSpec::parse(spec).build()};
  });
}

size_t bf_grid_size(const bf_grid* grid) { return grid ? grid->grid.size() : 0; }

bf_status bf_grid_node(const bf_grid* grid, size_t i, double* node, double* weight) {
  return guarded([&] {
    need(grid, "grid");
    if (i >= grid->grid.size()) throw UsageError("grid index out of range");
    if (node) *node = grid->grid.nodes[i];
    if (weight) *weight = grid->grid.weights[i];
  });
}

void bf_grid_free(bf_grid* grid) { delete grid; }

bf_status bf_operator_discretize(const char* family, int n, double s, const bf_grid* grid, bf_operator** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    *out = new bf_operator{operators::discretize(spec_of(family, n, s), grid->grid)};
  });
}

bf_status bf_operator_weighted_projector(int n, double s, double beta, const bf_grid* grid, bf_operator** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    *out = new bf_operator{operators::weighted_projector(n, s, beta, grid->grid)};
  });
}

bf_status bf_operator_limit_projector(double s, double beta, const bf_grid* grid, bf_operator** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    *out = new bf_operator{operators::limit_projector(s, beta, grid->grid)};
  });
}

size_t bf_operator_size(const bf_operator* op) { return op ? static_cast<size_t>(op->op.size()) : 0; }

bf_status bf_operator_entry(const bf_operator* op, size_t i, size_t j, double* out) {
  return guarded([&] {
    need(op, "operator");
    need(out, "out");
    const auto n = static_cast<size_t>(op->op.size());
    if (i >= n || j >= n) throw UsageError("operator index out of range");
    *out = op->op.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

bf_status bf_operator_trace(const bf_operator* op, double* out) {
  return guarded([&] {
    need(op, "operator");
    need(out, "out");
    *out = operators::trace(op->op);
  });
}

bf_status bf_operator_trace_norm(const bf_operator* op, double* out) {
  return guarded([&] {
    need(op, "operator");
    need(out, "out");
    *out = operators::trace_norm(op->op);
  });
}

bf_status bf_operator_distance(const bf_operator* a, const bf_operator* b, double* out) {
  return guarded([&] {
    need(a, "operator");
    need(b, "operator");
    need(out, "out");
    *out = operators::trace_norm_distance(a->op, b->op);
  });
}

void bf_operator_free(bf_operator* op) { delete op; }

bf_status bf_config_new(const char* command, bf_config** out) {
  return guarded([&] {
    need(command, "command");
    need(out, "out");
    if (!experiments::is_command(command)) throw UsageError(std::string("unknown command '") + command + "'");
    auto* cfg = new bf_config{};
    cfg->cfg.command = command;
    *out = cfg;
  });
}

bf_status bf_config_set(bf_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    experiments::set_option(cfg->cfg, key, value);
  });
}

void bf_config_free(bf_config* cfg) { delete cfg; }

size_t bf_command_count(void) { return experiments::command_names().size(); }

const char* bf_command_name(size_t i) {
  static const auto names = experiments::command_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

bf_status bf_run(const bf_config* cfg, bf_result** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = new bf_result{experiments::run(cfg->cfg)};
  });
}

const char* bf_result_csv(const bf_result* r) { return r ? r->result.csv.c_str() : ""; }

const char* bf_result_summary_json(const bf_result* r) { return r ? r->result.summary_json.c_str() : ""; }

const char* bf_result_document_json(const bf_result* r) { return r ? r->result.document_json.c_str() : ""; }

const char* bf_result_attachment(const bf_result* r, const char* name) {
  if (!r || !name) return nullptr;
  const auto it = r->result.attachments.find(name);
  return it == r->result.attachments.end() ? nullptr : it->second.c_str();
}

int bf_result_claims_hold(const bf_result* r) { return r && r->result.claims_hold ? 1 : 0; }

void bf_result_free(bf_result* r) { delete r; }

} // extern "C"
