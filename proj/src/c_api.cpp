#include "fockforge/fockforge.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "fockforge/algebra.hpp"
#include "fockforge/error.hpp"
#include "fockforge/states.hpp"
#include "fockforge/suites.hpp"
#include "fockforge/verify.hpp"

struct ff_basis {
  fockforge::BasisPtr ptr;
};

struct ff_state {
  fockforge::StateVector value;
};

namespace {

thread_local std::string last_error;

ff_status record(ff_status status, const std::string& what) {
  last_error = what;
  return status;
}

template <class Fn>
ff_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return FF_OK;
  } catch (const fockforge::Error& e) {
    return record(static_cast<ff_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(FF_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return record(FF_MEMORY_GUARD, "out of memory");
  } catch (const std::exception& e) {
    return record(FF_INTERNAL, e.what());
  } catch (...) {
    return record(FF_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) fockforge::fail(fockforge::ErrorCode::InvalidArgument, what);
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split_formats(const char* formats) {
  std::vector<std::string> out;
  std::stringstream ss(formats);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item != "json" && item != "txt" && item != "csv") {
      fockforge::fail(fockforge::ErrorCode::Config, "unknown format '" + item + "' (expected json, txt, csv)");
    }
    out.push_back(item);
  }
  return out;
}

ff_status run(const fockforge::RunConfig& parsed, const char* out_dir, const char* formats, int* exit_code,
              char** report_text) {
  fockforge::RunConfig config = parsed;
  if (out_dir) config.output_directory = out_dir;
  if (formats) config.formats = split_formats(formats);
  const auto result = fockforge::run_config(config);
  fockforge::emit_report(config, result, config.output_directory, config.formats);
  if (report_text) *report_text = duplicate(fockforge::render_text(result.blocks));
  *exit_code = result.passed() ? 0 : 1;
  return FF_OK;
}

template <class Parse>
ff_status run_with(Parse&& parse, const char* out_dir, const char* formats, int* exit_code, char** report_text) {
  if (!exit_code) return record(FF_INVALID_ARGUMENT, "exit_code is NULL");
  *exit_code = 2;
  if (report_text) *report_text = nullptr;
  fockforge::RunConfig config;
  ff_status s = guarded([&] { config = parse(); });
  if (s != FF_OK) return s;
  s = guarded([&] { run(config, out_dir, formats, exit_code, report_text); });
  if (s != FF_OK) *exit_code = 2;
  return s;
}

}  // namespace

extern "C" {

const char* ff_version(void) { return "0.1.0"; }

const char* ff_last_error(void) { return last_error.c_str(); }

const char* ff_status_name(ff_status status) {
  switch (status) {
    case FF_OK: return "ok";
    case FF_INVALID_ARGUMENT: return "invalid argument";
    case FF_BASIS_MISMATCH: return "basis mismatch";
    case FF_MEMORY_GUARD: return "memory guard";
    case FF_TAIL_BOUND: return "tail bound";
    case FF_NORMALIZATION: return "normalization";
    case FF_PARSE: return "parse error";
    case FF_CONFIG: return "config error";
    case FF_IO: return "i/o error";
    case FF_NUMERIC: return "numeric error";
    case FF_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void ff_string_free(char* s) { std::free(s); }

ff_status ff_basis_create(int modes, int cutoff, size_t max_size, ff_basis** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    fockforge::BasisOptions opt;
    if (max_size) opt.max_size = max_size;
    *out = new ff_basis{fockforge::build_basis(modes, cutoff, opt)};
  });
}

void ff_basis_destroy(ff_basis* basis) { delete basis; }

size_t ff_basis_size(const ff_basis* basis) { return basis ? basis->ptr->size() : 0; }

int ff_basis_modes(const ff_basis* basis) { return basis ? basis->ptr->modes() : 0; }

ff_status ff_basis_occupations(const ff_basis* basis, size_t ordinal, int* occ) {
  return guarded([&] {
    require(basis && occ, "basis or occ is NULL");
    require(ordinal < basis->ptr->size(), "ordinal outside the basis");
    const auto& n = basis->ptr->at(ordinal);
    for (int m = 0; m < n.modes(); ++m) occ[m] = n[m];
  });
}

ff_status ff_state_create(const ff_basis* basis, const char* record_text, ff_state** out) {
  return guarded([&] {
    require(basis && record_text && out, "NULL argument");
    *out = nullptr;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(record_text);
    } catch (const nlohmann::json::parse_error& e) {
      fockforge::fail(fockforge::ErrorCode::Parse, std::string("state record: ") + e.what());
    }
    *out = new ff_state{fockforge::construct_state(j, basis->ptr)};
  });
}

void ff_state_destroy(ff_state* state) { delete state; }

ff_status ff_state_amplitudes(const ff_state* state, double* re, double* im) {
  return guarded([&] {
    require(state && re && im, "NULL argument");
    const auto dense = state->value.dense();
    for (std::size_t n = 0; n < dense.size(); ++n) {
      re[n] = dense[n].real();
      im[n] = dense[n].imag();
    }
  });
}

ff_status ff_state_norm2(const ff_state* state, double* out) {
  return guarded([&] {
    require(state && out, "NULL argument");
    *out = state->value.norm2();
  });
}

ff_status ff_state_truncation_loss(const ff_state* state, double* out) {
  return guarded([&] {
    require(state && out, "NULL argument");
    *out = state->value.truncation_loss();
  });
}

ff_status ff_state_inner(const ff_state* bra, const ff_state* ket, double* re, double* im) {
  return guarded([&] {
    require(bra && ket && re && im, "NULL argument");
    const auto z = fockforge::inner_product(bra->value, ket->value);
    *re = z.real();
    *im = z.imag();
  });
}

ff_status ff_generator_canonical(const char* text, char** out) {
  return guarded([&] {
    require(text && out, "NULL argument");
    *out = nullptr;
    *out = duplicate(fockforge::to_string(fockforge::parse_generator(text)));
  });
}

ff_status ff_apply_generator(const char* generator, const ff_state* in, ff_state** out) {
  return guarded([&] {
    require(generator && in && out, "NULL argument");
    *out = nullptr;
    *out = new ff_state{fockforge::apply_generator(fockforge::parse_generator(generator), in->value)};
  });
}

ff_status ff_eigen_residual(const char* generator, const ff_state* state, double eigen_re, double eigen_im,
                            double* residual) {
  return guarded([&] {
    require(generator && state && residual, "NULL argument");
    *residual = fockforge::eigen_residual(fockforge::parse_generator(generator), state->value, {eigen_re, eigen_im});
  });
}

ff_status ff_run_file(const char* path, const char* out_dir, const char* formats, int override_memory_guard,
                      int* exit_code, char** report_text) {
  return run_with(
      [&] {
        require(path != nullptr, "path is NULL");
        return fockforge::parse_config_file(path, override_memory_guard != 0);
      },
      out_dir, formats, exit_code, report_text);
}

ff_status ff_run_text(const char* config, const char* out_dir, const char* formats, int override_memory_guard,
                      int* exit_code, char** report_text) {
  return run_with(
      [&] {
        require(config != nullptr, "config is NULL");
        return fockforge::parse_config_text(config, override_memory_guard != 0);
      },
      out_dir, formats, exit_code, report_text);
}

ff_status ff_suite_catalog(char** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : fockforge::suite_catalog()) {
      j.push_back({{"name", s.name}, {"summary", s.summary}, {"params", s.params}});
    }
    *out = duplicate(j.dump(2));
  });
}

ff_status ff_bessel_check_csv(const int* nus, size_t n_nu, const double* zs, size_t n_z, char** out) {
  return guarded([&] {
    require(out != nullptr && (nus || !n_nu) && (zs || !n_z), "NULL argument");
    *out = nullptr;
    const auto table = fockforge::bessel_check_table({nus, nus + n_nu}, {zs, zs + n_z});
    *out = duplicate(fockforge::render_csv(table));
  });
}

}  // extern "C"
