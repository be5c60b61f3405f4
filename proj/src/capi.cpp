#include "ergolin/ergolin.h"

#include "ergolin/contfrac.hpp"
#include "ergolin/driver.hpp"
#include "ergolin/hardy.hpp"

#include <string>
#include <vector>

struct ergolin_result {
  ergolin::RunResult r;
};

struct ergolin_cf {
  std::vector<std::string> a, q;
};

struct ergolin_hardy {
  ergolin::HardyProductSpec spec;
  std::string verdict;
};

namespace {

thread_local std::string last_error;

template <typename F>
int guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const ergolin::Error& e) {
    last_error = std::string(ergolin::error_kind_name(e.kind())) + ": " + e.what();
    return ergolin::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    last_error = std::string("internal: ") + e.what();
    return ERGOLIN_ERR_INTERNAL;
  }
}

int bad_argument(const char* what) {
  last_error = what;
  return ERGOLIN_ERR_ARGUMENT;
}

}  // namespace

extern "C" {

const char* ergolin_version(void) { return "1.0.0"; }
const char* ergolin_last_error(void) { return last_error.c_str(); }

const char* ergolin_schema_json(void) {
  static const std::string schema = ergolin::schema_json();
  return schema.c_str();
}

int ergolin_run(const char* command, const char* action, const char* kv_text, ergolin_result** result) {
  if (result == nullptr) return bad_argument("result pointer is null");
  *result = new ergolin_result;
  auto& r = (*result)->r;
  if (command == nullptr) {
    r.exit_code = bad_argument("command is null");
    r.error = last_error;
    return r.exit_code;
  }
  last_error.clear();
  try {
    const auto kv = ergolin::parse_config_text(kv_text ? kv_text : "");
    r = ergolin::run_command(command, action ? action : "", kv);
  } catch (const ergolin::Error& e) {
    r.exit_code = ergolin::exit_code_for(e.kind());
    r.error = std::string(ergolin::error_kind_name(e.kind())) + ": " + e.what();
  }
  last_error = r.error;
  return r.exit_code;
}

int ergolin_result_exit_code(const ergolin_result* r) { return r ? r->r.exit_code : ERGOLIN_ERR_ARGUMENT; }
const char* ergolin_result_output(const ergolin_result* r) { return r ? r->r.output.c_str() : ""; }
const char* ergolin_result_error(const ergolin_result* r) { return r ? r->r.error.c_str() : ""; }
size_t ergolin_result_file_count(const ergolin_result* r) { return r ? r->r.files.size() : 0; }

const char* ergolin_result_file(const ergolin_result* r, size_t i) {
  if (!r || i >= r->r.files.size()) return nullptr;
  return r->r.files[i].c_str();
}

void ergolin_result_free(ergolin_result* r) { delete r; }

int ergolin_cf_new(const char* alpha, size_t depth, ergolin_cf** out) {
  if (!alpha || !out) return bad_argument("null argument");
  *out = nullptr;
  return guarded([&] {
    auto cf = ergolin::cf_expand(ergolin::parse_alpha(alpha), depth);
    auto cv = ergolin::convergents(cf);
    auto* h = new ergolin_cf;
    for (const auto& x : cf.a) h->a.push_back(x.str());
    for (const auto& x : cv.q) h->q.push_back(x.str());
    *out = h;
    return ERGOLIN_OK;
  });
}

size_t ergolin_cf_depth(const ergolin_cf* cf) { return cf ? cf->a.size() : 0; }

const char* ergolin_cf_quotient(const ergolin_cf* cf, size_t j) {
  if (!cf || j == 0 || j > cf->a.size()) return nullptr;
  return cf->a[j - 1].c_str();
}

const char* ergolin_cf_denominator(const ergolin_cf* cf, size_t k) {
  if (!cf || k >= cf->q.size()) return nullptr;
  return cf->q[k].c_str();
}

void ergolin_cf_free(ergolin_cf* cf) { delete cf; }

int ergolin_hardy_new(const char* pair, size_t N, ergolin_hardy** out) {
  if (!pair || !out) return bad_argument("null argument");
  *out = nullptr;
  return guarded([&] {
    auto spec = ergolin::builtin_spec(pair);
    spec.N = N;
    *out = new ergolin_hardy{spec, {}};
    return ERGOLIN_OK;
  });
}

int ergolin_hardy_classify(ergolin_hardy* h, const char** verdict) {
  if (!h || !verdict) return bad_argument("null argument");
  return guarded([&] {
    h->verdict = ergolin::hardy_verdict_name(ergolin::classify(h->spec).verdict);
    *verdict = h->verdict.c_str();
    return ERGOLIN_OK;
  });
}

int ergolin_hardy_log_norm(const ergolin_hardy* h, uint64_t a1, uint64_t a2, double* out) {
  if (!h || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = ergolin::log_product_norm(h->spec, a1, a2);
    return ERGOLIN_OK;
  });
}

void ergolin_hardy_free(ergolin_hardy* h) { delete h; }

}  // extern "C"
