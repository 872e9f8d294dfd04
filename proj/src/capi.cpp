#include "secrecy.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "secrecy/checks.hpp"
#include "secrecy/config.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/fading.hpp"
#include "secrecy/rates.hpp"
#include "secrecy/sweep.hpp"

struct sc_context {
    secrecy::SolverConfig cfg;
    std::optional<secrecy::RayleighFadingPair> model;
    std::string last_error;
};

namespace {

// Exception-to-status boundary. Most-derived classes first; anything that
// escapes the taxonomy is internal by definition.
template <typename Body>
sc_status guarded(sc_context* ctx, Body&& body) {
    if (!ctx) return SC_ERR_BAD_HANDLE;
    ctx->last_error.clear();
    try {
        return body();
    } catch (const secrecy::DomainError& e) {
        ctx->last_error = e.what();
        return SC_ERR_DOMAIN;
    } catch (const secrecy::BracketError& e) {
        ctx->last_error = e.what();
        return SC_ERR_BRACKET;
    } catch (const secrecy::ConvergenceError& e) {
        ctx->last_error = e.what();
        return SC_ERR_CONVERGENCE;
    } catch (const secrecy::ConsistencyError& e) {
        ctx->last_error = e.what();
        return SC_ERR_CONSISTENCY;
    } catch (const secrecy::IoError& e) {
        ctx->last_error = e.what();
        return SC_ERR_IO;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return SC_ERR_INTERNAL;
    } catch (...) {
        ctx->last_error = "unknown failure";
        return SC_ERR_INTERNAL;
    }
}

sc_status fail(sc_context* ctx, sc_status status, const char* message) {
    ctx->last_error = message;
    return status;
}

const secrecy::RayleighFadingPair& require_model(sc_context* ctx) {
    if (!ctx->model)
        throw secrecy::DomainError("channel not set; call sc_set_channel first");
    return *ctx->model;
}

void fill(sc_evaluation& out, const secrecy::SchemeEvaluation& ev, double gamma_m) {
    out.rate_nats = ev.rate_nats;
    out.realized_power = ev.realized_power;
    out.lambda = ev.lambda;
    out.tau = ev.tau;
    out.p_const =
        ev.scheme == secrecy::Scheme::onoff ? ev.p_bar * std::exp(ev.tau / gamma_m) : 0.0;
    out.kkt_residual = ev.kkt_residual;
    out.iterations = ev.iterations;
    out.converged = ev.converged ? 1 : 0;
    out.clamped = ev.clamped ? 1 : 0;
}

void require_p_bar(double p_bar) {
    if (!(p_bar > 0.0) || !std::isfinite(p_bar))
        throw secrecy::DomainError("p_bar must be positive and finite");
}

}  // namespace

extern "C" {

const char* sc_status_name(sc_status status) {
    switch (status) {
        case SC_OK: return "ok";
        case SC_ERR_DOMAIN: return "domain_error";
        case SC_ERR_BRACKET: return "bracket_error";
        case SC_ERR_CONVERGENCE: return "convergence_error";
        case SC_ERR_CONSISTENCY: return "consistency_error";
        case SC_ERR_IO: return "io_error";
        case SC_ERR_BAD_HANDLE: return "bad_handle";
        case SC_ERR_INTERNAL: return "internal_error";
    }
    return "unknown_status";
}

sc_context* sc_context_create(void) {
    return new (std::nothrow) sc_context{};
}

void sc_context_destroy(sc_context* ctx) {
    delete ctx;
}

const char* sc_last_error(const sc_context* ctx) {
    return ctx ? ctx->last_error.c_str() : "null context";
}

sc_status sc_set_channel(sc_context* ctx, double gamma_m, double gamma_e) {
    return guarded(ctx, [&]() -> sc_status {
        ctx->model.emplace(gamma_m, gamma_e);
        return SC_OK;
    });
}

sc_status sc_set_option(sc_context* ctx, const char* key, const char* value) {
    return guarded(ctx, [&]() -> sc_status {
        if (!key || !value) return fail(ctx, SC_ERR_BAD_HANDLE, "null key or value");
        ctx->cfg.set_option(key, value);
        return SC_OK;
    });
}

sc_status sc_get_option(const sc_context* ctx, const char* key, char* buf, size_t buf_len) {
    // const_cast only to reuse the error plumbing; the config is not touched.
    sc_context* mut = const_cast<sc_context*>(ctx);
    return guarded(mut, [&]() -> sc_status {
        if (!key || !buf || buf_len == 0) return fail(mut, SC_ERR_BAD_HANDLE, "null buffer");
        const secrecy::SolverConfig& c = ctx->cfg;
        char tmp[64];
        const std::string_view k(key);
        if (k == "quad_rel_tol")
            std::snprintf(tmp, sizeof tmp, "%.17g", c.quad_rel_tol);
        else if (k == "quad_abs_tol")
            std::snprintf(tmp, sizeof tmp, "%.17g", c.quad_abs_tol);
        else if (k == "lambda_tol")
            std::snprintf(tmp, sizeof tmp, "%.17g", c.lambda_tol);
        else if (k == "grid_points")
            std::snprintf(tmp, sizeof tmp, "%d", c.grid_points);
        else if (k == "tail_quantile")
            std::snprintf(tmp, sizeof tmp, "%.17g", c.tail_quantile);
        else if (k == "mc_samples")
            std::snprintf(tmp, sizeof tmp, "%" PRIu64, c.mc_samples);
        else if (k == "mc_seed")
            std::snprintf(tmp, sizeof tmp, "%" PRIu64, c.mc_seed);
        else if (k == "unit")
            std::snprintf(tmp, sizeof tmp, "%s", std::string(to_string(c.unit)).c_str());
        else if (k == "jobs")
            std::snprintf(tmp, sizeof tmp, "%d", c.jobs);
        else
            throw secrecy::DomainError("config: unknown option '" + std::string(k) + "'");
        if (std::strlen(tmp) + 1 > buf_len)
            return fail(mut, SC_ERR_DOMAIN, "buffer too small");
        std::strcpy(buf, tmp);
        return SC_OK;
    });
}

sc_status sc_load_config(sc_context* ctx, const char* path) {
    return guarded(ctx, [&]() -> sc_status {
        if (!path) return fail(ctx, SC_ERR_BAD_HANDLE, "null path");
        ctx->cfg = secrecy::load_config_file(path, ctx->cfg);
        return SC_OK;
    });
}

sc_status sc_solve(sc_context* ctx, const char* scheme, double p_bar, sc_evaluation* out) {
    return guarded(ctx, [&]() -> sc_status {
        if (!scheme || !out) return fail(ctx, SC_ERR_BAD_HANDLE, "null scheme or output");
        const secrecy::RayleighFadingPair& model = require_model(ctx);
        ctx->cfg.validate();
        require_p_bar(p_bar);
        const secrecy::Scheme s = secrecy::scheme_from_string(scheme);
        fill(*out, secrecy::evaluate_scheme(s, model, {p_bar}, ctx->cfg), model.gamma_m());
        return SC_OK;
    });
}

sc_status sc_solve_onoff_fixed_tau(sc_context* ctx, double p_bar, double tau,
                                   sc_evaluation* out) {
    return guarded(ctx, [&]() -> sc_status {
        if (!out) return fail(ctx, SC_ERR_BAD_HANDLE, "null output");
        const secrecy::RayleighFadingPair& model = require_model(ctx);
        ctx->cfg.validate();
        require_p_bar(p_bar);
        fill(*out, secrecy::evaluate_onoff_fixed_tau(model, {p_bar}, tau, ctx->cfg),
             model.gamma_m());
        return SC_OK;
    });
}

sc_status sc_high_snr_limit(sc_context* ctx, double* out) {
    return guarded(ctx, [&]() -> sc_status {
        if (!out) return fail(ctx, SC_ERR_BAD_HANDLE, "null output");
        *out = secrecy::high_snr_limit(require_model(ctx));
        return SC_OK;
    });
}

sc_status sc_sweep_csv(sc_context* ctx, double db_start, double db_stop, double db_step,
                       const char* schemes, char** out_csv) {
    return guarded(ctx, [&]() -> sc_status {
        if (!out_csv) return fail(ctx, SC_ERR_BAD_HANDLE, "null output");
        *out_csv = nullptr;
        const secrecy::RayleighFadingPair& model = require_model(ctx);
        ctx->cfg.validate();

        secrecy::SweepRequest req;
        req.gamma_m = model.gamma_m();
        req.gamma_e = model.gamma_e();
        req.db_start = db_start;
        req.db_stop = db_stop;
        req.db_step = db_step;
        if (schemes) {
            std::string_view rest(schemes);
            while (!rest.empty()) {
                const size_t comma = rest.find(',');
                const std::string_view tok = rest.substr(0, comma);
                if (!tok.empty()) req.schemes.push_back(secrecy::scheme_from_string(std::string(tok)));
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
            }
        }

        const secrecy::SweepResult result = secrecy::run_sweep(req, ctx->cfg);
        const std::string csv = secrecy::sweep_to_csv(result, ctx->cfg.unit);
        char* buf = static_cast<char*>(std::malloc(csv.size() + 1));
        if (!buf) return fail(ctx, SC_ERR_INTERNAL, "out of memory");
        std::memcpy(buf, csv.c_str(), csv.size() + 1);
        *out_csv = buf;
        if (!result.all_converged())
            return fail(ctx, SC_ERR_CONVERGENCE,
                        "sweep completed but a constant_rate row did not converge; "
                        "see the converged_constant_rate column");
        return SC_OK;
    });
}

void sc_string_free(char* s) {
    std::free(s);
}

sc_status sc_validate(sc_context* ctx, sc_check_fn on_check, void* user, int* n_failed) {
    return guarded(ctx, [&]() -> sc_status {
        ctx->cfg.validate();
        const std::vector<secrecy::CheckResult> results = secrecy::run_check_suite(
            ctx->cfg, [&](const secrecy::CheckResult& r) {
                if (on_check)
                    on_check(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), r.seconds,
                             r.budget_seconds, user);
            });
        if (n_failed) {
            int failed = 0;
            for (const secrecy::CheckResult& r : results)
                if (!r.passed) ++failed;
            *n_failed = failed;
        }
        return SC_OK;
    });
}

}  // extern "C"
