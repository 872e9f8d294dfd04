// Command-line front end. Talks to the library exclusively through the C
// API in secrecy.h so the two interfaces cannot drift apart.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "secrecy.h"

namespace {

using nlohmann::json;

// Exit contract: 0 success, 1 validation failure, 2 solver non-convergence,
// 3 bad input (arguments, config, unreadable or unwritable files).
int status_exit(sc_status st) {
    switch (st) {
        case SC_OK:
            return 0;
        case SC_ERR_DOMAIN:
        case SC_ERR_IO:
        case SC_ERR_BAD_HANDLE:
            return 3;
        default:
            return 2;
    }
}

int fail(sc_context* ctx, const char* what, sc_status st) {
    std::fprintf(stderr, "secrecy: %s: %s (%s)\n", what, sc_last_error(ctx),
                 sc_status_name(st));
    return status_exit(st);
}

int bad_input(const std::string& message) {
    std::fprintf(stderr, "secrecy: %s\n", message.c_str());
    return 3;
}

// Options shared by the subcommands. Flags are applied to the context only
// when the user actually passed them, so the layering is always
// defaults < config file < explicit flags.
struct Common {
    std::string config;
    std::string unit = "nats";
    std::string out;
    std::uint64_t seed = 42;
    int jobs = 1;
    double gamma_m = 1.0;
    double gamma_e = 1.0;
    CLI::Option* unit_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c, bool with_channel) {
    cmd->add_option("--config", c.config, "flat 'key = value' solver configuration file");
    c.unit_opt = cmd->add_option("--unit", c.unit, "rate unit: nats or bits")
                     ->check(CLI::IsMember({"nats", "bits"}));
    c.seed_opt = cmd->add_option("--seed", c.seed, "Monte Carlo seed (mc_seed)");
    c.jobs_opt = cmd->add_option("--jobs", c.jobs, "parallel workers")->check(CLI::Range(1, 4096));
    cmd->add_option("--out", c.out, "write the result to this file instead of stdout");
    if (with_channel) {
        cmd->add_option("--gamma-m", c.gamma_m, "mean main-channel power gain")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--gamma-e", c.gamma_e, "mean eavesdropper power gain")
            ->check(CLI::PositiveNumber);
    }
}

// Returns 0 or the process exit code of the first failure.
int apply_common(sc_context* ctx, const Common& c) {
    if (!c.config.empty()) {
        const sc_status st = sc_load_config(ctx, c.config.c_str());
        if (st != SC_OK) return fail(ctx, "loading config", st);
    }
    auto set = [&](const char* key, const std::string& value) -> int {
        const sc_status st = sc_set_option(ctx, key, value.c_str());
        return st == SC_OK ? 0 : fail(ctx, key, st);
    };
    int rc = 0;
    if (c.unit_opt->count() && (rc = set("unit", c.unit))) return rc;
    if (c.seed_opt->count() && (rc = set("mc_seed", std::to_string(c.seed)))) return rc;
    if (c.jobs_opt->count() && (rc = set("jobs", std::to_string(c.jobs)))) return rc;
    return 0;
}

int write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) return bad_input("cannot write " + out_path);
    return 0;
}

bool unit_is_bits(sc_context* ctx) {
    char buf[16] = {0};
    return sc_get_option(ctx, "unit", buf, sizeof buf) == SC_OK &&
           std::string(buf) == "bits";
}

int run_solve(sc_context* ctx, const Common& c, const std::string& scheme, double p_bar,
              double tau, bool tau_given) {
    if (int rc = apply_common(ctx, c)) return rc;
    sc_status st = sc_set_channel(ctx, c.gamma_m, c.gamma_e);
    if (st != SC_OK) return fail(ctx, "channel", st);

    sc_evaluation ev = {};
    if (tau_given) {
        if (scheme != "onoff") return bad_input("--tau only applies to --scheme onoff");
        st = sc_solve_onoff_fixed_tau(ctx, p_bar, tau, &ev);
    } else {
        st = sc_solve(ctx, scheme.c_str(), p_bar, &ev);
    }
    if (st != SC_OK) return fail(ctx, "solve", st);

    const bool bits = unit_is_bits(ctx);
    json j;
    j["scheme"] = scheme;
    j["gamma_m"] = c.gamma_m;
    j["gamma_e"] = c.gamma_e;
    j["p_bar"] = p_bar;
    j["unit"] = bits ? "bits" : "nats";
    j["rate"] = bits ? ev.rate_nats / std::log(2.0) : ev.rate_nats;
    j["realized_power"] = ev.realized_power;
    j["lambda"] = ev.lambda;
    j["tau"] = ev.tau;
    if (scheme == "onoff") j["p_const"] = ev.p_const;
    j["kkt_residual"] = ev.kkt_residual;
    j["iterations"] = ev.iterations;
    j["converged"] = ev.converged != 0;
    j["clamped"] = ev.clamped != 0;
    if (int rc = write_output(c.out, j.dump(2) + "\n")) return rc;
    if (!ev.converged) {
        std::fprintf(stderr, "secrecy: solver did not converge\n");
        return 2;
    }
    return 0;
}

int run_sweep(sc_context* ctx, const Common& c, const std::string& range,
              const std::string& schemes) {
    if (int rc = apply_common(ctx, c)) return rc;
    sc_status st = sc_set_channel(ctx, c.gamma_m, c.gamma_e);
    if (st != SC_OK) return fail(ctx, "channel", st);

    double db_start = 0.0, db_stop = 0.0, db_step = 0.0;
    int consumed = 0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%lf%n", &db_start, &db_stop, &db_step,
                    &consumed) != 3 ||
        consumed != static_cast<int>(range.size()))
        return bad_input("--pbar-db-range must be START:STOP:STEP, got '" + range + "'");

    char* csv = nullptr;
    st = sc_sweep_csv(ctx, db_start, db_stop, db_step, schemes.c_str(), &csv);
    if (!csv) return fail(ctx, "sweep", st);
    const std::string text(csv);
    sc_string_free(csv);
    if (int rc = write_output(c.out, text)) return rc;
    if (st != SC_OK) return fail(ctx, "sweep", st);  // produced, but not converged
    return 0;
}

struct CheckPrinter {
    std::string text;
    int total = 0;
    int passed = 0;
};

extern "C" void print_check(const char* name, int passed, const char* detail,
                            double seconds, double budget_seconds, void* user) {
    auto* p = static_cast<CheckPrinter*>(user);
    char line[1024];
    std::snprintf(line, sizeof line, "[%s] %s | %s | %.2fs (budget %gs)\n",
                  passed ? "PASS" : "FAIL", name, detail, seconds, budget_seconds);
    std::fputs(line, stdout);
    std::fflush(stdout);
    p->text += line;
    ++p->total;
    p->passed += passed ? 1 : 0;
}

int run_validate(sc_context* ctx, const Common& c) {
    if (int rc = apply_common(ctx, c)) return rc;
    CheckPrinter printer;
    int n_failed = 0;
    const sc_status st = sc_validate(ctx, &print_check, &printer, &n_failed);
    if (st != SC_OK) return fail(ctx, "validate", st);
    char summary[128];
    std::snprintf(summary, sizeof summary, "%d/%d checks passed\n", printer.passed,
                  printer.total);
    std::fputs(summary, stdout);
    printer.text += summary;
    if (!c.out.empty())
        if (int rc = write_output(c.out, printer.text)) return rc;
    return n_failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy capacity of ergodic block-fading wiretap channels"};
    app.require_subcommand(1);

    CLI::App* solve = app.add_subcommand("solve", "solve one scheme at a fixed power budget");
    Common solve_c;
    std::string scheme;
    double p_bar = 1.0, tau = 0.0;
    add_common(solve, solve_c, true);
    solve->add_option("--scheme", scheme,
                      "full_csi | main_csi | onoff | constant_rate | receiver_only")
        ->required();
    solve->add_option("--pbar", p_bar, "average transmit power (unit noise variance)")
        ->required()
        ->check(CLI::PositiveNumber);
    CLI::Option* tau_opt =
        solve->add_option("--tau", tau, "fixed on/off threshold instead of the optimum");

    CLI::App* sweep = app.add_subcommand("sweep", "rate-vs-power CSV over a dB grid");
    Common sweep_c;
    std::string range = "-10:40:2";
    std::string schemes;
    add_common(sweep, sweep_c, true);
    sweep->add_option("--pbar-db-range", range, "START:STOP:STEP in dB (10 log10 pbar)");
    sweep->add_option("--schemes", schemes, "comma-separated subset (default: all five)");

    CLI::App* validate = app.add_subcommand("validate", "run the numerical validation suite");
    Common validate_c;
    add_common(validate, validate_c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    sc_context* ctx = sc_context_create();
    if (!ctx) {
        std::fprintf(stderr, "secrecy: out of memory\n");
        return 2;
    }
    int rc = 0;
    if (solve->parsed())
        rc = run_solve(ctx, solve_c, scheme, p_bar, tau, tau_opt->count() > 0);
    else if (sweep->parsed())
        rc = run_sweep(ctx, sweep_c, range, schemes);
    else
        rc = run_validate(ctx, validate_c);
    sc_context_destroy(ctx);
    return rc;
}
