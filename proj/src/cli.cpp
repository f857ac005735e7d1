#include "prophetlab/benchmarks.hpp"
#include "prophetlab/errors.hpp"
#include "prophetlab/json_io.hpp"
#include "prophetlab/kertz.hpp"
#include "prophetlab/ordering.hpp"
#include "prophetlab/policies.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace prophetlab {

using nlohmann::json;

namespace {

json sim_to_json(const SimResult& sim) {
    return json{{"mean", sim.mean},
                {"half_width_95", sim.half_width_95},
                {"trials", sim.trials},
                {"seed", sim.seed}};
}

void emit_error(const char* kind, const std::string& message) {
    json err{{"error", {{"kind", kind}, {"message", message}}}};
    std::cout << canonical_json(err) << "\n";
}

int run_beta(double tol, const std::string& out) {
    double beta = solve_beta(tol);
    Report rep;
    rep.command = "beta";
    rep.inputs = {{"tol", tol}};
    rep.results = {{"beta", beta}, {"residual", kertz_residual(beta, tol * 1e-3)}};
    emit_report(rep, out);
    return 0;
}

int run_ydump(int grid, double tol, const std::string& out) {
    double beta = solve_beta(tol);
    KertzSolution sol = solve_y(beta, grid);
    std::ofstream csv(out);
    if (!csv) throw io_error("cannot write csv: " + out);
    csv << "t,y,yprime\n";
    char line[128];
    for (size_t i = 0; i < sol.t.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g\n", sol.t[i], sol.y[i],
                      sol.yp[i]);
        csv << line;
    }
    if (!csv) throw io_error("write failed: " + out);
    Report rep;
    rep.command = "ydump";
    rep.inputs = {{"grid", grid}, {"tol", tol}, {"out", out}};
    rep.results = {{"beta", beta}, {"knots", sol.t.size()}};
    emit_report(rep, "");
    return 0;
}

int run_worstcase(double q, int n, int grid, double tol, const std::string& out) {
    double beta = solve_beta(tol);
    KertzSolution sol = solve_y(beta);
    WorstCaseParams params = optimal_rate(sol, q);
    Instance inst = worst_case_instance(params, n, grid);
    write_instance(inst, out);
    Report rep;
    rep.command = "worstcase";
    rep.inputs = {{"q", q}, {"n", n}, {"grid", grid}, {"tol", tol}, {"out", out}};
    rep.results = {{"beta", beta},
                   {"p", params.p},
                   {"H", params.H},
                   {"r_q", params.r_q()},
                   {"max_value", expected_max(inst)}};
    emit_report(rep, "");
    return 0;
}

int run_bench(const std::string& instance_path, const std::string& what,
              const std::string& out) {
    Instance inst = parse_instance_file(instance_path);
    Report rep;
    rep.command = "bench";
    rep.inputs = {{"instance", instance_path}, {"what", what}};
    if (what == "max") {
        rep.results = {{"expected_max", expected_max(inst)}};
    } else if (what.rfind("maxk:", 0) == 0) {
        int k = std::stoi(what.substr(5));
        rep.results = {{"k", k}, {"expected_kth_max", expected_kth_max(inst, k)}};
    } else if (what == "opt") {
        rep.results = {{"opt_random_order", opt_random_order(inst)}};
    } else if (what == "optfree") {
        FreeOrderResult res = opt_free_order(inst);
        rep.results = {{"opt_free_order", res.value}, {"order", res.order}};
    } else {
        throw domain_error("bench --what must be max|maxk:K|opt|optfree");
    }
    emit_report(rep, out);
    return 0;
}

int run_eval(const std::string& instance_path, const std::string& policy, double eps,
             uint64_t trials, uint64_t seed, double mult, bool restricted,
             bool self_competing, const std::string& out) {
    Instance inst = parse_instance_file(instance_path);
    Report rep;
    rep.command = "eval";
    rep.inputs = {{"instance", instance_path}, {"policy", policy}, {"eps", eps},
                  {"trials", trials},          {"seed", seed},     {"mult", mult},
                  {"restricted", restricted},  {"self_competing", self_competing}};
    rep.results["expected_max"] = expected_max(inst);

    if (policy == "baseline") {
        rep.results["sim"] = sim_to_json(single_threshold_baseline(inst, trials, seed));
        emit_report(rep, out);
        return 0;
    }

    double beta = solve_beta(1e-8);
    KertzSolution sol = solve_y(beta);
    if (policy == "small") {
        if (restricted) {
            RestrictedSmallResult res = run_restricted_small(inst, eps, sol, trials, seed);
            rep.results["sim"] = sim_to_json(res.sim);
            rep.results["delta"] = res.delta;
            rep.results["cap"] = res.cap;
        } else {
            TimePolicy pol = small_prophets_policy(inst, eps, sol);
            rep.results["sim"] = sim_to_json(run_time_policy(inst, pol, trials, seed));
        }
    } else if (policy == "imperfect") {
        ImperfectResult res =
            imperfect_prophet_policy(inst, eps, sol, trials, seed, mult, self_competing);
        rep.results["sim"] = sim_to_json(res.sim);
        rep.results["removed"] = res.removed;
        rep.results["benchmark"] = res.benchmark;
        rep.results["t_star"] = res.t_star;
        if (res.fallback) rep.flags.push_back("self_competing_fallback");
        KthOrderResult kth;
        kth.k = static_cast<int>(res.removed.size()) + 1;
        rep.results["k"] = kth.k;
        rep.results["benchmark_k"] = expected_kth_max(inst, kth.k);
    } else if (policy == "frequent") {
        FrequentResult res = frequent_guarantee(inst, eps, sol, trials, seed, mult);
        rep.results["sim"] = sim_to_json(res.sim);
        rep.results["ratio"] = res.ratio;
        rep.results["m"] = res.m;
        rep.results["m_required"] = res.m_required;
        rep.results["removed"] = res.base.removed;
        if (res.warned) rep.flags.push_back("instance_not_frequent_enough");
    } else {
        throw domain_error("eval --policy must be small|imperfect|frequent|baseline");
    }
    emit_report(rep, out);
    return 0;
}

int run_order(const std::string& instance_path, double eps, uint64_t seed, int reps,
              double mult, long max_fixings, const std::string& out) {
    Instance inst = parse_instance_file(instance_path);
    OrderOptions opts;
    opts.eps = eps;
    opts.seed = seed;
    opts.reps = reps;
    opts.mult = mult;
    if (max_fixings > 0) {
        opts.fixing_cap = max_fixings;
        opts.cp_fixing_budget = std::min(opts.cp_fixing_budget, max_fixings);
    }
    OrderOutcome res = order_general(inst, opts);

    Report rep;
    rep.command = "order";
    rep.inputs = {{"instance", instance_path}, {"eps", eps},   {"seed", seed},
                  {"reps", res.reps},          {"mult", mult}, {"max_fixings", max_fixings}};
    rep.results["order"] = res.policy.order;
    json thresholds = json::array();
    for (int idx : res.policy.order)
        thresholds.push_back(res.policy.thresholds[static_cast<size_t>(idx)]);
    rep.results["thresholds"] = thresholds;
    rep.results["value"] = res.policy.value;
    rep.results["cp_objective"] = res.cp_objective;
    rep.results["t_star"] = res.t_star;
    rep.results["removed"] = res.removed;
    rep.results["big"] = res.big;
    rep.results["fixings"] = res.fixings;
    rep.results["enumerated_rows"] = res.enumerated_rows;
    if (inst.n() <= kSubsetDpMaxN)
        rep.results["oracle_opt_free"] = opt_free_order(inst).value;
    if (res.capped) rep.flags.push_back("fixing_enumeration_reduced");
    if (!res.cp_converged) rep.flags.push_back("cp_iteration_cap_reached");
    emit_report(rep, out);
    return 0;
}

int run_decompose(const std::string& instance_path, double eps, int k,
                  const std::string& mode, const std::string& out) {
    Instance inst = parse_instance_file(instance_path);
    SmallMode m;
    if (mode == "eps_t_small") m = SmallMode::EpsTSmall;
    else if (mode == "eps_small") m = SmallMode::EpsSmall;
    else throw domain_error("decompose --mode must be eps_t_small|eps_small");
    DecompositionResult res = decompose(inst, eps, k, m);
    Report rep;
    rep.command = "decompose";
    rep.inputs = {{"instance", instance_path}, {"eps", eps}, {"k", k}, {"mode", mode}};
    rep.results = {{"t_star", res.t_star}, {"big", res.big}, {"critical", res.critical}};
    emit_report(rep, out);
    return 0;
}

} // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"prophet-inequality toolkit"};
    app.require_subcommand(1);

    // beta
    double tol = 1e-8;
    std::string out;
    auto* beta_cmd = app.add_subcommand("beta", "solve the defining constant");
    beta_cmd->add_option("--tol", tol, "residual tolerance");
    beta_cmd->add_option("--out", out, "report path (stdout when omitted)");

    // ydump
    int ygrid = 4096;
    std::string csv_out = "y.csv";
    auto* ydump_cmd = app.add_subcommand("ydump", "tabulate the threshold curve");
    ydump_cmd->add_option("--grid", ygrid, "grid size");
    ydump_cmd->add_option("--out", csv_out, "csv path")->required();
    ydump_cmd->add_option("--tol", tol, "residual tolerance");

    // worstcase
    double q = 0.1;
    int wc_n = 100, wc_grid = 2048;
    std::string wc_out = "instance.json";
    auto* wc_cmd = app.add_subcommand("worstcase", "emit the worst-case instance");
    wc_cmd->add_option("--q", q, "construction parameter in (0, 0.5)")->required();
    wc_cmd->add_option("--n", wc_n, "number of i.i.d. variables")->required();
    wc_cmd->add_option("--grid", wc_grid, "cdf discretization grid");
    wc_cmd->add_option("--out", wc_out, "instance path")->required();
    wc_cmd->add_option("--tol", tol, "residual tolerance");

    // bench
    std::string instance_path, what = "max";
    auto* bench_cmd = app.add_subcommand("bench", "exact benchmark values");
    bench_cmd->add_option("--instance", instance_path, "instance json")->required();
    bench_cmd->add_option("--what", what, "max|maxk:K|opt|optfree");
    bench_cmd->add_option("--out", out, "report path");

    // eval
    std::string policy = "small";
    double eps = 0.1, mult = 1.0;
    uint64_t trials = 100000, seed = 0;
    bool restricted = false, self_competing = false;
    auto* eval_cmd = app.add_subcommand("eval", "simulate a stopping rule");
    eval_cmd->add_option("--instance", instance_path, "instance json")->required();
    eval_cmd->add_option("--policy", policy, "small|imperfect|frequent|baseline");
    eval_cmd->add_option("--eps", eps, "smallness parameter");
    eval_cmd->add_option("--trials", trials, "Monte Carlo trials");
    eval_cmd->add_option("--seed", seed, "seed");
    eval_cmd->add_option("--mult", mult, "removal budget multiplier");
    eval_cmd->add_flag("--restricted", restricted, "hard-capped small-prophets variant");
    eval_cmd->add_flag("--self-competing", self_competing, "iterated-removal subset");
    eval_cmd->add_option("--out", out, "report path");

    // order
    int reps = -1;
    long max_fixings = 0;
    auto* order_cmd = app.add_subcommand("order", "near-optimal inspection order");
    order_cmd->add_option("--instance", instance_path, "instance json")->required();
    order_cmd->add_option("--eps", eps, "accuracy parameter");
    order_cmd->add_option("--seed", seed, "seed");
    order_cmd->add_option("--reps", reps, "rounding repetitions");
    order_cmd->add_option("--mult", mult, "removal budget multiplier");
    order_cmd->add_option("--max-fixings", max_fixings, "fixing enumeration cap");
    order_cmd->add_option("--out", out, "policy report path");

    // decompose
    int dec_k = 0;
    std::string mode = "eps_t_small";
    auto* dec_cmd = app.add_subcommand("decompose", "critical shifts and the big set");
    dec_cmd->add_option("--instance", instance_path, "instance json")->required();
    dec_cmd->add_option("--eps", eps, "smallness parameter");
    dec_cmd->add_option("--k", dec_k, "allowed big count");
    dec_cmd->add_option("--mode", mode, "eps_t_small|eps_small");
    dec_cmd->add_option("--out", out, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (beta_cmd->parsed()) return run_beta(tol, out);
        if (ydump_cmd->parsed()) return run_ydump(ygrid, tol, csv_out);
        if (wc_cmd->parsed()) return run_worstcase(q, wc_n, wc_grid, tol, wc_out);
        if (bench_cmd->parsed()) return run_bench(instance_path, what, out);
        if (eval_cmd->parsed())
            return run_eval(instance_path, policy, eps, trials, seed, mult, restricted,
                            self_competing, out);
        if (order_cmd->parsed())
            return run_order(instance_path, eps, seed, reps, mult, max_fixings, out);
        if (dec_cmd->parsed()) return run_decompose(instance_path, eps, dec_k, mode, out);
        return 2;
    } catch (const domain_error& e) {
        emit_error("domain", e.what());
        return 3;
    } catch (const precondition_error& e) {
        emit_error("precondition", e.what());
        return 3;
    } catch (const capacity_error& e) {
        emit_error("capacity", e.what());
        return 4;
    } catch (const resolution_error& e) {
        emit_error("resolution", e.what());
        return 4;
    } catch (const io_error& e) {
        emit_error("io", e.what());
        return 5;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
}

} // namespace prophetlab
