#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <system_error>

#include <CLI11.hpp>

#include "consensus/consensus_all.hpp"
#include "report.hpp"

namespace consensus::cli {

namespace {

/// Critical competences quoted in the decision-theory literature for the
/// two-class model, keyed by group A competence.
const std::map<double, double> kQuotedCriticalCompetence{
    {0.6, 0.55}, {0.7, 0.62}, {0.8, 0.70}, {0.9, 0.82}};

/// Thrown for unattainable plans; carries the report so it is still printed.
struct Unattainable {
    Report report;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

Json approximation_json(const ApproximationReport& r) {
    Json j = Json::object();
    j["approx_value"] = r.approx_value;
    j["exact_value"] = r.exact_value;
    j["abs_error"] = r.abs_error;
    return j;
}

Json outcomes_json(const OutcomeProbabilities& o) {
    Json j = Json::object();
    j["correct"] = o.correct;
    j["wrong"] = o.wrong;
    j["no_consensus"] = o.no_consensus;
    return j;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
    std::size_t n = 0;
    double p = 0.0;
    std::string classes;
    std::optional<double> prior;
    double quorum = 0.5;
};

Report analyze(const AnalyzeOptions& o, bool has_n, bool has_p) {
    const VotePolicy policy(o.quorum);
    Report rep;
    rep.command = "analyze";

    if (!o.classes.empty()) {
        if (has_n || has_p) throw DomainError("--classes cannot be combined with --n/--p");
        if (o.prior) throw DomainError("--prior requires the single-class form --n/--p");
        const Ensemble ensemble = parse_classes(o.classes);
        rep.inputs["classes"] = o.classes;
        rep.inputs["quorum"] = o.quorum;

        const std::size_t n = ensemble.total_count();
        const auto pooled = pooled_competence_stats(ensemble);
        auto& r = rep.result;
        r["total_count"] = n;
        r["threshold"] = majority_threshold(n, policy);
        r["p_c"] = mixed_consensus_probability(ensemble, policy);
        r["outcomes"] = outcomes_json(vote_outcomes(correct_vote_distribution(ensemble), policy));
        r["pooled_competence"] = pooled.mean;
        r["pooled_variance"] = pooled.variance;
        r["advice"] = Json::object();
        const auto advice = consensus_advice(pooled.mean, DecisionPrior::equal_odds());
        r["advice"]["verdict"] = std::string(to_string(advice.verdict));
        r["advice"]["adjusted_competence"] = advice.adjusted_competence;
        r["advice"]["margin"] = advice.margin;
        r["approximations"]["normal_route"] = approximation_json(normal_route_consensus(ensemble, policy));
        r["approximations"]["poisson"] =
            approximation_json(poisson_consensus_probability(ensemble, policy));
        return rep;
    }

    if (!has_n || !has_p) throw DomainError("analyze needs --n and --p, or --classes");
    detail::require(o.n >= 1, "--n must be at least 1");
    detail::require_open_probability(o.p, "--p");
    const DecisionPrior prior = o.prior ? DecisionPrior(*o.prior) : DecisionPrior::equal_odds();

    rep.inputs["n"] = o.n;
    rep.inputs["p"] = o.p;
    if (o.prior) rep.inputs["prior"] = *o.prior;
    rep.inputs["quorum"] = o.quorum;

    const Ensemble ensemble = Ensemble::homogeneous(o.n, o.p);
    auto& r = rep.result;
    r["threshold"] = majority_threshold(o.n, policy);
    r["p_c"] = consensus_probability(o.n, o.p, policy);
    r["outcomes"] = outcomes_json(vote_outcomes(correct_vote_distribution(ensemble), policy));
    if (o.prior) {
        r["p_r"] = bayes_adjusted_competence(o.p, prior);
        r["p_r_other"] = bayes_adjusted_competence(o.p, prior.complement());
        r["p_c_with_prior"] = consensus_probability_with_priors(o.n, o.p, prior, policy);
    }
    const auto advice = consensus_advice(o.p, prior);
    r["advice"] = Json::object();
    r["advice"]["verdict"] = std::string(to_string(advice.verdict));
    r["advice"]["adjusted_competence"] = advice.adjusted_competence;
    r["advice"]["margin"] = advice.margin;
    r["approximations"]["normal_route"] = approximation_json(normal_route_consensus(ensemble, policy));
    r["approximations"]["poisson"] = approximation_json(poisson_consensus_probability(o.n, o.p, policy));
    return rep;
}

// ---------------------------------------------------------------------------
// plan

struct PlanOptions {
    double p = 0.0;
    double target = 0.0;
    std::optional<double> prior;
    std::size_t max_n = 999;
    double quorum = 0.5;
};

Report plan(const PlanOptions& o) {
    const VotePolicy policy(o.quorum);
    std::optional<DecisionPrior> prior;
    if (o.prior) prior = DecisionPrior(*o.prior);

    Report rep;
    rep.command = "plan";
    rep.inputs["p"] = o.p;
    rep.inputs["target"] = o.target;
    if (o.prior) rep.inputs["prior"] = *o.prior;
    rep.inputs["max_n"] = o.max_n;
    rep.inputs["quorum"] = o.quorum;

    const auto result = plan_agent_count(o.p, o.target, o.max_n, policy, prior);
    auto& r = rep.result;
    r["status"] = result.attainable() ? "ATTAINED" : "UNATTAINABLE";
    r["effective_competence"] = result.effective_competence;
    if (result.attainable()) {
        const std::size_t n = *result.required_n;
        r["required_n"] = n;
        r["achieved_value"] = result.achieved_value;
        r["p_c_at_n_minus_2"] =
            n >= 3 ? Json(consensus_probability(n - 2, result.effective_competence, policy)) : Json(nullptr);
        return rep;
    }
    r["required_n"] = nullptr;
    r["best_value"] = result.achieved_value;
    r["reason"] = result.effective_competence <= 0.5 + kIndifferenceTolerance
                      ? "competence at or below 1/2: adding agents cannot raise consensus quality"
                      : "no odd group size up to max_n reaches the target";
    throw Unattainable{std::move(rep)};
}

// ---------------------------------------------------------------------------
// critical

struct CriticalSizeOptions {
    std::size_t a_count = 0;
    double a_p = 0.0;
    double b_p = 0.0;
    std::size_t cap = kDefaultCriticalSizeCap;
    double quorum = 0.5;
};

Report critical_size(const CriticalSizeOptions& o) {
    const VotePolicy policy(o.quorum);
    const AgentClass group_a(o.a_count, o.a_p);
    Report rep;
    rep.command = "critical size";
    rep.inputs["a_count"] = o.a_count;
    rep.inputs["a_p"] = o.a_p;
    rep.inputs["b_p"] = o.b_p;
    rep.inputs["cap"] = o.cap;
    rep.inputs["quorum"] = o.quorum;

    const auto res = critical_group_size(group_a, o.b_p, o.cap, policy);
    auto& r = rep.result;
    r["verdict"] = std::string(to_string(res.kind));
    r["b_star"] = res.b_star ? Json(*res.b_star) : Json(nullptr);
    r["search_cap"] = res.search_cap;
    r["baseline"] = res.baseline;
    if (res.b_star) r["achieved"] = res.achieved;
    return rep;
}

struct CriticalCompetenceOptions {
    double a_p = 0.0;
    std::size_t a_count = 3;
    std::size_t cap = 50;
    double tol = 1e-4;
    double quorum = 0.5;
};

Report critical_competence_report(const CriticalCompetenceOptions& o) {
    const VotePolicy policy(o.quorum);
    Report rep;
    rep.command = "critical competence";
    rep.inputs["a_p"] = o.a_p;
    rep.inputs["a_count"] = o.a_count;
    rep.inputs["cap"] = o.cap;
    rep.inputs["tol"] = o.tol;
    rep.inputs["quorum"] = o.quorum;

    const double value = critical_competence(o.a_p, o.a_count, o.cap, o.tol, policy);
    auto& r = rep.result;
    r["p_b_star"] = value;
    r["b_sizes_checked"] = "even sizes 2.." + std::to_string(o.cap - o.cap % 2);
    for (const auto& [pa, quoted] : kQuotedCriticalCompetence) {
        if (std::fabs(pa - o.a_p) < 1e-9) {
            r["quoted_value"] = quoted;
            r["delta_vs_quoted"] = value - quoted;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// table

Report table(const std::string& which) {
    const auto t = reference_table(which);
    if (!t) throw DomainError("unknown table '" + which + "' (expected table1 or table2)");
    Report rep;
    rep.command = "table";
    rep.inputs["which"] = which;
    auto& r = rep.result;
    r["table"] = t->name;
    r["title"] = t->title;
    r["row_label"] = t->row_label;
    r["column_label"] = t->column_label;
    r["rows"] = t->rows;
    r["columns"] = t->columns;
    r["computed"] = t->computed;
    Json rounded = Json::array();
    Json diff = Json::array();
    for (std::size_t i = 0; i < t->rows.size(); ++i) {
        Json rr = Json::array();
        Json dr = Json::array();
        for (std::size_t j = 0; j < t->columns.size(); ++j) {
            const double v = ReferenceTable::round3(t->computed[i][j]);
            rr.push_back(v);
            dr.push_back(std::round((v - t->published[i][j]) * 1e9) / 1e9);
        }
        rounded.push_back(std::move(rr));
        diff.push_back(std::move(dr));
    }
    r["rounded"] = std::move(rounded);
    r["published"] = t->published;
    r["diff"] = std::move(diff);
    r["max_abs_diff_rounded"] = t->max_rounded_diff();
    r["max_abs_diff_raw"] = t->max_raw_diff();
    return rep;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    std::string classes;
    double prior = 0.5;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    double quorum = 0.5;
    std::string trace;
};

Report simulate_report(const SimulateOptions& o) {
    const Ensemble ensemble = parse_classes(o.classes);
    const SimulationConfig config{ensemble, DecisionPrior(o.prior), VotePolicy(o.quorum), o.trials, o.seed};
    detail::require(o.trials >= 1, "--trials must be at least 1");

    Report rep;
    rep.command = "simulate";
    rep.inputs["classes"] = o.classes;
    rep.inputs["prior"] = o.prior;
    rep.inputs["trials"] = o.trials;
    rep.inputs["quorum"] = o.quorum;
    rep.seed = o.seed;

    const auto out = simulate(config, o.threads);
    auto& r = rep.result;
    r["trials"] = out.trials;
    r["correct_consensus"] = out.correct_consensus;
    r["wrong_consensus"] = out.wrong_consensus;
    r["ties"] = out.ties;
    r["first"] = {{"times_chosen", out.first.times_chosen},
                  {"times_chosen_and_true", out.first.times_chosen_and_true}};
    r["second"] = {{"times_chosen", out.second.times_chosen},
                   {"times_chosen_and_true", out.second.times_chosen_and_true}};
    r["empirical_p_c"] = optional_number(out.empirical_p_c());
    r["empirical_p_r"] = optional_number(out.empirical_p_r(Alternative::First));
    r["empirical_p_r_second"] = optional_number(out.empirical_p_r(Alternative::Second));

    // Analytic counterparts.
    const auto outcomes = vote_outcomes(correct_vote_distribution(ensemble), config.policy);
    const double decided = outcomes.correct + outcomes.wrong;
    Json analytic = Json::object();
    analytic["p_c"] = mixed_consensus_probability(ensemble, config.policy);
    analytic["p_tie"] = outcomes.no_consensus;
    analytic["p_c_given_decided"] = decided > 0 ? Json(outcomes.correct / decided) : Json(nullptr);
    if (auto emp = out.empirical_p_c(); emp && decided > 0) {
        const double expected = outcomes.correct / decided;
        analytic["p_c_standard_error"] = proportion_standard_error(expected, out.trials - out.ties);
    }
    if (ensemble.is_homogeneous() && ensemble.total_count() == 1) {
        const double p = ensemble.classes().front().competence();
        const double expected = bayes_adjusted_competence(p, config.prior);
        analytic["p_r"] = expected;
        analytic["p_r_standard_error"] = proportion_standard_error(expected, out.first.times_chosen);
    }
    r["analytic"] = std::move(analytic);

    if (!o.trace.empty()) {
        std::ofstream trace(o.trace);
        if (!trace) throw DomainError("cannot open trace file '" + o.trace + "'");
        write_trace(config, trace);
        r["trace_file"] = o.trace;
    }
    return rep;
}

OutputFormat parse_format(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    return OutputFormat::Human;
}

}  // namespace

Ensemble parse_classes(std::string_view text) {
    std::vector<AgentClass> classes;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item =
            trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        const auto at = item.find('@');
        if (item.empty() || at == std::string::npos) {
            throw DomainError("bad class spec '" + item + "' (expected count@competence)");
        }
        std::size_t count = 0;
        const auto* cb = item.data();
        const auto [cend, cec] = std::from_chars(cb, cb + at, count);
        double competence = 0.0;
        std::size_t used = 0;
        try {
            competence = std::stod(item.substr(at + 1), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (cec != std::errc{} || cend != cb + at || used == 0 || used != item.size() - at - 1) {
            throw DomainError("bad class spec '" + item + "' (expected count@competence)");
        }
        classes.emplace_back(count, competence);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return Ensemble(std::move(classes));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reliability analysis for majority-vote consensus among independent agents", "consensus"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from a key=value file; command-line flags win");

    std::string format = "human";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"human", "json", "csv"}))
        ->capture_default_str();

    std::optional<Report> report;

    // analyze
    AnalyzeOptions ao;
    auto* analyze_cmd = app.add_subcommand("analyze", "Consensus probability, advice and approximations");
    auto* n_opt = analyze_cmd->add_option("--n", ao.n, "Number of agents");
    auto* p_opt = analyze_cmd->add_option("--p", ao.p, "Agent competence in (0,1)");
    analyze_cmd->add_option("--classes", ao.classes, "Ensemble as count@p[,count@p...]");
    analyze_cmd->add_option("--prior", ao.prior, "Prior probability of the first alternative");
    analyze_cmd->add_option("--quorum", ao.quorum, "Quorum fraction in [1/2, 1)")->capture_default_str();
    analyze_cmd->callback([&] { report = analyze(ao, n_opt->count() > 0, p_opt->count() > 0); });

    // plan
    PlanOptions po;
    auto* plan_cmd = app.add_subcommand("plan", "Smallest odd agent count reaching a target");
    plan_cmd->add_option("--p", po.p, "Agent competence in (0,1)")->required();
    plan_cmd->add_option("--target", po.target, "Target consensus probability")->required();
    plan_cmd->add_option("--prior", po.prior, "Prior probability of the first alternative");
    plan_cmd->add_option("--max-n", po.max_n, "Largest group size considered")->capture_default_str();
    plan_cmd->add_option("--quorum", po.quorum, "Quorum fraction in [1/2, 1)")->capture_default_str();
    plan_cmd->callback([&] { report = plan(po); });

    // critical
    auto* critical_cmd = app.add_subcommand("critical", "Critical values for a second agent group");
    critical_cmd->require_subcommand(1);
    CriticalSizeOptions cso;
    auto* size_cmd = critical_cmd->add_subcommand("size", "Smallest B group that improves on A alone");
    size_cmd->add_option("--a-count", cso.a_count, "Agents in group A")->required();
    size_cmd->add_option("--a-p", cso.a_p, "Competence of group A")->required();
    size_cmd->add_option("--b-p", cso.b_p, "Competence of group B")->required();
    size_cmd->add_option("--cap", cso.cap, "Largest B size searched")->capture_default_str();
    size_cmd->add_option("--quorum", cso.quorum, "Quorum fraction in [1/2, 1)")->capture_default_str();
    size_cmd->callback([&] { report = critical_size(cso); });

    CriticalCompetenceOptions cco;
    auto* comp_cmd =
        critical_cmd->add_subcommand("competence", "Competence above which any B group helps");
    comp_cmd->add_option("--a-p", cco.a_p, "Competence of group A")->required();
    comp_cmd->add_option("--a-count", cco.a_count, "Agents in group A (odd)")->capture_default_str();
    comp_cmd->add_option("--cap", cco.cap, "Largest B size checked")->capture_default_str();
    comp_cmd->add_option("--tol", cco.tol, "Bisection tolerance")->capture_default_str();
    comp_cmd->add_option("--quorum", cco.quorum, "Quorum fraction in [1/2, 1)")->capture_default_str();
    comp_cmd->callback([&] { report = critical_competence_report(cco); });

    // table
    std::string which;
    auto* table_cmd = app.add_subcommand("table", "Regenerate a reference table and diff it");
    table_cmd->add_option("which", which, "table1 or table2")->required();
    table_cmd->callback([&] { report = table(which); });

    // simulate
    SimulateOptions so;
    auto* sim_cmd = app.add_subcommand("simulate", "Seeded Monte Carlo run of the coordinator model");
    sim_cmd->add_option("--classes", so.classes, "Ensemble as count@p[,count@p...]")->required();
    sim_cmd->add_option("--prior", so.prior, "Prior probability of the first alternative")
        ->capture_default_str();
    sim_cmd->add_option("--trials", so.trials, "Number of trials")->capture_default_str();
    sim_cmd->add_option("--seed", so.seed, "64-bit seed")->capture_default_str();
    sim_cmd->add_option("--threads", so.threads, "Worker threads (0 = all cores)")->capture_default_str();
    sim_cmd->add_option("--quorum", so.quorum, "Quorum fraction in [1/2, 1)")->capture_default_str();
    sim_cmd->add_option("--trace", so.trace, "Write one JSON line per trial to this file");
    sim_cmd->callback([&] { report = simulate_report(so); });

    std::vector<const char*> argv;
    argv.push_back("consensus");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "consensus: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Unattainable& u) {
        out << render(u.report, parse_format(format));
        err << "consensus: target is unattainable\n";
        return kExitUnattainable;
    } catch (const DomainError& e) {
        err << "consensus: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NoQuorumError& e) {
        err << "consensus: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConvergenceError& e) {
        err << "consensus: " << e.what() << "\n";
        return kExitUsage;
    }

    if (!report) {
        err << "consensus: no command given\n";
        return kExitUsage;
    }
    out << render(*report, parse_format(format));
    return kExitOk;
}

}  // namespace consensus::cli
