#include "tsagent/cli/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tsagent/adapters/adapters.hpp"
#include "tsagent/agent/agent.hpp"
#include "tsagent/core/csv.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/core/parallel.hpp"
#include "tsagent/evaluation/crossval.hpp"
#include "tsagent/evaluation/leaderboard.hpp"
#include "tsagent/features/features.hpp"

namespace tsagent::cli {

namespace {

struct Options {
    std::string input;
    std::string output;
    std::string report;
    std::string models = "seasonalnaive";
    int h = 0;  // 0: season length
    int windows = 0;  // 0: subcommand default
    int step = 0;
    std::string levels = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    std::string mode = "deterministic";
    std::string llm;
    std::string endpoint;
    std::string credential_env;
    std::string freq;
    std::string id_col = "unique_id";
    std::string time_col = "ds";
    std::string value_col = "y";
    std::size_t jobs = 0;
    std::size_t budget = 5;
    std::optional<std::string> query;
    std::string bind = "127.0.0.1:8008";
    std::string model = "seasonalnaive";
};

QuantileLevels parse_levels(const std::string& text) {
    if (text == "none" || text.empty()) return QuantileLevels::none();
    std::vector<double> levels;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            levels.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCategory::usage, "--levels expects a comma list of numbers, got '" + item + "'");
        }
    }
    return QuantileLevels(std::move(levels));
}

SeriesPanel load(const Options& o) {
    const PanelColumns columns{o.id_col, o.time_col, o.value_col};
    std::optional<Frequency> freq;
    if (!o.freq.empty()) freq = Frequency::from_code(o.freq);
    if (o.input == "-") return parse_panel(std::cin, columns, freq);
    if (!std::filesystem::exists(o.input)) throw Error(ErrorCategory::config, "input file not found: " + o.input);
    return parse_panel(std::filesystem::path(o.input), columns, freq);
}

int horizon(const Options& o, const SeriesPanel& panel) { return o.h > 0 ? o.h : panel.frequency().season_length; }

std::vector<models::ForecasterPtr> load_models(const Options& o) {
    std::vector<models::ForecasterPtr> out;
    for (const auto& spec : adapters::parse_model_list(o.models)) out.push_back(adapters::make_forecaster(spec));
    return out;
}

/// Writes to --output (or `out`) through a callback.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fn) {
    if (path.empty()) {
        fn(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCategory::config, "cannot open output file " + path);
    fn(file);
    if (!file) throw Error(ErrorCategory::config, "failed writing " + path);
}

void warn_all(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << "\n";
}

int cmd_features(const Options& o, std::ostream& out) {
    const SeriesPanel panel = load(o);
    const auto report = features::compute_features(panel, o.jobs);
    emit(o.output, out, [&](std::ostream& s) { features::write_feature_csv(s, report); });
    return kExitOk;
}

int cmd_forecast(const Options& o, std::ostream& out, std::ostream& err) {
    const SeriesPanel panel = load(o);
    const auto levels = parse_levels(o.levels);
    const auto models = load_models(o);
    const int h = horizon(o, panel);
    std::vector<ForecastFrame> frames;
    for (const auto& m : models) {
        // Frames sharing one CSV must share levels; quantile-free models get empty cells.
        ForecastFrame f = models::forecast_panel(*m, panel, h, levels, o.jobs);
        f.levels = levels;
        warn_all(f.warnings, err);
        frames.push_back(std::move(f));
    }
    emit(o.output, out, [&](std::ostream& s) { write_forecast_csv(s, frames); });
    return kExitOk;
}

evaluation::CrossValReport run_cv(const Options& o, const SeriesPanel& panel) {
    evaluation::CvOptions cv;
    cv.h = horizon(o, panel);
    cv.n_windows = o.windows > 0 ? o.windows : 1;
    cv.step = o.step;
    cv.levels = parse_levels(o.levels);
    cv.jobs = o.jobs;
    return evaluation::cross_validate(panel, load_models(o), cv);
}

void warn_failures(const evaluation::CrossValReport& cv, std::ostream& err) {
    std::size_t failed = 0;
    std::string first;
    for (const auto& r : cv.rows) {
        if (!r.failed) continue;
        if (failed++ == 0) first = r.model + " on " + r.id + ": " + r.error;
    }
    if (failed > 0) err << "warning: " << failed << " failed cross-validation rows (first: " << first << ")\n";
}

int cmd_crossval(const Options& o, std::ostream& out, std::ostream& err) {
    const SeriesPanel panel = load(o);
    const auto cv = run_cv(o, panel);
    warn_failures(cv, err);
    emit(o.output, out, [&](std::ostream& s) { evaluation::write_cv_csv(s, cv); });
    return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
    const SeriesPanel panel = load(o);
    const auto cv = run_cv(o, panel);
    warn_failures(cv, err);
    const auto report = evaluation::aggregate_leaderboard(cv, panel);
    emit(o.output, out, [&](std::ostream& s) { evaluation::write_eval_csv(s, report); });
    return kExitOk;
}

int cmd_agent(const Options& o, std::ostream& out, std::ostream& err) {
    agent::AgentConfig config;
    config.mode = agent::parse_mode(o.mode);
    config.budget = o.budget;
    config.n_windows = o.windows > 0 ? o.windows : 2;
    config.step = o.step;
    config.levels = parse_levels(o.levels);
    config.jobs = o.jobs;

    std::optional<agent::LlmSession> llm;
    if (config.mode == agent::AgentMode::llm) {
        if (o.llm.empty()) throw Error(ErrorCategory::usage, "--mode llm requires --llm provider:model");
        llm = agent::LlmSession{
            agent::LLMConfig::parse(o.llm, o.endpoint.empty() ? std::nullopt : std::optional<std::string>(o.endpoint),
                                    o.credential_env.empty() ? std::nullopt
                                                             : std::optional<std::string>(o.credential_env)),
            adapters::default_transport()};
    }
    const SeriesPanel panel = load(o);
    const std::optional<int> h = o.h > 0 ? std::optional<int>(o.h) : std::nullopt;
    const agent::AgentResult result = agent::run_agent(panel, o.query, h, config, llm);

    emit(o.output, out, [&](std::ostream& s) { write_forecast_csv(s, {result.forecast}); });
    auto write_report = [&](std::ostream& s) {
        s << "selected: " << result.selected << "\n\n";
        s << "explanation:\n" << result.explanation << "\n\n";
        s << "answer:\n" << result.user_query_response << "\n\n";
        s << "trace:\n";
        for (const auto& t : result.trace) s << "  " << t.step << ": " << t.detail << "\n";
    };
    if (o.report.empty()) {
        write_report(err);
    } else {
        std::ofstream file(o.report, std::ios::binary);
        if (!file) throw Error(ErrorCategory::config, "cannot open report file " + o.report);
        write_report(file);
    }
    return kExitOk;
}

int cmd_serve_stub(const Options& o, std::ostream& err) {
    // Block the termination signals before the server threads start so only sigwait sees them.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    adapters::StubBehavior behavior;
    behavior.alias = o.model;
    auto server = adapters::serve_stub(o.bind, behavior);
    err << "serving " << o.model << " on " << server->base_url() << " (POST /forecast, GET /health)" << std::endl;
    int sig = 0;
    sigwait(&set, &sig);
    server->stop();
    pthread_sigmask(SIG_UNBLOCK, &set, nullptr);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"tsagent: time-series forecasting agent and unified forecaster", "tsagent"};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", o.input, "long-format CSV (unique_id, ds, y); '-' reads stdin")->required();
        sub->add_option("--output", o.output, "output CSV path (default: stdout)");
        sub->add_option("--freq", o.freq, "frequency override: Y, Q, M, W, D or H (default: inferred)");
        sub->add_option("--id-col", o.id_col, "series id column")->capture_default_str();
        sub->add_option("--time-col", o.time_col, "timestamp column")->capture_default_str();
        sub->add_option("--value-col", o.value_col, "value column")->capture_default_str();
        sub->add_option("--jobs", o.jobs, "worker threads (default: available parallelism)");
    };
    auto add_model_opts = [&](CLI::App* sub) {
        sub->add_option("--models", o.models,
                        "comma list of model specs: builtin alias, adapter:<url>, median_ensemble:a+b")
            ->capture_default_str();
        sub->add_option("--h", o.h, "forecast horizon (default: season length)")->check(CLI::PositiveNumber);
        sub->add_option("--levels", o.levels, "comma list of quantile levels, or 'none'")->capture_default_str();
    };
    auto add_cv_opts = [&](CLI::App* sub) {
        sub->add_option("--windows", o.windows, "rolling windows (default: 1)")->check(CLI::PositiveNumber);
        sub->add_option("--step", o.step, "cutoff step (default: h)")->check(CLI::PositiveNumber);
    };

    auto* features_cmd = app.add_subcommand("features", "per-series diagnostics");
    add_input(features_cmd);

    auto* forecast_cmd = app.add_subcommand("forecast", "forecast with the given models");
    add_input(forecast_cmd);
    add_model_opts(forecast_cmd);

    auto* crossval_cmd = app.add_subcommand("crossval", "rolling-origin cross-validation rows");
    add_input(crossval_cmd);
    add_model_opts(crossval_cmd);
    add_cv_opts(crossval_cmd);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "cross-validate and print the leaderboard");
    add_input(evaluate_cmd);
    add_model_opts(evaluate_cmd);
    add_cv_opts(evaluate_cmd);

    auto* agent_cmd = app.add_subcommand("agent", "features, candidates, CV, selection, forecast and answer");
    add_input(agent_cmd);
    agent_cmd->add_option("--h", o.h, "forecast horizon (default: season length)")->check(CLI::PositiveNumber);
    agent_cmd->add_option("--levels", o.levels, "comma list of quantile levels, or 'none'")->capture_default_str();
    agent_cmd->add_option("--windows", o.windows, "rolling windows (default: 2)")->check(CLI::PositiveNumber);
    agent_cmd->add_option("--step", o.step, "cutoff step (default: h)")->check(CLI::PositiveNumber);
    agent_cmd->add_option("--budget", o.budget, "max candidates to cross-validate")->capture_default_str()->check(
        CLI::PositiveNumber);
    agent_cmd->add_option("--mode", o.mode, "deterministic or llm")
        ->capture_default_str()
        ->check(CLI::IsMember({"deterministic", "llm"}));
    agent_cmd->add_option("--query", o.query, "question about the forecast");
    agent_cmd->add_option("--report", o.report, "explanation and answer path (default: stderr)");
    agent_cmd->add_option("--llm", o.llm, "provider:model, e.g. openai:gpt-4o (llm mode)");
    agent_cmd->add_option("--endpoint", o.endpoint, "chat-completions base URL (default per provider)");
    agent_cmd->add_option("--credential-env", o.credential_env,
                          "name of the environment variable holding the API key (default per provider)");

    auto* stub_cmd = app.add_subcommand("serve-stub", "serve a builtin model over the adapter protocol");
    stub_cmd->add_option("--bind", o.bind, "host:port")->capture_default_str();
    stub_cmd->add_option("--model", o.model, "builtin alias to mirror")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (o.jobs > 0) set_default_jobs(o.jobs);
        if (*features_cmd) return cmd_features(o, out);
        if (*forecast_cmd) return cmd_forecast(o, out, err);
        if (*crossval_cmd) return cmd_crossval(o, out, err);
        if (*evaluate_cmd) return cmd_evaluate(o, out, err);
        if (*agent_cmd) return cmd_agent(o, out, err);
        if (*stub_cmd) return cmd_serve_stub(o, err);
    } catch (const Error& e) {
        err << "error: " << to_string(e.category()) << ": " << e.what() << "\n";
        return e.category() == ErrorCategory::usage ? kExitUsage : kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return kExitRuntime;
    }
    err << "error: usage: no subcommand\n" << app.help();
    return kExitUsage;
}

}  // namespace tsagent::cli
