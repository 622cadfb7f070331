// splab: experiment runner.
//
//   splab <kernel|scaling|remainder|randomwave|loopset> --config FILE --out DIR
//         [--threads N] [--seed S]
//
// Exit status: 0 success, 2 validation error, 3 numerical budget exceeded,
// 1 anything else. Errors print one line: "splab: error=<kind> message=<json string>".

#include "runner/experiments.hpp"

#include "splab/errors.hpp"
#include "splab/io.hpp"
#include "splab/version.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int report(const char* kind, const std::string& message, int code)
{
    std::cerr << "splab: error=" << kind << " message=" << splab::json_string(message) << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral projector kernel experiments"};
    app.set_version_flag("--version", std::string(splab::kVersion));
    app.require_subcommand(1);
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
    app.add_option("--threads", threads, "Worker thread cap (0 = hardware concurrency)")
        ->check(CLI::Range(0u, 4096u));
    app.add_option("--seed", seed, "Override experiment.seed");

    std::string config;
    std::string out;
    for (const auto& kind : splab::runner::experiment_kinds()) {
        auto* sub = app.add_subcommand(kind, "Run the " + kind + " experiment");
        sub->add_option("--config", config, "INI config file or manifest.json")->required();
        sub->add_option("--out", out, "Output directory")->required();
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("usage", e.what(), 2);
    }

    const std::string kind = app.get_subcommands().front()->get_name();
    try {
        auto cfg = splab::runner::Config::load(config);
        const auto result = splab::runner::run_experiment(kind, std::move(cfg), out, seed, threads);
        for (const auto& f : result.outputs) {
            std::cout << (std::filesystem::path(out) / f).string() << '\n';
        }
        return 0;
    } catch (const splab::BudgetError& e) {
        return report("budget", e.what(), 3);
    } catch (const splab::ValidationError& e) {
        return report("validation", e.what(), 2);
    } catch (const splab::OrderError& e) {
        return report("order", e.what(), 2);
    } catch (const splab::DomainError& e) {
        return report("domain", e.what(), 2);
    } catch (const splab::DegenerateInputError& e) {
        return report("degenerate", e.what(), 2);
    } catch (const splab::NumericalError& e) {
        return report("numerical", e.what(), 1);
    } catch (const std::exception& e) {
        return report("runtime", e.what(), 1);
    }
}
