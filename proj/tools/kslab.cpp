#include "kslab/config.hpp"
#include "kslab/io.hpp"
#include "kslab/runner.hpp"

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOpts& opts)
{
    sub->add_option("--config", opts.config_path, "configuration file (section.key = value lines)");
    sub->add_option("--set", opts.overrides, "override a key, e.g. --set run.dt=1e-4")
        ->take_all();
}

int dispatch(const std::string& action, const CommonOpts& opts)
{
    kslab::ConfigMap cfg;
    try {
        if (!opts.config_path.empty()) cfg = kslab::ConfigMap::parse_file(opts.config_path);
        for (const std::string& ov : opts.overrides) {
            const auto eq = ov.find('=');
            if (eq == std::string::npos)
                throw kslab::ConfigError("--set expects key=value, got '" + ov + "'");
            cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kslab::kExitConfigError;
    }
    return kslab::run_action(action, std::move(cfg));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{std::string("kslab - Kuramoto-Sivashinsky-type PDE laboratory (") +
                 kslab::kTOOL_VERSION + ")"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"run", "integrate a scalar PDE family and write monitor CSVs"},
        {"flow", "integrate the incompressible NS/Burnett flow"},
        {"kernel", "compute a polyharmonic heat kernel and its decay fit"},
        {"certify", "search (lambda, L) for a blow-up certificate"},
        {"volterra", "solve the weighted Gronwall equation and check the supersolution"},
        {"rescale", "evaluate scaling laws / rescale a snapshot"},
        {"sweep", "expand sweep.<key> axes and run the Cartesian product"},
        {"check", "run the acceptance suite"},
    };
    std::vector<std::pair<std::string, CommonOpts>> pending;
    pending.reserve(8);
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        pending.emplace_back(s.name, CommonOpts{});
        add_common(sub, pending.back().second);
        // convenience aliases used in the docs: kernel --m/--dim
        if (std::string(s.name) == "kernel") {
            auto& opts = pending.back().second;
            sub->add_option_function<int>(
                "--m", [&opts](const int& v) { opts.overrides.push_back("kernel.m=" + std::to_string(v)); },
                "diffusion order m");
            sub->add_option_function<int>(
                "--dim",
                [&opts](const int& v) { opts.overrides.push_back("kernel.dim=" + std::to_string(v)); },
                "space dimension");
        }
        if (std::string(s.name) == "certify") {
            auto& opts = pending.back().second;
            sub->add_option_function<std::string>(
                "--case",
                [&opts](const std::string& v) { opts.overrides.push_back("certify.case=" + v); },
                "closed-form mode: strict, zero or negative");
        }
        if (std::string(s.name) == "check") {
            auto& opts = pending.back().second;
            sub->add_option_function<std::string>(
                "--only",
                [&opts](const std::string& v) { opts.overrides.push_back("check.only=" + v); },
                "comma-separated criterion numbers");
        }
    }

    CLI11_PARSE(app, argc, argv);

    for (auto& [name, opts] : pending)
        if (app.get_subcommand(name)->parsed()) return dispatch(name, opts);
    std::cerr << "no subcommand given\n";
    return kslab::kExitConfigError;
}
