// shiftlab: batch runner for density sweeps, criterion reports, constructions
// and verification suites. Exit codes: 0 ok, 1 validation, 2 runtime or
// horizon exhaustion, 3 verification failure.
#include "shiftlab/cli.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw shiftlab::Error(shiftlab::ErrorKind::InvalidArgument, "cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char **argv) {
    using namespace shiftlab;
    CLI::App app{"shiftlab: weighted backward shift laboratory"};
    app.require_subcommand(1, 1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string config_path, out_dir = "shiftlab-out", format = "csv";
    std::optional<Index> horizon;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "config file (key = value lines)");
    app.add_option("--horizon", horizon, "override the horizon key");
    app.add_option("--seed", seed, "seed for randomized suites and points");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--format", format, "tabular output format")->check(CLI::IsMember({"csv", "json"}));
    for (const char *name : {"density", "criterion", "construct", "verify"}) app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kValidation;
    }

    try {
        cli::Options opt;
        opt.command = app.get_subcommands().front()->get_name();
        if (!config_path.empty()) opt.config = dsl::Config::parse(read_file(config_path));
        opt.horizon = horizon;
        opt.seed = seed;
        opt.format = format;
        opt.threads = cli::thread_budget();
        const auto res = cli::run(opt);
        cli::write_outputs(res, out_dir);
        const auto &results = res.manifest["results"];
        std::cout << opt.command << ": " << (res.exit == 0 ? "ok" : "verification failed")
                  << (results.contains("status") ? " (" + results["status"].get<std::string>() + ")" : "")
                  << ", manifest " << (std::filesystem::path(out_dir) / "manifest.json").string() << "\n";
        return res.exit;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code_for(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kRuntime;
    }
}
