#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "sensilab/cli_parse.hpp"
#include "sensilab/run.hpp"

int main(int argc, char** argv) {
    using namespace sensilab;
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        cli::RunConfig cfg = cli::parse_cli(args);
        int rc = cli::run(cfg);
        std::printf("wrote %s/run_summary.json\n", cfg.output_dir.string().c_str());
        return rc;
    } catch (const cli::ConfigError& e) {
        std::fprintf(stderr, "sensilab: %s\n", e.what());
        return 2;
    } catch (const cli::ContractError& e) {
        std::fprintf(stderr, "sensilab: numerical contract failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sensilab: %s\n", e.what());
        return 1;
    }
}
