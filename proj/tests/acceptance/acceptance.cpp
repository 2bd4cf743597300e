#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "ngrq/checks.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria; one PASS/FAIL line per criterion"};
    int only = 0;
    std::uint64_t seed = 0;
    bool verbose = false;
    app.add_option("--criterion", only, "Run a single criterion (1-11); default all")->check(CLI::Range(0, ngrq::criterion_count));
    app.add_option("--seed", seed, "Offset for the random samples");
    app.add_flag("-v,--verbose", verbose, "Print every sub-check");
    CLI11_PARSE(app, argc, argv);

    ngrq::CheckOptions opt;
    opt.seed = seed;
    bool all = true;
    for (int id = 1; id <= ngrq::criterion_count; ++id) {
        if (only != 0 && id != only) continue;
        const auto r = ngrq::run_criterion(id, opt);
        all = all && r.pass();
        std::printf("%s criterion %d: %s (%.2f s)\n", r.pass() ? "PASS" : "FAIL", id, r.title.c_str(), r.seconds);
        for (const auto& l : r.lines)
            if (verbose || !l.pass) std::printf("    [%s] %s: %s\n", l.pass ? "ok" : "FAIL", l.name.c_str(), l.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
