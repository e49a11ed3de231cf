// one line per criterion; exit 0 iff every selected criterion passes
#include <iostream>

#include <CLI11.hpp>

#include "pgc/harness/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    pgc::harness::AcceptanceOptions opt;
    app.add_option("--criterion,-c", opt.criteria, "criterion id (repeatable); default all")
        ->check(CLI::Range(1, pgc::harness::kCriteria));
    app.add_option("--tol-scale", opt.tol_scale);
    app.add_flag("--timing", opt.timing);
    CLI11_PARSE(app, argc, argv);
    auto results = pgc::harness::run_acceptance(opt);
    std::cout << pgc::harness::format_report(results, opt.timing);
    return pgc::harness::all_pass(results) ? 0 : 1;
}
