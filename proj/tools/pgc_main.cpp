#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pgc/harness/acceptance.hpp"
#include "pgc/harness/analyze.hpp"
#include "pgc/harness/generators.hpp"

using namespace pgc;
using namespace pgc::harness;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::SchemaError, path + ": cannot open");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "cannot write " << out << "\n";
        return 1;
    }
    f << text;
    return 0;
}

int report(const AnalyzeResult& r, const std::string& out, const std::string& format) {
    if (r.certificate.is_null()) {
        std::cerr << "error: " << r.error << "\n";
        return r.exit_code;
    }
    const std::string text = format == "text" ? to_text(r.certificate) : dump(r.certificate);
    if (emit(text, out) != 0) return 1;
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pgc: bimodule quantum channel certification"};
    app.require_subcommand(1);

    std::string instance, out, format = "json";
    std::optional<double> tol_rank, tol_phase, tol_cp;
    std::optional<std::uint64_t> seed;
    bool force = false;

    auto* analyze = app.add_subcommand("analyze", "certify the channel described by an instance file");
    analyze->add_option("instance", instance, "instance JSON")->required();
    analyze->add_option("--out", out, "certificate path (default stdout)");
    analyze->add_option("--tol-rank", tol_rank);
    analyze->add_option("--tol-phase", tol_phase);
    analyze->add_option("--tol-cp", tol_cp);
    analyze->add_option("--seed", seed);
    analyze->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
    analyze->add_flag("--force", force, "ignore the desk-scale guard");

    auto* qfa = app.add_subcommand("qfa-check", "run the Fourier-side engine on y of the channel");
    qfa->add_option("instance", instance, "instance JSON")->required();
    qfa->add_option("--out", out);
    qfa->add_option("--seed", seed);
    qfa->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
    qfa->add_flag("--force", force);

    std::string family;
    GeneratorParams gp;
    auto* gen = app.add_subcommand("generate", "write a built-in instance");
    gen->add_option("family", family, "generator family")->required()->check(CLI::IsMember(generator_families()));
    gen->add_option("--n", gp.n);
    gen->add_option("--t", gp.t);
    gen->add_option("--seed", gp.seed);
    gen->add_option("--out", out);

    AcceptanceOptions ao;
    std::string only;
    auto* self = app.add_subcommand("selftest", "run the acceptance suite");
    self->add_option("--tol-scale", ao.tol_scale, "multiply every tolerance");
    self->add_option("--criteria", only, "comma-separated subset, e.g. 1,5,7");
    self->add_flag("--timing", ao.timing, "append wall-clock seconds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze || *qfa) {
            InstanceSpec spec = parse_instance_text(read_file(instance));
            AnalyzeOptions opt{tol_rank, tol_phase, tol_cp, seed, force};
            return report(*analyze ? run_analyze(spec, opt) : run_qfa_check(spec, opt), out, format);
        }
        if (*gen) {
            return emit(serialize(generate(family, gp)), out);
        }
        if (*self) {
            std::stringstream ss(only);
            for (std::string tok; std::getline(ss, tok, ',');)
                if (!tok.empty()) ao.criteria.push_back(std::stoi(tok));
            auto results = run_acceptance(ao);
            std::cout << format_report(results, ao.timing);
            return all_pass(results) ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    }
    return 0;
}
