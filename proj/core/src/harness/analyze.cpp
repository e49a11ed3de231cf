#include "pgc/harness/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pgc/spectral.hpp"

namespace pgc::harness {

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::SchemaError:
        case ErrorKind::UnknownGenerator:
        case ErrorKind::DimensionMismatch:
            return kSchema;
        case ErrorKind::NotBimodular:
        case ErrorKind::TraceNotMarkov:
        case ErrorKind::InvalidEmbedding:
        case ErrorKind::TooLarge:
        case ErrorKind::ExceedsDeskScale:
        case ErrorKind::NotCP:
        case ErrorKind::PreconditionFailed:
        case ErrorKind::NonNormalizedTrace:
        case ErrorKind::ZeroRow:
        case ErrorKind::DisconnectedDiagram:
        case ErrorKind::NotNormalized:
        case ErrorKind::SingularUnit:
        case ErrorKind::EmptyAlgebra:
            return kRejected;
        case ErrorKind::OracleDisagreement:
        case ErrorKind::RouteDisagreement:
            return kInternal;
        default:
            return kTheoremFailure;
    }
}

namespace {

// thresholds used by the verdicts, echoed next to each residual
double tolerance_for(const std::string& name, const Tolerances& tol) {
    static const std::map<std::string, double> fixed = {
        {"u_unitarity", 1e-9},  {"u_eigen", 1e-9},         {"u_subspace", 1e-8},  {"u_group_law", 1e-8},
        {"power_span", 1e-7},   {"root_fit", 1e-7},        {"group_closure", 1e-7}, {"cesaro_vs_riesz", 1e-6},
        {"qfa_cesaro_vs_riesz", 1e-6}, {"qfa_shift_law", 1e-7}, {"qfa_group_law", 1e-7},
        {"qfa_sum_biprojection", 1e-7}, {"qfa_sum_vs_riesz_xxstar", 1e-7}, {"qfa_root_fit", 1e-7},
    };
    auto it = fixed.find(name);
    if (it != fixed.end()) return it->second;
    if (name == "unital") return tol.residual;
    return 1e-8;
}

json encode_element(const Element& x) {
    json b = json::array();
    for (const auto& m : x.blocks) b.push_back(encode(m));
    return b;
}

json encode_list(std::vector<cplx> v) {
    // order by phase, then modulus, so reruns print identical lists
    auto key = [](cplx z) {
        double a = std::arg(z);
        if (a < -M_PI + 1e-9) a += 2 * M_PI;
        return std::make_pair(std::round(a * 1e9), std::abs(z));
    };
    std::stable_sort(v.begin(), v.end(), [&](cplx a, cplx b) { return key(a) < key(b); });
    json out = json::array();
    for (cplx z : v) out.push_back(encode(z));
    return out;
}

Tolerances merged(const InstanceSpec& s, const AnalyzeOptions& o) {
    Tolerances t = s.tol;
    if (o.tol_rank) t.rank = *o.tol_rank;
    if (o.tol_phase) t.phase = *o.tol_phase;
    if (o.tol_cp) t.cp = *o.tol_cp;
    return t;
}

json tolerances_json(const Tolerances& t) {
    return {{"rank", t.rank}, {"phase", t.phase}, {"cp", t.cp}, {"residual", t.residual}};
}

struct Table {
    json residuals = json::object();
    json verdicts = json::object();
    const Tolerances* tol;
    void put(const std::string& name, double v) {
        residuals[name] = {{"value", v}, {"tol", tolerance_for(name, *tol)}};
    }
    void verdict(const std::string& name, bool ok) { verdicts[name] = ok ? "pass" : "fail"; }
};

bool any_failure(const json& verdicts) {
    for (auto it = verdicts.begin(); it != verdicts.end(); ++it)
        if (it->get<std::string>() == "fail") return true;
    return false;
}

bool residuals_within(const json& residuals) {
    for (auto it = residuals.begin(); it != residuals.end(); ++it) {
        const double v = (*it)["value"].get<double>();
        if (!(v <= (*it)["tol"].get<double>())) return false;
    }
    return true;
}

json header(const InstanceSpec& spec, std::uint64_t seed, const Tolerances& tol, const Tower& t) {
    json c;
    c["schema_version"] = kSchemaVersion;
    c["tool_version"] = kToolVersion;
    c["instance_digest"] = digest(spec);
    c["seed"] = seed;
    c["tolerances"] = tolerances_json(tol);
    c["index"] = {{"mu", t.mu()}, {"lambda", t.lambda()}};
    return c;
}

// engine checks on a plus-side element; fills the table and returns the section
json qfa_engine(const Qfa& q, const TwoBox& y, Table& tab) {
    json s;
    s["normalization"] = {{"norm_inf", q.norm_inf(y)}};
    try {
        auto pd = q.peripheral_decomposition(y, true);
        s["peripheral"] = {{"m", pd.m}, {"radius", pd.radius}, {"eigenvalues", encode_list(pd.eigenvalues)},
                           {"q1_biprojection", pd.q1_biprojection}, {"sum_biprojection", pd.sum_biprojection}};
        for (const auto& [k, v] : pd.residuals) tab.put("qfa_" + k, v);
        tab.verdict("qfa_q1_biprojection", pd.q1_biprojection);
        tab.verdict("qfa_sum_biprojection", pd.sum_biprojection);
    } catch (const Error& e) {
        s["peripheral"] = nullptr;
        s["peripheral_skipped"] = e.what();
        tab.verdicts["qfa_peripheral"] = std::string("skipped: ") + to_string(e.kind());
    }
    return s;
}

AnalyzeResult fail_with(const Error& e) {
    AnalyzeResult r;
    r.exit_code = exit_code_for(e.kind());
    r.error = e.what();
    return r;
}

void compare_expected(const InstanceSpec& spec, const json& cert, Table& tab) {
    const json& ex = spec.expected;
    if (!ex.is_object()) return;
    if (ex.contains("phase_group_order"))
        tab.verdict("expected_phase_group_order", ex["phase_group_order"] == cert["phase_group"]["order"]);
    if (ex.contains("fixed_algebra") && ex["fixed_algebra"] == "N")
        tab.verdict("expected_fixed_algebra", cert["fixed_algebra"]["equals_N"].get<bool>());
    if (ex.contains("fixed_dimension"))
        tab.verdict("expected_fixed_dimension", ex["fixed_dimension"] == cert["fixed_algebra"]["dimension"]);
    if (ex.contains("relatively_irreducible"))
        tab.verdict("expected_relative_irreducibility",
                    ex["relatively_irreducible"] == cert["relative_irreducibility"]["flag"]);
    if (ex.contains("unitaries")) tab.verdict("expected_unitaries", ex["unitaries"] == cert.contains("unitaries"));
    if (ex.contains("cp")) tab.verdict("expected_cp", ex["cp"] == cert["flags"]["cp"]);
    if (ex.contains("unital")) tab.verdict("expected_unital", ex["unital"] == cert["flags"]["unital"]);
}

}  // namespace

AnalyzeResult run_analyze(const InstanceSpec& spec, const AnalyzeOptions& opt) {
    const Tolerances tol = merged(spec, opt);
    const std::uint64_t seed = opt.seed.value_or(spec.seed);
    std::optional<Built> built;
    try {
        built.emplace(build(spec, opt.force));
    } catch (const Error& e) {
        return fail_with(e);
    }
    Built& b = *built;
    const Tower& t = *b.tower;
    const Channel& phi = *b.channel;
    const Qfa* q = b.qfa ? &*b.qfa : nullptr;
    Table tab{.tol = &tol};
    json c = header(spec, seed, tol, t);
    try {
        const bool cp = phi.is_cp(tol.cp);
        const bool unital = phi.is_unital(tol.residual);
        c["flags"] = {{"cp", cp}, {"unital", unital}, {"bimodular", phi.bimodularity_residual() < 1e-8},
                      {"markov", t.markov()}, {"trace_preserving", phi.is_trace_preserving(tol.residual)}};
        tab.put("bimodularity", phi.bimodularity_residual());
        tab.put("y_in_relative_commutant", phi.y_residual());
        tab.put("unital", phi.unital_residual());
        tab.verdict("cp", cp);
        tab.verdict("unital", unital);
        if (!cp) throw Error(ErrorKind::NotCP, "the map is not completely positive");
        if (!unital) throw Error(ErrorKind::PreconditionFailed, "the map is not unital");

        CertifyOptions co;
        co.seed = seed;
        co.tol = tol;
        const auto pg = certify_phase_group(phi, q, co);

        c["spectrum"] = {{"radius", pg.spectrum.radius},
                         {"action", encode_list(pg.spectrum.action_eigenvalues)},
                         {"y", encode_list(pg.spectrum.y_eigenvalues)},
                         {"peripheral", encode_list(pg.spectrum.peripheral)},
                         {"route_residual", pg.spectrum.route_residual}};
        json eig = json::array();
        for (int j = 0; j < pg.m; ++j) eig.push_back(encode(std::polar(1.0, 2 * M_PI * j / pg.m)));
        json dims = json::array();
        for (const auto& e : pg.eigenspaces) dims.push_back(e.basis.cols());
        c["phase_group"] = {{"order", pg.m},
                            {"generator_phase", 2 * M_PI / pg.m},
                            {"eigenvalues", eig},
                            {"eigenspace_dimensions", dims}};
        json rel = {{"flag", pg.relirr.flag},
                    {"mode", pg.relirr.mode},
                    {"criterion_i_available", pg.relirr.criterion_i_available},
                    {"criterion_i", pg.relirr.flag_i},
                    {"criterion_iii", pg.relirr.flag_iii},
                    {"consistent", pg.relirr.consistent},
                    {"saturation_steps", pg.relirr.d}};
        if (pg.relirr.witness) rel["witness"] = encode_element(*pg.relirr.witness);
        c["relative_irreducibility"] = rel;
        c["fixed_algebra"] = {{"dimension", pg.fixed.basis.cols()},
                              {"is_factor", pg.fixed_is_factor},
                              {"equals_N", pg.fixed_equals_N}};
        c["invariant_state"] = {{"faithful", pg.state.faithful}, {"min_eig", pg.state.min_eig},
                                {"density", encode_element(pg.state.h)}};
        if (pg.unitary_skipped.empty()) {
            json us = json::array();
            for (size_t j = 0; j < pg.unitaries.size(); ++j)
                us.push_back({{"alpha", encode(std::polar(1.0, 2 * M_PI * static_cast<double>(j) / pg.m))},
                              {"u", encode_element(pg.unitaries[j].u)},
                              {"patched", pg.unitaries[j].patched}});
            c["unitaries"] = us;
        } else {
            c["unitaries_skipped"] = pg.unitary_skipped;
        }
        for (const auto& [k, v] : pg.residuals)
            if (k != "fixed_vs_N") tab.put(k, v);
        c["fixed_algebra"]["distance_to_N"] = pg.residuals.at("fixed_vs_N");
        for (const auto& [k, v] : pg.verdicts) tab.verdicts[k] = v;

        json qs = {{"available", q != nullptr}};
        if (q) {
            qs["calibration"] = q->calibration();
            tab.put("fourier_isometry", q->isometry_residual());
            const double hr = phi.hat_residual();
            tab.put("multiplier_relation", hr);
            TwoBox muFy = q->fourier(phi.y());
            muFy.x *= cplx(t.mu());
            const double agree = (phi.hat().x - muFy.x).norm_inf() / std::max(1.0, phi.hat().x.norm_inf());
            tab.put("hat_vs_mu_F_y", agree);
            tab.verdict("multiplier_agrees_with_transform", agree < 1e-8);
            json eng = qfa_engine(*q, phi.y(), tab);
            qs["engine"] = eng;
            if (eng["peripheral"].is_object())
                tab.verdict("qfa_phase_group_agrees", eng["peripheral"]["m"].get<int>() == pg.m);
        } else {
            qs["reason"] = b.qfa_reason;
        }
        c["qfa"] = qs;
    } catch (const Error& e) {
        return fail_with(e);
    }
    compare_expected(spec, c, tab);
    tab.verdict("residuals_within_tolerance", residuals_within(tab.residuals));
    c["residuals"] = tab.residuals;
    c["verdicts"] = tab.verdicts;
    AnalyzeResult r;
    r.certificate = c;
    r.exit_code = any_failure(tab.verdicts) ? kTheoremFailure : kPass;
    return r;
}

AnalyzeResult run_qfa_check(const InstanceSpec& spec, const AnalyzeOptions& opt) {
    const Tolerances tol = merged(spec, opt);
    const std::uint64_t seed = opt.seed.value_or(spec.seed);
    std::optional<Built> built;
    try {
        built.emplace(build(spec, opt.force));
    } catch (const Error& e) {
        return fail_with(e);
    }
    Built& b = *built;
    if (!b.qfa) return fail_with(Error(ErrorKind::FourierNotIsometry, b.qfa_reason));
    const Qfa& q = *b.qfa;
    Table tab{.tol = &tol};
    json c = header(spec, seed, tol, *b.tower);
    try {
        const TwoBox& y = b.channel->y();
        c["calibration"] = q.calibration();
        tab.put("fourier_isometry", q.isometry_residual());
        const bool fpos = q.f_positive(y, tol.cp);
        c["f_positive"] = fpos;
        tab.verdict("f_positive", fpos);
        // ||y||_inf = tr_{2,-}(F(y)) / delta for normalized F-positive y
        const double nrm = q.norm_inf(y);
        const double via_hat = q.tr2(q.fourier(y)).real() / q.delta();
        tab.put("normalization", std::abs(nrm - via_hat));
        c["norm_inf"] = nrm;
        c["engine"] = qfa_engine(q, y, tab);
        if (c["engine"]["peripheral"].is_object()) {
            try {
                auto tb = q.two_biprojection_check(y);
                c["two_biprojection"] = {{"m", tb.m}, {"m_engine", tb.m_engine},
                                         {"conjugates_agree", tb.conjugates_agree}};
                tab.put("two_biprojection", tb.max_residual());
            } catch (const Error& e) {
                c["two_biprojection"] = nullptr;
                tab.verdicts["two_biprojection"] = std::string("skipped: ") + to_string(e.kind());
            }
        }
    } catch (const Error& e) {
        return fail_with(e);
    }
    tab.verdict("residuals_within_tolerance", residuals_within(tab.residuals));
    c["residuals"] = tab.residuals;
    c["verdicts"] = tab.verdicts;
    AnalyzeResult r;
    r.certificate = c;
    r.exit_code = any_failure(tab.verdicts) ? kTheoremFailure : kPass;
    return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {
void flatten(const json& j, const std::string& path, std::ostringstream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (j.is_array() && !j.empty() && (j[0].is_object() || (j[0].is_array() && j[0].size() != 2))) {
        for (size_t k = 0; k < j.size(); ++k) flatten(j[k], path + "[" + std::to_string(k) + "]", out);
    } else {
        out << path << ": " << j.dump() << "\n";
    }
}
}  // namespace

std::string to_text(const json& j) {
    std::ostringstream out;
    flatten(j, "", out);
    return out.str();
}

}  // namespace pgc::harness
