#include "pgc/harness/generators.hpp"

#include <cmath>
#include <numbers>

#include "pgc/rng.hpp"

namespace pgc::harness {

namespace {

void need(bool ok, const std::string& msg) {
    if (!ok) throw Error(ErrorKind::PreconditionFailed, "bad params: " + msg);
}

InstanceSpec base(const std::vector<int>& nb, const std::vector<int>& mb, const std::string& form) {
    InstanceSpec s;
    s.N_blocks = nb;
    s.M_blocks = mb;
    s.embedding.form = form;
    s.trace.mode = "markov";
    return s;
}

InstanceSpec diagonal(int n) { return base(std::vector<int>(static_cast<size_t>(n), 1), {n}, "diagonal_in_full"); }

}  // namespace

Mat clock_matrix(int n) {
    Mat d = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    return d;
}

Mat shift_matrix(int n) {
    Mat s = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) s((j + 1) % n, j) = 1.0;
    return s;
}

InstanceSpec ad_unitary(int n) {
    need(n >= 2, "ad_unitary needs n >= 2");
    auto s = diagonal(n);
    s.channel.kind = "kraus";
    s.channel.kraus = {clock_matrix(n)};
    // eigenvalues omega^{j-k} on matrix units e_jk
    s.expected = {{"family", "ad_unitary"}, {"phase_group_order", n}, {"fixed_algebra", "N"},
                  {"fixed_is_factor", false}, {"relatively_irreducible", true}, {"unitaries", true},
                  {"cp", true}, {"unital", true}};
    return s;
}

InstanceSpec expectation_mix(double t, int n) {
    need(n >= 2, "expectation_mix needs n >= 2");
    need(t > 0.0 && t <= 1.0, "expectation_mix needs 0 < t <= 1");
    auto s = diagonal(n);
    s.channel.kind = "generator";
    s.channel.generator = "expectation_mix";
    s.channel.params["t"] = t;
    // spectrum {1} on N, 1 - t off the diagonal
    s.expected = {{"family", "expectation_mix"}, {"phase_group_order", 1}, {"fixed_algebra", "N"},
                  {"relatively_irreducible", true}, {"unitaries", true}, {"cp", true}, {"unital", true}};
    return s;
}

InstanceSpec shift_conjugation(int n) {
    need(n >= 2, "shift_conjugation needs n >= 2");
    auto s = base({1}, {n}, "scalars_in_full");
    s.channel.kind = "kraus";
    s.channel.kraus = {shift_matrix(n)};
    // fixed points are the circulants: abelian, dimension n
    s.expected = {{"family", "shift_conjugation"}, {"phase_group_order", n}, {"fixed_algebra", "circulant"},
                  {"fixed_dimension", n}, {"fixed_is_factor", false}, {"relatively_irreducible", false},
                  {"unitaries", false}, {"unitary_skip_reason", "fixed algebra not a factor"},
                  {"cp", true}, {"unital", true}};
    return s;
}

InstanceSpec scalars_in_full_expectation(int n) {
    need(n >= 2, "scalars_in_full needs n >= 2");
    auto s = base({1}, {n}, "scalars_in_full");
    s.channel.kind = "generator";
    s.channel.generator = "expectation";
    s.expected = {{"family", "scalars_in_full"}, {"phase_group_order", 1}, {"fixed_algebra", "N"},
                  {"fixed_dimension", 1}, {"fixed_is_factor", true}, {"relatively_irreducible", true},
                  {"unitaries", true}, {"cp", true}, {"unital", true}};
    return s;
}

InstanceSpec random_cpb(int n, std::uint64_t seed) {
    need(n >= 2, "random_cpb needs n >= 2");
    auto s = diagonal(n);
    s.seed = seed;
    Tower t(build_inclusion(s));
    Qfa q(t);
    Rng rng(seed);
    const auto& Pm = q.P(Side::Minus);
    Element h = Pm.random(rng);
    h = h * h.adjoint();
    // positive on the minus side is F-positive after the inverse transform
    Channel phi = Channel::from_y(t, q.transform({Side::Minus, h})).unitalize();
    s.channel.kind = "y_element";
    s.channel.y_blocks = q.to_ambient(phi.y()).blocks;
    s.expected = {{"family", "random_cpb"}, {"cp", true}, {"unital", true}};
    return s;
}

InstanceSpec shift_mixture(int n, double t) {
    need(n >= 2, "shift_mixture needs n >= 2");
    need(t > 0.0 && t < 1.0, "shift_mixture needs 0 < t < 1");
    auto s = base({1}, {n}, "scalars_in_full");
    s.channel.kind = "kraus";
    const Mat S = shift_matrix(n);
    s.channel.kraus = {std::sqrt(1.0 - t) * S, std::sqrt(t) * S * clock_matrix(n)};
    s.channel.params["t"] = t;
    // irreducible; peripheral eigenvectors are the powers of the clock matrix
    s.expected = {{"family", "shift_mixture"}, {"phase_group_order", n}, {"fixed_algebra", "N"},
                  {"fixed_dimension", 1}, {"peripheral_eigenspace_dimension", 1}, {"relatively_irreducible", true},
                  {"unitaries", true}, {"cp", true}, {"unital", true}};
    return s;
}

const std::vector<std::string>& generator_families() {
    static const std::vector<std::string> f = {"ad_unitary",      "expectation_mix", "shift_conjugation",
                                               "scalars_in_full", "random_cpb",      "shift_mixture"};
    return f;
}

InstanceSpec generate(const std::string& family, const GeneratorParams& p) {
    InstanceSpec s;
    if (family == "ad_unitary") s = ad_unitary(p.n);
    else if (family == "expectation_mix") s = expectation_mix(p.t, p.n);
    else if (family == "shift_conjugation") s = shift_conjugation(p.n);
    else if (family == "scalars_in_full") s = scalars_in_full_expectation(p.n);
    else if (family == "random_cpb") s = random_cpb(p.n, p.seed);
    else if (family == "shift_mixture") s = shift_mixture(p.n, p.t);
    else throw Error(ErrorKind::UnknownGenerator, "unknown family '" + family + "'");
    s.seed = p.seed;
    return s;
}

}  // namespace pgc::harness
