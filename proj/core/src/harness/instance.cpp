#include "pgc/harness/instance.hpp"

#include <cstdlib>
#include <cstdio>

namespace pgc::harness {

namespace {

// collects every schema problem before throwing
struct Errors {
    std::vector<std::string> list;
    void add(const std::string& path, const std::string& msg) { list.push_back(path + ": " + msg); }
    void raise() const {
        if (list.empty()) return;
        std::string all;
        for (const auto& e : list) all += (all.empty() ? "" : "; ") + e;
        throw Error(ErrorKind::SchemaError, all);
    }
};

const json* field(const json& j, const std::string& key, const std::string& path, Errors& err, bool required = true) {
    if (!j.is_object()) {
        err.add(path, "expected an object");
        return nullptr;
    }
    auto it = j.find(key);
    if (it == j.end()) {
        if (required) err.add(path.empty() ? key : path + "." + key, "missing");
        return nullptr;
    }
    return &*it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::vector<int> parse_blocks(const json& j, const std::string& path, Errors& err) {
    std::vector<int> out;
    const json* b = field(j, "blocks", path, err);
    if (!b) return out;
    if (!b->is_array() || b->empty()) {
        err.add(join(path, "blocks"), "expected a non-empty array of block sizes");
        return out;
    }
    for (size_t k = 0; k < b->size(); ++k) {
        const auto& v = (*b)[k];
        if (!v.is_number_integer() || v.get<long>() < 1) {
            err.add(join(path, "blocks") + "[" + std::to_string(k) + "]", "block size must be a positive integer");
            continue;
        }
        out.push_back(v.get<int>());
    }
    return out;
}

std::vector<Mat> parse_matrix_list(const json& j, const std::string& path, Errors& err) {
    std::vector<Mat> out;
    if (!j.is_array()) {
        err.add(path, "expected an array of matrices");
        return out;
    }
    for (size_t k = 0; k < j.size(); ++k) {
        try {
            out.push_back(decode_matrix(j[k], path + "[" + std::to_string(k) + "]"));
        } catch (const Error& e) {
            err.add(path + "[" + std::to_string(k) + "]", e.what());
        }
    }
    return out;
}

int sum(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
}

}  // namespace

json encode(cplx z) { return json::array({z.real(), z.imag()}); }

json encode(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(encode(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

cplx decode_complex(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw Error(ErrorKind::SchemaError, path + ": expected a complex number [re, im]");
}

Mat decode_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw Error(ErrorKind::SchemaError, path + ": expected a non-empty row-major matrix");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw Error(ErrorKind::SchemaError, path + "[" + std::to_string(r) + "]: ragged matrix row");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = decode_complex(row[static_cast<size_t>(c)],
                                     path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return m;
}

InstanceSpec parse_instance(const json& j) {
    Errors err;
    InstanceSpec s;
    if (!j.is_object()) throw Error(ErrorKind::SchemaError, "(root): expected an object");

    if (const json* v = field(j, "schema_version", "", err)) {
        if (!v->is_number_integer() || v->get<int>() != kSchemaVersion)
            err.add("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
    }
    if (const json* n = field(j, "algebra_N", "", err)) s.N_blocks = parse_blocks(*n, "algebra_N", err);
    if (const json* m = field(j, "algebra_M", "", err)) s.M_blocks = parse_blocks(*m, "algebra_M", err);

    if (const json* e = field(j, "embedding", "", err)) {
        if (const json* f = field(*e, "form", "embedding", err)) {
            s.embedding.form = f->is_string() ? f->get<std::string>() : "";
            const auto& form = s.embedding.form;
            if (form == "inclusion_matrix") {
                if (const json* mj = field(*e, "matrix", "embedding", err)) {
                    if (!mj->is_array() || mj->empty() || !(*mj)[0].is_array()) {
                        err.add("embedding.matrix", "expected an integer matrix");
                    } else {
                        const auto r = mj->size(), c = (*mj)[0].size();
                        s.embedding.matrix.resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                        for (size_t a = 0; a < r; ++a) {
                            if (!(*mj)[a].is_array() || (*mj)[a].size() != c) {
                                err.add("embedding.matrix[" + std::to_string(a) + "]", "ragged row");
                                continue;
                            }
                            for (size_t b = 0; b < c; ++b) {
                                const auto& x = (*mj)[a][b];
                                if (!x.is_number_integer() || x.get<long>() < 0)
                                    err.add("embedding.matrix[" + std::to_string(a) + "][" + std::to_string(b) + "]",
                                            "expected a non-negative integer");
                                else
                                    s.embedding.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                                        x.get<int>();
                            }
                        }
                    }
                }
                if (const json* u = field(*e, "unitaries", "embedding", err, false))
                    s.embedding.unitaries = parse_matrix_list(*u, "embedding.unitaries", err);
            } else if (form == "images") {
                if (const json* im = field(*e, "images", "embedding", err)) {
                    if (!im->is_array()) err.add("embedding.images", "expected one list of matrices per N block");
                    else
                        for (size_t i = 0; i < im->size(); ++i)
                            s.embedding.images.push_back(
                                parse_matrix_list((*im)[i], "embedding.images[" + std::to_string(i) + "]", err));
                }
            } else if (form != "scalars_in_full" && form != "diagonal_in_full" && form != "equal") {
                err.add("embedding.form", "unknown form '" + form + "'");
            }
        }
    }

    if (const json* t = field(j, "trace", "", err)) {
        if (const json* m = field(*t, "mode", "trace", err)) {
            s.trace.mode = m->is_string() ? m->get<std::string>() : "";
            if (s.trace.mode == "explicit") {
                if (const json* w = field(*t, "weights_M", "trace", err)) {
                    if (!w->is_array()) err.add("trace.weights_M", "expected an array of numbers");
                    else
                        for (const auto& x : *w) {
                            if (!x.is_number()) err.add("trace.weights_M", "expected numbers");
                            else s.trace.weights_M.push_back(x.get<double>());
                        }
                }
            } else if (s.trace.mode != "markov") {
                err.add("trace.mode", "expected 'markov' or 'explicit'");
            }
        }
    }

    bool unknown_generator = false;
    if (const json* c = field(j, "channel", "", err)) {
        if (const json* k = field(*c, "kind", "channel", err)) {
            s.channel.kind = k->is_string() ? k->get<std::string>() : "";
            if (s.channel.kind == "kraus") {
                if (const json* ops = field(*c, "operators", "channel", err))
                    s.channel.kraus = parse_matrix_list(*ops, "channel.operators", err);
                if (s.channel.kraus.empty()) err.add("channel.operators", "at least one Kraus operator required");
            } else if (s.channel.kind == "y_element") {
                if (const json* b = field(*c, "blocks", "channel", err))
                    s.channel.y_blocks = parse_matrix_list(*b, "channel.blocks", err);
            } else if (s.channel.kind == "generator") {
                if (const json* n = field(*c, "name", "channel", err)) {
                    s.channel.generator = n->is_string() ? n->get<std::string>() : "";
                    const auto& g = s.channel.generator;
                    unknown_generator = g != "identity" && g != "expectation" && g != "expectation_mix";
                }
                if (const json* p = field(*c, "params", "channel", err, false)) {
                    if (!p->is_object()) err.add("channel.params", "expected an object");
                    else
                        for (auto it = p->begin(); it != p->end(); ++it) {
                            if (!it->is_number()) err.add("channel.params." + it.key(), "expected a number");
                            else s.channel.params[it.key()] = it->get<double>();
                        }
                }
            } else {
                err.add("channel.kind", "expected 'kraus', 'y_element' or 'generator'");
            }
        }
    }

    if (const json* t = field(j, "tolerances", "", err, false)) {
        auto num = [&](const char* key, double& out) {
            if (const json* v = field(*t, key, "tolerances", err, false)) {
                if (!v->is_number() || v->get<double>() < 0) err.add(std::string("tolerances.") + key, "expected a non-negative number");
                else out = v->get<double>();
            }
        };
        num("rank", s.tol.rank);
        num("phase", s.tol.phase);
        num("cp", s.tol.cp);
        num("residual", s.tol.residual);
    }
    if (const json* sd = field(j, "seed", "", err, false)) {
        if (sd->is_number_unsigned()) s.seed = sd->get<std::uint64_t>();
        else if (sd->is_number_integer() && sd->get<long long>() >= 0) s.seed = static_cast<std::uint64_t>(sd->get<long long>());
        else err.add("seed", "expected a non-negative 64-bit integer");
    }
    if (const json* ex = field(j, "expected", "", err, false)) s.expected = *ex;

    // cross-field consistency
    if (err.list.empty()) {
        const auto& f = s.embedding.form;
        const int nm = sum(s.M_blocks);
        if (f == "scalars_in_full" && !(s.N_blocks == std::vector<int>{1} && s.M_blocks.size() == 1))
            err.add("embedding.form", "scalars_in_full needs N = [1] and a single M block");
        if (f == "diagonal_in_full" &&
            !(s.M_blocks.size() == 1 && s.N_blocks == std::vector<int>(static_cast<size_t>(nm), 1)))
            err.add("embedding.form", "diagonal_in_full needs N = n blocks of size 1 and M = [n]");
        if (f == "equal" && s.N_blocks != s.M_blocks) err.add("embedding.form", "equal needs identical block lists");
        if (f == "inclusion_matrix" && (s.embedding.matrix.rows() != static_cast<Eigen::Index>(s.N_blocks.size()) ||
                                        s.embedding.matrix.cols() != static_cast<Eigen::Index>(s.M_blocks.size())))
            err.add("embedding.matrix", "shape must be |N blocks| x |M blocks|");
        if (f == "images") {
            if (s.embedding.images.size() != s.N_blocks.size())
                err.add("embedding.images", "one list per N block required");
            for (size_t i = 0; i < s.embedding.images.size() && i < s.N_blocks.size(); ++i) {
                if (static_cast<int>(s.embedding.images[i].size()) != s.N_blocks[i] * s.N_blocks[i])
                    err.add("embedding.images[" + std::to_string(i) + "]", "needs n_i^2 matrix-unit images");
                for (const auto& m : s.embedding.images[i])
                    if (m.rows() != nm || m.cols() != nm)
                        err.add("embedding.images[" + std::to_string(i) + "]", "images must be full matrices on C^|M|");
            }
        }
        if (s.trace.mode == "explicit" && s.trace.weights_M.size() != s.M_blocks.size())
            err.add("trace.weights_M", "one weight per M block required");
        for (size_t k = 0; k < s.channel.kraus.size(); ++k)
            if (s.channel.kraus[k].rows() != nm || s.channel.kraus[k].cols() != nm)
                err.add("channel.operators[" + std::to_string(k) + "]", "Kraus operators act on C^|M|");
    }
    err.raise();
    if (unknown_generator)
        throw Error(ErrorKind::UnknownGenerator, "channel.name: unknown generator '" + s.channel.generator + "'");
    return s;
}

InstanceSpec parse_instance_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SchemaError, std::string("(root): invalid JSON: ") + e.what());
    }
    return parse_instance(j);
}

json to_json(const InstanceSpec& s) {
    json j;
    j["schema_version"] = s.schema_version;
    j["algebra_N"] = {{"blocks", s.N_blocks}};
    j["algebra_M"] = {{"blocks", s.M_blocks}};
    json e = {{"form", s.embedding.form}};
    if (s.embedding.form == "inclusion_matrix") {
        json m = json::array();
        for (Eigen::Index r = 0; r < s.embedding.matrix.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < s.embedding.matrix.cols(); ++c) row.push_back(s.embedding.matrix(r, c));
            m.push_back(row);
        }
        e["matrix"] = m;
        if (!s.embedding.unitaries.empty()) {
            json u = json::array();
            for (const auto& x : s.embedding.unitaries) u.push_back(encode(x));
            e["unitaries"] = u;
        }
    } else if (s.embedding.form == "images") {
        json im = json::array();
        for (const auto& list : s.embedding.images) {
            json l = json::array();
            for (const auto& x : list) l.push_back(encode(x));
            im.push_back(l);
        }
        e["images"] = im;
    }
    j["embedding"] = e;
    json t = {{"mode", s.trace.mode}};
    if (s.trace.mode == "explicit") t["weights_M"] = s.trace.weights_M;
    j["trace"] = t;
    json c = {{"kind", s.channel.kind}};
    if (s.channel.kind == "kraus") {
        json ops = json::array();
        for (const auto& k : s.channel.kraus) ops.push_back(encode(k));
        c["operators"] = ops;
    } else if (s.channel.kind == "y_element") {
        json b = json::array();
        for (const auto& k : s.channel.y_blocks) b.push_back(encode(k));
        c["blocks"] = b;
    } else {
        c["name"] = s.channel.generator;
        c["params"] = json::object();
        for (const auto& [k, v] : s.channel.params) c["params"][k] = v;
    }
    j["channel"] = c;
    j["tolerances"] = {{"rank", s.tol.rank}, {"phase", s.tol.phase}, {"cp", s.tol.cp}, {"residual", s.tol.residual}};
    j["seed"] = s.seed;
    if (!s.expected.is_null()) j["expected"] = s.expected;
    return j;
}

std::string serialize(const InstanceSpec& s) { return to_json(s).dump(2) + "\n"; }

std::string digest(const InstanceSpec& s) {
    const std::string text = to_json(s).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

long max_dimension() {
    if (const char* v = std::getenv("PGC_MAX_DIM")) {
        char* end = nullptr;
        long x = std::strtol(v, &end, 10);
        if (end != v && x > 0) return x;
    }
    return 4096;
}

Inclusion build_inclusion(const InstanceSpec& s) {
    const auto& f = s.embedding.form;
    std::vector<double> w = s.trace.mode == "explicit" ? s.trace.weights_M : std::vector<double>{};
    const int n = s.M_blocks.empty() ? 0 : s.M_blocks[0];
    if (f == "scalars_in_full" || f == "diagonal_in_full" || f == "equal") {
        const auto k = static_cast<Eigen::Index>(s.N_blocks.size());
        Eigen::MatrixXi lam;
        if (f == "scalars_in_full") lam = Eigen::MatrixXi::Constant(1, 1, n);
        else if (f == "diagonal_in_full") lam = Eigen::MatrixXi::Ones(k, 1);
        else lam = Eigen::MatrixXi::Identity(k, k);
        return make_inclusion(s.N_blocks, s.M_blocks, lam, {}, w);
    }
    if (f == "inclusion_matrix") return make_inclusion(s.N_blocks, s.M_blocks, s.embedding.matrix, s.embedding.unitaries, w);
    // images: matrices on the defining representation, one per matrix unit
    std::vector<double> uni;
    for (int b : s.M_blocks) uni.push_back(1.0 / (static_cast<double>(s.M_blocks.size()) * b));
    MultiMatrixAlgebra M(s.M_blocks, uni);
    std::vector<std::vector<Element>> images;
    for (const auto& list : s.embedding.images) {
        std::vector<Element> l;
        for (const auto& m : list) l.push_back(M.from_full(m, 1e-9));
        images.push_back(l);
    }
    Embedding e = embedding_from_images(s.N_blocks, s.M_blocks, images);
    std::vector<Mat> us;
    for (size_t a = 0; a < s.M_blocks.size(); ++a) us.push_back(e.unitary(static_cast<int>(a)));
    return make_inclusion(s.N_blocks, s.M_blocks, e.inclusion_matrix(), us, w);
}

long l2_m1_dimension(const InstanceSpec& s) {
    // M1 blocks are indexed by N blocks with sizes S_i = sum_a lam(i,a) m_a
    Eigen::MatrixXi lam;
    const auto& f = s.embedding.form;
    const auto k = static_cast<Eigen::Index>(s.N_blocks.size());
    const int n = s.M_blocks.empty() ? 0 : s.M_blocks[0];
    if (f == "scalars_in_full") lam = Eigen::MatrixXi::Constant(1, 1, n);
    else if (f == "diagonal_in_full") lam = Eigen::MatrixXi::Ones(k, 1);
    else if (f == "equal") lam = Eigen::MatrixXi::Identity(k, k);
    else if (f == "inclusion_matrix") lam = s.embedding.matrix;
    else return 0;  // images: decided after the embedding is recovered
    long total = 0;
    for (Eigen::Index i = 0; i < lam.rows(); ++i) {
        long S = 0;
        for (Eigen::Index a = 0; a < lam.cols(); ++a) S += static_cast<long>(lam(i, a)) * s.M_blocks[static_cast<size_t>(a)];
        total += S * S;
    }
    return total;
}

Built build(const InstanceSpec& s, bool force) {
    const long cap = max_dimension();
    long d1 = l2_m1_dimension(s);
    Inclusion inc = build_inclusion(s);
    if (d1 == 0) {
        const auto& lam = inc.emb.inclusion_matrix();
        for (Eigen::Index i = 0; i < lam.rows(); ++i) {
            long S = 0;
            for (Eigen::Index a = 0; a < lam.cols(); ++a) S += static_cast<long>(lam(i, a)) * s.M_blocks[static_cast<size_t>(a)];
            d1 += S * S;
        }
    }
    if (d1 > cap && !force)
        throw Error(ErrorKind::TooLarge, "dim L2(M1) = " + std::to_string(d1) + " exceeds " + std::to_string(cap) +
                                             " (use --force or PGC_MAX_DIM)");
    Built b;
    b.tower = std::make_unique<Tower>(inc);
    try {
        b.qfa.emplace(*b.tower);
    } catch (const Error& e) {
        b.qfa_reason = e.what();
    }
    const Tower& t = *b.tower;
    const auto& c = s.channel;
    if (c.kind == "kraus") {
        b.channel.emplace(Channel::from_kraus(t, c.kraus));
    } else if (c.kind == "y_element") {
        const auto& M1 = t.M1();
        if (static_cast<int>(c.y_blocks.size()) != M1.num_blocks())
            throw Error(ErrorKind::SchemaError, "channel.blocks: expected " + std::to_string(M1.num_blocks()) + " M1 blocks");
        Element Y(c.y_blocks);
        for (int k = 0; k < M1.num_blocks(); ++k)
            if (Y.blocks[k].rows() != M1.block_size(k) || Y.blocks[k].cols() != M1.block_size(k))
                throw Error(ErrorKind::SchemaError, "channel.blocks[" + std::to_string(k) + "]: wrong size");
        Element abstract = t.plus().from_ambient(Y);
        double off = (t.plus().to_ambient(abstract) - Y).norm_inf();
        if (off > 1e-8 * std::max(1.0, Y.norm_inf()))
            throw Error(ErrorKind::NotBimodular, "y does not lie in N' cap M1 (residual " + std::to_string(off) + ")");
        b.channel.emplace(Channel::from_y(t, {Side::Plus, abstract}));
    } else {
        const auto& g = c.generator;
        if (g == "identity") b.channel.emplace(Channel::identity(t));
        else if (g == "expectation") b.channel.emplace(Channel::expectation(t));
        else {
            auto it = c.params.find("t");
            const double tt = it == c.params.end() ? 0.5 : it->second;
            if (tt < 0.0 || tt > 1.0) throw Error(ErrorKind::SchemaError, "channel.params.t: expected 0 <= t <= 1");
            b.channel.emplace(Channel::identity(t).scaled(1.0 - tt).plus(Channel::expectation(t), tt));
        }
    }
    return b;
}

}  // namespace pgc::harness
