#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgc/channel.hpp"

namespace pgc::harness {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct EmbeddingSpec {
    // scalars_in_full | diagonal_in_full | equal | inclusion_matrix | images
    std::string form;
    Eigen::MatrixXi matrix;                   // inclusion_matrix: |N| x |M| multiplicities
    std::vector<Mat> unitaries;               // inclusion_matrix: optional, one per M block
    std::vector<std::vector<Mat>> images;     // images[i][r*n_i+c]: full matrices on C^{|M|}
};

struct TraceSpec {
    std::string mode;  // markov | explicit
    std::vector<double> weights_M;
};

struct ChannelSpec {
    std::string kind;         // kraus | y_element | generator
    std::vector<Mat> kraus;   // full matrices on the defining representation of M
    std::vector<Mat> y_blocks;  // y as an element of M1 (blocks in M1 order)
    std::string generator;    // identity | expectation | expectation_mix
    std::map<std::string, double> params;
};

struct InstanceSpec {
    int schema_version = kSchemaVersion;
    std::vector<int> N_blocks, M_blocks;
    EmbeddingSpec embedding;
    TraceSpec trace;
    ChannelSpec channel;
    Tolerances tol;
    std::uint64_t seed = 0;
    json expected;  // ground truth recorded by generators (null when absent)
};

// throws SchemaError (all problems, each with its field path) or UnknownGenerator
InstanceSpec parse_instance(const json& j);
InstanceSpec parse_instance_text(const std::string& text);
json to_json(const InstanceSpec& s);
std::string serialize(const InstanceSpec& s);  // canonical: sorted keys, 2-space indent
std::string digest(const InstanceSpec& s);     // FNV-1a 64 of the compact canonical form, hex

// complex scalars as [re, im]; matrices row-major
json encode(cplx z);
json encode(const Mat& m);
cplx decode_complex(const json& j, const std::string& path);
Mat decode_matrix(const json& j, const std::string& path);

// dim L2(M1) from the inclusion data, before anything is built
long l2_m1_dimension(const InstanceSpec& s);
long max_dimension();  // 4096 unless PGC_MAX_DIM is set

struct Built {
    std::unique_ptr<Tower> tower;
    std::optional<Qfa> qfa;
    std::string qfa_reason;  // why the transform is unavailable
    std::optional<Channel> channel;
};
// throws TooLarge above the desk-scale guard unless force is set
Built build(const InstanceSpec& s, bool force = false);
Inclusion build_inclusion(const InstanceSpec& s);

}  // namespace pgc::harness
