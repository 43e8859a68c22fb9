#pragma once

// Configuration ingestion: a YAML document with exact-rational strings for
// everything the symbolic layer consumes, plain floats only in the
// elasticity / k-path / simulation sections.  Parsing validates the schema
// and reports the offending field path; numeric exactness survives because
// rationals travel as "p/q" strings.

#include <yaml-cpp/yaml.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crysphon/base_complex.hpp"
#include "crysphon/errors.hpp"
#include "crysphon/exact.hpp"
#include "crysphon/flat_bundle.hpp"
#include "crysphon/lattice.hpp"
#include "crysphon/space_group.hpp"

namespace crysphon {

struct GeneratorConfig {
    IntMatrix matrix;
    RatVec translation;

    bool operator==(const GeneratorConfig& o) const {
        return matrix == o.matrix && translation == o.translation;
    }
};

struct EdgeConfig {
    std::size_t from = 0, to = 0;
    std::size_t element = 0;  // index into the enumerated point group

    bool operator==(const EdgeConfig&) const = default;
};

struct SectionFixtureConfig {
    std::size_t samples = 32;
    std::size_t overlap = 8;
    double amplitude = 1e-3;

    bool operator==(const SectionFixtureConfig&) const = default;
};

struct BundleConfig {
    std::size_t charts = 0;
    std::vector<EdgeConfig> edges;
    std::vector<std::array<std::size_t, 3>> triangles;
    std::optional<SectionFixtureConfig> section;

    bool operator==(const BundleConfig&) const = default;
};

enum class ElasticModel { isotropic, cubic, full_tensor };

struct ElasticityConfig {
    ElasticModel model = ElasticModel::isotropic;
    double lambda = 0.0, mu = 0.0;          // isotropic
    double c11 = 0.0, c12 = 0.0, c44 = 0.0; // cubic
    std::vector<double> tensor;             // full-tensor, d^4 row-major (a,b,i,j)
    double density = 1.0;

    bool operator==(const ElasticityConfig&) const = default;
};

struct KPathConfig {
    std::vector<std::vector<double>> waypoints;
    std::size_t samples_per_segment = 16;

    bool operator==(const KPathConfig&) const = default;
};

struct SimulationConfig {
    std::vector<double> direction;
    std::size_t samples = 256;
    std::size_t mode = 1;
    std::size_t branch = 0;      // dispersion branch used for the initial state
    double amplitude = 1e-3;
    std::size_t steps = 4096;
    double cfl = 0.5;

    bool operator==(const SimulationConfig&) const = default;
};

struct CrystalConfig {
    std::string name;
    std::size_t dim = 0;
    std::vector<std::vector<double>> basis_rows;  // row r = r-th lattice generator
    std::vector<std::vector<Rat>> gram;
    std::vector<GeneratorConfig> generators;
    std::optional<BundleConfig> bundle;
    std::optional<ElasticityConfig> elasticity;
    std::optional<KPathConfig> kpath;
    std::optional<SimulationConfig> simulation;

    bool operator==(const CrystalConfig& o) const {
        return name == o.name && dim == o.dim && basis_rows == o.basis_rows && gram == o.gram &&
               generators == o.generators && bundle == o.bundle && elasticity == o.elasticity &&
               kpath == o.kpath && simulation == o.simulation;
    }
};

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace cfg_detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
    throw config_error(path + ": " + what);
}

inline const YAML::Node require(const YAML::Node& n, const std::string& path,
                                const std::string& key) {
    if (!n.IsMap()) fail(path, "expected a mapping");
    YAML::Node child = n[key];
    if (!child) fail(path + "." + key, "missing required field");
    return child;
}

inline std::size_t parse_index(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(path, "expected an integer");
    try {
        long long v = n.as<long long>();
        if (v < 0) fail(path, "expected a nonnegative integer");
        return static_cast<std::size_t>(v);
    } catch (const YAML::Exception&) {
        fail(path, "expected an integer");
    }
}

inline double parse_double(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(path, "expected a number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(path, "expected a number");
    }
}

inline Rat parse_rat(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(path, "expected a rational string like \"1/2\"");
    try {
        return parse_rational(n.as<std::string>());
    } catch (const config_error&) {
        fail(path, "expected a rational string like \"1/2\"");
    }
}

inline long long parse_int(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(path, "expected an integer");
    try {
        return n.as<long long>();
    } catch (const YAML::Exception&) {
        fail(path, "expected an integer");
    }
}

inline std::vector<double> parse_double_list(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence()) fail(path, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i)
        out.push_back(parse_double(n[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline IntMatrix parse_int_matrix(const YAML::Node& n, const std::string& path, std::size_t d) {
    if (!n.IsSequence() || n.size() != d) fail(path, "expected " + std::to_string(d) + " rows");
    IntMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const YAML::Node row = n[i];
        std::string rpath = path + "[" + std::to_string(i) + "]";
        if (!row.IsSequence() || row.size() != d)
            fail(rpath, "expected " + std::to_string(d) + " integers");
        for (std::size_t j = 0; j < d; ++j)
            m(i, j) = parse_int(row[j], rpath + "[" + std::to_string(j) + "]");
    }
    return m;
}

} // namespace cfg_detail

inline CrystalConfig parse_config(const YAML::Node& root) {
    using namespace cfg_detail;
    if (!root.IsMap()) fail("(root)", "expected a mapping");
    CrystalConfig cfg;
    if (root["name"]) cfg.name = root["name"].as<std::string>();

    const YAML::Node lat = require(root, "(root)", "lattice");
    cfg.dim = parse_index(require(lat, "lattice", "dim"), "lattice.dim");
    if (cfg.dim == 0 || cfg.dim > 3) fail("lattice.dim", "supported dimensions are 1..3");

    const YAML::Node basis = require(lat, "lattice", "basis");
    if (!basis.IsSequence() || basis.size() != cfg.dim)
        fail("lattice.basis", "expected " + std::to_string(cfg.dim) + " rows");
    for (std::size_t i = 0; i < cfg.dim; ++i) {
        auto row = parse_double_list(basis[i], "lattice.basis[" + std::to_string(i) + "]");
        if (row.size() != cfg.dim)
            fail("lattice.basis[" + std::to_string(i) + "]",
                 "expected " + std::to_string(cfg.dim) + " numbers");
        cfg.basis_rows.push_back(std::move(row));
    }

    const YAML::Node gram = require(lat, "lattice", "gram");
    if (!gram.IsSequence() || gram.size() != cfg.dim)
        fail("lattice.gram", "expected " + std::to_string(cfg.dim) + " rows");
    for (std::size_t i = 0; i < cfg.dim; ++i) {
        const YAML::Node row = gram[i];
        std::string rpath = "lattice.gram[" + std::to_string(i) + "]";
        if (!row.IsSequence() || row.size() != cfg.dim)
            fail(rpath, "expected " + std::to_string(cfg.dim) + " rationals");
        std::vector<Rat> entries;
        for (std::size_t j = 0; j < cfg.dim; ++j)
            entries.push_back(parse_rat(row[j], rpath + "[" + std::to_string(j) + "]"));
        cfg.gram.push_back(std::move(entries));
    }

    const YAML::Node gens = require(root, "(root)", "generators");
    if (!gens.IsSequence() || gens.size() == 0)
        fail("generators", "expected a nonempty list");
    for (std::size_t g = 0; g < gens.size(); ++g) {
        std::string gpath = "generators[" + std::to_string(g) + "]";
        const YAML::Node gen = gens[g];
        if (!gen.IsMap()) fail(gpath, "expected a mapping with matrix/translation");
        GeneratorConfig gc{parse_int_matrix(require(gen, gpath, "matrix"), gpath + ".matrix",
                                            cfg.dim),
                           RatVec{}};
        const YAML::Node tr = require(gen, gpath, "translation");
        if (!tr.IsSequence() || tr.size() != cfg.dim)
            fail(gpath + ".translation", "expected " + std::to_string(cfg.dim) + " rationals");
        for (std::size_t j = 0; j < cfg.dim; ++j)
            gc.translation.push_back(
                parse_rat(tr[j], gpath + ".translation[" + std::to_string(j) + "]"));
        cfg.generators.push_back(std::move(gc));
    }

    if (const YAML::Node bn = root["bundle"]) {
        BundleConfig bc;
        bc.charts = parse_index(require(bn, "bundle", "charts"), "bundle.charts");
        const YAML::Node edges = require(bn, "bundle", "edges");
        if (!edges.IsSequence()) fail("bundle.edges", "expected a list");
        for (std::size_t e = 0; e < edges.size(); ++e) {
            std::string epath = "bundle.edges[" + std::to_string(e) + "]";
            const YAML::Node en = edges[e];
            if (!en.IsMap()) fail(epath, "expected a mapping with from/to/element");
            bc.edges.push_back(EdgeConfig{parse_index(require(en, epath, "from"), epath + ".from"),
                                          parse_index(require(en, epath, "to"), epath + ".to"),
                                          parse_index(require(en, epath, "element"),
                                                      epath + ".element")});
        }
        if (const YAML::Node tris = bn["triangles"]) {
            if (!tris.IsSequence()) fail("bundle.triangles", "expected a list");
            for (std::size_t t = 0; t < tris.size(); ++t) {
                std::string tpath = "bundle.triangles[" + std::to_string(t) + "]";
                const YAML::Node tn = tris[t];
                if (!tn.IsSequence() || tn.size() != 3) fail(tpath, "expected three chart indices");
                bc.triangles.push_back({parse_index(tn[0], tpath + "[0]"),
                                        parse_index(tn[1], tpath + "[1]"),
                                        parse_index(tn[2], tpath + "[2]")});
            }
        }
        if (const YAML::Node sn = bn["section"]) {
            SectionFixtureConfig sc;
            sc.samples = parse_index(require(sn, "bundle.section", "samples"),
                                     "bundle.section.samples");
            sc.overlap = parse_index(require(sn, "bundle.section", "overlap"),
                                     "bundle.section.overlap");
            if (sn["amplitude"])
                sc.amplitude = parse_double(sn["amplitude"], "bundle.section.amplitude");
            bc.section = sc;
        }
        cfg.bundle = std::move(bc);
    }

    if (const YAML::Node el = root["elasticity"]) {
        ElasticityConfig ec;
        std::string model = require(el, "elasticity", "model").as<std::string>();
        if (model == "isotropic") {
            ec.model = ElasticModel::isotropic;
            ec.lambda = parse_double(require(el, "elasticity", "lambda"), "elasticity.lambda");
            ec.mu = parse_double(require(el, "elasticity", "mu"), "elasticity.mu");
        } else if (model == "cubic") {
            ec.model = ElasticModel::cubic;
            ec.c11 = parse_double(require(el, "elasticity", "c11"), "elasticity.c11");
            ec.c12 = parse_double(require(el, "elasticity", "c12"), "elasticity.c12");
            ec.c44 = parse_double(require(el, "elasticity", "c44"), "elasticity.c44");
        } else if (model == "full-tensor") {
            ec.model = ElasticModel::full_tensor;
            ec.tensor = parse_double_list(require(el, "elasticity", "tensor"),
                                          "elasticity.tensor");
            std::size_t want = cfg.dim * cfg.dim * cfg.dim * cfg.dim;
            if (ec.tensor.size() != want)
                fail("elasticity.tensor", "expected " + std::to_string(want) + " entries");
        } else {
            fail("elasticity.model", "expected isotropic | cubic | full-tensor");
        }
        ec.density = parse_double(require(el, "elasticity", "density"), "elasticity.density");
        cfg.elasticity = std::move(ec);
    }

    if (const YAML::Node kp = root["kpath"]) {
        KPathConfig kc;
        const YAML::Node wps = require(kp, "kpath", "waypoints");
        if (!wps.IsSequence() || wps.size() == 0) fail("kpath.waypoints", "expected a nonempty list");
        for (std::size_t w = 0; w < wps.size(); ++w) {
            auto k = parse_double_list(wps[w], "kpath.waypoints[" + std::to_string(w) + "]");
            if (k.size() != cfg.dim)
                fail("kpath.waypoints[" + std::to_string(w) + "]",
                     "expected " + std::to_string(cfg.dim) + " components");
            kc.waypoints.push_back(std::move(k));
        }
        if (kp["samples_per_segment"])
            kc.samples_per_segment =
                parse_index(kp["samples_per_segment"], "kpath.samples_per_segment");
        cfg.kpath = std::move(kc);
    }

    if (const YAML::Node sim = root["simulation"]) {
        SimulationConfig sc;
        sc.direction = parse_double_list(require(sim, "simulation", "direction"),
                                         "simulation.direction");
        if (sc.direction.size() != cfg.dim)
            fail("simulation.direction", "expected " + std::to_string(cfg.dim) + " components");
        if (sim["samples"]) sc.samples = parse_index(sim["samples"], "simulation.samples");
        if (sim["mode"]) sc.mode = parse_index(sim["mode"], "simulation.mode");
        if (sim["branch"]) sc.branch = parse_index(sim["branch"], "simulation.branch");
        if (sim["amplitude"]) sc.amplitude = parse_double(sim["amplitude"], "simulation.amplitude");
        if (sim["steps"]) sc.steps = parse_index(sim["steps"], "simulation.steps");
        if (sim["cfl"]) sc.cfl = parse_double(sim["cfl"], "simulation.cfl");
        cfg.simulation = std::move(sc);
    }
    return cfg;
}

inline CrystalConfig parse_config_text(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return parse_config(root);
}

// ---------------------------------------------------------------------------
// emission (round-trip safe: rationals exact, floats at max precision)
// ---------------------------------------------------------------------------

namespace cfg_detail {

inline std::string double_repr(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace cfg_detail

inline std::string emit_config(const CrystalConfig& cfg) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    if (!cfg.name.empty()) out << YAML::Key << "name" << YAML::Value << cfg.name;
    out << YAML::Key << "lattice" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dim" << YAML::Value << cfg.dim;
    out << YAML::Key << "basis" << YAML::Value << YAML::BeginSeq;
    for (const auto& row : cfg.basis_rows) {
        out << YAML::Flow << YAML::BeginSeq;
        for (double x : row) out << cfg_detail::double_repr(x);
        out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "gram" << YAML::Value << YAML::BeginSeq;
    for (const auto& row : cfg.gram) {
        out << YAML::Flow << YAML::BeginSeq;
        for (const auto& q : row) out << to_string(q);
        out << YAML::EndSeq;
    }
    out << YAML::EndSeq << YAML::EndMap;

    out << YAML::Key << "generators" << YAML::Value << YAML::BeginSeq;
    for (const auto& gen : cfg.generators) {
        out << YAML::BeginMap << YAML::Key << "matrix" << YAML::Value << YAML::BeginSeq;
        for (std::size_t i = 0; i < gen.matrix.rows(); ++i) {
            out << YAML::Flow << YAML::BeginSeq;
            for (std::size_t j = 0; j < gen.matrix.cols(); ++j)
                out << gen.matrix(i, j).convert_to<long long>();
            out << YAML::EndSeq;
        }
        out << YAML::EndSeq;
        out << YAML::Key << "translation" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (const auto& q : gen.translation) out << to_string(q);
        out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndSeq;

    if (cfg.bundle) {
        out << YAML::Key << "bundle" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "charts" << YAML::Value << cfg.bundle->charts;
        out << YAML::Key << "edges" << YAML::Value << YAML::BeginSeq;
        for (const auto& e : cfg.bundle->edges)
            out << YAML::Flow << YAML::BeginMap << YAML::Key << "from" << YAML::Value << e.from
                << YAML::Key << "to" << YAML::Value << e.to << YAML::Key << "element"
                << YAML::Value << e.element << YAML::EndMap;
        out << YAML::EndSeq;
        if (!cfg.bundle->triangles.empty()) {
            out << YAML::Key << "triangles" << YAML::Value << YAML::BeginSeq;
            for (const auto& t : cfg.bundle->triangles) {
                out << YAML::Flow << YAML::BeginSeq << t[0] << t[1] << t[2] << YAML::EndSeq;
            }
            out << YAML::EndSeq;
        }
        if (cfg.bundle->section) {
            out << YAML::Key << "section" << YAML::Value << YAML::BeginMap;
            out << YAML::Key << "samples" << YAML::Value << cfg.bundle->section->samples;
            out << YAML::Key << "overlap" << YAML::Value << cfg.bundle->section->overlap;
            out << YAML::Key << "amplitude" << YAML::Value
                << cfg_detail::double_repr(cfg.bundle->section->amplitude);
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }

    if (cfg.elasticity) {
        const auto& ec = *cfg.elasticity;
        out << YAML::Key << "elasticity" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "model" << YAML::Value
            << (ec.model == ElasticModel::isotropic
                    ? "isotropic"
                    : ec.model == ElasticModel::cubic ? "cubic" : "full-tensor");
        if (ec.model == ElasticModel::isotropic) {
            out << YAML::Key << "lambda" << YAML::Value << cfg_detail::double_repr(ec.lambda);
            out << YAML::Key << "mu" << YAML::Value << cfg_detail::double_repr(ec.mu);
        } else if (ec.model == ElasticModel::cubic) {
            out << YAML::Key << "c11" << YAML::Value << cfg_detail::double_repr(ec.c11);
            out << YAML::Key << "c12" << YAML::Value << cfg_detail::double_repr(ec.c12);
            out << YAML::Key << "c44" << YAML::Value << cfg_detail::double_repr(ec.c44);
        } else {
            out << YAML::Key << "tensor" << YAML::Value << YAML::Flow << YAML::BeginSeq;
            for (double x : ec.tensor) out << cfg_detail::double_repr(x);
            out << YAML::EndSeq;
        }
        out << YAML::Key << "density" << YAML::Value << cfg_detail::double_repr(ec.density);
        out << YAML::EndMap;
    }

    if (cfg.kpath) {
        out << YAML::Key << "kpath" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "waypoints" << YAML::Value << YAML::BeginSeq;
        for (const auto& k : cfg.kpath->waypoints) {
            out << YAML::Flow << YAML::BeginSeq;
            for (double x : k) out << cfg_detail::double_repr(x);
            out << YAML::EndSeq;
        }
        out << YAML::EndSeq;
        out << YAML::Key << "samples_per_segment" << YAML::Value
            << cfg.kpath->samples_per_segment;
        out << YAML::EndMap;
    }

    if (cfg.simulation) {
        const auto& sc = *cfg.simulation;
        out << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "direction" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (double x : sc.direction) out << cfg_detail::double_repr(x);
        out << YAML::EndSeq;
        out << YAML::Key << "samples" << YAML::Value << sc.samples;
        out << YAML::Key << "mode" << YAML::Value << sc.mode;
        out << YAML::Key << "branch" << YAML::Value << sc.branch;
        out << YAML::Key << "amplitude" << YAML::Value << cfg_detail::double_repr(sc.amplitude);
        out << YAML::Key << "steps" << YAML::Value << sc.steps;
        out << YAML::Key << "cfl" << YAML::Value << cfg_detail::double_repr(sc.cfl);
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------------------
// realization: turn a parsed config into domain objects
// ---------------------------------------------------------------------------

inline Lattice build_lattice(const CrystalConfig& cfg) {
    const auto d = static_cast<Eigen::Index>(cfg.dim);
    Eigen::MatrixXd basis(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            basis(j, i) = cfg.basis_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    // config rows are lattice generators; columns of the internal basis
    RatMatrix gram(cfg.dim, cfg.dim);
    for (std::size_t i = 0; i < cfg.dim; ++i)
        for (std::size_t j = 0; j < cfg.dim; ++j) gram(i, j) = cfg.gram[i][j];
    return Lattice(basis, gram);
}

inline SpaceGroup build_space_group(const CrystalConfig& cfg) {
    std::vector<std::pair<IntMatrix, RatVec>> gens;
    gens.reserve(cfg.generators.size());
    for (const auto& g : cfg.generators) gens.emplace_back(g.matrix, g.translation);
    return SpaceGroup::from_generators(build_lattice(cfg), gens);
}

inline FlatBundle build_bundle(const CrystalConfig& cfg, const SpaceGroup& sg) {
    if (!cfg.bundle) throw config_error("bundle: section missing from config");
    std::vector<Edge> edges;
    std::vector<std::size_t> transitions;
    for (const auto& e : cfg.bundle->edges) {
        edges.push_back(Edge{e.from, e.to});
        transitions.push_back(e.element);
    }
    std::vector<Triangle> triangles;
    for (const auto& t : cfg.bundle->triangles) triangles.push_back(Triangle{t[0], t[1], t[2]});
    return FlatBundle(BaseComplex(cfg.bundle->charts, edges, triangles), sg, transitions);
}

} // namespace crysphon
