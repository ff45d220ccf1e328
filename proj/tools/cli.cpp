#include "cli.hpp"

#include "depcon/clustering.hpp"
#include "depcon/dataset.hpp"
#include "depcon/embedding.hpp"
#include "depcon/error.hpp"
#include "depcon/graph.hpp"
#include "depcon/hypothesis.hpp"
#include "depcon/kernel.hpp"
#include "depcon/synth.hpp"
#include "depcon/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace depcon::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Options shared by every subcommand. The thread count is deliberately left
// out of provenance: outputs do not depend on it.
struct Common {
    std::size_t threads = 0;
};

void add_common(CLI::App& sub, Common& common) {
    sub.add_option("--threads", common.threads, "Worker threads (0: DEPCON_THREADS or hardware)");
}

json provenance(std::string_view subcommand, json config) {
    json p;
    p["tool"] = "depcon";
    p["version"] = std::string(version);
    p["subcommand"] = std::string(subcommand);
    p["config"] = std::move(config);
    return p;
}

// JSON has no infinities; keep them readable rather than null.
json number(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw Error(ErrorKind::IoError, "failed writing '" + path.string() + "'");
    }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// Writes to `path`, or to `out` when the path is empty or "-".
void emit_json(const std::string& path, const json& doc, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << dump(doc);
    } else {
        write_file(path, dump(doc));
    }
}

fs::path sidecar(const std::string& path) { return fs::path(path + ".json"); }

std::ifstream open_input(const std::string& path) {
    if (!fs::exists(path)) {
        throw Error(ErrorKind::FileNotFound, "'" + path + "' does not exist");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    }
    return in;
}

json read_json(const std::string& path) {
    auto in = open_input(path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidFormat, "'" + path + "': " + e.what());
    }
}

bool is_json_path(const std::string& path) { return fs::path(path).extension() == ".json"; }

Eigen::MatrixXd load_matrix(const std::string& path) {
    if (is_json_path(path)) {
        const json doc = read_json(path);
        if (!doc.contains("values") || !doc["values"].is_array() || doc["values"].empty()) {
            throw Error(ErrorKind::InvalidFormat, "'" + path + "' has no \"values\" matrix");
        }
        const auto& rows = doc["values"];
        const std::size_t cols = rows[0].size();
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].is_array() || rows[i].size() != cols) {
                throw Error(ErrorKind::RaggedRows, "row " + std::to_string(i) + " of '" + path + "'");
            }
            for (std::size_t j = 0; j < cols; ++j) {
                if (!rows[i][j].is_number()) {
                    throw Error(ErrorKind::NonNumericCell, "row " + std::to_string(i) + ", column " + std::to_string(j));
                }
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
            }
        }
        return m;
    }
    auto in = open_input(path);
    return load_matrix_csv(in);
}

// Labels from a synth sidecar ({"labels": [...]}) or a one-column CSV with
// an optional header line.
std::vector<int> load_labels(const std::string& path) {
    std::vector<int> labels;
    if (is_json_path(path)) {
        const json doc = read_json(path);
        if (!doc.contains("labels") || !doc["labels"].is_array()) {
            throw Error(ErrorKind::InvalidFormat, "'" + path + "' has no \"labels\" array");
        }
        for (const auto& v : doc["labels"]) {
            if (!v.is_number_integer()) {
                throw Error(ErrorKind::InvalidFormat, "non-integer label in '" + path + "'");
            }
            labels.push_back(v.get<int>());
        }
        return labels;
    }
    auto in = open_input(path);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == '\r' || c == ' '; }), line.end());
        if (line.empty()) {
            continue;
        }
        try {
            std::size_t used = 0;
            const int v = std::stoi(line, &used);
            if (used != line.size()) {
                throw std::invalid_argument(line);
            }
            labels.push_back(v);
        } catch (const std::exception&) {
            if (row != 0) {
                throw Error(ErrorKind::NonNumericCell, "label '" + line + "' in '" + path + "'");
            }
        }
        ++row;
    }
    return labels;
}

std::string labels_csv(const std::vector<int>& labels) {
    std::string text = "label\n";
    for (int l : labels) {
        text += std::to_string(l) + "\n";
    }
    return text;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
    std::ostringstream s;
    write_matrix_csv(s, m);
    return s.str();
}

// ---------------------------------------------------------------- gram

struct GramArgs {
    Common common;
    std::string input;
    std::string second;
    std::string output;
    std::string kernel = "depcon";
    std::string convention = "szekely-rizzo";
    std::string format;
    double alpha = 0.1;
    bool no_header = false;
    std::size_t memory_budget_mb = 512;
};

int cmd_gram(const GramArgs& a, std::ostream& err) {
    const Dataset data = load_dataset(a.input, !a.no_header);
    std::optional<Dataset> second;
    if (!a.second.empty()) {
        second = load_dataset(a.second, !a.no_header);
    }
    GramOptions options;
    options.alpha = a.alpha;
    options.convention = parse_scale_convention(a.convention);
    options.threads = a.common.threads;
    options.memory_budget_bytes = a.memory_budget_mb << 20;

    Eigen::MatrixXd values;
    std::size_t degenerate = 0;
    if (a.kernel == "depcon") {
        GramMatrix g = second ? gram_matrix(data, *second, options) : gram_matrix(data, options);
        values = std::move(g.values);
        degenerate = g.degenerate_count;
    } else if (a.kernel == "linear" || a.kernel == "linear-standardized") {
        const bool standardize = a.kernel == "linear-standardized";
        const auto prep = [&](const Dataset& d) {
            return standardize ? cluster::standardize_columns(d.values()) : Eigen::MatrixXd(d.values());
        };
        const Eigen::MatrixXd xa = prep(data);
        if (second) {
            if (second->m() != data.m()) {
                throw Error(ErrorKind::DimensionMismatch, "datasets have different feature counts");
            }
            values = xa * prep(*second).transpose();
        } else {
            values = cluster::linear_gram(xa);
            values = 0.5 * (values + values.transpose()).eval();
        }
    } else {
        throw Error(ErrorKind::OutOfRange, "unknown kernel '" + a.kernel + "'");
    }
    if (degenerate > 0) {
        err << "warning: " << degenerate << " samples map to a zero matrix; their kernel values are 0\n";
    }

    json config;
    config["input"] = a.input;
    config["second"] = a.second;
    config["kernel"] = a.kernel;
    config["alpha"] = a.alpha;
    config["convention"] = a.convention;
    config["header"] = !a.no_header;
    config["memory_budget_mb"] = a.memory_budget_mb;
    json meta;
    meta["provenance"] = provenance("gram", config);
    meta["rows"] = values.rows();
    meta["cols"] = values.cols();
    meta["degenerate_count"] = degenerate;

    const std::string format = a.format.empty() ? (is_json_path(a.output) ? "json" : "csv") : a.format;
    if (format == "json") {
        meta["values"] = matrix_json(values);
        write_file(a.output, dump(meta));
    } else if (format == "csv") {
        write_file(a.output, matrix_csv(values));
        write_file(sidecar(a.output), dump(meta));
    } else {
        throw Error(ErrorKind::OutOfRange, "unknown format '" + format + "'");
    }
    return 0;
}

// ---------------------------------------------------------------- test

struct TestArgs {
    Common common;
    std::string first;
    std::string second;
    std::string output;
    std::string convention = "szekely-rizzo";
    double alpha = 0.1;
    bool both = false;
    bool no_header = false;
};

int cmd_test(const TestArgs& a, std::ostream& out) {
    const Dataset da = load_dataset(a.first, !a.no_header);
    const Dataset db = load_dataset(a.second, !a.no_header);
    if (da.m() != db.m()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "feature counts differ: " + std::to_string(da.m()) + " vs " + std::to_string(db.m()));
    }
    std::vector<ScaleConvention> conventions;
    if (a.both) {
        conventions = {ScaleConvention::SzekelyRizzo, ScaleConvention::ChiSquareOverN};
    } else {
        conventions = {parse_scale_convention(a.convention)};
    }
    json results = json::array();
    for (ScaleConvention c : conventions) {
        GramOptions options;
        options.alpha = a.alpha;
        options.convention = c;
        options.threads = a.common.threads;
        const StructureDifference diff = structure_difference_score(da, db, options);
        json r;
        r["convention"] = std::string(to_string(c));
        r["score"] = diff.score;
        r["different_structure"] = diff.different_structure;
        json witnesses = json::array();
        for (const auto& w : diff.witnesses) {
            witnesses.push_back({{"i", w.i},
                                 {"j", w.j},
                                 {"feature_i", da.feature_name(w.i)},
                                 {"feature_j", da.feature_name(w.j)},
                                 {"statistic_a", w.statistic_a},
                                 {"statistic_b", w.statistic_b}});
        }
        r["witnesses"] = std::move(witnesses);
        results.push_back(std::move(r));
    }
    json config;
    config["first"] = a.first;
    config["second"] = a.second;
    config["alpha"] = a.alpha;
    config["convention"] = a.both ? "both" : a.convention;
    config["header"] = !a.no_header;
    json doc;
    doc["provenance"] = provenance("test", config);
    doc["results"] = std::move(results);
    emit_json(a.output, doc, out);
    return 0;
}

// ---------------------------------------------------------------- indep

struct IndepArgs {
    Common common;
    std::string input;
    std::string output;
    std::string convention = "szekely-rizzo";
    double alpha = 0.1;
    bool no_header = false;
};

int cmd_indep(const IndepArgs& a, std::ostream& out, std::ostream& err) {
    const Dataset data = load_dataset(a.input, !a.no_header);
    const IndependenceResult r = independence_test(data, a.alpha, parse_scale_convention(a.convention));
    for (const auto& w : r.warnings) {
        err << "warning: " << w << "\n";
    }
    json pairs = json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"feature_i", data.feature_name(p.i)},
                         {"feature_j", data.feature_name(p.j)},
                         {"statistic", p.statistic},
                         {"reject", p.reject}});
    }
    json config;
    config["input"] = a.input;
    config["alpha"] = a.alpha;
    config["convention"] = a.convention;
    config["header"] = !a.no_header;
    json doc;
    doc["provenance"] = provenance("indep", config);
    doc["critical"] = {{"alpha", r.critical.alpha},
                       {"chi2_quantile", r.critical.chi2_quantile},
                       {"off_diagonal", r.critical.off_diagonal}};
    doc["warnings"] = r.warnings;
    doc["pairs"] = std::move(pairs);
    emit_json(a.output, doc, out);
    return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    Common common;
    std::string output;
    std::size_t models = 6;
    std::size_t samples = 100;
    std::size_t vars = 10;
    double edge_probability = 0.3;
    bool nonlinear = false;
    std::string mechanism = "centered-cosine";
    double amplitude = 1.0;
    std::size_t cap = 0;
    std::uint64_t seed = 0;
};

json model_json(const synth::NonlinearSem& sem, std::size_t index) {
    json parents = json::array();
    json weights = json::array();
    for (std::size_t v = 0; v < sem.base.dag.m; ++v) {
        parents.push_back(sem.base.dag.parent_sets[v]);
        for (std::size_t p : sem.base.dag.parent_sets[v]) {
            weights.push_back(
                {{"from", p}, {"to", v}, {"weight", sem.base.weights(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(v))}});
        }
    }
    json noise = json::array();
    for (Eigen::Index v = 0; v < sem.base.noise_scale.size(); ++v) {
        noise.push_back(sem.base.noise_scale(v));
    }
    json pairs = json::array();
    for (const auto& p : sem.nonlinear_pairs) {
        pairs.push_back({{"from", p.from},
                         {"to", p.to},
                         {"mechanism", std::string(synth::to_string(p.mechanism))},
                         {"amplitude", p.amplitude}});
    }
    json m;
    m["label"] = index;
    m["m"] = sem.base.dag.m;
    m["edge_probability"] = sem.base.dag.edge_probability;
    m["parents"] = std::move(parents);
    m["weights"] = std::move(weights);
    m["noise_scale"] = std::move(noise);
    m["nonlinear_pairs"] = std::move(pairs);
    return m;
}

int cmd_synth(const SynthArgs& a) {
    synth::BenchmarkConfig config;
    config.num_models = a.models;
    config.samples_per_model = a.samples;
    config.m = a.vars;
    config.edge_probability = a.edge_probability;
    config.nonlinear = a.nonlinear;
    config.seed = a.seed;
    config.mechanism = synth::parse_mechanism(a.mechanism);
    config.amplitude = a.amplitude;
    config.nonlinear_cap = a.cap;
    const synth::LabeledDataset bench = synth::build_benchmark(config);

    std::vector<std::string> names;
    for (std::size_t j = 0; j < a.vars; ++j) {
        names.push_back("x" + std::to_string(j));
    }
    std::ostringstream csv;
    write_csv(csv, Dataset(bench.data.values(), names));
    write_file(a.output, csv.str());

    json cfg;
    cfg["models"] = a.models;
    cfg["samples_per_model"] = a.samples;
    cfg["vars"] = a.vars;
    cfg["edge_probability"] = a.edge_probability;
    cfg["nonlinear"] = a.nonlinear;
    cfg["mechanism"] = a.mechanism;
    cfg["amplitude"] = a.amplitude;
    cfg["nonlinear_cap"] = a.cap;
    cfg["seed"] = a.seed;
    json doc;
    doc["provenance"] = provenance("synth", cfg);
    doc["labels"] = bench.labels;
    json models = json::array();
    for (std::size_t k = 0; k < bench.models.size(); ++k) {
        models.push_back(model_json(bench.models[k], k));
    }
    doc["models"] = std::move(models);
    write_file(sidecar(a.output), dump(doc));
    return 0;
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
    Common common;
    std::string input;
    std::string output;
    std::size_t k = 0;
    std::size_t k_min = 2;
    std::size_t k_max = 10;
    std::string criterion = "vrc";
    std::string init = "plusplus";
    std::size_t restarts = 10;
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;
};

int cmd_cluster(const ClusterArgs& a) {
    const Eigen::MatrixXd gram = load_matrix(a.input);
    cluster::KMeansOptions options;
    options.init = cluster::parse_init(a.init);
    options.restarts = a.restarts;
    options.max_iter = a.max_iter;
    options.seed = a.seed;
    options.threads = a.common.threads;
    const auto criterion = cluster::parse_criterion(a.criterion);

    cluster::KSelection selection;
    if (a.k != 0) {
        selection = cluster::select_k(gram, a.k, a.k, criterion, options);
    } else {
        selection = cluster::select_k(gram, a.k_min, std::min(a.k_max, static_cast<std::size_t>(gram.rows()) - 1),
                                      criterion, options);
    }
    write_file(a.output, labels_csv(selection.best.labels));

    json cfg;
    cfg["input"] = a.input;
    cfg["k"] = a.k;
    cfg["k_min"] = a.k_min;
    cfg["k_max"] = a.k_max;
    cfg["criterion"] = a.criterion;
    cfg["init"] = a.init;
    cfg["restarts"] = a.restarts;
    cfg["max_iter"] = a.max_iter;
    cfg["seed"] = a.seed;
    json doc;
    doc["provenance"] = provenance("cluster", cfg);
    doc["selected_k"] = selection.best_k;
    doc["criterion_space"] = "kernel";
    json scores = json::array();
    for (const auto& s : selection.scores) {
        scores.push_back({{"k", s.k}, {"score", number(s.score)}, {"objective", s.objective}});
    }
    doc["scores"] = std::move(scores);
    doc["objective"] = selection.best.objective;
    doc["objective_trace"] = selection.best.objective_trace;
    doc["iterations"] = selection.best.iterations;
    doc["converged"] = selection.best.converged;
    doc["restart"] = selection.best.restart;
    write_file(sidecar(a.output), dump(doc));
    return 0;
}

// ---------------------------------------------------------------- kpca

struct KpcaArgs {
    Common common;
    std::string input;
    std::string output;
    std::string labels;
    std::string cross;
    std::string cross_output;
    std::size_t components = 2;
};

std::string coordinates_csv(const Eigen::MatrixXd& scores, const std::vector<int>* labels) {
    std::string text;
    for (Eigen::Index c = 0; c < scores.cols(); ++c) {
        text += (c ? ",pc" : "pc") + std::to_string(c + 1);
    }
    text += labels ? ",label\n" : "\n";
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        for (Eigen::Index c = 0; c < scores.cols(); ++c) {
            if (c) {
                text += ',';
            }
            text += format_double(scores(i, c));
        }
        if (labels) {
            text += "," + std::to_string((*labels)[static_cast<std::size_t>(i)]);
        }
        text += '\n';
    }
    return text;
}

int cmd_kpca(const KpcaArgs& a, std::ostream& err) {
    const Eigen::MatrixXd gram = load_matrix(a.input);
    const embedding::KpcaModel model = embedding::kpca_fit(gram, a.components);
    for (const auto& w : model.warnings) {
        err << "warning: " << w << "\n";
    }
    std::vector<int> labels;
    if (!a.labels.empty()) {
        labels = load_labels(a.labels);
        if (labels.size() != static_cast<std::size_t>(gram.rows())) {
            throw Error(ErrorKind::LengthMismatch, std::to_string(labels.size()) + " labels for " +
                                                       std::to_string(gram.rows()) + " samples");
        }
    }
    write_file(a.output, coordinates_csv(embedding::kpca_training_scores(model), a.labels.empty() ? nullptr : &labels));
    if (!a.cross.empty()) {
        const Eigen::MatrixXd projected = embedding::kpca_project(model, load_matrix(a.cross));
        write_file(a.cross_output.empty() ? a.output + ".projected.csv" : a.cross_output,
                   coordinates_csv(projected, nullptr));
    }
    json cfg;
    cfg["input"] = a.input;
    cfg["components"] = a.components;
    cfg["labels"] = a.labels;
    cfg["cross"] = a.cross;
    json doc;
    doc["provenance"] = provenance("kpca", cfg);
    doc["retained"] = model.d;
    json ev = json::array();
    for (Eigen::Index c = 0; c < model.eigenvalues.size(); ++c) {
        ev.push_back(model.eigenvalues(c));
    }
    doc["eigenvalues"] = std::move(ev);
    doc["centered_trace"] = model.centered_gram.trace();
    doc["warnings"] = model.warnings;
    write_file(sidecar(a.output), dump(doc));
    return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    Common common;
    std::string truth;
    std::vector<std::string> preds;   // name=path, scored against --truth
    std::vector<std::string> entries; // method,truth,pred
    std::string output;
    std::string csv_output;
};

struct EvalEntry {
    std::string method;
    std::string truth;
    std::string pred;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    std::vector<EvalEntry> entries;
    for (const auto& p : a.preds) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || a.truth.empty()) {
            throw Error(ErrorKind::InvalidFormat, "--pred expects name=path together with --truth");
        }
        entries.push_back({p.substr(0, eq), a.truth, p.substr(eq + 1)});
    }
    for (const auto& e : a.entries) {
        const auto c1 = e.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : e.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw Error(ErrorKind::InvalidFormat, "--entry expects method,truth,pred");
        }
        entries.push_back({e.substr(0, c1), e.substr(c1 + 1, c2 - c1 - 1), e.substr(c2 + 1)});
    }
    if (entries.empty()) {
        throw Error(ErrorKind::OutOfRange, "nothing to evaluate");
    }

    struct Summary {
        std::vector<double> ari;
        std::map<std::size_t, std::size_t> k_histogram;
    };
    std::vector<std::string> order;
    std::map<std::string, Summary> methods;
    std::string csv = "method,truth,pred,ari,k\n";
    json rows = json::array();
    for (const auto& e : entries) {
        const std::vector<int> truth = load_labels(e.truth);
        const std::vector<int> pred = load_labels(e.pred);
        const double ari = cluster::adjusted_rand_index(truth, pred);
        std::vector<int> distinct = pred;
        std::sort(distinct.begin(), distinct.end());
        const auto k = static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
        if (!methods.contains(e.method)) {
            order.push_back(e.method);
        }
        auto& s = methods[e.method];
        s.ari.push_back(ari);
        ++s.k_histogram[k];
        csv += e.method + "," + e.truth + "," + e.pred + "," + format_double(ari) + "," + std::to_string(k) + "\n";
        rows.push_back({{"method", e.method}, {"truth", e.truth}, {"pred", e.pred}, {"ari", ari}, {"k", k}});
    }
    json summary = json::array();
    for (const auto& name : order) {
        const auto& s = methods[name];
        double mean = 0.0;
        for (double v : s.ari) {
            mean += v;
        }
        mean /= static_cast<double>(s.ari.size());
        json hist = json::object();
        for (const auto& [k, count] : s.k_histogram) {
            hist[std::to_string(k)] = count;
        }
        summary.push_back({{"method", name}, {"runs", s.ari.size()}, {"mean_ari", mean}, {"k_histogram", hist}});
    }
    json cfg;
    cfg["truth"] = a.truth;
    cfg["pred"] = a.preds;
    cfg["entry"] = a.entries;
    json doc;
    doc["provenance"] = provenance("eval", cfg);
    doc["summary"] = std::move(summary);
    doc["runs"] = std::move(rows);
    emit_json(a.output, doc, out);
    if (!a.csv_output.empty()) {
        write_file(a.csv_output, csv);
    }
    return 0;
}

// ---------------------------------------------------------------- graphdist

struct GraphArgs {
    Common common;
    std::string first;
    std::string second;
    std::string output;
};

// {"m": 3, "edges": [{"u": 0, "v": 1, "type": "->"}, ...]}
graph::MixedGraph load_graph(const std::string& path) {
    const json doc = read_json(path);
    if (!doc.contains("m") || !doc["m"].is_number_unsigned()) {
        throw Error(ErrorKind::InvalidFormat, "'" + path + "' needs a vertex count \"m\"");
    }
    graph::MixedGraph g(doc["m"].get<std::size_t>());
    if (doc.contains("edges")) {
        for (const auto& e : doc["edges"]) {
            if (!e.contains("u") || !e.contains("v") || !e.contains("type") || !e["u"].is_number_unsigned() ||
                !e["v"].is_number_unsigned() || !e["type"].is_string()) {
                throw Error(ErrorKind::InvalidFormat, "edge entries need \"u\", \"v\" and \"type\"");
            }
            g.set_edge(e["u"].get<std::size_t>(), e["v"].get<std::size_t>(),
                       graph::parse_edge_type(e["type"].get<std::string>()));
        }
    }
    return g;
}

json connections_json(const graph::BidirectedRepresentative& u) {
    json pairs = json::array();
    for (std::size_t j = 0; j < u.vertex_count(); ++j) {
        for (std::size_t k = j + 1; k < u.vertex_count(); ++k) {
            if (u.connected(j, k)) {
                pairs.push_back({j, k});
            }
        }
    }
    return pairs;
}

int cmd_graphdist(const GraphArgs& a, std::ostream& out) {
    const graph::MixedGraph g1 = load_graph(a.first);
    const graph::MixedGraph g2 = load_graph(a.second);
    if (g1.vertex_count() != g2.vertex_count()) {
        throw Error(ErrorKind::DimensionMismatch, "graphs have different vertex counts");
    }
    const auto u1 = graph::representative(g1);
    const auto u2 = graph::representative(g2);
    const std::size_t d = graph::graph_distance(u1, u2);
    const long inner = graph::frobenius_inner(graph::sign_map(u1), graph::sign_map(u2));
    json cfg;
    cfg["first"] = a.first;
    cfg["second"] = a.second;
    json doc;
    doc["provenance"] = provenance("graphdist", cfg);
    doc["m"] = g1.vertex_count();
    doc["distance"] = d;
    doc["sign_inner_product"] = inner;
    doc["connected_first"] = connections_json(u1);
    doc["connected_second"] = connections_json(u2);
    doc["agreement"] = connections_json(graph::hamming_product(u1, u2));
    emit_json(a.output, doc, out);
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dependence contribution kernel toolkit", "depcon"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    const auto conventions = CLI::IsMember({"szekely-rizzo", "chi2-over-n"});

    GramArgs gram;
    auto* g = app.add_subcommand("gram", "Compute the kernel Gram matrix of a dataset");
    g->add_option("input", gram.input, "Dataset (CSV or JSON)")->required();
    g->add_option("--second", gram.second, "Second dataset for a cross Gram");
    g->add_option("-o,--output", gram.output, "Output path")->required();
    g->add_option("--alpha", gram.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    g->add_option("--convention", gram.convention, "Critical value scaling")->check(conventions);
    g->add_option("--kernel", gram.kernel, "depcon, linear or linear-standardized")
        ->check(CLI::IsMember({"depcon", "linear", "linear-standardized"}));
    g->add_option("--format", gram.format, "csv or json (default: from extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    g->add_option("--memory-budget-mb", gram.memory_budget_mb, "Largest distance tensor to keep in memory");
    g->add_flag("--no-header", gram.no_header, "CSV input has no header line");
    add_common(*g, gram.common);

    TestArgs test;
    auto* t = app.add_subcommand("test", "Test whether two datasets differ in causal structure");
    t->add_option("first", test.first, "First dataset")->required();
    t->add_option("second", test.second, "Second dataset")->required();
    t->add_option("-o,--output", test.output, "Output JSON (default: stdout)");
    t->add_option("--alpha", test.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    t->add_option("--convention", test.convention, "Critical value scaling")->check(conventions);
    t->add_flag("--both-conventions", test.both, "Report both critical value scalings");
    t->add_flag("--no-header", test.no_header, "CSV inputs have no header line");
    add_common(*t, test.common);

    IndepArgs indep;
    auto* ind = app.add_subcommand("indep", "Pairwise independence tests");
    ind->add_option("input", indep.input, "Dataset")->required();
    ind->add_option("-o,--output", indep.output, "Output JSON (default: stdout)");
    ind->add_option("--alpha", indep.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    ind->add_option("--convention", indep.convention, "Critical value scaling")->check(conventions);
    ind->add_flag("--no-header", indep.no_header, "CSV input has no header line");
    add_common(*ind, indep.common);

    SynthArgs syn;
    auto* s = app.add_subcommand("synth", "Generate a labeled benchmark dataset");
    s->add_option("-o,--output", syn.output, "Output CSV; labels and models go to <output>.json")->required();
    s->add_option("--models", syn.models, "Number of generating models");
    s->add_option("--samples", syn.samples, "Samples per model");
    s->add_option("--vars", syn.vars, "Variables per model");
    s->add_option("--edge-prob", syn.edge_probability, "Edge probability of the random DAGs");
    s->add_flag("--nonlinear", syn.nonlinear, "Pair each base model with a nonlinear augmentation");
    s->add_option("--mechanism", syn.mechanism, "centered-cosine or cosine")
        ->check(CLI::IsMember({"centered-cosine", "cosine"}));
    s->add_option("--amplitude", syn.amplitude, "Nonlinear amplitude");
    s->add_option("--cap", syn.cap, "Maximum nonlinear pairs per model (0: all)");
    s->add_option("--seed", syn.seed, "Random seed");
    add_common(*s, syn.common);

    ClusterArgs clu;
    auto* c = app.add_subcommand("cluster", "Kernel k-means on a Gram matrix");
    c->add_option("input", clu.input, "Gram matrix (CSV or JSON)")->required();
    c->add_option("-o,--output", clu.output, "Labels CSV; the report goes to <output>.json")->required();
    c->add_option("--k", clu.k, "Fixed cluster count (default: select over the range)");
    c->add_option("--k-min", clu.k_min, "Smallest k to try");
    c->add_option("--k-max", clu.k_max, "Largest k to try");
    c->add_option("--criterion", clu.criterion, "vrc or silhouette")->check(CLI::IsMember({"vrc", "silhouette"}));
    c->add_option("--init", clu.init, "plusplus or random")->check(CLI::IsMember({"plusplus", "random"}));
    c->add_option("--restarts", clu.restarts, "Restarts per k");
    c->add_option("--max-iter", clu.max_iter, "Iteration limit per run");
    c->add_option("--seed", clu.seed, "Random seed");
    add_common(*c, clu.common);

    KpcaArgs kp;
    auto* k = app.add_subcommand("kpca", "Kernel PCA coordinates from a Gram matrix");
    k->add_option("input", kp.input, "Gram matrix (CSV or JSON)")->required();
    k->add_option("-o,--output", kp.output, "Coordinates CSV")->required();
    k->add_option("-d,--components", kp.components, "Number of components");
    k->add_option("--labels", kp.labels, "Labels to append (CSV or synth sidecar JSON)");
    k->add_option("--cross", kp.cross, "Kernel values of new samples against the training samples");
    k->add_option("--cross-output", kp.cross_output, "Coordinates CSV for the projected samples");
    add_common(*k, kp.common);

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Adjusted Rand index summary of clusterings");
    e->add_option("--truth", ev.truth, "True labels (CSV or synth sidecar JSON)");
    e->add_option("--pred", ev.preds, "name=path of predicted labels, scored against --truth");
    e->add_option("--entry", ev.entries, "method,truth,pred triple");
    e->add_option("-o,--output", ev.output, "Summary JSON (default: stdout)");
    e->add_option("--csv", ev.csv_output, "Per-run CSV");
    add_common(*e, ev.common);

    GraphArgs gd;
    auto* gdist = app.add_subcommand("graphdist", "Distance between two ancestral graphs");
    gdist->add_option("first", gd.first, "Graph JSON")->required();
    gdist->add_option("second", gd.second, "Graph JSON")->required();
    gdist->add_option("-o,--output", gd.output, "Output JSON (default: stdout)");
    add_common(*gdist, gd.common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& pe) {
        const int code = app.exit(pe, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (g->parsed()) return cmd_gram(gram, err);
        if (t->parsed()) return cmd_test(test, out);
        if (ind->parsed()) return cmd_indep(indep, out, err);
        if (s->parsed()) return cmd_synth(syn);
        if (c->parsed()) return cmd_cluster(clu);
        if (k->parsed()) return cmd_kpca(kp, err);
        if (e->parsed()) return cmd_eval(ev, out);
        if (gdist->parsed()) return cmd_graphdist(gd, out);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_code(ex.kind());
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace depcon::cli
