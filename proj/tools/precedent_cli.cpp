// SPDX-License-Identifier: Apache-2.0
// Copyright 2025 Precedent Contributors
//
// precedent-cli: ingest | rank | stats | query | serve | export
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "precedent/precedent.hpp"

namespace fs = std::filesystem;
using namespace precedent;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Options {
    std::string corpus;
    std::string store;
    std::string out;
    std::string histogram;
    std::string registry;
    std::string report;
    std::string config;
    std::string w_text = "1/3";
    std::string w_cit = "1/3";
    std::string w_court = "1/3";
    int k = 5;
    int n = 3;
    std::string factor_mode = "whole_query";
    std::string factor_filter;
    std::optional<std::string> embedder;
    std::string embedder_endpoint;
    std::optional<std::size_t> dimension;
    std::string completion_endpoint;
    std::string bind = "127.0.0.1:8080";
    std::vector<std::string> text;
    bool json = false;
    bool prompts = false;
};

ServiceConfig config_from(const Options& o) {
    // Config file and PRECEDENT_* variables first; explicit flags win.
    auto c = load_config(o.config.empty() ? std::nullopt : std::optional<std::string>(o.config));
    if (o.embedder) c.embedder_mode = *o.embedder;
    if (!o.embedder_endpoint.empty()) c.embedder_endpoint = o.embedder_endpoint;
    if (o.dimension) c.embedder_dimension = *o.dimension;
    if (!o.completion_endpoint.empty()) c.completion_endpoint = o.completion_endpoint;
    c.validate();
    return c;
}

void require_store(const std::string& store) {
    if (store.empty()) throw Error(Errc::Io, "no store given (use --store)", "store");
    if (!fs::exists(store)) throw Error(Errc::Io, "store '" + store + "' does not exist", "store");
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(Errc::Io, "cannot write '" + path + "'", "out");
    return file;
}

int run_ingest(const Options& o) {
    if (o.corpus.empty() || o.store.empty()) {
        std::cerr << "ingest needs --corpus and --store\n";
        return kExitUsage;
    }
    IngestOptions opts;
    if (!o.registry.empty()) {
        std::ifstream in(o.registry);
        if (!in) throw Error(Errc::Io, "cannot read registry '" + o.registry + "'", "registry");
        opts.registry = ReporterRegistry::load(in);
    }
    auto result = ingest_directory(o.corpus, opts);
    const auto report_path = o.report.empty() ? o.store + ".report.json" : o.report;
    {
        std::ofstream rep(report_path, std::ios::trunc);
        if (!rep) throw Error(Errc::Io, "cannot write report '" + report_path + "'", "report");
        rep << result.report.to_json().dump(2) << '\n';
    }
    const auto& r = result.report;
    if (!r.ok()) {
        std::cerr << "ingest failed with " << r.schema_violations.size() << " schema violation(s):\n";
        for (const auto& v : r.schema_violations) std::cerr << "  " << v << '\n';
        std::cerr << "report: " << report_path << '\n';
        return kExitData;
    }
    write_store(result.graph, o.store);
    fs::remove(index_path_for(o.store));
    const auto config = config_from(o);
    (void)open_corpus(o.store, make_embedder(config), {}, true);
    std::cout << "ingested " << r.records << " records: " << r.stats.case_count << " cases, "
              << r.stats.opinion_count << " opinions, " << r.stats.court_count << " courts, "
              << r.stats.citation_count << " citations (" << r.extracted_edges << " extracted, "
              << r.unresolved_citations.size() << " unresolved)\n";
    if (!r.auto_created_courts.empty()) {
        std::cout << "auto-created courts:";
        for (const auto& c : r.auto_created_courts) std::cout << ' ' << c;
        std::cout << '\n';
    }
    std::cout << "store: " << o.store << "\nreport: " << report_path << '\n';
    return kExitOk;
}

int run_rank(const Options& o) {
    require_store(o.store);
    const auto g = load_store(o.store);
    const auto scores = compute_authority(g);
    std::ofstream file;
    auto& out = open_out(o.out, file);
    write_scores(out, scores.citation_rank, scores.citation_scaled, "case");
    write_scores(out, scores.court_rank, scores.court_scaled, "court");
    if (!o.histogram.empty()) {
        std::ofstream h(o.histogram, std::ios::trunc);
        if (!h) throw Error(Errc::Io, "cannot write '" + o.histogram + "'", "histogram");
        write_histogram(h, influence_distribution(g, scores.citation_rank));
    }
    if (!scores.converged()) {
        std::cerr << "warning: PageRank did not converge within the iteration limit\n";
    }
    return kExitOk;
}

int run_stats(const Options& o) {
    require_store(o.store);
    const auto s = load_store(o.store).stats();
    auto year = [](const std::optional<int>& y) { return y ? std::to_string(*y) : std::string("-"); };
    if (o.json) {
        nlohmann::json j{{"case_count", s.case_count},     {"opinion_count", s.opinion_count},
                         {"court_count", s.court_count},   {"passage_count", s.passage_count},
                         {"citation_count", s.citation_count},
                         {"year_min", s.year_min ? nlohmann::json(*s.year_min) : nlohmann::json()},
                         {"year_max", s.year_max ? nlohmann::json(*s.year_max) : nlohmann::json()}};
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    }
    std::cout << std::left;
    std::cout << std::setw(30) << "Total Number of Cases" << s.case_count << '\n'
              << std::setw(30) << "Total Number of Opinions" << s.opinion_count << '\n'
              << std::setw(30) << "Time Range Coverage" << year(s.year_min) << '-' << year(s.year_max) << '\n'
              << std::setw(30) << "Number of Unique Courts" << s.court_count << '\n'
              << std::setw(30) << "Factor Passages" << s.passage_count << '\n'
              << std::setw(30) << "Citation Edges" << s.citation_count << '\n';
    return kExitOk;
}

int run_query(const Options& o) {
    require_store(o.store);
    QueryRequest req;
    for (const auto& t : o.text) req.text += (req.text.empty() ? "" : " ") + t;
    req.weights = {parse_weight(o.w_text, "w_text"), parse_weight(o.w_cit, "w_cit"),
                   parse_weight(o.w_court, "w_court")};
    req.k = o.k;
    req.n = o.n;
    req.factor_mode = parse_factor_mode(o.factor_mode);
    if (!o.factor_filter.empty()) req.factor_filter = parse_factor(o.factor_filter);
    req.include_prompts = o.prompts;
    req.validate();

    const auto corpus = open_corpus(o.store, make_embedder(config_from(o)));
    const TemplateFactorAnalyzer analyzer;
    const auto resp = retrieve(req, *corpus, analyzer);
    if (o.json) {
        std::cout << to_json(resp).dump(2) << '\n';
        return kExitOk;
    }
    std::cout << std::left << std::setw(5) << "rank" << std::setw(44) << "case" << std::right
              << std::setw(8) << "fused" << std::setw(8) << "text" << std::setw(8) << "cit"
              << std::setw(8) << "court" << '\n';
    std::cout << std::fixed << std::setprecision(3);
    int rank = 1;
    for (const auto& r : resp.results) {
        std::string name = r.case_name + " (" + std::to_string(r.year) + ")";
        if (name.size() > 42) name = name.substr(0, 39) + "...";
        std::cout << std::left << std::setw(5) << rank++ << std::setw(44) << name << std::right
                  << std::setw(8) << r.score.fused << std::setw(8) << r.score.text_sim << std::setw(8)
                  << r.score.citation << std::setw(8) << r.score.court << '\n';
    }
    if (!resp.expansions.empty()) {
        std::cout << "\ncited by the results:\n";
        for (const auto& e : resp.expansions) {
            std::cout << "  " << e.expansion.rank << ". " << e.case_name << "  (via " << e.expansion.source_case
                      << ", score " << e.expansion.score << ")\n";
        }
    }
    for (const auto& p : resp.prompts) std::cout << "\n----- prompt -----\n" << p;
    return kExitOk;
}

int run_serve(const Options& o) {
    auto config = config_from(o);
    if (!o.store.empty()) config.corpus_path = o.store;
    if (o.bind != "127.0.0.1:8080" || config.bind.empty()) config.bind = o.bind;
    std::shared_ptr<const FactorAnalyzer> analyzer = std::make_shared<TemplateFactorAnalyzer>();
    if (!config.completion_endpoint.empty()) {
        analyzer = std::make_shared<CompletionFactorAnalyzer>(
            std::make_shared<HttpCompletionClient>(config.completion_endpoint));
    }
    Service service(request_defaults(config), analyzer);
    if (!config.corpus_path.empty()) {
        require_store(config.corpus_path);
        service.load(open_corpus(config.corpus_path, make_embedder(config), {}, true));
    }
    const auto colon = config.bind.rfind(':');
    if (colon == std::string::npos) throw Error(Errc::InvalidConfig, "bind must be host:port", "bind");
    const auto host = config.bind.substr(0, colon);
    const int port = std::stoi(config.bind.substr(colon + 1));
    httplib::Server server;
    service.attach(server);
    std::cout << "listening on " << host << ':' << port << std::endl;
    if (!server.listen(host, port)) throw Error(Errc::Io, "cannot bind " + config.bind, "bind");
    return kExitOk;
}

int run_export(const Options& o) {
    require_store(o.store);
    const auto g = load_store(o.store);
    std::ofstream file;
    export_graph(g, open_out(o.out, file));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Precedent retrieval: citation-aware ranking of case law"};
    app.require_subcommand(1);
    Options o;

    auto add_store = [&o](CLI::App* sub) { sub->add_option("--store", o.store, "Store file (JSONL corpus records)"); };
    auto add_embedder = [&o](CLI::App* sub) {
        sub->add_option("--embedder", o.embedder, "Embedder: reference | http")
            ->check(CLI::IsMember({"reference", "http"}));
        sub->add_option("--embedder-endpoint", o.embedder_endpoint, "URL of the HTTP embedder");
        sub->add_option("--dimension", o.dimension, "Embedding dimension");
        sub->add_option("--config", o.config, "Service configuration file");
    };

    auto* ingest = app.add_subcommand("ingest", "Build a store from a directory of corpus records");
    ingest->add_option("--corpus", o.corpus, "Directory of *.jsonl record files")->required();
    add_store(ingest);
    ingest->add_option("--registry", o.registry, "Reporter registry (JSONL)");
    ingest->add_option("--report", o.report, "Validation report path (default <store>.report.json)");
    add_embedder(ingest);

    auto* rank = app.add_subcommand("rank", "Write citation and court PageRank scores");
    add_store(rank);
    rank->add_option("--out", o.out, "Scores file (default stdout)");
    rank->add_option("--histogram", o.histogram, "Write the per-tier log10 score histogram here");

    auto* stats = app.add_subcommand("stats", "Corpus summary");
    add_store(stats);
    stats->add_flag("--json", o.json, "Machine-readable output");

    auto* query = app.add_subcommand("query", "Rank precedents for a dispute description");
    add_store(query);
    query->add_option("text", o.text, "Dispute description")->required();
    query->add_option("--w-text", o.w_text, "Text similarity weight (number or fraction)");
    query->add_option("--w-cit", o.w_cit, "Citation authority weight");
    query->add_option("--w-court", o.w_court, "Court rank weight");
    query->add_option("--k", o.k, "Number of cases to return");
    query->add_option("--n", o.n, "Number of cited cases to add");
    query->add_option("--factor-mode", o.factor_mode, "whole_query | per_factor")
        ->check(CLI::IsMember({"whole_query", "per_factor"}));
    query->add_option("--factor-filter", o.factor_filter, "Restrict search to one factor");
    query->add_flag("--json", o.json, "Print the full JSON response");
    query->add_flag("--prompts", o.prompts, "Include case analysis prompts");
    add_embedder(query);

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    add_store(serve);
    serve->add_option("--bind", o.bind, "host:port");
    serve->add_option("--completion-endpoint", o.completion_endpoint,
                      "URL of a completion service used for factor analysis");
    add_embedder(serve);

    auto* exp = app.add_subcommand("export", "Write the store's corpus records");
    add_store(exp);
    exp->add_option("--out", o.out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ingest) return run_ingest(o);
        if (*rank) return run_rank(o);
        if (*stats) return run_stats(o);
        if (*query) return run_query(o);
        if (*serve) return run_serve(o);
        if (*exp) return run_export(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
