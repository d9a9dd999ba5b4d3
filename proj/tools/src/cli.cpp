#include "suppkg/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "suppkg/discovery.hpp"
#include "suppkg/error.hpp"
#include "suppkg/filtering.hpp"
#include "suppkg/kgraph.hpp"
#include "suppkg/pattern.hpp"
#include "suppkg/predications.hpp"
#include "suppkg/terminology.hpp"
#include "suppkg/text.hpp"

namespace suppkg::cli {

namespace fs = std::filesystem;
namespace term = suppkg::terminology;

namespace {

// An Error raised while reading a particular file.
class FileError : public Error {
public:
    FileError(std::string file, const Error& cause) : Error(cause.what()), file_(std::move(file)) {
        line_ = cause.line();
        if (const auto* p = dynamic_cast<const ParseError*>(&cause)) column_ = p->column();
    }
    const std::string& file() const noexcept { return file_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string file_;
    std::size_t column_ = 0;
};

// A file that could not be opened, read or written.
class IoError : public Error {
public:
    IoError(const std::string& message, std::string file) : Error(message), file_(std::move(file)) {}
    const std::string& file() const noexcept { return file_; }

private:
    std::string file_;
};

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open input '{}'", path.string()), path.string());
    return in;
}

template <typename F>
auto read_file(const fs::path& path, F&& parse) {
    auto in = open_in(path);
    try {
        return parse(in);
    } catch (const FileError&) {
        throw;
    } catch (const Error& e) {
        throw FileError(path.string(), e);
    }
}

std::string slurp(const fs::path& path) {
    auto in = open_in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <typename F>
void write_file(const fs::path& path, F&& emit) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open output '{}'", path.string()), path.string());
    emit(out);
    out.flush();
    if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()), path.string());
}

std::string kv_value(std::string_view value) {
    if (!value.empty() && value.find_first_of(" \t\"=\\") == std::string_view::npos) {
        return std::string(value);
    }
    std::string out = "\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

using Fields = std::vector<std::pair<std::string, std::string>>;

void summary(std::ostream& out, std::string_view stage, const Fields& fields) {
    out << "stage=" << stage;
    for (const auto& [k, v] : fields) out << ' ' << k << '=' << kv_value(v);
    out << '\n';
}

template <typename T>
std::string str(T value) {
    return fmt::format("{}", value);
}

void warn(std::ostream& err, std::string_view stage, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        nlohmann::ordered_json rec;
        rec["level"] = "warning";
        rec["stage"] = stage;
        rec["message"] = w;
        err << rec.dump() << '\n';
    }
}

std::vector<Predication> load_predications(const fs::path& path, std::size_t* rejected = nullptr) {
    auto parsed = read_file(path, [](std::istream& in) { return parse_predications(in); });
    if (rejected) *rejected = parsed.rejects.size();
    return std::move(parsed.predications);
}

Graph load_graph(const fs::path& path) {
    const std::string doc = slurp(path);
    try {
        return deserialize(doc);
    } catch (const Error& e) {
        throw FileError(path.string(), e);
    }
}

// Ids from a TSV carrying a predication_id (or id) column.
std::vector<std::string> load_ids(const fs::path& path) {
    return read_file(path, [](std::istream& in) {
        TsvReader reader(in);
        std::vector<std::string> ids;
        if (reader.header().empty()) return ids;
        auto col = reader.column("predication_id");
        if (!col) col = reader.column("id");
        if (!col) throw Error("missing column 'predication_id'");
        std::string line;
        while (reader.next(line)) {
            auto cells = split(line, '\t');
            if (*col >= cells.size()) throw Error("short row", reader.line_number());
            ids.emplace_back(trim(cells[*col]));
        }
        return ids;
    });
}

PatternSpec resolve_pattern(const std::string& name_or_path) {
    if (auto shipped = shipped_pattern(name_or_path)) return *shipped;
    if (!fs::exists(name_or_path)) {
        throw Error(fmt::format("'{}' is neither a shipped pattern (DsGD, DsGFGD) nor a file",
                                name_or_path));
    }
    const std::string text = slurp(name_or_path);
    try {
        return parse_pattern(text);
    } catch (const Error& e) {
        throw FileError(name_or_path, e);
    }
}

struct Context {
    std::ostream& out;
    std::ostream& err;
};

using Action = std::function<void(Context&)>;

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void add_merge_terminology(CLI::App& app, Action& action) {
    struct Opts {
        std::string base_dir, supplement, ranking, out_dir, report, default_tui = "T121";
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("merge-terminology", "Merge a supplement vocabulary into RRF files");
    cmd->add_option("--base-dir", o->base_dir, "Directory holding MRCONSO.RRF, MRSTY.RRF, ...")->required();
    cmd->add_option("--supplement", o->supplement, "Supplement vocabulary TSV")->required();
    cmd->add_option("--ranking", o->ranking, "MRRANK-format ranking of supplement sources")->required();
    cmd->add_option("--out-dir", o->out_dir, "Output directory")->required();
    cmd->add_option("--report", o->report, "Merge report path (default: <out-dir>/merge_report.json)");
    cmd->add_option("--default-tui", o->default_tui, "Semantic type given to merged concepts")
        ->capture_default_str();
    cmd->callback([o, &action] {
        action = [o](Context& ctx) {
            const fs::path base(o->base_dir);
            const fs::path out_dir(o->out_dir);
            if (fs::exists(out_dir) && fs::equivalent(base, out_dir)) {
                throw Error("--out-dir must differ from --base-dir");
            }
            term::Warnings warnings;
            auto table = [&](term::RrfKind kind) {
                return read_file(base / std::string(term::file_name(kind)), [&](std::istream& in) {
                    return term::read_rrf(in, kind, &warnings);
                });
            };
            auto optional_table = [&](term::RrfKind kind) -> std::optional<term::RrfTable> {
                if (!fs::exists(base / std::string(term::file_name(kind)))) return std::nullopt;
                return table(kind);
            };
            term::RrfSet set;
            set.mrconso = table(term::RrfKind::Mrconso);
            set.mrsty = table(term::RrfKind::Mrsty);
            set.mrrank = optional_table(term::RrfKind::Mrrank);
            set.mrsab = optional_table(term::RrfKind::Mrsab);

            auto ranking = read_file(o->ranking, [&](std::istream& in) {
                return term::parse_mrrank(in, &warnings);
            });
            auto supplement = read_file(o->supplement, [](std::istream& in) {
                return term::read_supplement(in);
            });
            auto result = term::merge_terminology(set, supplement, ranking,
                                                  term::semantic_type_for(o->default_tui));
            warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());

            fs::create_directories(out_dir);
            std::set<std::string> written;
            auto emit = [&](term::RrfKind kind, const term::RrfTable& t) {
                const std::string name(term::file_name(kind));
                written.insert(name);
                write_file(out_dir / name, [&](std::ostream& os) { term::write_rrf(t, os); });
            };
            term::validate(result.merged);
            emit(term::RrfKind::Mrconso, result.merged.mrconso);
            emit(term::RrfKind::Mrsty, result.merged.mrsty);
            if (result.merged.mrrank) emit(term::RrfKind::Mrrank, *result.merged.mrrank);
            if (result.merged.mrsab) emit(term::RrfKind::Mrsab, *result.merged.mrsab);

            std::vector<fs::path> others;
            for (const auto& entry : fs::directory_iterator(base)) {
                if (entry.is_regular_file() && !written.count(entry.path().filename().string())) {
                    others.push_back(entry.path());
                }
            }
            std::sort(others.begin(), others.end());
            for (const auto& p : others) {
                fs::copy_file(p, out_dir / p.filename(), fs::copy_options::overwrite_existing);
            }

            const fs::path report = o->report.empty() ? out_dir / "merge_report.json" : fs::path(o->report);
            write_file(report, [&](std::ostream& os) { os << term::to_json(result.report); });
            warn(ctx.err, "merge-terminology", warnings);
            const auto& r = result.report;
            summary(ctx.out, "merge-terminology",
                    {{"new_concepts", str(r.new_concepts)},
                     {"linked_concepts", str(r.linked_concepts)},
                     {"atoms_added", str(r.atoms_added)},
                     {"semantic_types_added", str(r.semantic_types_added)},
                     {"sources_added", str(r.sources_added)},
                     {"rank_entries_added", str(r.rank_entries_added)},
                     {"copied_files", str(others.size())},
                     {"warnings", str(warnings.size())}});
        };
    });
}

void add_ingest(CLI::App& app, Action& action) {
    struct Opts {
        std::string input, out, rejects;
        bool keep_duplicates = false;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("ingest", "Validate and deduplicate a predication TSV");
    cmd->add_option("--input", o->input, "Predication TSV")->required();
    cmd->add_option("--out", o->out, "Validated predication TSV")->required();
    cmd->add_option("--rejects", o->rejects, "Reject report TSV");
    cmd->add_flag("--keep-duplicates", o->keep_duplicates, "Skip deduplication");
    cmd->callback([o, &action] {
        action = [o](Context& ctx) {
            auto parsed = read_file(o->input, [](std::istream& in) { return parse_predications(in); });
            const std::size_t accepted = parsed.predications.size();
            auto kept = o->keep_duplicates ? std::move(parsed.predications) : dedupe(parsed.predications);
            write_file(o->out, [&](std::ostream& os) { write_predications(kept, os); });
            if (!o->rejects.empty()) {
                write_file(o->rejects, [&](std::ostream& os) { write_rejects(parsed.rejects, os); });
            }
            summary(ctx.out, "ingest",
                    {{"rows", str(accepted + parsed.rejects.size())},
                     {"accepted", str(accepted)},
                     {"rejected", str(parsed.rejects.size())},
                     {"duplicates_removed", str(accepted - kept.size())},
                     {"written", str(kept.size())}});
        };
    });
}

void add_score(CLI::App& app, Action& action) {
    struct Opts {
        std::string predications, scorer = "negation", scores_in, out;
        double constant = 1.0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("score", "Assign a correctness probability to each predication");
    cmd->add_option("--predications", o->predications, "Predication TSV")->required();
    cmd->add_option("--scorer", o->scorer, "external, constant or negation")
        ->check(CLI::IsMember({"external", "constant", "negation"}))
        ->capture_default_str();
    cmd->add_option("--scores-in", o->scores_in, "Score TSV for the external scorer");
    cmd->add_option("--constant", o->constant, "Value for the constant scorer")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--out", o->out, "Score TSV")->required();
    cmd->callback([o, &action] {
        if (o->scorer == "external" && o->scores_in.empty()) {
            throw CLI::RequiredError("--scores-in (needed by --scorer external)");
        }
        action = [o](Context& ctx) {
            auto preds = load_predications(o->predications);
            Scorer scorer = NegationScorer{};
            if (o->scorer == "external") {
                scorer = ExternalScorer::from(read_file(o->scores_in, [](std::istream& in) {
                    return read_scores(in);
                }));
            } else if (o->scorer == "constant") {
                scorer = ConstantScorer{o->constant};
            }
            auto scores = score_predications(preds, scorer);
            write_file(o->out, [&](std::ostream& os) { write_scores(scores, os); });
            summary(ctx.out, "score", {{"scorer", o->scorer}, {"scored", str(scores.size())}});
        };
    });
}

void add_filter(CLI::App& app, Action& action) {
    struct Opts {
        std::string predications, scores, out, removed;
        double threshold = 0.5;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("filter", "Keep predications whose probability reaches the threshold");
    cmd->add_option("--predications", o->predications, "Predication TSV")->required();
    cmd->add_option("--scores", o->scores, "Score TSV")->required();
    cmd->add_option("--threshold", o->threshold, "Minimum probability to keep")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--out", o->out, "Retained predication TSV")->required();
    cmd->add_option("--removed", o->removed, "Removed predication TSV");
    cmd->callback([o, &action] {
        action = [o](Context& ctx) {
            auto preds = load_predications(o->predications);
            auto scores = read_file(o->scores, [](std::istream& in) { return read_scores(in); });
            auto r = filter_by_threshold(preds, scores, o->threshold);
            write_file(o->out, [&](std::ostream& os) {
                write_predications(select<Predication>(preds, r.retained), os);
            });
            if (!o->removed.empty()) {
                write_file(o->removed, [&](std::ostream& os) {
                    write_predications(select<Predication>(preds, r.removed), os);
                });
            }
            summary(ctx.out, "filter",
                    {{"input", str(r.stats.input)},
                     {"retained", str(r.stats.retained)},
                     {"removed", str(r.removed.size())},
                     {"retained_percent", format_fixed2(r.stats.retained_percent())},
                     {"report", r.stats.text()}});
        };
    });
}

void add_split(CLI::App& app, Action& action) {
    struct Opts {
        std::string annotations, out_dir;
        SplitSpec spec;
        bool no_balance = false, no_match = false;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("split", "Seeded train/dev/test split of annotations");
    cmd->add_option("--annotations", o->annotations, "Annotation TSV")->required();
    cmd->add_option("--out-dir", o->out_dir, "Directory for train.tsv, dev.tsv, test.tsv")->required();
    cmd->add_option("--seed", o->spec.seed, "Shuffle seed")->capture_default_str();
    cmd->add_option("--train", o->spec.train, "Train ratio")->capture_default_str();
    cmd->add_option("--dev", o->spec.dev, "Dev ratio")->capture_default_str();
    cmd->add_option("--test", o->spec.test, "Test ratio")->capture_default_str();
    cmd->add_flag("--no-balance", o->no_balance, "Do not downsample train/dev to balance classes");
    cmd->add_flag("--no-match-source", o->no_match,
                  "Draw the test set uniformly instead of matching the class distribution");
    cmd->callback([o, &action] {
        action = [o](Context& ctx) {
            SplitSpec spec = o->spec;
            spec.balance_train_dev = !o->no_balance;
            spec.test_matches_source_distribution = !o->no_match;
            auto annotations = read_file(o->annotations, [](std::istream& in) {
                return read_annotations(in);
            });
            auto s = split_dataset(annotations, spec);
            const fs::path dir(o->out_dir);
            write_file(dir / "train.tsv", [&](std::ostream& os) { write_id_list(s.train, os); });
            write_file(dir / "dev.tsv", [&](std::ostream& os) { write_id_list(s.dev, os); });
            write_file(dir / "test.tsv", [&](std::ostream& os) { write_id_list(s.test, os); });
            write_file(dir / "discarded.tsv", [&](std::ostream& os) { write_id_list(s.discarded, os); });

            std::unordered_map<std::string_view, Label> labels;
            for (const auto& a : annotations) labels.emplace(a.predication_id, a.label);
            auto positives = [&](const std::vector<std::string>& ids) {
                std::size_t n = 0;
                for (const auto& id : ids) n += labels.at(id) == Label::Correct;
                return n;
            };
            const std::size_t test_pos = positives(s.test);
            summary(ctx.out, "split",
                    {{"items", str(annotations.size())},
                     {"train", str(s.train.size())},
                     {"dev", str(s.dev.size())},
                     {"test", str(s.test.size())},
                     {"discarded", str(s.discarded.size())},
                     {"train_positive", str(positives(s.train))},
                     {"dev_positive", str(positives(s.dev))},
                     {"test_positive", str(test_pos)},
                     {"test_positive_percent",
                      format_fixed2(s.test.empty() ? 0.0
                                                   : 100.0 * static_cast<double>(test_pos) /
                                                         static_cast<double>(s.test.size()))}});
        };
    });
}

void add_evaluate(CLI::App& app, Action& action) {
    struct Opts {
        std::string annotations, retained;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("evaluate", "Precision before and after filtering");
    cmd->add_option("--annotations", o->annotations, "Annotation TSV")->required();
    cmd->add_option("--retained", o->retained,
                    "TSV of retained predications (predication_id or id column)")
        ->required();
    cmd->callback([o, &action] {
        action = [o](Context& ctx) {
            auto annotations = read_file(o->annotations, [](std::istream& in) {
                return read_annotations(in);
            });
            auto retained = load_ids(o->retained);
            auto r = evaluate_precision(annotations, retained);
            summary(ctx.out, "evaluate",
                    {{"total_before", str(r.total_before)},
                     {"correct_before", str(r.correct_before)},
                     {"precision_before", format_precision(r.before())},
                     {"total_after", str(r.total_after)},
                     {"correct_after", str(r.correct_after)},
                     {"precision_after", format_precision(r.after())}});
        };
    });
}

void add_summarize_runs(CLI::App& app, Action& action) {
    struct Opts {
        std::vector<double> values;
        std::string input, metric = "score";
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("summarize-runs", "Mean and 95% t-interval over repeated runs");
    auto* values = cmd->add_option("--values", o->values, "Comma-separated run values")->delimiter(',');
    auto* input = cmd->add_option("--input", o->input, "File with one value per line");
    values->excludes(input);
    cmd->add_option("--metric", o->metric, "Metric name")->capture_default_str();
    cmd->callback([o, &action, values, input] {
        if (values->count() == 0 && input->count() == 0) {
            throw CLI::RequiredError("--values or --input");
        }
        action = [o](Context& ctx) {
            std::vector<double> v = o->values;
            if (!o->input.empty()) {
                v = read_file(o->input, [](std::istream& in) {
                    std::vector<double> out;
                    std::string line;
                    std::size_t n = 0;
                    while (std::getline(in, line)) {
                        ++n;
                        auto t = trim(line);
                        if (t.empty()) continue;
                        double x = 0.0;
                        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
                        if (ec != std::errc{} || ptr != t.data() + t.size()) {
                            throw Error(fmt::format("'{}' is not a number", t), n);
                        }
                        out.push_back(x);
                    }
                    return out;
                });
            }
            auto s = summarize_runs(v, o->metric);
            summary(ctx.out, "summarize-runs",
                    {{"metric", s.metric},
                     {"n", str(s.values.size())},
                     {"mean", fmt::format("{:.4f}", s.mean)},
                     {"ci_low", fmt::format("{:.4f}", s.low)},
                     {"ci_high", fmt::format("{:.4f}", s.high)}});
        };
    });
}

void add_build_graph(CLI::App& app, Action& action) {
    struct Opts {
        std::string predications, scores, source, out, merge_log;
        std::vector<std::string> merge;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("build-graph", "Build the knowledge graph from filtered predications");
    cmd->add_option("--predications", o->predications, "Retained predication TSV")->required();
    cmd->add_option("--scores", o->scores, "Score TSV covering every predication")->required();
    cmd->add_option("--supplement-source", o->source, "Vocabulary id marking supplement concepts")
        ->required();
    cmd->add_option("--merge", o->merge, "Graph document(s) to merge into the result");
    cmd->add_option("--merge-log", o->merge_log, "TSV of node-name conflicts resolved while merging");
    cmd->add_option("--out", o->out, "Graph document")->required();
    cmd->callback([o, &action] {
        action = [o](Context& ctx) {
            auto preds = load_predications(o->predications);
            auto scores = read_file(o->scores, [](std::istream& in) { return read_scores(in); });
            Graph g = build_graph(preds, scores, o->source);
            std::vector<NameConflict> conflicts;
            for (const auto& path : o->merge) {
                auto m = merge_graphs(g, load_graph(path));
                g = std::move(m.graph);
                conflicts.insert(conflicts.end(), m.conflicts.begin(), m.conflicts.end());
            }
            write_file(o->out, [&](std::ostream& os) { os << serialize(g); });
            if (!o->merge_log.empty()) {
                write_file(o->merge_log, [&](std::ostream& os) {
                    os << "cui\tkept\tdropped\n";
                    for (const auto& c : conflicts) {
                        os << c.cui << '\t' << tsv_cell(c.kept) << '\t' << tsv_cell(c.dropped) << '\n';
                    }
                });
            }
            const auto st = graph_stats(g);
            summary(ctx.out, "build-graph",
                    {{"nodes", str(st.nodes)},
                     {"edges", str(st.edges)},
                     {"supplement_nodes", str(st.supplement_nodes)},
                     {"predications", str(st.predications)},
                     {"merged_graphs", str(o->merge.size())},
                     {"name_conflicts", str(conflicts.size())}});
        };
    });
}

void add_stats(CLI::App& app, Action& action) {
    struct Opts {
        std::string graph, distribution;
        std::size_t total = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("stats", "Node, edge and predicate counts of a graph");
    cmd->add_option("--graph", o->graph, "Graph document")->required();
    cmd->add_option("--distribution", o->distribution, "Write the predicate distribution TSV here");
    cmd->add_option("--total", o->total, "Reference total for distribution percentages");
    cmd->callback([o, &action] {
        action = [o](Context& ctx) {
            const Graph g = load_graph(o->graph);
            const auto st = graph_stats(g);
            if (!o->distribution.empty()) {
                std::map<Predicate, std::size_t> counts;
                for (const auto& e : g.edges()) counts[e.predicate] += e.support();
                auto dist = predicate_distribution(
                    counts, o->total ? std::optional<std::size_t>(o->total) : std::nullopt);
                write_file(o->distribution, [&](std::ostream& os) {
                    os << "predicate\tcount\tpercent\n";
                    for (const auto& d : dist) {
                        os << to_string(d.predicate) << '\t' << d.count << '\t'
                           << format_fixed2(d.percent) << '\n';
                    }
                });
            }
            summary(ctx.out, "stats",
                    {{"nodes", str(st.nodes)},
                     {"edges", str(st.edges)},
                     {"supplement_nodes", str(st.supplement_nodes)},
                     {"predications", str(st.predications)},
                     {"summary", st.text()}});
        };
    });
}

void add_discover(CLI::App& app, Action& action) {
    struct Opts {
        std::string graph, pattern, predications, worksheet, pathways;
        std::size_t top_k = 50;
        bool novel_only = false, collapse = false, all = false;
        std::vector<std::string> interaction = {"INTERACTS_WITH"};
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("discover", "Find and rank pathways matching a pattern");
    cmd->add_option("--graph", o->graph, "Graph document")->required();
    cmd->add_option("--pattern", o->pattern, "Shipped pattern name (DsGD, DsGFGD) or pattern file")
        ->required();
    cmd->add_option("--top-k", o->top_k, "Pathways to report")->capture_default_str();
    cmd->add_flag("--all", o->all, "Report every pathway (ignores --top-k)");
    cmd->add_flag("--novel-only", o->novel_only,
                  "Drop pathways whose endpoints are already directly connected");
    cmd->add_option("--interaction-predicates", o->interaction,
                    "Predicates counting as a direct connection")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_flag("--collapse-endpoints", o->collapse,
                  "Keep only the best pathway per (first, last) node pair");
    cmd->add_option("--pathways", o->pathways, "Ranked pathway TSV");
    auto* ws = cmd->add_option("--worksheet", o->worksheet, "Reviewer worksheet TSV");
    auto* preds = cmd->add_option("--predications", o->predications,
                                  "Predication TSV supplying worksheet sentences");
    ws->needs(preds);
    cmd->callback([o, &action] {
        std::set<Predicate> interaction;
        for (const auto& name : o->interaction) {
            auto p = parse_predicate(trim(name));
            if (!p) throw CLI::ValidationError("--interaction-predicates", "unknown predicate " + name);
            interaction.insert(*p);
        }
        action = [o, interaction](Context& ctx) {
            const PatternSpec pattern = resolve_pattern(o->pattern);
            const Graph g = load_graph(o->graph);
            auto found = find_pathways(g, pattern);
            const std::size_t matched = found.size();
            auto ranked = rank_pathways(std::move(found));
            std::size_t direct = 0;
            if (o->novel_only) {
                auto split = novelty_filter(g, ranked, interaction);
                direct = split.directly_connected.size();
                ranked = std::move(split.novel);
            }
            if (o->collapse) ranked = collapse_endpoints(ranked);
            const std::size_t candidates = ranked.size();
            if (!o->all && ranked.size() > o->top_k) ranked.resize(o->top_k);

            if (!o->pathways.empty()) {
                write_file(o->pathways, [&](std::ostream& os) { write_pathways(ranked, os); });
            }
            if (!o->worksheet.empty()) {
                const PredicationStore store(load_predications(o->predications));
                write_file(o->worksheet, [&](std::ostream& os) {
                    write_review_worksheet(ranked, g, store, os);
                });
            }
            Fields f = {{"pattern", pattern.name},
                        {"matched", str(matched)},
                        {"directly_connected", str(direct)},
                        {"candidates", str(candidates)},
                        {"reported", str(ranked.size())}};
            if (!ranked.empty()) f.emplace_back("top_score", fmt::format("{}", ranked.front().score));
            summary(ctx.out, "discover", f);
        };
    });
}

void add_check_known(CLI::App& app, Action& action) {
    struct Opts {
        std::vector<std::string> pathways;
        std::string known, out;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("check-known", "Match pathway endpoints against known interactions");
    cmd->add_option("--pathways", o->pathways, "Pathway TSV(s) written by discover")->required();
    cmd->add_option("--known", o->known, "TSV with supplement_cui, drug_cui")->required();
    cmd->add_option("--out", o->out, "Pathway TSV of the known matches");
    cmd->callback([o, &action] {
        action = [o](Context& ctx) {
            std::vector<Pathway> all;
            for (const auto& path : o->pathways) {
                auto part = read_file(path, [](std::istream& in) { return read_pathways(in); });
                all.insert(all.end(), std::make_move_iterator(part.begin()),
                           std::make_move_iterator(part.end()));
            }
            auto known = read_file(o->known, [](std::istream& in) { return read_known(in); });
            auto r = check_known(all, known);
            if (!o->out.empty()) {
                write_file(o->out, [&](std::ostream& os) { write_pathways(r.known, os); });
            }
            Fields f = {{"pathways", str(all.size())},
                        {"known", str(r.known.size())},
                        {"unknown", str(r.unknown.size())}};
            for (const auto& [name, counts] : r.per_pattern) {
                f.emplace_back("known." + name, fmt::format("{}/{}", counts.first, counts.second));
            }
            summary(ctx.out, "check-known", f);
        };
    });
}

void add_compare(CLI::App& app, Action& action) {
    struct Opts {
        std::string base, extended, source, out;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = app.add_subcommand("compare", "Compare supplement coverage of two extractions");
    cmd->add_option("--base", o->base, "Predication TSV from the base extraction")->required();
    cmd->add_option("--extended", o->extended, "Predication TSV from the extended extraction")->required();
    cmd->add_option("--supplement-source", o->source, "Vocabulary id marking supplement concepts")
        ->required();
    cmd->add_option("--out", o->out, "Comparison table TSV");
    cmd->callback([o, &action] {
        action = [o](Context& ctx) {
            auto base = load_predications(o->base);
            auto ext = load_predications(o->extended);
            auto c = compare_extractions(base, ext, o->source);
            if (!o->out.empty()) {
                write_file(o->out, [&](std::ostream& os) { write_comparison(c, os); });
            }
            summary(ctx.out, "compare",
                    {{"mentions_base", str(c.entity_mentions.base)},
                     {"mentions_extended", str(c.entity_mentions.extended)},
                     {"mentions_difference", c.entity_mentions.difference_text()},
                     {"relations_base", str(c.relations.base)},
                     {"relations_extended", str(c.relations.extended)},
                     {"relations_difference", c.relations.difference_text()}});
        };
    });
}

void error_record(std::ostream& err, std::string_view stage, std::string_view kind,
                  const std::exception& e) {
    nlohmann::ordered_json rec;
    rec["level"] = "error";
    rec["stage"] = stage;
    rec["kind"] = kind;
    rec["message"] = e.what();
    if (const auto* fe = dynamic_cast<const FileError*>(&e)) {
        rec["file"] = fe->file();
        if (fe->line()) rec["line"] = fe->line();
        if (fe->column()) rec["column"] = fe->column();
    } else if (const auto* io = dynamic_cast<const IoError*>(&e)) {
        rec["file"] = io->file();
    } else if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        rec["line"] = pe->line();
        rec["column"] = pe->column();
    } else if (const auto* de = dynamic_cast<const Error*>(&e)) {
        if (de->line()) rec["line"] = de->line();
    }
    err << rec.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Supplement knowledge-graph pipeline", "suppkg"};
    app.require_subcommand(1, 1);
    app.fallthrough(false);
    Action action;
    add_merge_terminology(app, action);
    add_ingest(app, action);
    add_score(app, action);
    add_filter(app, action);
    add_split(app, action);
    add_evaluate(app, action);
    add_summarize_runs(app, action);
    add_build_graph(app, action);
    add_stats(app, action);
    add_discover(app, action);
    add_check_known(app, action);
    add_compare(app, action);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    const auto subs = app.get_subcommands();
    const std::string stage = subs.empty() ? "suppkg" : subs.front()->get_name();
    Context ctx{out, err};
    try {
        action(ctx);
    } catch (const IoError& e) {
        error_record(err, stage, "io", e);
        return 1;
    } catch (const Error& e) {
        error_record(err, stage, "data", e);
        return 1;
    } catch (const fs::filesystem_error& e) {
        error_record(err, stage, "io", e);
        return 1;
    } catch (const std::exception& e) {
        error_record(err, stage, "internal", e);
        return 1;
    }
    return 0;
}

}  // namespace suppkg::cli
