#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "suppkg/cli.hpp"
#include "suppkg/text.hpp"
#include "support.hpp"

namespace suppkg {
namespace {

using testing::data_path;
using testing::read_text;
namespace fs = std::filesystem;

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "suppkg");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string d(std::string_view rel) { return data_path(rel).string(); }

TEST(Cli, MergeWithEmptySupplementCopiesFilesByteForByte) {
    testing::TempDir tmp;
    auto r = invoke({"merge-terminology", "--base-dir", d("rrf_base"), "--supplement", d("supplement/empty.tsv"),
                     "--ranking", d("supplement/ranking.rrf"), "--out-dir", (tmp / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"MRCONSO.RRF", "MRSTY.RRF", "MRRANK.RRF", "MRSAB.RRF", "MRDOC.RRF"}) {
        EXPECT_EQ(read_text(tmp / "out" / f), read_text(data_path("rrf_base") / f)) << f;
    }
    EXPECT_NE(r.out.find("stage=merge-terminology new_concepts=0"), std::string::npos) << r.out;
}

TEST(Cli, MergeFixtureMatchesHandComputedReport) {
    testing::TempDir tmp;
    auto r = invoke({"merge-terminology", "--base-dir", d("rrf_base"), "--supplement",
                     d("supplement/concepts.tsv"), "--ranking", d("supplement/ranking.rrf"), "--out-dir",
                     (tmp / "out").string(), "--report", (tmp / "report.json").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(read_text(tmp / "report.json")),
              nlohmann::json::parse(read_text(data_path("supplement/expected_report.json"))));
}

TEST(Cli, UsageAndDataErrors) {
    testing::TempDir tmp;
    auto missing = invoke({"merge-terminology", "--base-dir", d("rrf_base"), "--supplement",
                           d("supplement/concepts.tsv"), "--out-dir", (tmp / "o").string()});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("--ranking"), std::string::npos);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"bogus"}).code, 2);
    EXPECT_EQ(invoke({"--help"}).code, 0);

    auto absent = invoke({"ingest", "--input", (tmp / "nope.tsv").string(), "--out", (tmp / "x").string()});
    EXPECT_EQ(absent.code, 1);
    auto rec = nlohmann::json::parse(absent.err.substr(0, absent.err.find('\n')));
    EXPECT_EQ(rec["level"], "error");
    EXPECT_EQ(rec["stage"], "ingest");
    EXPECT_EQ(rec["kind"], "io");

    testing::write_text(tmp / "scores.tsv", "predication_id\tprobability\nP1\t2.0\n");
    auto bad = invoke({"filter", "--predications", d("predications_10.tsv"), "--scores",
                       (tmp / "scores.tsv").string(), "--out", (tmp / "f.tsv").string()});
    EXPECT_EQ(bad.code, 1);
    rec = nlohmann::json::parse(bad.err.substr(0, bad.err.find('\n')));
    EXPECT_EQ(rec["kind"], "data");
    EXPECT_EQ(rec["line"], 2);
}

TEST(Cli, IngestReportsRejects) {
    testing::TempDir tmp;
    auto r = invoke({"ingest", "--input", d("predications_10.tsv"), "--out", (tmp / "ok.tsv").string(),
                     "--rejects", (tmp / "rej.tsv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("rows=10 accepted=8 rejected=2"), std::string::npos) << r.out;
    const std::string rej_text = read_text(tmp / "rej.tsv");
    auto rej = split(rej_text, '\n');
    EXPECT_EQ(rej[1].substr(0, rej[1].find('\t', 2)), "5\tfield_count");
}

TEST(Cli, SummarizeRuns) {
    auto r = invoke({"summarize-runs", "--values", "0.8,0.82,0.78", "--metric", "f1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("mean=0.8000"), std::string::npos) << r.out;
    EXPECT_EQ(invoke({"summarize-runs", "--values", "0.8"}).code, 1);
}

std::string pipeline(const fs::path& dir) {
    std::string log;
    auto step = [&](std::vector<std::string> args) {
        auto r = invoke(std::move(args));
        EXPECT_EQ(r.code, 0) << r.err;
        log += r.out;
    };
    auto p = [&](const char* name) { return (dir / name).string(); };
    step({"ingest", "--input", d("toy/predications.tsv"), "--out", p("clean.tsv")});
    step({"filter", "--predications", p("clean.tsv"), "--scores", d("toy/scores.tsv"), "--out", p("kept.tsv")});
    step({"build-graph", "--predications", p("kept.tsv"), "--scores", d("toy/scores.tsv"),
          "--supplement-source", "IDISK", "--out", p("graph.json")});
    step({"stats", "--graph", p("graph.json"), "--distribution", p("dist.tsv")});
    step({"discover", "--graph", p("graph.json"), "--pattern", "DsGD", "--pathways", p("dsgd.tsv"),
          "--worksheet", p("worksheet.tsv"), "--predications", p("kept.tsv")});
    step({"discover", "--graph", p("graph.json"), "--pattern", "DsGFGD", "--pathways", p("dsgfgd.tsv")});
    step({"check-known", "--pathways", p("dsgd.tsv"), p("dsgfgd.tsv"), "--known", d("toy/known.tsv"),
          "--out", p("known.tsv")});
    return log;
}

TEST(Cli, ToyPipelineEndToEnd) {
    testing::TempDir tmp;
    const std::string log = pipeline(tmp.path());
    EXPECT_NE(log.find("stage=filter input=50 retained=42"), std::string::npos) << log;
    const std::string ws_text = read_text(tmp / "worksheet.tsv");
    auto ws = split(ws_text, '\n');
    ASSERT_GE(ws.size(), 2u);
    EXPECT_EQ(ws[1].substr(0, ws[1].find('\t', ws[1].find('\t', ws[1].find('\t') + 1) + 1)),
              "1\tDsGD\t1.93");
    EXPECT_NE(ws[1].find("C0017718:Glucosamine -> C0537855:COX-2 -> C0033554:prostaglandin"), std::string::npos);
    auto known = read_text(tmp / "known.tsv");
    EXPECT_NE(known.find("C0017718,C0537855,C0033554"), std::string::npos);
    EXPECT_NE(log.find("known.DsGD="), std::string::npos);
}

TEST(Cli, PipelineIsDeterministic) {
    testing::TempDir a;
    testing::TempDir b;
    auto strip = [](std::string log, const fs::path& dir) {
        const std::string prefix = dir.string();
        for (auto at = log.find(prefix); at != std::string::npos; at = log.find(prefix)) {
            log.replace(at, prefix.size(), "DIR");
        }
        return log;
    };
    EXPECT_EQ(strip(pipeline(a.path()), a.path()), strip(pipeline(b.path()), b.path()));
    for (const char* f : {"graph.json", "dsgd.tsv", "dsgfgd.tsv", "worksheet.tsv", "known.tsv", "dist.tsv"}) {
        EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
    }
}

}  // namespace
}  // namespace suppkg
