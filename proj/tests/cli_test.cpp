#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cellcast/model.hpp"
#include "cellcast/preprocess.hpp"

using namespace cellcast;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(CELLCAST_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("cellcast_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path small_config(const fs::path& dir) {
    const auto p = dir / "small.conf";
    std::ofstream(p) << "n_cells_4g = 3\nn_cells_5g = 2\nn_days = 36\nindicators = PDSCH\n"
                        "hidden = 8\nbatch_sizes = 4\nepochs = 2\nseed = 9\n";
    return p;
}

// synth -> impute -> featurize -> train -> predict -> baselines -> evaluate.
void run_chain(const fs::path& d) {
    const std::string c = "--config " + small_config(d).string();
    const auto p = [&](const char* name) { return (d / name).string(); };
    ASSERT_EQ(cli("synth " + c + " --out " + p("corpus")).code, 0);
    ASSERT_EQ(cli("impute " + c + " --in " + p("corpus/series.csv") + " --out " + p("imputed.csv")).code, 0);
    ASSERT_EQ(cli("featurize " + c + " --in " + p("imputed.csv") + " --holidays " + p("corpus/holidays.txt") +
                  " --out " + p("features.csv") + " --tech 4G")
                  .code,
              0);
    ASSERT_EQ(cli("train " + c + " --in " + p("features.csv") + " --out " + p("model4g.bin")).code, 0);
    ASSERT_EQ(cli("featurize " + c + " --in " + p("imputed.csv") + " --holidays " + p("corpus/holidays.txt") +
                  " --out " + p("features5.csv") + " --tech 5G")
                  .code,
              0);
    ASSERT_EQ(cli("train " + c + " --in " + p("features5.csv") + " --out " + p("model5g.bin") + " --warm-start " +
                  p("model4g.bin"))
                  .code,
              0);
    ASSERT_EQ(cli("predict " + c + " --in " + p("imputed.csv") + " --holidays " + p("corpus/holidays.txt") +
                  " --model " + p("model4g.bin") + " --out " + p("pred.csv"))
                  .code,
              0);
    ASSERT_EQ(cli("baseline " + c + " --in " + p("imputed.csv") + " --method rule --out " + p("rule.csv")).code, 0);
    const auto ev = cli("evaluate " + c + " --pred " + p("pred.csv") + " --actual " + p("corpus/actual.csv") +
                        " --breakdown " + p("breakdown.csv"));
    ASSERT_EQ(ev.code, 0);
    std::ofstream(d / "evaluate.txt") << ev.out;
}

}  // namespace

TEST(Cli, EvaluateIdenticalGridsPrintsZero) {
    const auto d = fresh_dir("eval");
    ASSERT_EQ(cli("synth --config " + small_config(d).string() + " --out " + d.string()).code, 0);
    const auto actual = (d / "actual.csv").string();
    const auto r = cli("evaluate --pred " + actual + " --actual " + actual);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("weighted_mape=0.000000\n"), std::string::npos) << r.out;
}

TEST(Cli, TrainWithZeroEpochsWritesTheInitializedModel) {
    const auto d = fresh_dir("train0");
    run_chain(d);
    ASSERT_EQ(cli("train --config " + small_config(d).string() + " --in " + (d / "features.csv").string() +
                  " --epochs 0 --hidden 6 --seed 4 --out " + (d / "init.bin").string())
                  .code,
              0);
    EXPECT_TRUE(load_model(d / "init.bin") == DenseMlpModel::random({kInputWidth, 6, kHorizonHours}, 4));
    EXPECT_EQ(slurp(d / "init.bin.log.csv"), "epoch,lr,mean_loss\n");
}

TEST(Cli, SameConfigGivesByteIdenticalArtifacts) {
    const auto a = fresh_dir("det_a");
    const auto b = fresh_dir("det_b");
    run_chain(a);
    run_chain(b);
    for (const char* name : {"corpus/series.csv", "corpus/actual.csv", "imputed.csv", "features.csv", "model4g.bin",
                             "model4g.bin.log.csv", "model5g.bin", "pred.csv", "rule.csv", "breakdown.csv",
                             "evaluate.txt"}) {
        ASSERT_TRUE(fs::exists(a / name)) << name;
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }
}

TEST(Cli, InputsAreNotModified) {
    const auto d = fresh_dir("inputs");
    run_chain(d);
    const auto before_series = slurp(d / "imputed.csv");
    const auto before_model = slurp(d / "model4g.bin");
    const auto before_features = slurp(d / "features.csv");
    ASSERT_EQ(cli("train --config " + small_config(d).string() + " --in " + (d / "features.csv").string() +
                  " --warm-start " + (d / "model4g.bin").string() + " --out " + (d / "again.bin").string())
                  .code,
              0);
    ASSERT_EQ(cli("predict --in " + (d / "imputed.csv").string() + " --holidays " +
                  (d / "corpus/holidays.txt").string() + " --model " + (d / "model4g.bin").string() + " --out " +
                  (d / "pred2.csv").string())
                  .code,
              0);
    EXPECT_EQ(slurp(d / "imputed.csv"), before_series);
    EXPECT_EQ(slurp(d / "model4g.bin"), before_model);
    EXPECT_EQ(slurp(d / "features.csv"), before_features);
    // No temporary files are left behind.
    for (const auto& e : fs::recursive_directory_iterator(d)) EXPECT_NE(e.path().extension(), ".tmp") << e.path();
}

TEST(Cli, InferenceFeaturizationFromFlagOrConfig) {
    const auto d = fresh_dir("infer");
    run_chain(d);
    const std::string base = "featurize --in " + (d / "imputed.csv").string() + " --holidays " +
                             (d / "corpus/holidays.txt").string() + " --out " + (d / "rows.csv").string();
    EXPECT_EQ(cli(base + " --inference").out, "rows=5\n");
    std::ofstream(d / "infer.conf") << "inference = true\n";
    EXPECT_EQ(cli(base + " --config " + (d / "infer.conf").string()).out, "rows=5\n");
}

TEST(Cli, ValidationErrorsExitWithOne) {
    const auto d = fresh_dir("errors");
    run_chain(d);
    std::ofstream(d / "bad.conf") << "epochz = 3\n";
    std::ofstream(d / "bad.csv") << "cell_id,tech,indicator,timestamp,value\nA,4G,PDSCH,not-a-time,1\n";
    std::ofstream(d / "bad.bin") << "CCDNSMLP garbage";
    const std::string feats = (d / "features.csv").string();
    EXPECT_EQ(cli("").code, 1);
    EXPECT_EQ(cli("frobnicate").code, 1);
    EXPECT_EQ(cli("train --config " + (d / "bad.conf").string() + " --in " + feats + " --out x.bin").code, 1);
    EXPECT_EQ(cli("train --in /nonexistent.csv --out " + (d / "m.bin").string()).code, 1);
    EXPECT_EQ(cli("train --in " + feats + " --lr0 -1 --out " + (d / "m.bin").string()).code, 1);
    EXPECT_EQ(cli("impute --in " + (d / "bad.csv").string() + " --out " + (d / "o.csv").string()).code, 1);
    EXPECT_EQ(cli("baseline --in " + (d / "imputed.csv").string() + " --method magic --out " + (d / "o.csv").string())
                  .code,
              1);
    EXPECT_EQ(cli("predict --in " + (d / "imputed.csv").string() + " --holidays " + (d / "corpus/holidays.txt").string() +
                  " --model " + (d / "bad.bin").string() + " --out " + (d / "o.csv").string())
                  .code,
              1);
    EXPECT_EQ(cli("evaluate --pred " + (d / "pred.csv").string() + " --actual " + (d / "rule.csv").string() +
                  " --tech 3G")
                  .code,
              0);  // evaluate ignores selection keys
    EXPECT_EQ(cli("evaluate --pred " + (d / "pred.csv").string() + " --actual " + (d / "imputed.csv").string()).code, 1);
    EXPECT_FALSE(fs::exists(d / "m.bin"));
}
