#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "xxzgeom/csv.hpp"

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun cli(const std::string& args) {
    const std::string cmd = std::string(XXZGEOM_CLI) + " " + args + " 2>&1";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "xxzgeom-cli-test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Cli, Spectrum) {
    const CliRun r = cli("spectrum --J 0.3 --gamma 1 --B 0.5");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("1,2,"), std::string::npos);
    EXPECT_NE(r.out.find("2,-0.4,"), std::string::npos);
    EXPECT_NE(r.out.find("3,-1.6,"), std::string::npos);
    EXPECT_NE(r.out.find("4,0,"), std::string::npos);
    const CliRun z = cli("spectrum --J 0 --gamma 0 --B 0");
    EXPECT_EQ(z.code, 0);
    for (int k = 1; k <= 4; ++k) EXPECT_NE(z.out.find(std::to_string(k) + ",0,"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    const CliRun missing = cli("spectrum --gamma 1");
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.out.find("--J"), std::string::npos);
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("spectrum --J abc").code, 2);
    EXPECT_EQ(cli("scan --method euler").code, 2);
    EXPECT_EQ(cli("scan --steps 1").code, 2);
    EXPECT_EQ(cli("verify --tol-nonexistent 1").code, 2);
}

TEST(Cli, BrachistochroneReport) {
    const CliRun r = cli("brachistochrone --J 0.65 --alpha 0.2");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("t_min            1.92307692308"), std::string::npos);
    const auto pos = r.out.find("milburn_residual ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LE(std::stod(r.out.substr(pos + 17)), 1e-6);
    const CliRun zero = cli("brachistochrone --J 0.65 --alpha 0");
    EXPECT_EQ(zero.code, 4);
    EXPECT_NE(zero.out.find("diverges"), std::string::npos);
}

TEST(Cli, ScanConfigAndOverride) {
    const auto cfg = scratch("scan.cfg");
    std::ofstream(cfg) << "J = 0.3\nalphas = 0,0.01,0.1\nn_points = 2\nquantities = C\n";
    const auto out = scratch("scan.csv");
    const CliRun r = cli("scan --config " + cfg.string() + " --J 0.5 --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    const xxzgeom::CsvTable t = xxzgeom::read_csv(out.string());
    EXPECT_EQ(t.rows.size(), 6u);
    for (const auto& row : t.rows) EXPECT_EQ(row[t.column("J")], "0.5");

    std::ofstream(cfg) << "J = 0.3\nbogus = 1\n";
    const CliRun bad = cli("scan --config " + cfg.string());
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.out.find("bogus"), std::string::npos);
    std::ofstream(cfg) << "J = 0.3\nalpha = 0.1q\n";
    const CliRun num = cli("scan --config " + cfg.string());
    EXPECT_EQ(num.code, 2);
    EXPECT_NE(num.out.find(":2"), std::string::npos);
}

TEST(Cli, IoErrors) {
    EXPECT_EQ(cli("scan --steps 2 --out /nonexistent-dir/x.csv").code, 3);
    EXPECT_EQ(cli("figures --out-dir /proc/xxzgeom-cannot-write").code, 3);
}

TEST(Cli, EvolveAndGeomphase) {
    const CliRun e = cli("evolve --J 0.3 --alpha 0.1 --eta-max 1 --steps 3 --method closed");
    EXPECT_EQ(e.code, 0);
    const xxzgeom::CsvTable t = xxzgeom::parse_csv(e.out);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.header.size(), 34u);
    EXPECT_NEAR(std::stod(t.rows[2][t.column("rho11_re")]), 0.684544567004, 1e-11);

    const CliRun g = cli("geomphase --J 0.09 --alpha 0 --eta-max 2 --steps 401 --closed-form");
    EXPECT_EQ(g.code, 0);
    const xxzgeom::CsvTable p = xxzgeom::parse_csv(g.out);
    EXPECT_EQ(p.header, (std::vector<std::string>{"eta", "Phi_g_tong", "Phi_g_closed_form", "delta", "converged"}));
    EXPECT_EQ(p.rows.size(), 401u);
}
