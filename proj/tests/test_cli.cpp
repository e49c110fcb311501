#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

#ifndef NIMH_CLI
#error "NIMH_CLI must point at the built command-line tool"
#endif

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(NIMH_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int raw = ::pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("nimh_cli_" + name + "_" + std::to_string(::getpid()))).string();
}

} // namespace

TEST(Cli, ExReportsValueAndWitnesses) {
    auto r = run("ex --n 5 --pattern k3");
    ASSERT_EQ(r.status, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["value"], 6);
    EXPECT_EQ(j["witnesses"].size(), 1u);
    EXPECT_TRUE(j["exact"].get<bool>());
}

TEST(Cli, ExactFSearch) {
    auto r = run("f --n 5 --pattern k3 --k 2 --exact");
    ASSERT_EQ(r.status, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["value"], 10);
    EXPECT_EQ(j["colourings"].size(), 1u);
}

TEST(Cli, ReportedColouringRecomputes) {
    auto file = temp_path("overlay");
    auto r = run("construct overlay --n 9 --k 3 --seed 4 --pattern c4 --coloring-out " + file);
    ASSERT_EQ(r.status, 0);
    auto j = nlohmann::json::parse(r.out);
    auto again = run("nim --coloring " + file + " --pattern c4");
    ASSERT_EQ(again.status, 0);
    EXPECT_EQ(nlohmann::json::parse(again.out)["nim_total"], j["nim_total"]);
    EXPECT_EQ(run("construct overlay --n 9 --k 3 --seed 4 --pattern c4").out, r.out);
    std::filesystem::remove(file);
}

TEST(Cli, AuditOnSingleColourNimSetExitsOne) {
    auto file = temp_path("extremal");
    ASSERT_EQ(run("construct extremal --n 7 --pattern c4 --coloring-out " + file).status, 0);
    auto r = run("audit2 --coloring " + file + " --pattern c4");
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(nlohmann::json::parse(r.out)["reason"], "single-color-nim-set");
    std::filesystem::remove(file);
}

TEST(Cli, AuditPassesOnFivecycleSplit) {
    auto file = temp_path("c5");
    {
        std::ofstream out(file);
        // red = cycle 0-1-2-3-4
        out << "5 2\n1 2 2 1 1 2 2 1 2 1\n";
    }
    auto r = run("audit2 --coloring " + file + " --pattern c4");
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(nlohmann::json::parse(r.out)["pass"].get<bool>());
    EXPECT_EQ(run("audit2 --format table --coloring " + file + " --pattern c4").status, 0);
    std::filesystem::remove(file);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("ex --n 5 --pattern c5").status, 3);
    EXPECT_EQ(run("ex --n 5").status, 3);
    EXPECT_EQ(run("f --n 12 --pattern c4 --exact").status, 2);
    EXPECT_EQ(run("auditk --coloring /nonexistent --pattern c4").status, 3);
    auto r = run("reduce --kst 4,5");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["verdict"], "unknown");
}

TEST(Cli, CacheFromEnvironment) {
    auto cache = temp_path("cache");
    std::filesystem::remove(cache);
    auto r = run("ex --n 6 --pattern c4 --cache " + cache);
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(std::filesystem::exists(cache));
    auto env = run("");   // usage error without subcommand
    EXPECT_EQ(env.status, 3);
    std::string cmd = "NIMH_CACHE=" + cache + " " + std::string(NIMH_CLI) + " ex --n 6 --pattern c4 > /dev/null";
    EXPECT_EQ(std::system(cmd.c_str()), 0);
    std::filesystem::remove(cache);
}
