#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"

namespace fs = std::filesystem;

namespace
{
fs::path workdir()
{
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("scd_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(std::string const& args)
{
    std::string cmd = std::string(SCD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string path(std::string const& name)
{
    return (workdir() / name).string();
}
}  // namespace

TEST_CASE("exit codes")
{
    CHECK(run("tile --pi 1/2 --lambda 0.5 --c3 0.5 --out " + path("t.obj")) == 0);
    CHECK(run("tile --pi 1/2 --lambda 1.5") == 1);
    CHECK(run("generate --cos 3/5 --lambda -1 --r 4 --out " + path("x.xyz")) == 1);
    {
        std::ofstream(path("bad.json")) << "{ not json";
    }
    CHECK(run("generate --config " + path("bad.json") + " --r 4 --out " + path("x.xyz")) == 2);
    {
        std::ofstream(path("wrong.json")) << R"({"schema_version": 1, "params": {"lambda": 0.5}})";
    }
    CHECK(run("generate --config " + path("wrong.json") + " --r 4 --out " + path("x.xyz")) == 2);
    CHECK(run("verify no_such_suite") == 2);
    CHECK(run("diffract --cloud " + path("missing.xyz") + " --kx 0 --ky 0 --kz 0") == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("generate the bcc point set")
{
    std::string out = path("bcc.xyz");
    REQUIRE(run("generate --pi 1/2 --lambda 0.5 --c3 0.5 --r 10 --out " + out) == 0);
    std::ifstream in(out);
    std::string first;
    std::getline(in, first);
    CHECK(first == "2000");
}

TEST_CASE("identical seeds give identical files")
{
    std::string a = path("ra.xyz"), b = path("rb.xyz"), c = path("rc.xyz");
    std::string base = "generate --cos 3/5 --shifts random --r 6 --out ";
    REQUIRE(run("--seed 9 " + base + a) == 0);
    REQUIRE(run("--seed 9 " + base + b) == 0);
    REQUIRE(run("--seed 10 " + base + c) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
}

TEST_CASE("generate, save config, diffract")
{
    std::string cloud = path("c.xyz"), cfg = path("c.json"), csv = path("s.csv"), prof = path("p.csv");
    REQUIRE(run("generate --cos 3/5 --r 6 --out " + cloud + " --save-config " + cfg) == 0);
    REQUIRE(run("generate --config " + cfg + " --r 6 --out " + path("c2.xyz")) == 0);
    CHECK(slurp(cloud) == slurp(path("c2.xyz")));

    REQUIRE(run("diffract --cloud " + cloud + " --kx 0:1:0.5 --ky 0 --kz 0:1:1 --out " + csv) == 0);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "kx,ky,kz,re,im,intensity,r");
    int rows = 0;
    while (std::getline(in, line))
        rows += !line.empty();
    CHECK(rows == 6);

    REQUIRE(run("diffract --cloud " + cloud + " --radial 0:0.5,0.5:1 --k3 0 --out " + prof) == 0);
    std::ifstream pin(prof);
    std::getline(pin, line);
    CHECK(line == "r_bin_lo,r_bin_hi,mass");
}

TEST_CASE("predict and csl write JSON")
{
    CHECK(run("predict --pi 1/2 --lambda 0.5 --c3 0.5 --cutoff 2.1 --periodic --out " + path("pr.json")) == 0);
    CHECK(slurp(path("pr.json")).find("cylinder_radii") != std::string::npos);
    CHECK(run("predict --cos 3/5 --periodic") == 1);
    CHECK(run("csl --cos 1/3 --max-power 4 --radius 100 --out " + path("csl.json")) == 0);
    CHECK(slurp(path("csl.json")).find("index_chain") != std::string::npos);
    CHECK(run("csl --b1 3/5") == 0);
    CHECK(run("csl --b1 0.70710678 --irrational") == 0);
}

TEST_CASE("verify exit status follows the suite")
{
    CHECK(run("verify coincidence --out " + path("v.json")) == 0);
    CHECK(slurp(path("v.json")).find("\"pass\"") != std::string::npos);
}
