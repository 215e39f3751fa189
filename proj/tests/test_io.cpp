#include <cstring>
#include <sstream>

#include "doctest.h"
#include "scd/io.hpp"

using namespace scd;

namespace
{
TilingConfig sample_config()
{
    TilingConfig c{TileParams{0.3, 1.5, AngleSpec(RationalCos{3, 5}), 0.7},
                   ShiftSequence::explicit_list({0.1, -0.25, 1.0 / 3}, -1), Vec3{0.6, 0.3, 0.0}, true};
    return c;
}

std::string error_of(json const& j)
{
    try
    {
        config_from_json(j);
    }
    catch (SchemaError const& e)
    {
        return e.what();
    }
    return {};
}
}  // namespace

TEST_CASE("format_double round-trips at 17 significant digits")
{
    for (double v : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 0.0, 1.0})
    {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("config JSON round trip")
{
    for (TilingConfig const& c :
         {sample_config(),
          TilingConfig{TileParams{0.5, 1.0, AngleSpec(RationalPi{1, 2}), 0.5}, ShiftSequence::zero(), {}, false},
          TilingConfig{TileParams{0.5, 1.0, AngleSpec(GenericAngle{1.1}), 1.0}, ShiftSequence::random(77, true), {},
                       false},
          TilingConfig{TileParams{0.5, 1.0, AngleSpec(RationalCos{1, 3}), 1.0},
                       ShiftSequence::periodic({0.25, 0.5}), {}, false}})
    {
        json j = to_json(c);
        TilingConfig back = config_from_json(json::parse(j.dump()));
        CHECK(to_json(back) == j);
        CHECK(back.params.lambda == c.params.lambda);
        CHECK(back.params.angle.describe() == c.params.angle.describe());
        CHECK(back.shifts.slide(0) == c.shifts.slide(0));
        CHECK(back.shifts.slide(5) == c.shifts.slide(5));
    }
}

TEST_CASE("schema errors name the offending field")
{
    json j = to_json(sample_config());
    json bad = j;
    bad["params"].erase("lambda");
    CHECK(error_of(bad).find("params.lambda") != std::string::npos);
    bad = j;
    bad["params"]["angle"]["type"] = "Spiral";
    CHECK(error_of(bad).find("params.angle.type") != std::string::npos);
    bad = j;
    bad["shifts"]["slides"][1] = "x";
    CHECK(error_of(bad).find("shifts.slides[1]") != std::string::npos);
    bad = j;
    bad["schema_version"] = 99;
    CHECK(error_of(bad).find("schema_version") != std::string::npos);
    bad = j;
    bad["params"]["c3"] = "1";
    CHECK(error_of(bad).find("params.c3") != std::string::npos);
    CHECK_THROWS_AS(config_from_json(json::array()), SchemaError);
}

TEST_CASE("XYZ round trip is bit-exact")
{
    TilingConfig c{TileParams{0.5, 1.0, AngleSpec(RationalCos{3, 5}), 1.0}, ShiftSequence::random(3), {}, false};
    PointCloud cloud = extract_points(c, 5.0);
    REQUIRE(!cloud.empty());
    std::stringstream ss;
    write_xyz(ss, cloud);
    std::string first;
    std::getline(ss, first);
    CHECK(first == std::to_string(cloud.size()));
    ss.seekg(0);
    PointCloud back = read_xyz(ss);
    REQUIRE(back.size() == cloud.size());
    CHECK(back.r == cloud.r);
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        CHECK(std::memcmp(&back.points[i], &cloud.points[i], sizeof(Vec3)) == 0);
        CHECK(back.layer[i] == cloud.layer[i]);
    }
    CHECK(back.per_layer_counts == cloud.per_layer_counts);

    PointCloud via_json = cloud_from_json(json::parse(to_json(cloud).dump()));
    REQUIRE(via_json.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        CHECK(std::memcmp(&via_json.points[i], &cloud.points[i], sizeof(Vec3)) == 0);
}

TEST_CASE("malformed XYZ reports the line")
{
    std::stringstream ss("2\nr=4 columns=element,x,y,z,layer\nX 0 0 0 0\nX 1 oops 0 0\n");
    try
    {
        read_xyz(ss);
        FAIL("expected an error");
    }
    catch (SchemaError const& e)
    {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    std::stringstream short_file("3\nr=4 columns=element,x,y,z,layer\nX 0 0 0 0\n");
    CHECK_THROWS_AS(read_xyz(short_file), SchemaError);
}

TEST_CASE("spectrum and profile CSV")
{
    std::vector<SpectrumSample> s{{Vec3{0.1, 0.2, 0.3}, Complex{0.5, -0.25}, 0.3125, 10.0}};
    std::stringstream ss;
    write_spectrum_csv(ss, s);
    std::string header, row;
    std::getline(ss, header);
    std::getline(ss, row);
    CHECK(header == "kx,ky,kz,re,im,intensity,r");
    CHECK(row == "0.10000000000000001,0.20000000000000001,0.29999999999999999,0.5,-0.25,0.3125,10");

    ShellProfile p;
    p.lo = {0, 0.5};
    p.hi = {0.5, 1};
    p.mass = {2, 0.125};
    std::stringstream ps;
    write_profile_csv(ps, p);
    std::getline(ps, header);
    std::getline(ps, row);
    CHECK(header == "r_bin_lo,r_bin_hi,mass");
    CHECK(row == "0,0.5,2");
}

TEST_CASE("OBJ output")
{
    TileMesh m = build_tile(TileParams{0.5, 1.0, AngleSpec(RationalPi{1, 2}), 0.5});
    std::stringstream ss;
    write_obj(ss, m);
    int v = 0, f = 0, min_index = 100, max_index = 0;
    std::string line;
    while (std::getline(ss, line))
    {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v")
            ++v;
        else if (tag == "f")
        {
            ++f;
            int idx;
            while (ls >> idx)
            {
                min_index = std::min(min_index, idx);
                max_index = std::max(max_index, idx);
            }
        }
    }
    CHECK(v == 8);
    CHECK(f == 8);
    CHECK(min_index == 1);
    CHECK(max_index == 8);
}

TEST_CASE("missing files raise I/O errors")
{
    CHECK_THROWS_AS(read_json_file("/nonexistent/config.json"), IoError);
    CHECK_THROWS_AS(load_cloud("/nonexistent/cloud.xyz"), IoError);
}
