#include "scd/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace scd
{
std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

namespace
{
std::string join(std::string const& path, std::string const& key)
{
    return path.empty() ? key : path + "." + key;
}

json const& field(json const& j, std::string const& key, std::string const& path)
{
    if (!j.is_object())
        throw SchemaError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw SchemaError(join(path, key) + ": missing field");
    return *it;
}

double number(json const& j, std::string const& key, std::string const& path)
{
    json const& v = field(j, key, path);
    if (!v.is_number())
        throw SchemaError(join(path, key) + ": expected a number");
    return v.get<double>();
}

std::int64_t integer(json const& j, std::string const& key, std::string const& path)
{
    json const& v = field(j, key, path);
    if (!v.is_number_integer())
        throw SchemaError(join(path, key) + ": expected an integer");
    return v.get<std::int64_t>();
}

std::string text(json const& j, std::string const& key, std::string const& path)
{
    json const& v = field(j, key, path);
    if (!v.is_string())
        throw SchemaError(join(path, key) + ": expected a string");
    return v.get<std::string>();
}

json vec(Vec3 v)
{
    return json::array({v.x, v.y, v.z});
}

json vec(Vec2 v)
{
    return json::array({v.x, v.y});
}

Vec3 vec3_from(json const& j, std::string const& path)
{
    if (!j.is_array() || j.size() != 3)
        throw SchemaError(path + ": expected [x, y, z]");
    for (std::size_t i = 0; i < 3; ++i)
        if (!j[i].is_number())
            throw SchemaError(path + "[" + std::to_string(i) + "]: expected a number");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::string big(BigInt const& v)
{
    return v.str();
}
}  // namespace

//---------------------------------------------------------------------------//
// JSON writers
//---------------------------------------------------------------------------//
json to_json(AngleSpec const& a)
{
    return std::visit(
        [](auto const& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RationalCos>)
                return {{"type", "RationalCos"}, {"p", v.p}, {"q", v.q}};
            else if constexpr (std::is_same_v<T, RationalPi>)
                return {{"type", "RationalPi"}, {"num", v.num}, {"den", v.den}};
            else
                return {{"type", "Generic"}, {"phi", v.phi}};
        },
        a.value());
}

json to_json(TileParams const& p)
{
    return {{"lambda", p.lambda}, {"a_len", p.a_len}, {"c3", p.c3}, {"angle", to_json(p.angle)}};
}

json to_json(ShiftSequence const& s)
{
    json j{{"type", to_string(s.kind)}, {"danzer", s.danzer}};
    switch (s.kind)
    {
        case ShiftSequence::Kind::zero:
            break;
        case ShiftSequence::Kind::periodic:
            j["slides"] = s.slides;
            break;
        case ShiftSequence::Kind::random:
            j["seed"] = s.seed;
            break;
        case ShiftSequence::Kind::explicit_list:
            j["slides"] = s.slides;
            j["first_layer"] = s.first_layer;
            break;
    }
    return j;
}

json to_json(TilingConfig const& c)
{
    json j{{"schema_version", schema_version},
           {"params", to_json(c.params)},
           {"shifts", to_json(c.shifts)},
           {"repetitive", c.repetitive}};
    if (c.reference_point)
        j["reference_point"] = vec(*c.reference_point);
    return j;
}

json to_json(PointCloud const& c)
{
    json pts = json::array();
    for (std::size_t i = 0; i < c.size(); ++i)
    {
        Vec3 const& p = c.points[i];
        pts.push_back(json::array({p.x, p.y, p.z, c.layer[i]}));
    }
    return {{"schema_version", schema_version}, {"r", c.r}, {"columns", {"x", "y", "z", "layer"}}, {"points", pts}};
}

json to_json(AperiodicityCertificate const& c)
{
    json chain = json::array();
    for (auto const& v : c.index_chain)
        chain.push_back(v ? json(big(*v)) : json("infinite"));
    json j{{"angle", c.angle},
           {"max_power", c.max_power},
           {"radius", c.radius},
           {"a_len", c.a_len},
           {"mode", c.exact ? "exact" : "empirical"},
           {"index_chain", chain},
           {"chain_strictly_increasing", c.chain_strictly_increasing},
           {"common_vector_within_radius", c.common_vector_within_radius}};
    if (c.shortest)
        j["shortest_common_vector"] = {{"coords", {big(c.shortest->coords[0]), big(c.shortest->coords[1])}},
                                       {"norm_squared", c.shortest->norm_squared.str()},
                                       {"norm", c.shortest->norm}};
    if (!c.exact)
    {
        j["points_checked"] = c.points_checked;
        j["tolerance"] = c.tolerance;
        json near = json::array();
        for (Vec2 v : c.near_common)
            near.push_back(vec(v));
        j["near_common"] = near;
    }
    return j;
}

json to_json(CoincidenceResult const& r)
{
    if (auto const* s = std::get_if<CoincidenceSolution>(&r))
        return {{"result", "solution"},
                {"kappa", big(s->kappa)},
                {"lambda", big(s->lambda)},
                {"mu", big(s->mu)},
                {"nu", big(s->nu)}};
    return {{"result", "no_solution"}, {"certificate", std::get<NoSolutionCertificate>(r).steps}};
}

json to_json(Prediction const& p)
{
    json axis = json::array();
    for (auto const& a : p.axis_peaks)
        axis.push_back({{"n", a.n},
                        {"position", a.position},
                        {"layer_weight", a.layer_weight},
                        {"estimator_weight", a.estimator_weight}});
    json j{{"cylinder_radii", p.cylinder_radii}, {"axis_peaks", axis}};
    if (p.lines)
    {
        json lines = json::array();
        for (Vec2 v : *p.lines)
            lines.push_back(vec(v));
        j["lines"] = lines;
    }
    return j;
}

json to_json(SpectralClass const& s)
{
    return {{"axis", to_string(s.axis)},
            {"cylinders", to_string(s.cylinders)},
            {"off_support", to_string(s.off_support)},
            {"reason", s.reason}};
}

json to_json(FullPeriodicity const& f)
{
    json j{{"periodic", f.periodic}, {"reason", f.reason}};
    if (f.periodic)
    {
        j["k"] = f.k;
        j["periods"] = {vec(f.periods[0]), vec(f.periods[1]), vec(f.periods[2])};
    }
    return j;
}

json to_json(PeriodicSpectrum const& s, std::size_t max_peaks)
{
    json peaks = json::array();
    for (auto const& p : s.support)
    {
        if (peaks.size() >= max_peaks)
            break;
        peaks.push_back({{"k", vec(p.k)}, {"re", p.structure_factor.real()}, {"im", p.structure_factor.imag()},
                         {"intensity", p.intensity}});
    }
    return {{"k", s.k},
            {"density", s.density},
            {"periods", {vec(s.periods[0]), vec(s.periods[1]), vec(s.periods[2])}},
            {"reciprocal", {vec(s.reciprocal[0]), vec(s.reciprocal[1]), vec(s.reciprocal[2])}},
            {"support_size", s.support.size()},
            {"support", peaks}};
}

//---------------------------------------------------------------------------//
// JSON readers
//---------------------------------------------------------------------------//
AngleSpec angle_from_json(json const& j, std::string const& path)
{
    std::string type = text(j, "type", path);
    if (type == "RationalCos")
        return RationalCos{integer(j, "p", path), integer(j, "q", path)};
    if (type == "RationalPi")
        return RationalPi{integer(j, "num", path), integer(j, "den", path)};
    if (type == "Generic")
        return GenericAngle{number(j, "phi", path)};
    throw SchemaError(join(path, "type") + ": unknown angle type '" + type +
                      "' (expected RationalCos, RationalPi or Generic)");
}

TileParams params_from_json(json const& j, std::string const& path)
{
    TileParams p;
    p.lambda = number(j, "lambda", path);
    p.a_len = number(j, "a_len", path);
    p.c3 = number(j, "c3", path);
    p.angle = angle_from_json(field(j, "angle", path), join(path, "angle"));
    return p;
}

ShiftSequence shifts_from_json(json const& j, std::string const& path)
{
    std::string type = text(j, "type", path);
    bool danzer = false;
    if (j.contains("danzer"))
    {
        if (!j["danzer"].is_boolean())
            throw SchemaError(join(path, "danzer") + ": expected a boolean");
        danzer = j["danzer"].get<bool>();
    }
    auto slides = [&] {
        json const& v = field(j, "slides", path);
        if (!v.is_array())
            throw SchemaError(join(path, "slides") + ": expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            if (!v[i].is_number())
                throw SchemaError(join(path, "slides") + "[" + std::to_string(i) + "]: expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    };
    ShiftSequence s;
    if (type == "zero")
        s = ShiftSequence::zero();
    else if (type == "periodic")
        s = ShiftSequence::periodic(slides());
    else if (type == "random")
    {
        json const& v = field(j, "seed", path);
        if (!v.is_number_unsigned() && !v.is_number_integer())
            throw SchemaError(join(path, "seed") + ": expected an integer");
        s = ShiftSequence::random(v.get<std::uint64_t>(), danzer);
    }
    else if (type == "explicit")
    {
        int first = j.contains("first_layer") ? static_cast<int>(integer(j, "first_layer", path)) : 0;
        s = ShiftSequence::explicit_list(slides(), first);
    }
    else
        throw SchemaError(join(path, "type") + ": unknown shift type '" + type +
                          "' (expected zero, periodic, random or explicit)");
    s.danzer = danzer;
    return s;
}

TilingConfig config_from_json(json const& j)
{
    if (!j.is_object())
        throw SchemaError("config: expected an object");
    auto version = integer(j, "schema_version", "");
    if (version != schema_version)
        throw SchemaError("schema_version: unsupported version " + std::to_string(version));
    TilingConfig c;
    c.params = params_from_json(field(j, "params", ""), "params");
    c.shifts = j.contains("shifts") ? shifts_from_json(j["shifts"], "shifts") : ShiftSequence::zero();
    if (j.contains("reference_point"))
        c.reference_point = vec3_from(j["reference_point"], "reference_point");
    if (j.contains("repetitive"))
    {
        if (!j["repetitive"].is_boolean())
            throw SchemaError("repetitive: expected a boolean");
        c.repetitive = j["repetitive"].get<bool>();
    }
    return c;
}

PointCloud cloud_from_json(json const& j)
{
    PointCloud c;
    c.r = number(j, "r", "");
    json const& pts = field(j, "points", "");
    if (!pts.is_array())
        throw SchemaError("points: expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        json const& row = pts[i];
        std::string where = "points[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 4 || !row[3].is_number_integer())
            throw SchemaError(where + ": expected [x, y, z, layer]");
        for (std::size_t k = 0; k < 3; ++k)
            if (!row[k].is_number())
                throw SchemaError(where + ": expected [x, y, z, layer]");
        c.points.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
        c.layer.push_back(row[3].get<int>());
    }
    c.recount();
    return c;
}

json read_json_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    try
    {
        return json::parse(in);
    }
    catch (json::parse_error const& e)
    {
        throw SchemaError(path + ": " + e.what());
    }
}

void write_text_file(std::string const& path, std::string const& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << content;
    if (!out)
        throw IoError("write failed for " + path);
}

TilingConfig read_config(std::string const& path)
{
    try
    {
        return config_from_json(read_json_file(path));
    }
    catch (json::exception const& e)
    {
        throw SchemaError(path + ": " + e.what());
    }
}

//---------------------------------------------------------------------------//
// XYZ
//---------------------------------------------------------------------------//
void write_xyz(std::ostream& os, PointCloud const& cloud)
{
    os << cloud.size() << '\n';
    os << "r=" << format_double(cloud.r) << " columns=element,x,y,z,layer\n";
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        Vec3 const& p = cloud.points[i];
        os << "X " << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z) << ' '
           << cloud.layer[i] << '\n';
    }
}

PointCloud read_xyz(std::istream& is)
{
    PointCloud c;
    std::string line;
    if (!std::getline(is, line))
        throw SchemaError("line 1: missing point count");
    std::size_t n = 0;
    {
        std::istringstream ls(line);
        if (!(ls >> n))
            throw SchemaError("line 1: expected the point count");
    }
    if (!std::getline(is, line))
        throw SchemaError("line 2: missing comment line");
    {
        std::istringstream ls(line);
        std::string tok;
        bool have_r = false;
        while (ls >> tok)
            if (tok.rfind("r=", 0) == 0)
            {
                auto s = tok.substr(2);
                auto res = std::from_chars(s.data(), s.data() + s.size(), c.r);
                if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
                    throw SchemaError("line 2: malformed r value '" + s + "'");
                have_r = true;
            }
        if (!have_r)
            throw SchemaError("line 2: comment must carry r=<box size>");
    }
    c.points.reserve(n);
    c.layer.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        std::string where = "line " + std::to_string(i + 3);
        if (!std::getline(is, line))
            throw SchemaError(where + ": expected " + std::to_string(n) + " points, file ended");
        std::istringstream ls(line);
        std::string elem;
        std::string xs[3];
        int m = 0;
        if (!(ls >> elem >> xs[0] >> xs[1] >> xs[2] >> m))
            throw SchemaError(where + ": expected 'element x y z layer'");
        double v[3];
        for (int k = 0; k < 3; ++k)
        {
            auto const& s = xs[k];
            auto res = std::from_chars(s.data(), s.data() + s.size(), v[k]);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
                throw SchemaError(where + ": malformed coordinate '" + s + "'");
        }
        c.points.push_back({v[0], v[1], v[2]});
        c.layer.push_back(m);
    }
    c.recount();
    return c;
}

namespace
{
bool ends_with(std::string const& s, std::string const& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

void save_cloud(std::string const& path, PointCloud const& cloud)
{
    if (ends_with(path, ".json"))
    {
        write_text_file(path, to_json(cloud).dump(1) + "\n");
        return;
    }
    std::ostringstream os;
    write_xyz(os, cloud);
    write_text_file(path, os.str());
}

PointCloud load_cloud(std::string const& path)
{
    if (ends_with(path, ".json"))
    {
        try
        {
            return cloud_from_json(read_json_file(path));
        }
        catch (json::exception const& e)
        {
            throw SchemaError(path + ": " + e.what());
        }
    }
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    try
    {
        return read_xyz(in);
    }
    catch (SchemaError const& e)
    {
        throw SchemaError(path + ": " + e.what());
    }
}

//---------------------------------------------------------------------------//
// CSV, OBJ
//---------------------------------------------------------------------------//
void write_spectrum_csv(std::ostream& os, std::span<SpectrumSample const> samples)
{
    os << "kx,ky,kz,re,im,intensity,r\n";
    for (auto const& s : samples)
        os << format_double(s.k.x) << ',' << format_double(s.k.y) << ',' << format_double(s.k.z) << ','
           << format_double(s.amplitude.real()) << ',' << format_double(s.amplitude.imag()) << ','
           << format_double(s.intensity) << ',' << format_double(s.r) << '\n';
}

void write_profile_csv(std::ostream& os, ShellProfile const& prof)
{
    os << "r_bin_lo,r_bin_hi,mass\n";
    for (std::size_t i = 0; i < prof.mass.size(); ++i)
        os << format_double(prof.lo[i]) << ',' << format_double(prof.hi[i]) << ',' << format_double(prof.mass[i])
           << '\n';
}

void write_obj(std::ostream& os, TileMesh const& mesh)
{
    os << "# biprism tile, " << mesh.vertices.size() << " vertices, " << mesh.faces.size() << " faces\n";
    for (auto const& v : mesh.vertices)
        os << "v " << format_double(v.x) << ' ' << format_double(v.y) << ' ' << format_double(v.z) << '\n';
    for (auto const& f : mesh.faces)
    {
        os << 'f';
        for (int i : f)
            os << ' ' << i + 1;
        os << '\n';
    }
}

}  // namespace scd
