// Command-line front end: tile, generate, diffract, predict, verify, csl.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scd/diffraction.hpp"
#include "scd/io.hpp"
#include "scd/lattice.hpp"
#include "scd/verify.hpp"

using namespace scd;

namespace
{
constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_io = 2;

//! Tile and stacking options shared by tile, generate and predict.
struct ConfigOptions
{
    std::string config_path;
    double lambda{0.5};
    double a_len{1.0};
    double c3{1.0};
    std::string cos_pq;
    std::string pi_frac;
    double phi{0};
    std::string shifts{"zero"};
    bool danzer{false};

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--config", config_path, "TilingConfig JSON; overrides the flags below");
        cmd->add_option("--lambda", lambda, "Rhomb split lambda in (0, 1)");
        cmd->add_option("--a-len", a_len, "Length of a");
        cmd->add_option("--c3", c3, "Layer height");
        cmd->add_option("--cos", cos_pq, "Angle arccos(p/q), e.g. 3/5");
        cmd->add_option("--pi", pi_frac, "Angle (num/den) pi, e.g. 1/2");
        cmd->add_option("--phi", phi, "Generic angle in radians");
        cmd->add_option("--shifts", shifts, "zero | periodic:t0,t1,... | random | explicit:t0,t1,...");
        cmd->add_flag("--danzer", danzer, "Restrict slides to integers");
    }

    TilingConfig build(std::uint64_t seed) const
    {
        if (!config_path.empty())
            return read_config(config_path);
        TilingConfig c;
        c.params.lambda = lambda;
        c.params.a_len = a_len;
        c.params.c3 = c3;
        int given = !cos_pq.empty() + !pi_frac.empty() + (phi != 0);
        if (given > 1)
            throw ParameterError("give at most one of --cos, --pi, --phi");
        if (!cos_pq.empty())
        {
            auto [p, q] = fraction(cos_pq, "--cos");
            c.params.angle = RationalCos{p, q};
        }
        else if (!pi_frac.empty())
        {
            auto [n, d] = fraction(pi_frac, "--pi");
            c.params.angle = RationalPi{n, d};
        }
        else if (phi != 0)
            c.params.angle = GenericAngle{phi};
        c.shifts = parse_shifts(shifts, seed);
        c.shifts.danzer = danzer;
        return c;
    }

    static std::pair<std::int64_t, std::int64_t> fraction(std::string const& s, char const* flag)
    {
        auto slash = s.find('/');
        try
        {
            if (slash == std::string::npos)
                return {std::stoll(s), 1};
            return {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
        }
        catch (std::exception const&)
        {
            throw SchemaError(std::string(flag) + ": expected p/q, got '" + s + "'");
        }
    }

    static std::vector<double> numbers(std::string const& s, std::string const& what)
    {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ','))
        {
            try
            {
                out.push_back(std::stod(tok));
            }
            catch (std::exception const&)
            {
                throw SchemaError(what + ": malformed number '" + tok + "'");
            }
        }
        return out;
    }

    static ShiftSequence parse_shifts(std::string const& s, std::uint64_t seed)
    {
        auto colon = s.find(':');
        std::string kind = s.substr(0, colon);
        std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
        if (kind == "zero")
            return ShiftSequence::zero();
        if (kind == "random")
            return ShiftSequence::random(seed);
        if (kind == "periodic")
            return ShiftSequence::periodic(numbers(rest, "--shifts"));
        if (kind == "explicit")
            return ShiftSequence::explicit_list(numbers(rest, "--shifts"));
        throw SchemaError("--shifts: unknown kind '" + kind + "'");
    }
};

//! lo:hi:step, or a single value.
std::vector<double> axis_values(std::string const& spec, char const* flag)
{
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':'))
    {
        try
        {
            parts.push_back(std::stod(tok));
        }
        catch (std::exception const&)
        {
            throw SchemaError(std::string(flag) + ": malformed grid value '" + tok + "'");
        }
    }
    if (parts.size() == 1)
        return parts;
    if (parts.size() != 3 || !(parts[2] > 0))
        throw SchemaError(std::string(flag) + ": expected lo:hi:step with step > 0");
    std::vector<double> out;
    auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long i = 0; i <= n; ++i)
        out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return out;
}

json run_record(std::string const& command, std::vector<std::string> const& argv, std::uint64_t seed)
{
    return {{"schema_version", schema_version}, {"command", command}, {"argv", argv}, {"seed", seed}};
}

void emit(std::string const& path, std::string const& content)
{
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_text_file(path, content);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Biprism tilings, their point sets and diffraction"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Seed for every random choice")->default_val(1);
    std::string record_path;
    app.add_option("--record", record_path, "Write the run configuration (JSON) here");
    std::vector<std::string> args(argv, argv + argc);

    // tile
    auto* tile = app.add_subcommand("tile", "Build the prototile and write an OBJ mesh");
    ConfigOptions tile_cfg;
    tile_cfg.add_to(tile);
    std::string tile_out;
    bool tile_volume_flag = false;
    tile->add_option("--out,-o", tile_out, "OBJ path (default stdout)");
    tile->add_flag("--volume", tile_volume_flag, "Print a_len b2 c3 and the mesh volume");

    // generate
    auto* gen = app.add_subcommand("generate", "Extract the point set inside [-r/2, r/2)^3");
    ConfigOptions gen_cfg;
    gen_cfg.add_to(gen);
    double gen_r = 10;
    std::string gen_out, gen_save;
    gen->add_option("--r", gen_r, "Cube side")->required();
    gen->add_option("--out,-o", gen_out, "Output .xyz or .json")->required();
    gen->add_option("--save-config", gen_save, "Also write the TilingConfig JSON");

    // diffract
    auto* dif = app.add_subcommand("diffract", "Fourier-Bohr intensities of a point cloud");
    std::string dif_cloud, dif_out, dif_kx{"0"}, dif_ky{"0"}, dif_kz{"0"}, dif_radial;
    double dif_shell_step = 0, dif_k3 = 0;
    dif->add_option("--cloud", dif_cloud, "Point cloud (.xyz or .json)")->required();
    dif->add_option("--kx", dif_kx, "lo:hi:step or value");
    dif->add_option("--ky", dif_ky, "lo:hi:step or value");
    dif->add_option("--kz", dif_kz, "lo:hi:step or value");
    dif->add_option("--out,-o", dif_out, "Spectrum CSV (default stdout)");
    dif->add_option("--radial", dif_radial, "Annuli lo:hi,lo:hi,... for a shell-mass profile");
    dif->add_option("--k3", dif_k3, "Plane height of the shell-mass profile");
    dif->add_option("--step", dif_shell_step, "Grid step of the shell-mass profile (default 1/(2r))");

    // predict
    auto* pre = app.add_subcommand("predict", "Analytic support, axis peaks and classification");
    ConfigOptions pre_cfg;
    pre_cfg.add_to(pre);
    double pre_cut = 2.0;
    int pre_nmax = 4;
    bool pre_periodic = false;
    std::string pre_out;
    pre->add_option("--cutoff", pre_cut, "Radius cutoff for dual-lattice norms");
    pre->add_option("--nmax", pre_nmax, "Axis peaks -nmax..nmax");
    pre->add_flag("--periodic", pre_periodic, "Require full periodicity and add the exact spectrum");
    pre->add_option("--out,-o", pre_out, "JSON path (default stdout)");

    // verify
    auto* ver = app.add_subcommand("verify", "Run an acceptance suite");
    std::string suite;
    std::string ver_out;
    ver->add_option("suite", suite, "Suite name")->required();
    ver->add_option("--out,-o", ver_out, "JSON report path");

    // csl
    auto* csl = app.add_subcommand("csl", "Coincidence indices, aperiodicity certificate, coincidence equation");
    std::string csl_cos, csl_pi, csl_b1, csl_out;
    double csl_phi = 0, csl_radius = 100, csl_alen = 1;
    int csl_m = 1, csl_M = 4;
    bool csl_irrational = false;
    csl->add_option("--cos", csl_cos, "arccos(p/q)");
    csl->add_option("--pi", csl_pi, "(num/den) pi");
    csl->add_option("--phi", csl_phi, "Generic angle in radians");
    csl->add_option("--m", csl_m, "Power for the single index [Gamma : Gamma cap R^m Gamma]");
    csl->add_option("--max-power", csl_M, "M for the intersection chain");
    csl->add_option("--radius", csl_radius, "Search radius for common vectors");
    csl->add_option("--a-len", csl_alen, "Length of a");
    csl->add_option("--b1", csl_b1, "Solve the coincidence equation for this b1 (p/q or decimal)");
    csl->add_flag("--irrational", csl_irrational, "Treat --b1 as irrational");
    csl->add_option("--out,-o", csl_out, "JSON path (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return exit_io;
    }

    try
    {
        std::string command = app.get_subcommands().front()->get_name();
        if (!record_path.empty())
            write_text_file(record_path, run_record(command, args, seed).dump(2) + "\n");

        if (*tile)
        {
            TilingConfig cfg = tile_cfg.build(seed);
            TileMesh mesh = build_tile(cfg.params);
            if (tile_volume_flag)
                std::cout << "volume " << format_double(tile_volume(mesh)) << "\nmesh_volume "
                          << format_double(mesh_volume(mesh)) << "\n";
            if (!tile_out.empty() || !tile_volume_flag)
            {
                std::ostringstream os;
                write_obj(os, mesh);
                emit(tile_out, os.str());
            }
            return exit_ok;
        }

        if (*gen)
        {
            TilingConfig cfg = gen_cfg.build(seed);
            PointCloud cloud = extract_points(cfg, gen_r);
            save_cloud(gen_out, cloud);
            if (!gen_save.empty())
                write_text_file(gen_save, to_json(cfg).dump(2) + "\n");
            if (cloud.empty())
                std::cerr << "warning: no layer meets the cube; wrote an empty cloud\n";
            std::cout << "points " << cloud.size() << "\ndensity "
                      << format_double(double(cloud.size()) / (gen_r * gen_r * gen_r)) << "\nexpected_density "
                      << format_double(point_density(cfg.params)) << "\n";
            return exit_ok;
        }

        if (*dif)
        {
            PointCloud cloud = load_cloud(dif_cloud);
            std::ostringstream os;
            if (!dif_radial.empty())
            {
                std::vector<std::pair<double, double>> bins;
                std::stringstream ss(dif_radial);
                std::string tok;
                while (std::getline(ss, tok, ','))
                {
                    auto c = tok.find(':');
                    if (c == std::string::npos)
                        throw SchemaError("--radial: expected lo:hi pairs");
                    try
                    {
                        bins.emplace_back(std::stod(tok.substr(0, c)), std::stod(tok.substr(c + 1)));
                    }
                    catch (std::exception const&)
                    {
                        throw SchemaError("--radial: malformed annulus '" + tok + "'");
                    }
                }
                double step = dif_shell_step > 0 ? dif_shell_step : 1 / (2 * cloud.r);
                write_profile_csv(os, shell_mass_profile(cloud, dif_k3, bins, step));
            }
            else
            {
                auto xs = axis_values(dif_kx, "--kx");
                auto ys = axis_values(dif_ky, "--ky");
                auto zs = axis_values(dif_kz, "--kz");
                std::vector<Vec3> ks;
                for (double x : xs)
                    for (double y : ys)
                        for (double z : zs)
                            ks.push_back({x, y, z});
                auto samples = intensity_map(cloud, ks);
                write_spectrum_csv(os, samples);
            }
            emit(dif_out, os.str());
            return exit_ok;
        }

        if (*pre)
        {
            TilingConfig cfg = pre_cfg.build(seed);
            cfg.validate();
            json out{{"schema_version", schema_version}, {"config", to_json(cfg)}};
            out["prediction"] = to_json(predict(cfg.params, pre_cut, pre_nmax));
            out["classification"] = to_json(spectral_classification(cfg));
            auto rep = repetitivity_condition(cfg.params.angle);
            out["repetitivity"] = {{"verdict", to_string(rep.verdict)}};
            if (rep.cos_pq)
                out["repetitivity"]["cos"] = std::to_string(rep.cos_pq->first) + "/" + std::to_string(rep.cos_pq->second);
            auto screw = detect_screw_symmetry(cfg, 1);
            out["screw_m1"] = {{"status", to_string(screw.status)}, {"horizon", screw.horizon}};
            FullPeriodicity fp = detect_full_periodicity(cfg);
            out["periodicity"] = to_json(fp);
            if (pre_periodic)
            {
                if (!fp.periodic)
                    throw ParameterError("--periodic: configuration is not fully periodic (" + fp.reason + ")");
                out["periodic_spectrum"] = to_json(predicted_periodic_spectrum(cfg, pre_cut, pre_cut), 200);
            }
            emit(pre_out, out.dump(2) + "\n");
            return exit_ok;
        }

        if (*ver)
        {
            SuiteReport rep;
            try
            {
                rep = run_suite(suite, seed);
            }
            catch (std::invalid_argument const& e)
            {
                std::cerr << "error: " << e.what() << "\n";
                return exit_io;
            }
            for (auto const& r : rep.results)
                std::cout << summary_line(r) << "\n";
            if (!ver_out.empty())
                write_text_file(ver_out, rep.to_json().dump(2) + "\n");
            return rep.pass() ? exit_ok : exit_invalid;
        }

        if (*csl)
        {
            json out{{"schema_version", schema_version}};
            if (!csl_b1.empty())
            {
                CoincidenceInput in;
                if (csl_irrational)
                    in = IrrationalB1{std::stod(csl_b1)};
                else
                    in = parse_rational(csl_b1);
                out["coincidence"] = to_json(coincidence_solve(in));
            }
            if (!csl_cos.empty() || !csl_pi.empty() || csl_phi != 0)
            {
                AngleSpec angle;
                if (!csl_cos.empty())
                {
                    auto [p, q] = ConfigOptions::fraction(csl_cos, "--cos");
                    angle = RationalCos{p, q};
                }
                else if (!csl_pi.empty())
                {
                    auto [n, d] = ConfigOptions::fraction(csl_pi, "--pi");
                    angle = RationalPi{n, d};
                }
                else
                    angle = GenericAngle{csl_phi};
                if (angle.exact_trig())
                {
                    CslIndex idx = csl_index(angle, csl_m);
                    out["csl_index"] = {{"m", csl_m}, {"index", idx.finite ? json(idx.index.str()) : json("infinite")}};
                }
                out["aperiodicity"] = to_json(aperiodicity_certificate(angle, csl_M, csl_radius, csl_alen));
            }
            if (out.size() == 1)
                throw SchemaError("csl: give an angle (--cos/--pi/--phi) and/or --b1");
            emit(csl_out, out.dump(2) + "\n");
            return exit_ok;
        }
    }
    catch (ParameterError const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    catch (SchemaError const& e)
    {
        std::cerr << "schema error: " << e.what() << "\n";
        return exit_io;
    }
    catch (IoError const& e)
    {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_io;
    }
    catch (std::invalid_argument const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    }
    return exit_ok;
}
